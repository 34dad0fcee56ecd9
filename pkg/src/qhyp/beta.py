"""Boundary-gap exponent, density bounds derived from it, geodesic-vs-annulus
checks, and uniform-perfectness estimation.

The central quantity, computed by :func:`beta`, measures how far the nearest
boundary configuration of a point is from being scale-balanced: it is the
infimum of |log(delta(z) / |zeta - xi|)| over nearest boundary points zeta
and other boundary points xi.  Domains bounded by circles or lines have
exponent zero; deep annular throats have large exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .constants import KAPPA, NEAREST_BOUNDARY_SLACK
from .densities import h01_lower
from .domains import (
    ComplementPoint,
    Domain,
    DomainError,
    FiniteComplement,
    OutsideDomainError,
    SchemaError,
    rho_length,
)
from .geometry import (
    INF,
    Annulus,
    ExtPoint,
    Polyline,
    as_finite,
    is_infinite,
    segment_point_distance,
)


# ---------------------------------------------------------------------------
# The boundary-gap exponent
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BetaWitness:
    zeta: complex
    xi: complex
    distance: float
    contribution: float

    def as_dict(self) -> dict:
        return {"zeta": [self.zeta.real, self.zeta.imag],
                "xi": [self.xi.real, self.xi.imag],
                "distance": self.distance,
                "contribution": self.contribution}


@dataclass(frozen=True)
class BetaResult:
    value: float
    delta: float
    nearest: Tuple[complex, ...]
    witnesses: Tuple[BetaWitness, ...]
    annulus: Optional[Annulus]

    def as_dict(self) -> dict:
        return {"value": self.value, "delta": self.delta,
                "nearest": [[p.real, p.imag] for p in self.nearest],
                "witnesses": [w.as_dict() for w in self.witnesses],
                "annulus": None if self.annulus is None else {
                    "center": [self.annulus.center.real, self.annulus.center.imag],
                    "inner": self.annulus.inner, "outer": self.annulus.outer}}


def _xi_witness_point(comp, zeta: complex, t: float) -> complex:
    """A point of the component at distance exactly t from zeta."""
    if isinstance(comp, ComplementPoint):
        return comp.point
    kind = type(comp).__name__
    if kind == "ComplementDisk":
        u = comp.center - zeta
        u = u / abs(u) if u != 0 else 1.0
        return zeta + t * u
    if kind == "ComplementDiskExterior":
        u = zeta - comp.center
        u = u / abs(u) if u != 0 else 1.0
        return zeta + t * u
    if kind == "ComplementHalfPlane":
        u = comp.direction / abs(comp.direction)
        return zeta - 1j * t * u
    raise DomainError(f"unsupported component {kind}")


def beta(domain: Domain, z: ExtPoint,
         slack: float = NEAREST_BOUNDARY_SLACK) -> BetaResult:
    """Boundary-gap exponent at z, with the witnessing boundary pairs.

    Returns the exponent value, the distance to the boundary, the nearest
    boundary points, all (zeta, xi) pairs achieving the minimum (within
    relative slack 1e-9), and the associated annulus centered at the first
    witness (None when the exponent vanishes).
    """
    z = as_finite(z)
    comps = domain.complement_components()
    delta = domain.delta(z)
    if math.isinf(delta):
        raise DomainError("domain has empty boundary")

    entries: List[Tuple[float, complex, complex, float]] = []
    for i, ci in enumerate(comps):
        di = float(ci.distance_field(np.asarray(z)))
        if di > delta * (1.0 + slack):
            continue
        for zeta in ci.nearest_points(z):
            for j, cj in enumerate(comps):
                if i == j and isinstance(cj, ComplementPoint):
                    continue
                lo, hi = cj.distance_range_from(zeta)
                t = min(max(delta, lo), hi)
                if t <= 0.0:
                    continue
                contribution = abs(math.log(delta / t))
                entries.append((contribution, zeta, _xi_witness_point(cj, zeta, t), t))
    if not entries:
        raise DomainError("the exponent needs at least two boundary points")

    value = min(e[0] for e in entries)
    cut = value + max(1e-12, 1e-9 * value)
    witnesses = tuple(BetaWitness(zeta, xi, t, c)
                      for (c, zeta, xi, t) in entries if c <= cut)
    nearest: List[complex] = []
    for w in witnesses:
        if not any(abs(w.zeta - p) <= 1e-12 * max(1.0, abs(p)) for p in nearest):
            nearest.append(w.zeta)
    ann = None
    if value > 0.0:
        ann = Annulus(witnesses[0].zeta, d=delta, m=value)
    return BetaResult(value=value, delta=delta, nearest=tuple(nearest),
                      witnesses=witnesses, annulus=ann)


def beta_field(domain: Domain, z: np.ndarray,
               slack: float = NEAREST_BOUNDARY_SLACK) -> np.ndarray:
    """Vectorized exponent values; NaN at points outside the domain."""
    z = np.asarray(z, dtype=np.complex128)
    comps = domain.complement_components()
    if len(comps) == 0:
        raise DomainError("domain has empty boundary")
    dists = np.stack([c.distance_field(z) for c in comps])
    delta = dists.min(axis=0)
    valid = delta > 0.0
    safe_delta = np.where(valid, delta, 1.0)
    out = np.full(z.shape, math.inf)
    for i, ci in enumerate(comps):
        mask = dists[i] <= safe_delta * (1.0 + slack)
        if not np.any(mask):
            continue
        zeta = ci.nearest_point_field(z)
        for j, cj in enumerate(comps):
            if i == j and isinstance(cj, ComplementPoint):
                continue
            lo, hi = cj.xi_range_field(zeta)
            t = np.minimum(np.maximum(safe_delta, lo), hi)
            with np.errstate(divide="ignore", invalid="ignore"):
                contribution = np.abs(np.log(safe_delta / np.where(t > 0, t, np.nan)))
            contribution = np.where(mask & np.isfinite(contribution), contribution, math.inf)
            out = np.minimum(out, contribution)
    if np.any(np.isinf(out[valid])):
        raise DomainError("the exponent needs at least two boundary points")
    return np.where(valid, out, math.nan)


# ---------------------------------------------------------------------------
# Density bounds built on the exponent
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BPBounds:
    """Certified pointwise bounds for the hyperbolic density."""

    lower: float
    upper: float
    upper_available: bool
    beta: float
    delta: float

    def as_dict(self) -> dict:
        return {"lower": self.lower,
                "upper": None if not self.upper_available else self.upper,
                "upper_available": self.upper_available,
                "beta": self.beta, "delta": self.delta}


def bp_lambda_bounds(domain: Domain, z: ExtPoint) -> BPBounds:
    """Pointwise enclosure of the hyperbolic density:

    1/(delta (kappa + beta)) <= density <= (pi/2)/(delta beta),
    the upper bound flagged unavailable when the exponent vanishes.
    """
    if not domain.is_hyperbolic:
        raise DomainError("density bounds need a domain with three boundary points")
    res = beta(domain, z)
    lower = 1.0 / (res.delta * (KAPPA + res.value))
    if res.value > 0.0:
        return BPBounds(lower, (math.pi / 2.0) / (res.delta * res.value),
                        True, res.value, res.delta)
    return BPBounds(lower, math.inf, False, res.value, res.delta)


def bp_lower_density(domain: Domain):
    """Vectorized pointwise lower bound for the hyperbolic density."""
    def rho(z):
        z = np.asarray(z, dtype=np.complex128)
        return 1.0 / (domain.delta_field(z) * (KAPPA + beta_field(domain, z)))
    return rho


def bp_upper_density(domain: Domain):
    """Vectorized pointwise upper bound; infinite where the exponent vanishes."""
    def rho(z):
        z = np.asarray(z, dtype=np.complex128)
        with np.errstate(divide="ignore"):
            return (math.pi / 2.0) / (domain.delta_field(z) * beta_field(domain, z))
    return rho


# ---------------------------------------------------------------------------
# Exponent decay across a fat annulus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BPDecayReport:
    ok: bool
    samples: int
    violations: int
    worst_low: float   # smallest beta / expected-lower ratio seen
    worst_high: float  # largest beta / expected-upper ratio seen
    examples: Tuple[Tuple[complex, float, float, float], ...]

    def as_dict(self) -> dict:
        return {"ok": self.ok, "samples": self.samples, "violations": self.violations,
                "worst_low": self.worst_low, "worst_high": self.worst_high,
                "examples": [[[z.real, z.imag], b, lo, hi]
                             for (z, b, lo, hi) in self.examples]}


def check_bp_decay(domain: Domain, annulus: Annulus, samples: int = 200,
                   seed: int = 0, margin: float = math.log(16.0)) -> BPDecayReport:
    """Sample the annulus throat and check the two-sided exponent decay:

    (1/2)(m - |t|) <= beta <= 2 (m - |t|) at log-radius offset t from the
    center circle, for |t| <= m - margin.
    """
    if annulus.is_degenerate:
        raise ValueError("decay check needs a bounded annulus")
    m = annulus.half_modulus
    d = annulus.d
    t_max = m - margin
    if t_max <= 0.0:
        raise ValueError(f"annulus half-modulus {m} leaves no room under margin {margin}")
    rng = np.random.default_rng(seed)
    t = rng.uniform(-t_max, t_max, samples)
    theta = rng.uniform(0.0, 2.0 * math.pi, samples)
    z = annulus.center + d * np.exp(t + 1j * theta)
    b = beta_field(domain, z)
    lo = 0.5 * (m - np.abs(t))
    hi = 2.0 * (m - np.abs(t))
    bad = (b < lo * (1.0 - 1e-12)) | (b > hi * (1.0 + 1e-12))
    examples = tuple((complex(z[i]), float(b[i]), float(lo[i]), float(hi[i]))
                     for i in np.nonzero(bad)[0][:5])
    with np.errstate(divide="ignore", invalid="ignore"):
        worst_low = float(np.min(b / lo))
        worst_high = float(np.max(b / hi))
    return BPDecayReport(ok=not bool(bad.any()), samples=samples,
                         violations=int(bad.sum()), worst_low=worst_low,
                         worst_high=worst_high, examples=examples)


# ---------------------------------------------------------------------------
# Geodesics against essential annuli: bounce or cross
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ABCViolation:
    annulus: Annulus
    min_radius: float
    max_radius: float
    crossings: int


@dataclass(frozen=True)
class ABCReport:
    ok: bool
    candidates: int
    checked: int
    violations: Tuple[ABCViolation, ...]

    def as_dict(self) -> dict:
        return {"ok": self.ok, "candidates": self.candidates, "checked": self.checked,
                "violations": [{
                    "center": [v.annulus.center.real, v.annulus.center.imag],
                    "inner": v.annulus.inner, "outer": v.annulus.outer,
                    "min_radius": v.min_radius, "max_radius": v.max_radius,
                    "crossings": v.crossings} for v in self.violations]}


def dyadic_annulus_candidates(domain: Domain, nu: float, r_lo: float,
                              r_hi: float) -> List[Annulus]:
    """Essential annuli A(o; 2^j, nu) centered at finite boundary points,
    contained in the domain, with center radius in [r_lo, r_hi]."""
    if not (nu > 0.0 and 0.0 < r_lo < r_hi):
        raise ValueError("need nu > 0 and 0 < r_lo < r_hi")
    out: List[Annulus] = []
    comps = domain.complement_components()
    for o in domain.finite_boundary_points():
        j_lo = math.floor(math.log2(r_lo)) - 1
        j_hi = math.ceil(math.log2(r_hi)) + 1
        for j in range(j_lo, j_hi + 1):
            d = 2.0 ** j
            inner = d * math.exp(-nu)
            outer = d * math.exp(nu)
            ok = True
            for comp in comps:
                lo, hi = comp.distance_range_from(o)
                if hi > inner * (1.0 + 1e-12) and lo < outer * (1.0 - 1e-12):
                    ok = False
                    break
            if ok:
                out.append(Annulus(o, d=d, m=nu))
    return out


def _circle_hits(path: Polyline, center: complex, radius: float) -> List[Tuple[int, float]]:
    """(segment index, parameter) of every crossing of |z - center| = radius."""
    hits: List[Tuple[int, float]] = []
    pts = path.points
    for i in range(len(pts) - 1):
        v = pts[i] - center
        w = pts[i + 1] - pts[i]
        ww = abs(w) ** 2
        if ww == 0.0:
            continue
        b = 2.0 * (v.conjugate() * w).real
        c0 = abs(v) ** 2 - radius * radius
        disc = b * b - 4.0 * ww * c0
        if disc <= 0.0:
            continue
        s = math.sqrt(disc)
        for t in ((-b - s) / (2.0 * ww), (-b + s) / (2.0 * ww)):
            if 0.0 <= t <= 1.0:
                hits.append((i, t))
    hits.sort()
    return hits


def check_abc(domain: Domain, path: Polyline, mu: float, nu: float,
              candidates: Optional[Sequence[Annulus]] = None,
              radius_slack: float = 1e-3) -> ABCReport:
    """Check the bounce-or-cross property of a near-geodesic path.

    For each essential annulus candidate, the path portion between its first
    and last meeting with the center circle must stay within log-radius mu of
    that circle (up to the relative grid slack), or else the path crosses the
    concentric annulus of half-modulus mu at most once.
    """
    pts = path.as_array()
    if candidates is None:
        cands: List[Annulus] = []
        for o in domain.finite_boundary_points():
            r = np.abs(pts - o)
            r_lo = float(np.min(r)) * math.exp(-nu) / 2.0
            r_hi = float(np.max(r)) * math.exp(nu) * 2.0
            cands.extend(a for a in dyadic_annulus_candidates(domain, nu, r_lo, r_hi)
                         if a.center == o)
        candidates = cands

    violations: List[ABCViolation] = []
    checked = 0
    for ann in candidates:
        d = ann.d
        hits = _circle_hits(path, ann.center, d)
        if len(hits) == 0:
            continue
        checked += 1
        (i0, t0), (i1, t1) = hits[0], hits[-1]
        z_start = pts[i0] + t0 * (pts[i0 + 1] - pts[i0])
        z_end = pts[i1] + t1 * (pts[i1 + 1] - pts[i1])
        mid = [z_start] + list(pts[i0 + 1:i1 + 1]) + [z_end]
        seg_a = np.asarray(mid[:-1], dtype=np.complex128)
        seg_b = np.asarray(mid[1:], dtype=np.complex128)
        keep = np.abs(seg_b - seg_a) > 0
        if keep.any():
            min_r = float(np.min(segment_point_distance(seg_a[keep], seg_b[keep], ann.center)))
        else:
            min_r = float(abs(mid[0] - ann.center))
        max_r = float(np.max(np.abs(np.asarray(mid) - ann.center)))
        bounce_ok = (min_r >= d * math.exp(-mu) * (1.0 - radius_slack)
                     and max_r <= d * math.exp(mu) * (1.0 + radius_slack))
        crossings = Annulus(ann.center, d=d, m=mu).crossing_count(path)
        if not (bounce_ok or crossings <= 1):
            violations.append(ABCViolation(ann, min_r, max_r, crossings))
    return ABCReport(ok=not violations, candidates=len(list(candidates)),
                     checked=checked, violations=tuple(violations))


# ---------------------------------------------------------------------------
# Uniform perfectness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UPPoint:
    point: complex

    def blocked(self, o: complex) -> List[Tuple[float, float]]:
        d = abs(o - self.point)
        return [(d, d)]

    def distance_to(self, p: complex) -> float:
        return abs(p - self.point)

    def accumulates_at_infinity(self) -> bool:
        return False

    def centers(self) -> List[complex]:
        return [self.point]


@dataclass(frozen=True)
class UPCircle:
    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("circle radius must be finite and positive")

    def blocked(self, o: complex) -> List[Tuple[float, float]]:
        d = abs(o - self.center)
        return [(abs(d - self.radius), d + self.radius)]

    def distance_to(self, p: complex) -> float:
        return abs(abs(p - self.center) - self.radius)

    def accumulates_at_infinity(self) -> bool:
        return False

    def centers(self) -> List[complex]:
        return [self.center + self.radius * complex(math.cos(k * math.pi / 4.0),
                                                    math.sin(k * math.pi / 4.0))
                for k in range(8)]


@dataclass(frozen=True)
class UPDisk:
    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("disk radius must be finite and positive")

    def blocked(self, o: complex) -> List[Tuple[float, float]]:
        d = abs(o - self.center)
        return [(max(0.0, d - self.radius), d + self.radius)]

    def distance_to(self, p: complex) -> float:
        return max(0.0, abs(p - self.center) - self.radius)

    def accumulates_at_infinity(self) -> bool:
        return False

    def centers(self) -> List[complex]:
        pts = [self.center]
        pts.extend(self.center + self.radius * complex(math.cos(k * math.pi / 4.0),
                                                       math.sin(k * math.pi / 4.0))
                   for k in range(8))
        return pts


@dataclass(frozen=True)
class UPRay:
    origin: complex
    direction: complex

    def __post_init__(self):
        if self.direction == 0:
            raise ValueError("ray direction must be nonzero")

    def distance_to(self, p: complex) -> float:
        u = self.direction / abs(self.direction)
        s = max(0.0, ((p - self.origin) * u.conjugate()).real)
        return abs(self.origin + s * u - p)

    def blocked(self, o: complex) -> List[Tuple[float, float]]:
        return [(self.distance_to(o), math.inf)]

    def accumulates_at_infinity(self) -> bool:
        return True

    def centers(self) -> List[complex]:
        return [self.origin]


@dataclass(frozen=True)
class UPHalfPlane:
    origin: complex = 0.0
    direction: complex = 1.0

    def __post_init__(self):
        if self.direction == 0:
            raise ValueError("direction must be nonzero")

    def distance_to(self, p: complex) -> float:
        u = self.direction / abs(self.direction)
        return max(0.0, ((p - self.origin) / u).imag)

    def blocked(self, o: complex) -> List[Tuple[float, float]]:
        return [(self.distance_to(o), math.inf)]

    def accumulates_at_infinity(self) -> bool:
        return True

    def centers(self) -> List[complex]:
        return [self.origin]


@dataclass(frozen=True)
class UPDiskExterior:
    """The closed region outside a circle, |z - center| >= radius."""

    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("radius must be finite and positive")

    def distance_to(self, p: complex) -> float:
        return max(0.0, self.radius - abs(p - self.center))

    def blocked(self, o: complex) -> List[Tuple[float, float]]:
        return [(self.distance_to(o), math.inf)]

    def accumulates_at_infinity(self) -> bool:
        return True

    def centers(self) -> List[complex]:
        return [self.center + self.radius * complex(math.cos(k * math.pi / 4.0),
                                                    math.sin(k * math.pi / 4.0))
                for k in range(8)]


@dataclass(frozen=True)
class UPCircleFamily:
    """The doubly infinite family of circles |z - center| = scale * ratio^n, n in Z.

    The family accumulates at its center and at infinity; both limit points
    belong to the (closed) set it describes.
    """

    center: complex
    ratio: float
    scale: float = 1.0

    def __post_init__(self):
        if not (self.ratio > 1.0 and math.isfinite(self.ratio)):
            raise ValueError("ratio must be finite and > 1")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValueError("scale must be finite and positive")

    def radius(self, n: int) -> float:
        return self.scale * self.ratio ** n

    def distance_to(self, p: complex) -> float:
        d = abs(p - self.center)
        if d == 0.0:
            return 0.0
        x = math.log(d / self.scale) / math.log(self.ratio)
        return min(abs(d - self.radius(math.floor(x))),
                   abs(d - self.radius(math.ceil(x))))

    def accumulates_at_infinity(self) -> bool:
        return True

    def centers(self) -> List[complex]:
        return [self.center]


UPBlocker = Union[UPPoint, UPCircle, UPDisk, UPRay, UPHalfPlane,
                  UPDiskExterior, UPCircleFamily]


@dataclass(frozen=True)
class UPSet:
    """A closed set containing infinity, given by geometric parts."""

    points: Tuple[UPPoint, ...] = ()
    circles: Tuple[UPCircle, ...] = ()
    disks: Tuple[UPDisk, ...] = ()
    rays: Tuple[UPRay, ...] = ()
    halfplanes: Tuple[UPHalfPlane, ...] = ()
    disk_exteriors: Tuple[UPDiskExterior, ...] = ()
    families: Tuple[UPCircleFamily, ...] = ()

    def __post_init__(self):
        for name in ("points", "circles", "disks", "rays", "halfplanes",
                     "disk_exteriors", "families"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    def blockers(self) -> Tuple[UPBlocker, ...]:
        return self.points + self.circles + self.disks + self.rays \
            + self.halfplanes + self.disk_exteriors + self.families


@dataclass(frozen=True)
class UPReport:
    unbounded: bool
    sup_modulus: float
    witness: Optional[Annulus]
    isolated: Tuple[ExtPoint, ...]
    centers_examined: int

    def as_dict(self) -> dict:
        iso = ["infinity" if is_infinite(p) else [p.real, p.imag] for p in self.isolated]
        w = None
        if self.witness is not None:
            w = {"center": [self.witness.center.real, self.witness.center.imag],
                 "inner": self.witness.inner, "outer": self.witness.outer}
        return {"unbounded": self.unbounded, "sup_modulus": self.sup_modulus,
                "witness": w, "isolated": iso,
                "centers_examined": self.centers_examined}


def _family_intervals(fam: UPCircleFamily, o: complex, ext_lo: float,
                      ext_hi: float, horizon: int,
                      cap: int) -> Tuple[List[Tuple[float, float]], bool]:
    """Blocked-distance intervals for one circle family seen from center o.

    Enumerates radii covering the extent of the other blockers with some
    spare decades; truncation is safe because off-center tail gaps are
    strictly below log(ratio) and the family center itself is a candidate.
    """
    d = abs(o - fam.center)
    logq = math.log(fam.ratio)
    ref_lo = min(x for x in (ext_lo, d if d > 0 else math.inf, fam.scale)
                 if x > 0 and math.isfinite(x))
    ref_hi = max(x for x in (ext_hi, d, fam.scale) if math.isfinite(x))
    n_lo = math.floor(math.log(ref_lo / fam.scale) / logq) - horizon
    n_hi = math.ceil(math.log(ref_hi / fam.scale) / logq) + horizon
    if n_hi - n_lo > cap:
        mid = (n_hi + n_lo) // 2
        n_lo, n_hi = mid - cap // 2, mid + cap // 2
    out: List[Tuple[float, float]] = []
    at_center = d <= 1e-12 * max(1.0, abs(o), fam.scale)
    for n in range(n_lo, n_hi + 1):
        r = fam.radius(n)
        if at_center:
            out.append((r, r))
        else:
            out.append((abs(d - r), d + r))
    if at_center:
        # collapse the tail below the horizon into a blocked stub: its gaps
        # all have modulus log(ratio), already present in the enumerated range
        out.append((0.0, fam.radius(n_lo)))
    return out, at_center


def up_modulus_sup(E: UPSet, horizon: int = 8,
                   max_family_circles: int = 400) -> UPReport:
    """Supremum of annulus moduli over round annuli centered in E and
    avoiding E (the uniform-perfectness functional of the set).

    Centers are taken from the finite members of E (points, circle samples,
    disk centers, ray and half-plane origins, family accumulation centers).
    An isolated finite point, or an isolated point at infinity, makes the
    supremum infinite; the report then lists the isolated members.
    """
    blockers = E.blockers()
    isolated: List[ExtPoint] = []
    for pt in E.points:
        others = [b for b in blockers if b is not pt]
        if not others:
            isolated.append(pt.point)
            continue
        d_iso = min(b.distance_to(pt.point) for b in others)
        if d_iso > 1e-12 * max(1.0, abs(pt.point)):
            isolated.append(pt.point)
    if not any(b.accumulates_at_infinity() for b in blockers):
        isolated.append(INF)
    if isolated:
        return UPReport(unbounded=True, sup_modulus=math.inf, witness=None,
                        isolated=tuple(isolated), centers_examined=0)

    centers: List[complex] = []
    for b in blockers:
        for c in b.centers():
            if not any(abs(c - q) <= 1e-12 * max(1.0, abs(c)) for q in centers):
                centers.append(c)

    best = 0.0
    witness: Optional[Annulus] = None
    for o in centers:
        plain: List[Tuple[float, float]] = []
        for b in blockers:
            if isinstance(b, UPCircleFamily):
                continue
            plain.extend(b.blocked(o))
        finite_endpoints = [x for pair in plain for x in pair
                            if math.isfinite(x) and x > 0.0]
        ext_lo = min(finite_endpoints) if finite_endpoints else math.inf
        ext_hi = max(finite_endpoints) if finite_endpoints else 0.0
        intervals = list(plain)
        for b in blockers:
            if isinstance(b, UPCircleFamily):
                fam_iv, _ = _family_intervals(b, o, ext_lo, ext_hi, horizon,
                                              max_family_circles)
                intervals.extend(fam_iv)
        if not intervals:
            continue
        intervals.sort()
        merged: List[List[float]] = [list(intervals[0])]
        for lo, hi in intervals[1:]:
            if lo <= merged[-1][1] * (1.0 + 1e-12) + 1e-300:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        # leading and trailing gaps are suppressed: the isolation pass above
        # guarantees accumulation at the center scale and at infinity
        for k in range(len(merged) - 1):
            h1 = merged[k][1]
            l2 = merged[k + 1][0]
            if h1 <= 0.0:
                return UPReport(unbounded=True, sup_modulus=math.inf,
                                witness=None, isolated=(complex(o),),
                                centers_examined=len(centers))
            mod = math.log(l2 / h1)
            if mod > best:
                best = mod
                witness = Annulus(o, inner=h1, outer=l2)
    return UPReport(unbounded=False, sup_modulus=best, witness=witness,
                    isolated=(), centers_examined=len(centers))


def up_set_from_json(obj: dict) -> UPSet:
    """Strict parser for the uniform-perfectness set wire format."""
    if not isinstance(obj, dict):
        raise SchemaError("set description must be a JSON object")
    known = {"points", "circles", "disks", "rays", "halfplanes",
             "disk_exteriors", "families", "includes_infinity"}
    for key in obj:
        if key not in known:
            raise SchemaError(f"unknown field {key!r} in set description")
    if "includes_infinity" in obj and obj["includes_infinity"] is not True:
        raise SchemaError("these sets always contain infinity")

    def cval(v, where) -> complex:
        if (not isinstance(v, (list, tuple)) or len(v) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                           and math.isfinite(x) for x in v)):
            raise SchemaError(f"{where} must be a [re, im] pair of finite numbers")
        return complex(v[0], v[1])

    def fval(v, where) -> float:
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise SchemaError(f"{where} must be a finite number")
        return float(v)

    def items(key, fields, builder):
        rows = obj.get(key, [])
        if not isinstance(rows, list):
            raise SchemaError(f"{key} must be a list")
        out = []
        for i, row in enumerate(rows):
            if key == "points":
                out.append(builder(cval(row, f"points[{i}]")))
                continue
            if not isinstance(row, dict):
                raise SchemaError(f"{key}[{i}] must be an object")
            for f in row:
                if f not in fields:
                    raise SchemaError(f"unknown field {f!r} in {key}[{i}]")
            for f in fields:
                if f not in row:
                    raise SchemaError(f"missing field {f!r} in {key}[{i}]")
            out.append(builder(row, i))
        return out

    points = items("points", None, lambda p: UPPoint(p))
    circles = items("circles", ("center", "radius"), lambda r, i: UPCircle(
        cval(r["center"], f"circles[{i}].center"), fval(r["radius"], f"circles[{i}].radius")))
    disks = items("disks", ("center", "radius"), lambda r, i: UPDisk(
        cval(r["center"], f"disks[{i}].center"), fval(r["radius"], f"disks[{i}].radius")))
    rays = items("rays", ("origin", "direction"), lambda r, i: UPRay(
        cval(r["origin"], f"rays[{i}].origin"), cval(r["direction"], f"rays[{i}].direction")))
    halfplanes = items("halfplanes", ("origin", "direction"), lambda r, i: UPHalfPlane(
        cval(r["origin"], f"halfplanes[{i}].origin"),
        cval(r["direction"], f"halfplanes[{i}].direction")))
    exteriors = items("disk_exteriors", ("center", "radius"), lambda r, i: UPDiskExterior(
        cval(r["center"], f"disk_exteriors[{i}].center"),
        fval(r["radius"], f"disk_exteriors[{i}].radius")))
    families = items("families", ("center", "ratio", "scale"), lambda r, i: UPCircleFamily(
        cval(r["center"], f"families[{i}].center"), fval(r["ratio"], f"families[{i}].ratio"),
        fval(r["scale"], f"families[{i}].scale")))
    return UPSet(points=tuple(points), circles=tuple(circles), disks=tuple(disks),
                 rays=tuple(rays), halfplanes=tuple(halfplanes),
                 disk_exteriors=tuple(exteriors), families=tuple(families))


@dataclass(frozen=True)
class UPConversion:
    """Euclidean uniform-perfectness constants implied by a chordal one."""

    chordal_bound: float
    center_outside: float
    center_inside: float
    general: float

    def as_dict(self) -> dict:
        return {"chordal_bound": self.chordal_bound,
                "center_outside": self.center_outside,
                "center_inside": self.center_inside,
                "general": self.general}


def chordal_up_to_euclidean_bound(M: float) -> UPConversion:
    """Convert a chordal modulus bound M into Euclidean bounds:

    4M when the annulus center is outside the unit disk, 8M^2 when inside,
    64M^4 in general.  Requires M >= 2.
    """
    if not M >= 2.0:
        raise ValueError("the conversion constants require M >= 2")
    return UPConversion(chordal_bound=M, center_outside=4.0 * M,
                        center_inside=8.0 * M * M, general=64.0 * M ** 4)


# ---------------------------------------------------------------------------
# The fat-annulus witness configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FatAnnulusWitness:
    """Explicit points in a deep annular throat where the quasihyperbolic
    distance is large but the hyperbolic distance stays bounded below only
    weakly: the gap between the two metrics grows with the throat depth."""

    m: float
    a: complex
    b: complex
    c: complex
    domain: Domain
    annulus: Annulus
    annulus_separates: bool
    k_star_ab: float
    k_star_cb: float
    k_enclosure: Tuple[float, float]
    h_lower_ab: float
    h_lower_closed_form: float
    bp_upper_integral: float
    bp_upper_closed_form: float

    def as_dict(self) -> dict:
        return {"m": self.m,
                "a": [self.a.real, self.a.imag],
                "b": [self.b.real, self.b.imag],
                "c": [self.c.real, self.c.imag],
                "annulus_separates": self.annulus_separates,
                "k_star_ab": self.k_star_ab, "k_star_cb": self.k_star_cb,
                "k_enclosure": list(self.k_enclosure),
                "h_lower_ab": self.h_lower_ab,
                "h_lower_closed_form": self.h_lower_closed_form,
                "bp_upper_integral": self.bp_upper_integral,
                "bp_upper_closed_form": self.bp_upper_closed_form}


def fat_annulus_witness(m: float = 5.0) -> FatAnnulusWitness:
    """Build the three-point witness inside the annulus {e^-m < |z| < e^m}
    of the plane punctured at 0, -e^-m and -e^m, with m > 1:

    a = e^(1-m) near the inner edge, b = sqrt(a) in the throat, c = 1 on the
    center circle.
    """
    if not m > 1.0:
        raise ValueError("need m > 1")
    a = math.exp(1.0 - m)
    b = math.exp(0.5 * (1.0 - m))
    c = 1.0
    domain = FiniteComplement([0.0, -math.exp(-m), -math.exp(m)])
    annulus = Annulus(0.0, d=1.0, m=m)
    separates = annulus.separates(list(domain.punctures) + [INF])

    k_star_ab = abs(math.log(b / a))
    k_star_cb = abs(math.log(b / c))
    enclosure = (k_star_ab, 2.0 * k_star_ab)

    # normalize the puncture pair (0, -e^-m) to (0, 1) by z -> -e^m z
    s = -math.exp(m)
    val, available = h01_lower(s * a, s * b)
    if not available:
        raise AssertionError("witness points must land on one side of the unit circle")
    closed = math.log1p((m - 1.0) / (2.0 * (KAPPA + 1.0)))

    def density(z):
        z = np.asarray(z, dtype=np.complex128)
        r = np.abs(z)
        return (math.pi / 2.0) / (r * (m + np.log(r)))

    integral = rho_length(Polyline([b, c]), density, rel_tol=1e-10)
    integral_closed = (math.pi / 2.0) * math.log(2.0 * m / (m + 1.0))

    return FatAnnulusWitness(m=m, a=complex(a), b=complex(b), c=complex(c),
                             domain=domain, annulus=annulus,
                             annulus_separates=separates,
                             k_star_ab=k_star_ab, k_star_cb=k_star_cb,
                             k_enclosure=enclosure,
                             h_lower_ab=val, h_lower_closed_form=closed,
                             bp_upper_integral=integral,
                             bp_upper_closed_form=integral_closed)
