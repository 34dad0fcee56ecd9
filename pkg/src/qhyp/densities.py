"""Conformal densities, exact distances, and certified distance intervals
for the hyperbolic metric.

Density functions are vectorized (ndarray in, ndarray out) so they can be
fed straight into the path quadrature.  Distance estimates come in certified
pairs: a lower bound that holds for every path and an upper bound realized
by an explicit comparison domain or path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .constants import KAPPA, PI_OVER_LOG2
from .domains import (
    ComplementDisk,
    ComplementDiskExterior,
    ComplementHalfPlane,
    ComplementPoint,
    Domain,
    DomainError,
    FiniteComplement,
    OutsideDomainError,
    PuncturedSubdomain,
    PuncturedUnitDisk,
    UnitDisk,
    UpperHalfPlane,
    rho_length,
)
from .geometry import Polyline, as_finite, chi_arc, segment_point_distance


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------

def hyperbolic_disk_density(z) -> np.ndarray:
    """2 / (1 - |z|^2) on the unit disk."""
    z = np.asarray(z, dtype=np.complex128)
    return 2.0 / (1.0 - np.abs(z) ** 2)


def punctured_disk_density(z) -> np.ndarray:
    """1 / (|z| |log |z||) on the punctured unit disk."""
    z = np.asarray(z, dtype=np.complex128)
    r = np.abs(z)
    return 1.0 / (r * np.abs(np.log(r)))


def disk_exterior_density(z) -> np.ndarray:
    """1 / (|z| log |z|) outside the closed unit disk."""
    z = np.asarray(z, dtype=np.complex128)
    r = np.abs(z)
    return 1.0 / (r * np.log(r))


def halfplane_density(z) -> np.ndarray:
    """1 / Im z on the upper half-plane (hyperbolic = quasihyperbolic there)."""
    z = np.asarray(z, dtype=np.complex128)
    return 1.0 / z.imag


def lambda01_lower(z) -> np.ndarray:
    """Pointwise lower bound for the twice-punctured-plane density:

    1 / (|z| (kappa + |log |z||)), sharp at z = -1 where it equals 1/kappa.
    """
    z = np.asarray(z, dtype=np.complex128)
    r = np.abs(z)
    return 1.0 / (r * (KAPPA + np.abs(np.log(r))))


def quasihyperbolic_density(domain: Domain) -> Callable[[np.ndarray], np.ndarray]:
    """1 / dist(z, boundary) as a vectorized callable."""
    def rho(z):
        with np.errstate(divide="ignore"):
            return 1.0 / domain.delta_field(z)
    return rho


def chordal_quasihyperbolic_density(domain: Domain) -> Callable[[np.ndarray], np.ndarray]:
    """Spherical conformal factor over the chordal boundary distance."""
    def rho(z):
        z = np.asarray(z, dtype=np.complex128)
        with np.errstate(divide="ignore"):
            return (2.0 / (1.0 + np.abs(z) ** 2)) / domain.chordal_boundary_distance_field(z)
    return rho


# ---------------------------------------------------------------------------
# Exact distances
# ---------------------------------------------------------------------------

def hyperbolic_disk_distance(a: complex, b: complex) -> float:
    """Hyperbolic distance in the unit disk (curvature -1 normalization
    matching the density 2/(1-|z|^2))."""
    a, b = as_finite(a), as_finite(b)
    if not (abs(a) < 1.0 and abs(b) < 1.0):
        raise DomainError("points must lie in the open unit disk")
    t = abs((a - b) / (1.0 - a.conjugate() * b))
    return 2.0 * math.atanh(t)


def halfplane_distance(a: complex, b: complex) -> float:
    """Hyperbolic (equals quasihyperbolic) distance in the upper half-plane."""
    a, b = as_finite(a), as_finite(b)
    if not (a.imag > 0.0 and b.imag > 0.0):
        raise DomainError("points must lie in the upper half-plane")
    s = abs(a - b) ** 2 / (2.0 * a.imag * b.imag)
    # acosh(1 + s) computed stably for small s
    return math.log1p(s + math.sqrt(s * (s + 2.0)))


# ---------------------------------------------------------------------------
# Distance intervals
# ---------------------------------------------------------------------------

class InconsistentIntervalError(ValueError):
    pass


@dataclass(frozen=True)
class DistanceInterval:
    """A certified enclosure [lower, upper] of a distance; each endpoint
    carries a label naming the estimate that produced it."""

    lower: float
    upper: float
    lower_source: str = ""
    upper_source: str = ""

    def __post_init__(self):
        if not (self.lower >= 0.0):
            raise InconsistentIntervalError(f"negative lower bound {self.lower}")
        if math.isnan(self.upper) or self.upper < self.lower * (1.0 - 1e-13) - 1e-15:
            raise InconsistentIntervalError(
                f"upper bound {self.upper} below lower bound {self.lower}")
        if self.upper < self.lower:
            # iron out harmless rounding-level inversions from exact ties
            object.__setattr__(self, "upper", self.lower)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= x <= self.upper + tol

    def disjoint_above(self, x: float) -> bool:
        """Certified: the true value exceeds x."""
        return self.lower > x

    def disjoint_below(self, x: float) -> bool:
        """Certified: the true value is less than x."""
        return self.upper < x

    def as_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper,
                "lower_source": self.lower_source, "upper_source": self.upper_source}

    def __str__(self) -> str:
        return f"[{self.lower:.12g}, {self.upper:.12g}]"


# ---------------------------------------------------------------------------
# Hyperbolic distance estimates
# ---------------------------------------------------------------------------

def h_upper_Dstar(a: complex, b: complex, center: complex = 0.0,
                  radius: float = 1.0) -> float:
    """Upper bound for the hyperbolic distance in a punctured disk:

    |log(L_a / L_b)| + pi/log 2, with L_z = log(radius / |z - center|).
    """
    a, b = as_finite(a), as_finite(b)
    la = math.log(radius / abs(a - center))
    lb = math.log(radius / abs(b - center))
    if not (la > 0.0 and lb > 0.0):
        raise DomainError("points must lie strictly inside the punctured disk")
    return abs(math.log(la / lb)) + PI_OVER_LOG2


def h_upper_disk_exterior(a: complex, b: complex, center: complex = 0.0,
                          radius: float = 1.0) -> float:
    """Mirror of ``h_upper_Dstar`` for the region outside a closed disk."""
    a, b = as_finite(a), as_finite(b)
    la = math.log(abs(a - center) / radius)
    lb = math.log(abs(b - center) / radius)
    if not (la > 0.0 and lb > 0.0):
        raise DomainError("points must lie strictly outside the closed disk")
    return abs(math.log(la / lb)) + PI_OVER_LOG2


def h01_lower(a: complex, b: complex) -> Tuple[float, bool]:
    """Lower bound for the hyperbolic distance in the plane minus {0, 1}.

    Integrates the sharp density lower bound radially; available only when
    both points are on the same side of the unit circle (the returned flag
    is False otherwise, with value 0).
    """
    a, b = as_finite(a), as_finite(b)
    if a == 0 or b == 0 or a == 1 or b == 1:
        raise DomainError("points must avoid the punctures 0 and 1")
    ua = math.log(abs(a))
    ub = math.log(abs(b))
    if ua * ub < 0.0:
        return (0.0, False)
    lo, hi = sorted((abs(ua), abs(ub)))
    return (math.log((KAPPA + hi) / (KAPPA + lo)), True)


def h_upper_three_punct(a: float, b: float) -> float:
    """Upper bound for the hyperbolic distance between a and b in the plane
    minus {0, -a, -b}, for real 0 < a < b with log(b/a) > 2:

    4 + pi log((1/2) log(b/a)).
    """
    a_c, b_c = as_finite(a), as_finite(b)
    if a_c.imag != 0.0 or b_c.imag != 0.0:
        raise DomainError("endpoints must be real")
    av, bv = a_c.real, b_c.real
    if not (0.0 < av < bv):
        raise DomainError("need 0 < a < b")
    ratio_log = math.log(bv) - math.log(av)
    if not ratio_log > 2.0:
        raise DomainError(f"need log(b/a) > 2, got {ratio_log}")
    return 4.0 + math.pi * math.log(0.5 * ratio_log)


# ---------------------------------------------------------------------------
# Combined interval
# ---------------------------------------------------------------------------

def _anchor_points(domain: Domain, a: complex, b: complex) -> List[complex]:
    anchors: List[complex] = list(domain.finite_boundary_points())
    for comp in domain.complement_components():
        if isinstance(comp, (ComplementDisk, ComplementDiskExterior, ComplementHalfPlane)):
            for z in (a, b):
                anchors.extend(comp.nearest_points(z))
    uniq: List[complex] = []
    for p in anchors:
        if not any(abs(p - q) <= 1e-12 * max(1.0, abs(p)) for q in uniq):
            uniq.append(p)
    return uniq


def _twice_punctured_lower(a: complex, b: complex, p: complex, q: complex) -> Optional[float]:
    """Lower bound via the inclusion of the domain in the plane minus {p, q}."""
    w = q - p
    val, ok = h01_lower((a - p) / w, (b - p) / w)
    return val if ok else None


def _bp_arc_upper(domain: Domain, a: complex, b: complex) -> Optional[float]:
    from .beta import bp_upper_density  # deferred: beta builds on this module

    rho = bp_upper_density(domain)
    best = None
    centers = [p for p in domain.finite_boundary_points()]
    scale = max(1.0, abs(a), abs(b))
    for center in centers[:4]:
        if a == center or b == center:
            continue
        path = chi_arc(a, b, center)
        starts, ends = path.segments()
        # an arc grazing another boundary point carries a divergent bound
        grazes = any(
            float(np.min(segment_point_distance(starts, ends, p)))
            <= 1e-9 * max(scale, abs(p))
            for p in centers
        )
        if grazes:
            continue
        probe = rho(path.as_array())
        if np.any(~np.isfinite(probe)) or np.any(probe <= 0.0) or np.max(probe) > 1e12:
            continue
        try:
            # strict: the density bound blows up on the locus where the
            # gap exponent vanishes, and an arc crossing it has no finite
            # integral; such candidates must be dropped, not truncated
            val = rho_length(path, rho, rel_tol=1e-8, strict=True)
        except OutsideDomainError:
            continue
        if best is None or val < best:
            best = val
    return best


def h_interval(domain: Domain, a: complex, b: complex, *,
               k_upper: Optional[float] = None) -> DistanceInterval:
    """Certified interval for the hyperbolic distance between a and b.

    The lower bound is the best of the comparison-domain bounds (exact model
    distances, twice-punctured-plane bound over anchor pairs); the upper
    bound the best of the model estimates (punctured disk, disk exterior),
    an integral of the density upper bound along an explicit arc, and
    2 * k_upper when a quasihyperbolic upper bound is supplied.
    """
    a, b = as_finite(a), as_finite(b)
    if not (domain.contains(a) and domain.contains(b)):
        raise DomainError("both points must lie in the domain")
    if not domain.is_hyperbolic:
        raise DomainError("domain has fewer than three boundary points")
    if a == b:
        return DistanceInterval(0.0, 0.0, "coincident", "coincident")

    if isinstance(domain, UnitDisk):
        v = hyperbolic_disk_distance(a, b)
        return DistanceInterval(v, v, "disk-exact", "disk-exact")
    if isinstance(domain, UpperHalfPlane):
        v = halfplane_distance(a, b)
        return DistanceInterval(v, v, "halfplane-exact", "halfplane-exact")

    lower = 0.0
    lower_src = "trivial"
    upper = math.inf
    upper_src = "none"

    comps = domain.complement_components()

    # model lower bounds from enclosing domains
    if isinstance(domain, PuncturedUnitDisk) or (
            isinstance(domain, PuncturedSubdomain) and isinstance(domain.base, UnitDisk)):
        v = hyperbolic_disk_distance(a, b)
        if v > lower:
            lower, lower_src = v, "disk-lower"
    anchors = _anchor_points(domain, a, b)
    for p in anchors:
        for q in anchors:
            if p == q:
                continue
            v = _twice_punctured_lower(a, b, p, q)
            if v is not None and v > lower:
                lower, lower_src = v, f"twice-punctured-lower({p:.6g},{q:.6g})"

    # model upper bounds
    for comp in comps:
        if not isinstance(comp, ComplementPoint):
            continue
        p = comp.point
        others = [c for c in comps if c is not comp]
        if not others:
            continue
        r_p = min(float(c.distance_field(np.asarray(p))) for c in others)
        if max(abs(a - p), abs(b - p)) < r_p:
            v = h_upper_Dstar(a, b, p, r_p)
            if v < upper:
                upper, upper_src = v, f"punctured-disk-estimate({p:.6g})"
    if (len(comps) == 1 and isinstance(comps[0], ComplementDisk)
            and not domain._contains_infinity()):
        disk = comps[0]
        if min(abs(a - disk.center), abs(b - disk.center)) > disk.radius:
            v = h_upper_disk_exterior(a, b, disk.center, disk.radius)
            if v < upper:
                upper, upper_src = v, "disk-exterior-estimate"

    if k_upper is not None and 2.0 * k_upper < upper:
        upper, upper_src = 2.0 * k_upper, "double-quasihyperbolic"

    # The arc integral is the most expensive estimate, so it only runs when
    # nothing sharper than the generic doubling cap is available; this keeps
    # the result independent of whether a k_upper hint was supplied.
    if math.isinf(upper) or upper_src == "double-quasihyperbolic":
        v = _bp_arc_upper(domain, a, b)
        if v is not None and v < upper:
            upper, upper_src = v, "density-bound-arc"

    return DistanceInterval(lower, upper, lower_src, upper_src)
