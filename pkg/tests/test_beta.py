"""Boundary-gap exponent, density bounds, bounce-or-cross, uniform perfectness."""

import math

import numpy as np
import pytest

from qhyp import (
    INF,
    KAPPA,
    Annulus,
    DomainError,
    FiniteComplement,
    Polyline,
    SchemaError,
    TranslatedScaled,
    UPCircleFamily,
    UPDisk,
    UPDiskExterior,
    UPPoint,
    UPSet,
    beta,
    beta_field,
    bp_lambda_bounds,
    bp_lower_density,
    bp_upper_density,
    check_abc,
    check_bp_decay,
    chordal_up_to_euclidean_bound,
    dyadic_annulus_candidates,
    fat_annulus_witness,
    up_modulus_sup,
    up_set_from_json,
)


# ---------------------------------------------------------------------------
# The boundary-gap exponent
# ---------------------------------------------------------------------------

def test_beta_deep_gap_value():
    # nearest boundary at distance 1, the rest at e^6: at the throat middle
    # the exponent is the remaining log-depth toward the far circle radius
    dom = FiniteComplement([0.0, math.exp(6.0)])
    res = beta(dom, 1.0)
    assert res.delta == pytest.approx(1.0)
    assert res.value == pytest.approx(6.0, abs=1e-12)
    assert res.annulus is not None
    assert res.annulus.d == pytest.approx(1.0)
    assert res.annulus.half_modulus == pytest.approx(res.value, rel=1e-12)
    assert res.witnesses
    w = res.witnesses[0]
    assert w.contribution == pytest.approx(res.value, rel=1e-12)


def test_beta_vanishes_between_close_boundary_points():
    dom = FiniteComplement([0.0, 1.0])
    res = beta(dom, -1.0)
    assert res.value == 0.0
    assert res.annulus is None


def test_beta_field_matches_scalar():
    dom = FiniteComplement([0.0, 1.0])
    zs = np.array([-1.0 + 0.0j, 0.5 + 2.0j, 10.0j, 0.25 + 0.0j])
    field = beta_field(dom, zs)
    for z, bv in zip(zs, field):
        assert bv == pytest.approx(beta(dom, complex(z)).value, abs=1e-12)


def test_beta_field_nan_outside():
    dom = FiniteComplement([0.0, 1.0])
    field = beta_field(dom, np.array([0.0 + 0.0j, 0.5 + 0.5j]))
    assert math.isnan(field[0])
    assert math.isfinite(field[1])


def test_beta_similarity_invariance():
    base = FiniteComplement([0.0, math.exp(6.0)])
    moved = TranslatedScaled(base, 2.0j, 5.0 - 1.0j)
    for z in (1.0, 40.0, 0.5 + 3.0j):
        expected = beta(base, z).value
        got = beta(moved, 2.0j * z + (5.0 - 1.0j)).value
        assert got == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_beta_rejects_boundary_point():
    dom = FiniteComplement([0.0, 1.0])
    with pytest.raises(DomainError):
        beta(dom, 0.0)


# ---------------------------------------------------------------------------
# Pointwise density bounds
# ---------------------------------------------------------------------------

def test_bp_bounds_at_vanishing_exponent():
    dom = FiniteComplement([0.0, 1.0])
    bounds = bp_lambda_bounds(dom, -1.0)
    assert bounds.beta == 0.0
    assert bounds.lower == pytest.approx(1.0 / KAPPA, abs=1e-15)
    assert not bounds.upper_available


def test_bp_bounds_ordered_when_available():
    dom = FiniteComplement([0.0, math.exp(6.0)])
    bounds = bp_lambda_bounds(dom, 1.0)
    assert bounds.upper_available
    assert bounds.lower == pytest.approx(1.0 / (KAPPA + 6.0), rel=1e-12)
    assert bounds.upper == pytest.approx((math.pi / 2.0) / 6.0, rel=1e-12)
    assert bounds.lower < bounds.upper


def test_bp_density_fields_match_pointwise():
    dom = FiniteComplement([0.0, math.exp(6.0)])
    zs = np.array([1.0 + 0.0j, 2.0j, -3.0 + 0.0j])
    lo = bp_lower_density(dom)(zs)
    hi = bp_upper_density(dom)(zs)
    for z, l, h in zip(zs, lo, hi):
        b = bp_lambda_bounds(dom, complex(z))
        assert l == pytest.approx(b.lower, rel=1e-12)
        if b.upper_available:
            assert h == pytest.approx(b.upper, rel=1e-12)
        else:
            assert math.isinf(h)


def test_bp_decay_across_throat():
    m = 9.0
    dom = FiniteComplement([0.0, -math.exp(-m), -math.exp(m)])
    report = check_bp_decay(dom, Annulus(0.0, d=1.0, m=m), samples=80, seed=3)
    assert report.ok
    assert report.violations == 0
    assert report.worst_low >= 1.0
    assert report.worst_high <= 1.0


def test_bp_decay_needs_room():
    dom = FiniteComplement([0.0, -1.0, -2.0])
    with pytest.raises(ValueError):
        check_bp_decay(dom, Annulus(0.0, d=1.0, m=1.0))


# ---------------------------------------------------------------------------
# Bounce or cross
# ---------------------------------------------------------------------------

def test_dyadic_candidates_avoid_boundary():
    dom = FiniteComplement([0.0, 100.0])
    nu = math.log(2.0)
    cands = dyadic_annulus_candidates(dom, nu, 0.25, 8.0)
    assert cands
    for ann in cands:
        for p in dom.finite_boundary_points():
            r = abs(p - ann.center)
            assert not (ann.inner * (1.0 + 1e-12) < r < ann.outer * (1.0 - 1e-12))


def test_dyadic_candidates_validation():
    dom = FiniteComplement([0.0, 100.0])
    with pytest.raises(ValueError):
        dyadic_annulus_candidates(dom, -1.0, 0.25, 8.0)
    with pytest.raises(ValueError):
        dyadic_annulus_candidates(dom, 1.0, 8.0, 0.25)


def test_abc_accepts_single_pass_and_bounce():
    dom = FiniteComplement([0.0, 100.0])
    cands = [Annulus(0.0, d=1.0, m=math.log(2.0))]
    # clean radial pass: one crossing
    report = check_abc(dom, Polyline([0.01, 50.0]), math.pi, math.log(2.0), cands)
    assert report.ok and report.checked == 1
    # shallow bounce: stays within the mu-band of the center circle
    report = check_abc(dom, Polyline([0.5, 1.5, 0.5 + 0.1j]), math.pi, math.log(2.0), cands)
    assert report.ok


def test_abc_flags_double_crossing_wanderer():
    dom = FiniteComplement([0.0, 100.0])
    cands = [Annulus(0.0, d=1.0, m=math.log(2.0))]
    bad = Polyline([0.01, 50.0, 0.01 + 0.005j, 50.0 + 1.0j])
    report = check_abc(dom, bad, math.pi, math.log(2.0), cands)
    assert not report.ok
    v = report.violations[0]
    assert v.crossings >= 3
    assert v.min_radius < math.exp(-math.pi)
    assert v.max_radius > math.exp(math.pi)


def test_abc_finds_candidates_itself():
    dom = FiniteComplement([0.0, 100.0])
    report = check_abc(dom, Polyline([0.01, 50.0]), math.pi, math.log(2.0))
    assert report.ok
    assert report.candidates > 0


# ---------------------------------------------------------------------------
# Uniform perfectness
# ---------------------------------------------------------------------------

def test_up_geometric_circle_family():
    E = UPSet(points=(UPPoint(0.0),),
              families=(UPCircleFamily(0.0, 4.0, 1.0),))
    report = up_modulus_sup(E)
    assert not report.unbounded
    assert report.sup_modulus == pytest.approx(math.log(4.0), abs=1e-15)
    assert report.witness is not None
    assert report.witness.modulus == pytest.approx(math.log(4.0), rel=1e-12)


def test_up_isolated_points_unbounded():
    E = UPSet(points=(UPPoint(0.0), UPPoint(1.0)))
    report = up_modulus_sup(E)
    assert report.unbounded
    assert math.isinf(report.sup_modulus)
    labels = {("inf" if p is INF or getattr(p, "real", None) is None else complex(p))
              for p in report.isolated}
    assert len(report.isolated) == 3


def test_up_disk_pair_modulus():
    # two unit disks with centers 2e apart: the best separating annulus is
    # centered on one disk and runs from its rim to the other's near edge
    gap = 2.0 * math.e
    E = UPSet(disks=(UPDisk(0.0, 1.0), UPDisk(gap, 1.0)),
              disk_exteriors=(UPDiskExterior(0.0, 100.0),))
    report = up_modulus_sup(E)
    assert not report.unbounded
    assert report.sup_modulus >= math.log(gap - 1.0) - 1e-9
    assert report.witness is not None


def test_up_monotone_under_more_blockers():
    base = UPSet(points=(UPPoint(0.0),),
                 families=(UPCircleFamily(0.0, 16.0, 1.0),))
    thick = UPSet(points=(UPPoint(0.0),),
                  families=(UPCircleFamily(0.0, 16.0, 1.0),
                            UPCircleFamily(0.0, 16.0, 2.0)))
    sup_base = up_modulus_sup(base).sup_modulus
    sup_thick = up_modulus_sup(thick).sup_modulus
    assert sup_thick <= sup_base + 1e-12


def test_up_json_parser_strict():
    E = up_set_from_json({"points": [[0, 0]],
                          "families": [{"center": [0, 0], "ratio": 4.0, "scale": 1.0}],
                          "includes_infinity": True})
    assert len(E.points) == 1 and len(E.families) == 1
    with pytest.raises(SchemaError):
        up_set_from_json({"blobs": []})
    with pytest.raises(SchemaError):
        up_set_from_json({"points": [[0, 0]], "includes_infinity": False})
    with pytest.raises(SchemaError):
        up_set_from_json({"disks": [{"center": [0, 0]}]})
    with pytest.raises(SchemaError):
        up_set_from_json({"disks": [{"center": [0, 0], "radius": 1.0, "color": "red"}]})


def test_up_chordal_conversion():
    conv = chordal_up_to_euclidean_bound(2.0)
    assert (conv.center_outside, conv.center_inside, conv.general) == (8.0, 32.0, 1024.0)
    with pytest.raises(ValueError):
        chordal_up_to_euclidean_bound(1.99)


# ---------------------------------------------------------------------------
# Fat annulus witness
# ---------------------------------------------------------------------------

def test_fat_annulus_witness_shape():
    w = fat_annulus_witness(5.0)
    assert w.annulus_separates
    assert w.k_star_ab == pytest.approx(2.0, abs=1e-12)
    assert w.k_enclosure[0] <= w.k_star_ab <= w.k_enclosure[1]
    assert w.h_lower_ab == pytest.approx(w.h_lower_closed_form, abs=1e-12)
    assert w.bp_upper_integral == pytest.approx(w.bp_upper_closed_form, rel=1e-9)
    assert w.domain.contains(w.a) and w.domain.contains(w.b) and w.domain.contains(w.c)


def test_fat_annulus_witness_gap_grows():
    shallow = fat_annulus_witness(3.0)
    deep = fat_annulus_witness(12.0)
    # quasihyperbolic separation grows linearly, the hyperbolic floor only
    # logarithmically, so the certified gap widens with the throat depth
    gap_shallow = shallow.k_star_ab - shallow.h_lower_ab
    gap_deep = deep.k_star_ab - deep.h_lower_ab
    assert gap_deep > gap_shallow + 3.0


def test_fat_annulus_witness_validation():
    with pytest.raises(ValueError):
        fat_annulus_witness(1.0)
