"""Plane domains: membership, boundary distances, JSON wire format, path length."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhyp import (
    INF,
    DomainError,
    ExteriorUnitDisk,
    FiniteComplement,
    OutsideDomainError,
    Polyline,
    PuncturedSubdomain,
    PuncturedUnitDisk,
    SchemaError,
    TranslatedScaled,
    UnitDisk,
    UpperHalfPlane,
    check_uniform_arc,
    domain_from_json,
    domain_from_json_text,
    quasihyperbolic_density,
    rho_length,
)

ALL_DOMAINS = [
    FiniteComplement([0.0]),
    FiniteComplement([0.0, 1.0]),
    FiniteComplement([0.0, 1.0, -2.0j], contains_infinity=True),
    UnitDisk(),
    PuncturedUnitDisk(),
    ExteriorUnitDisk(),
    UpperHalfPlane(),
    PuncturedSubdomain(UnitDisk(), [0.25j]),
    TranslatedScaled(UnitDisk(), 2.0j, 1.0),
]


# ---------------------------------------------------------------------------
# Membership and boundary distance
# ---------------------------------------------------------------------------

def test_membership_basic():
    twice = FiniteComplement([0.0, 1.0])
    assert twice.contains(0.5j)
    assert not twice.contains(0.0)
    assert not twice.contains(1.0)
    assert not twice.contains(INF)
    sphere = FiniteComplement([0.0], contains_infinity=True)
    assert sphere.contains(INF)
    assert UnitDisk().contains(0.9j)
    assert not UnitDisk().contains(1.0)
    assert ExteriorUnitDisk().contains(3.0)
    assert not ExteriorUnitDisk().contains(0.5)
    assert UpperHalfPlane().contains(2.0j)
    assert not UpperHalfPlane().contains(-1.0j)
    assert not UpperHalfPlane().contains(5.0)


def test_delta_values():
    twice = FiniteComplement([0.0, 1.0])
    assert twice.delta(0.25) == pytest.approx(0.25)
    assert twice.delta(0.75) == pytest.approx(0.25)
    assert twice.delta(3.0) == pytest.approx(2.0)
    assert UnitDisk().delta(0.25j) == pytest.approx(0.75)
    assert UpperHalfPlane().delta(1.0 + 2.0j) == pytest.approx(2.0)
    assert ExteriorUnitDisk().delta(-3.0) == pytest.approx(2.0)
    disk_star = PuncturedUnitDisk()
    assert disk_star.delta(0.25) == pytest.approx(0.25)
    assert disk_star.delta(0.9) == pytest.approx(0.1, abs=1e-12)


def test_delta_field_matches_scalar():
    dom = FiniteComplement([0.0, 1.0, 2.0j])
    zs = np.array([0.3 + 0.1j, -1.0, 5.0, 0.5 + 1.0j])
    field = dom.delta_field(zs)
    for z, d in zip(zs, field):
        assert d == pytest.approx(dom.delta(complex(z)), abs=1e-14)


def test_nearest_boundary():
    dom = FiniteComplement([0.0, 4.0])
    assert dom.nearest_boundary(1.0) == [pytest.approx(0.0)]
    assert dom.nearest_boundary(3.5) == [pytest.approx(4.0)]
    # the midpoint sees both punctures
    assert sorted(dom.nearest_boundary(2.0), key=abs) == [
        pytest.approx(0.0),
        pytest.approx(4.0),
    ]
    assert UnitDisk().nearest_boundary(0.5) == [pytest.approx(1.0)]
    assert UpperHalfPlane().nearest_boundary(2.0 + 3.0j) == [pytest.approx(2.0)]


def test_delta_outside_raises():
    dom = FiniteComplement([0.0])
    with pytest.raises(OutsideDomainError):
        dom.delta(0.0)
    with pytest.raises(OutsideDomainError):
        UnitDisk().delta(2.0)


def test_coincident_punctures_rejected():
    with pytest.raises(DomainError):
        FiniteComplement([1.0, 1.0 + 1e-18])
    with pytest.raises(DomainError):
        PuncturedSubdomain(UnitDisk(), [2.0])


def test_hyperbolicity_flag():
    assert not FiniteComplement([0.0]).is_hyperbolic
    assert FiniteComplement([0.0, 1.0]).is_hyperbolic
    assert UnitDisk().is_hyperbolic
    # the sphere minus two points carries no hyperbolic metric
    assert not FiniteComplement([0.0, 1.0], contains_infinity=True).is_hyperbolic
    assert FiniteComplement([0.0, 1.0, 2.0], contains_infinity=True).is_hyperbolic


def test_translated_scaled_matches_manual():
    base = FiniteComplement([0.0, 1.0])
    moved = TranslatedScaled(base, 2.0j, 3.0)
    # punctures move to 3 and 3 + 2j
    assert not moved.contains(3.0)
    assert not moved.contains(3.0 + 2.0j)
    assert moved.delta(3.0 + 1.0j) == pytest.approx(1.0)
    z = 0.25 + 0.5j
    assert moved.delta(2.0j * z + 3.0) == pytest.approx(2.0 * base.delta(z))


def test_punctured_subdomain_delta():
    dom = PuncturedSubdomain(UnitDisk(), [0.5])
    assert dom.delta(0.25) == pytest.approx(0.25)
    assert dom.delta(0.9) == pytest.approx(0.1, abs=1e-12)
    assert not dom.contains(0.5)
    flat = PuncturedSubdomain(FiniteComplement([0.0]), [1.0]).flattened()
    assert isinstance(flat, FiniteComplement)
    assert set(flat.punctures) == {0.0, 1.0}


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("dom", ALL_DOMAINS, ids=lambda d: type(d).__name__)
def test_json_roundtrip(dom):
    text = json.dumps(dom.to_json_dict())
    back = domain_from_json_text(text)
    assert back == dom
    assert hash(back) == hash(dom)


def test_json_rejects_unknown_type():
    with pytest.raises(SchemaError):
        domain_from_json({"type": "pac_man"})


def test_json_rejects_unknown_keys():
    with pytest.raises(SchemaError):
        domain_from_json({"type": "unit_disk", "radius": 2.0})
    with pytest.raises(SchemaError):
        domain_from_json(
            {"type": "finite_complement", "punctures": [[0, 0]], "extra": 1}
        )


def test_json_rejects_malformed_points():
    with pytest.raises(SchemaError):
        domain_from_json({"type": "finite_complement", "punctures": [[0]]})
    with pytest.raises(SchemaError):
        domain_from_json({"type": "finite_complement", "punctures": "zero"})
    with pytest.raises(SchemaError):
        domain_from_json_text("not json at all")


def test_json_missing_required_field():
    with pytest.raises(SchemaError):
        domain_from_json({"type": "finite_complement"})
    with pytest.raises(SchemaError):
        domain_from_json({"type": "translated_scaled", "base": {"type": "unit_disk"}})


# ---------------------------------------------------------------------------
# Density line integrals
# ---------------------------------------------------------------------------

def test_rho_length_constant_density_is_euclidean():
    path = Polyline([0.0, 1.0, 1.0 + 2.0j])
    val = rho_length(path, lambda z: np.ones_like(z, dtype=float))
    assert val == pytest.approx(path.euclidean_length, rel=1e-10)


def test_rho_length_logarithmic_integral():
    # integral of |dz| / |z| along [1, e] is exactly 1
    path = Polyline([1.0, math.e])
    val = rho_length(path, lambda z: 1.0 / np.abs(z), rel_tol=1e-12)
    assert val == pytest.approx(1.0, rel=1e-10)


def test_rho_length_additive_over_subpaths():
    dom = FiniteComplement([0.0, 1.0])
    density = quasihyperbolic_density(dom)
    path = Polyline([0.2 + 0.1j, 0.5 + 0.4j, 2.0 + 0.3j, 3.0])
    total = rho_length(path, density, rel_tol=1e-11)
    parts = sum(
        rho_length(path.subpath(i, i + 1), density, rel_tol=1e-11)
        for i in range(len(path) - 1)
    )
    assert total == pytest.approx(parts, rel=1e-9)


def test_rho_length_rejects_path_through_boundary():
    dom = FiniteComplement([0.0])
    density = quasihyperbolic_density(dom)
    with pytest.raises(OutsideDomainError):
        rho_length(Polyline([-1.0, 1.0]), density)


@settings(deadline=None, max_examples=30)
@given(st.floats(min_value=0.1, max_value=10.0), st.floats(min_value=0.1, max_value=10.0))
def test_rho_length_radial_quasihyperbolic(r1, r2):
    # along a radial ray in the punctured plane the length is |log(r1/r2)|
    if abs(math.log(r1 / r2)) < 1e-9:
        return
    dom = FiniteComplement([0.0])
    path = Polyline([complex(r1, 0.0), complex(r2, 0.0)])
    val = rho_length(path, quasihyperbolic_density(dom), rel_tol=1e-11)
    assert val == pytest.approx(abs(math.log(r1 / r2)), rel=1e-8)


# ---------------------------------------------------------------------------
# Uniform arc check
# ---------------------------------------------------------------------------

def test_uniform_arc_straight_line():
    path = Polyline([0.0, 1.0, 2.0, 3.0])
    report = check_uniform_arc(path, 1.5)
    assert report.ok
    assert report.worst_ratio == pytest.approx(1.0)


def test_uniform_arc_right_angle():
    path = Polyline([0.0, 1.0, 1.0 + 1.0j])
    report = check_uniform_arc(path, 1.2)
    assert not report.ok
    assert report.worst_ratio == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert tuple(sorted(report.worst_pair)) == (0, 2)
    assert check_uniform_arc(path, 1.5).ok
