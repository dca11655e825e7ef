import math

import mpmath
import pytest

from epv import geometry as geo
from epv.bounds import (
    bound_report,
    comparison_constants,
    corollary_floor,
    cs_upper,
    interlacing_lower,
    thm1_upper,
    thm2_lower,
)
from epv.errors import BadArgs, BadK
from epv.graphcore import bipartition, cycle, disjoint_union, is_connected, is_regular
from epv.spectral import graph_energy_per_vertex

R7, R11 = math.sqrt(7), math.sqrt(11)


def mp_cs(k, m):
    mpmath.mp.dps = 40
    return float(mpmath.mpf(k) / m + mpmath.sqrt(mpmath.mpf((m - 1) * (m - k) * k)) / m)


def test_thm1_examples():
    assert thm1_upper(2) == pytest.approx(4 / 3, abs=1e-15)
    assert thm1_upper(7) == pytest.approx(2.5553, abs=5e-5)
    assert thm1_upper(11) == pytest.approx(3.2329, abs=5e-5)
    with pytest.raises(BadK):
        thm1_upper(1)


def test_cs_upper_examples():
    assert cs_upper(3, 7) == pytest.approx(thm1_upper(3), abs=1e-12)
    assert cs_upper(3, 7) == pytest.approx(1.64075, abs=5e-6)
    assert cs_upper(3, 3) == 1.0
    v = cs_upper(7, 45)
    assert v == pytest.approx(mp_cs(7, 45), abs=1e-13)
    assert v == pytest.approx(2.5596672597864, abs=1e-12)
    assert v >= 2.5416
    with pytest.raises(BadArgs):
        cs_upper(5, 4)


def test_cs_upper_increasing_in_m():
    for k in (3, 5, 8):
        vals = [cs_upper(k, m) for m in range(k, 200)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_interlacing_lower_examples():
    exact = R7 + 14 / 48 - R7 / 6
    assert interlacing_lower(7, 0) == pytest.approx(exact, abs=1e-12)
    assert interlacing_lower(7, 0) == pytest.approx(2.4965, abs=5e-5)
    assert interlacing_lower(7, 1) == pytest.approx((13 + 28 * R7) / 42, abs=1e-12)
    assert interlacing_lower(11, 0) == pytest.approx(3.1683, abs=5e-5)
    for args in ((7, -1), (7, 6), (6, 0)):
        with pytest.raises(BadArgs):
            interlacing_lower(*args)


def test_thm2_examples():
    v, q, ell = thm2_lower(7)
    assert (q, ell) == (7, 0) and v == pytest.approx(2.4965, abs=5e-5)
    v, q, ell = thm2_lower(6)
    assert (q, ell) == (7, 1) and v == pytest.approx((13 + 28 * R7) / 42, abs=1e-12)
    v, q, ell = thm2_lower(10)
    assert (q, ell) == (11, 1) and v == pytest.approx((21 + 88 * R11) / 110, abs=1e-12)


def test_thm2_is_interlacing_bound_and_sandwiched():
    for k in range(2, 201):
        v, q, ell = thm2_lower(k)
        assert v == pytest.approx(interlacing_lower(q, ell), rel=1e-13)
        assert 1 <= v <= thm1_upper(k)


def test_pencil_closed_form_equals_interlacing_at_ell_zero():
    for q in (2, 3, 4, 5, 7, 8, 9, 11, 13):
        k = q
        closed = math.sqrt(k) + 2 * k / (k * k - 1) - math.sqrt(k) / (k - 1)
        assert interlacing_lower(q, 0) == pytest.approx(closed, abs=1e-12)


def test_corollary_examples():
    assert corollary_floor(16) == pytest.approx(4 - 16**0.025, abs=1e-15)
    assert corollary_floor(16) == pytest.approx(2.92823, abs=5e-6)
    assert corollary_floor(4) == pytest.approx(0.9647, abs=5e-5)
    assert corollary_floor(100) == pytest.approx(8.87798, abs=5e-6)


def test_comparison_constants():
    c = comparison_constants(8)
    assert c["km_nikiforov"] == 2.0
    assert c["tree_limit"] == pytest.approx(1.27324, abs=5e-6)
    assert c["trivial_floor"] == 1


def test_bound_report():
    r = bound_report(7, 45)
    assert (r.k, r.q, r.ell) == (7, 7, 0)
    assert r.cs_upper == cs_upper(7, 45)
    assert "large enough" in r.notes
    r = bound_report(4)
    assert r.cs_upper is None and "vacuous" in r.notes and "order 3" in r.notes


# -- equality detection ----------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_planes_attain_upper_bound(q):
    e = graph_energy_per_vertex(geo.incidence_graph(geo.projective_plane(q)))
    assert abs(e - thm1_upper(q + 1)) < 1e-9


def test_triangles_and_hexagons_attain_k2_bound():
    for g in (cycle(3), cycle(6), disjoint_union([cycle(3), cycle(6), cycle(3)])):
        assert abs(graph_energy_per_vertex(g) - thm1_upper(2)) < 1e-12


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 11])
def test_semiplanes_stay_strictly_below(q):
    for fam in (geo.SEMIPLANE_PARALLEL, geo.SEMIPLANE_PENCIL):
        g = geo.incidence_graph(geo.construct(fam, q))
        e = graph_energy_per_vertex(g)
        assert e < thm1_upper(q) - 1e-9
        assert is_connected(g) and bipartition(g) is not None
        assert e <= cs_upper(q, g.n // 2) + 1e-9


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 11])
def test_truncated_between_interlacing_and_upper(q):
    sp = geo.remove_pencil(geo.affine_plane(q))
    for ell in range(q - 1):
        g = geo.incidence_graph(geo.truncate_semiplane(sp, ell))
        k = is_regular(g)
        e = graph_energy_per_vertex(g)
        assert e >= interlacing_lower(q, ell) - 1e-9
        # k = 2 leaves disjoint cycles of length >= 6; hexagons sit on the bound
        if k > 2:
            assert e < thm1_upper(k) - 1e-9
        else:
            assert e <= thm1_upper(k) + 1e-9
