import math

import numpy as np
import pytest

from jbv import (PeriodicJacobi, band_structure, chebyshev_second_kind,
                 comb_potential, discriminant_polynomial, discriminant_value,
                 free_critical_points, gap_report, intersection_over_family,
                 one_step_matrix, spectral_bracket)
from oracles import chebu_sine, comb2_band_edges, interp_discriminant_coeffs


def free_block(q):
    return PeriodicJacobi.of(q, [1.0] * q, [0.0] * q)


# ---------------------------------------------------------------------------
# discriminant values and polynomials

def test_discriminant_free_q1_is_identity():
    P = free_block(1)
    for z in (0.0, 1.3, -2.7, 0.5 + 0.25j):
        assert discriminant_value(P, z) == pytest.approx(z, abs=1e-14)


def test_discriminant_free_q2_at_zero():
    # hand product of the one-step factors
    m = one_step_matrix(1, 0, 0.0) @ one_step_matrix(1, 0, 0.0)
    assert m.trace() == pytest.approx(-2.0, abs=1e-15)
    assert discriminant_value(free_block(2), 0.0) == pytest.approx(-2.0, abs=1e-15)


def test_discriminant_comb2():
    P = comb_potential(2, 0.5)
    # explicit product gives x^2 - w x - 2
    for x in (1.0, -0.7, 2.3):
        ref = (one_step_matrix(1, 0.5, x) @ one_step_matrix(1, 0.0, x)).trace()
        assert discriminant_value(P, x) == pytest.approx(ref, abs=1e-14)
    assert discriminant_value(P, 1.0) == pytest.approx(-1.5, abs=1e-14)


def test_discriminant_polynomial_closed_forms():
    assert discriminant_polynomial(free_block(2)).coeffs == pytest.approx((-2.0, 0.0, 1.0))
    assert discriminant_polynomial(free_block(1)).coeffs == pytest.approx((0.0, 1.0))
    alpha, beta = 1.7, -0.4
    p = discriminant_polynomial(PeriodicJacobi.of(1, [alpha], [beta]))
    assert p.coeffs == pytest.approx((-beta / alpha, 1.0 / alpha))


def test_discriminant_polynomial_against_interpolation():
    rng = np.random.default_rng(21)
    for _ in range(25):
        q = int(rng.integers(1, 7))
        P = PeriodicJacobi.of(q, 0.5 + 1.5 * rng.random(q), -1 + 2 * rng.random(q))
        ours = np.array(discriminant_polynomial(P).coeffs)
        ref = interp_discriminant_coeffs(P)
        scale = np.max(np.abs(ref)) + 1.0
        assert np.max(np.abs(ours - ref)) / scale < 1e-9


def test_leading_coefficient_rule():
    rng = np.random.default_rng(22)
    q = 4
    P = PeriodicJacobi.of(q, 0.5 + rng.random(q), rng.standard_normal(q))
    p = discriminant_polynomial(P)
    assert p.degree == q
    assert p.coeffs[-1] == pytest.approx(1.0 / np.prod(P.a), rel=1e-12)


def test_cyclic_invariance():
    rng = np.random.default_rng(23)
    q = 5
    a = (0.5 + rng.random(q)).tolist()
    b = rng.standard_normal(q).tolist()
    base = np.array(discriminant_polynomial(PeriodicJacobi.of(q, a, b)).coeffs)
    for r in range(1, q):
        rot = discriminant_polynomial(
            PeriodicJacobi.of(q, a[r:] + a[:r], b[r:] + b[:r]))
        assert np.max(np.abs(np.array(rot.coeffs) - base)) < 1e-9


# ---------------------------------------------------------------------------
# band structures

def test_free_q2_band_structure():
    bs = band_structure(free_block(2), tol=1e-10)
    assert bs.bands[0].as_pair() == pytest.approx((-2.0, 0.0), abs=1e-9)
    assert bs.bands[1].as_pair() == pytest.approx((0.0, 2.0), abs=1e-9)
    assert len(bs.gaps) == 1 and bs.gaps[0].closed
    assert bs.gaps[0].center == pytest.approx(0.0, abs=1e-9)
    assert not bs.q_interior.contains(bs.gaps[0].center)
    assert bs.q_interior.contains(1.0) and bs.q_interior.contains(-1.0)


def test_single_band_q1():
    alpha, beta = 0.8, 0.3
    bs = band_structure(PeriodicJacobi.of(1, [alpha], [beta]))
    assert len(bs.bands) == 1
    assert bs.bands[0].as_pair() == pytest.approx(
        (beta - 2 * alpha, beta + 2 * alpha), abs=1e-9)
    assert bs.gaps == ()


def test_comb2_band_structure_quadratic_oracle():
    for w in (0.1, 0.5, 1.0):
        bs = band_structure(comb_potential(2, w), tol=1e-10)
        e = comb2_band_edges(w)
        assert bs.bands[0].as_pair() == pytest.approx((e[0], e[1]), abs=1e-9)
        assert bs.bands[1].as_pair() == pytest.approx((e[2], e[3]), abs=1e-9)
        gap = bs.gaps[0]
        assert not gap.closed
        assert (gap.lo, gap.hi) == pytest.approx((0.0, w), abs=1e-9)


def test_band_values_within_two():
    rng = np.random.default_rng(24)
    for _ in range(20):
        q = int(rng.integers(1, 6))
        P = PeriodicJacobi.of(q, 0.5 + 1.5 * rng.random(q), -1 + 2 * rng.random(q))
        bs = band_structure(P)
        poly = bs.discriminant
        for band in bs.bands:
            for x in np.linspace(band.lo, band.hi, 25):
                assert abs(poly(x)) <= 2.0 + 1e-7
        edges = [e for band in bs.bands for e in band.as_pair()]
        for x in np.linspace(*spectral_bracket(P), 200):
            # interior endpoints are only located to the isolation tolerance,
            # so probe strictly inside
            if bs.q_interior.contains(x) and min(abs(x - e) for e in edges) > 1e-8:
                assert abs(poly(x)) < 2.0


def test_shift_covariance():
    rng = np.random.default_rng(25)
    q = 3
    P = PeriodicJacobi.of(q, 0.5 + rng.random(q), rng.standard_normal(q))
    c = 0.7312
    bs0 = band_structure(P)
    bs1 = band_structure(P.shifted(c))
    for b0, b1 in zip(bs0.bands, bs1.bands):
        assert b1.lo == pytest.approx(b0.lo + c, abs=1e-8)
        assert b1.hi == pytest.approx(b0.hi + c, abs=1e-8)


def test_free_critical_points_formula():
    assert free_critical_points(2) == pytest.approx([0.0], abs=1e-15)
    assert free_critical_points(3) == pytest.approx([-1.0, 1.0], abs=1e-14)
    assert free_critical_points(1) == []


def test_free_critical_points_match_derivative_roots():
    for q in range(2, 9):
        bs = band_structure(free_block(q))
        ref = free_critical_points(q)
        assert len(bs.critical_points) == q - 1
        assert list(bs.critical_points) == pytest.approx(ref, abs=1e-8)


def test_doubled_period_shrinks_interior_not_spectrum():
    bs2 = band_structure(free_block(2))
    bs4 = band_structure(free_block(4))
    assert np.allclose(bs4.spectrum.as_pairs(), bs2.spectrum.as_pairs(), atol=1e-8)
    r2 = math.sqrt(2.0)
    assert bs2.q_interior.contains(r2) and bs2.q_interior.contains(-r2)
    assert not bs4.q_interior.contains(bs4.critical_points[0])
    assert sorted(bs4.critical_points) == pytest.approx([-r2, 0.0, r2], abs=1e-8)


# ---------------------------------------------------------------------------
# chebyshev and comb helpers

def test_chebyshev_examples():
    assert chebyshev_second_kind(0, 123.0) == 1.0
    assert chebyshev_second_kind(2, 2 * math.cos(math.pi / 3)) == pytest.approx(0.0, abs=1e-14)
    assert chebyshev_second_kind(3, 2.0) == pytest.approx(4.0, abs=1e-12)


def test_chebyshev_matches_sine_formula():
    rng = np.random.default_rng(26)
    for _ in range(100):
        n = int(rng.integers(0, 25))
        x = rng.uniform(-1.95, 1.95)
        assert chebyshev_second_kind(n, x) == pytest.approx(
            chebu_sine(n, x), rel=1e-9, abs=1e-9)


def test_comb_block_layout():
    P = comb_potential(2, 0.5)
    assert P.a == (1.0, 1.0) and P.b == (0.0, 0.5)
    assert comb_potential(3, 1.0).b == (0.0, 0.0, 1.0)
    assert comb_potential(4, 0.01).b == (0.0, 0.0, 0.0, 0.01)
    with pytest.raises(ValueError):
        comb_potential(1, 0.5)


def test_gap_report_examples():
    rep = gap_report(comb_potential(2, 0.5))
    assert len(rep.gap_intervals) == 1
    assert rep.gap_intervals[0].as_pair() == pytest.approx((0.0, 0.5), abs=1e-9)
    assert rep.centers == pytest.approx([0.25], abs=1e-9)
    assert rep.min_width == pytest.approx(0.5, abs=1e-9)
    assert rep.all_open

    rep_free = gap_report(free_block(2))
    assert rep_free.gap_intervals == ()
    assert not rep_free.all_open
    assert rep_free.min_width == 0.0

    rep3 = gap_report(comb_potential(3, 0.2), tol=1e-9)
    assert len(rep3.gap_intervals) == 2
    assert rep3.all_open


def test_comb_gaps_open_across_couplings():
    for q in (2, 3, 4, 5):
        for w in (1e-3, 1e-2, 0.1, 0.3, 1.0):
            assert gap_report(comb_potential(q, w)).all_open, (q, w)


# ---------------------------------------------------------------------------
# family intersections

def shift_family(q, lam, points):
    betas = np.linspace(-lam, lam, points)
    return [PeriodicJacobi.of(q, [1.0] * q, [b] * q) for b in betas]


def test_intersection_spectrum_mode():
    fam = shift_family(2, 0.5, 51)
    got = intersection_over_family(fam, "spectrum")
    assert np.allclose(got.as_pairs(), [(-1.5, 1.5)], atol=1e-8)


def test_intersection_qinterior_mode_q2():
    fam = shift_family(2, 0.5, 51)
    got = intersection_over_family(fam, "qinterior")
    assert len(got.intervals) == 2
    assert np.allclose(got.as_pairs(), [(-1.5, -0.5), (0.5, 1.5)], atol=1e-7)
    assert all(not iv.closed_lo and not iv.closed_hi for iv in got.intervals)


def test_intersection_single_member_identity():
    P = comb_potential(3, 0.4)
    bs = band_structure(P)
    got_spec = intersection_over_family([P], "spectrum")
    assert got_spec == bs.spectrum
    got_int = intersection_over_family([P], "qinterior")
    assert np.allclose(got_int.as_pairs(), bs.q_interior.as_pairs(), atol=1e-12)


def test_intersection_bad_inputs():
    with pytest.raises(ValueError):
        intersection_over_family([], "spectrum")
    with pytest.raises(ValueError):
        intersection_over_family([free_block(2)], "nonsense")


def test_same_discriminant_membership():
    from jbv import same_discriminant
    q = 4
    rng = np.random.default_rng(27)
    a = (0.5 + rng.random(q)).tolist()
    b = rng.standard_normal(q).tolist()
    P = PeriodicJacobi.of(q, a, b)
    rotated = PeriodicJacobi.of(q, a[2:] + a[:2], b[2:] + b[:2])
    assert same_discriminant(P, rotated)
    assert not same_discriminant(P, PeriodicJacobi.of(q, a, [x + 0.1 for x in b]))
    assert not same_discriminant(P, comb_potential(3, 0.5))


def test_band_structure_near_degenerate_blocks():
    # nearly constant diagonals put every gap near the closed/open boundary;
    # isolation must still account for exactly 2q edges and classify gaps
    # consistently with their widths
    rng = np.random.default_rng(123)
    for _ in range(150):
        q = int(rng.integers(2, 7))
        eps = 10 ** rng.uniform(-9, -4)
        b0 = rng.uniform(-1, 1)
        b = b0 + eps * rng.standard_normal(q)
        bs = band_structure(PeriodicJacobi.of(q, np.ones(q), b), tol=1e-10)
        assert len(bs.bands) == q
        for g in bs.gaps:
            assert g.closed == (g.width < 1e-10)
            assert min(abs(g.center - c) for c in bs.critical_points) < 1e-3
