import math
from fractions import Fraction as F

import pytest
from scipy.integrate import quad

from vortexrings.balance import VortexConfig
from vortexrings.potential import (
    DomainError,
    HalfPlanePoint,
    ReducedInstance,
    alpha0,
    ellip_e,
    ellip_k,
    near_field_report,
    potential_a,
    potential_d1,
    potential_d2,
    radial_derivative,
    reduced_residual,
    reduced_residual_elliptic,
)
from vortexrings.roots import find_roots
from vortexrings.sequence import AMSequence, normalized_pair


def balanced_config(k):
    seq = AMSequence.generate(k + 1, "wronskian")
    pair = normalized_pair(k, seq)
    return VortexConfig(find_roots(pair.p).roots, find_roots(pair.q).roots,
                        "pq-roots")


class TestElliptic:
    def test_trivial_values(self):
        assert ellip_k(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
        assert ellip_e(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
        assert ellip_e(1.0) == 1.0

    def test_known_value(self):
        assert ellip_k(0.5) == pytest.approx(1.8540746773013719, abs=1e-14)

    @pytest.mark.parametrize("s", [0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99])
    def test_quadrature_oracle(self, s):
        k_ref, _ = quad(lambda t: (1 - s * math.sin(t) ** 2) ** -0.5, 0, math.pi / 2)
        e_ref, _ = quad(lambda t: (1 - s * math.sin(t) ** 2) ** 0.5, 0, math.pi / 2)
        assert abs(ellip_k(s) - k_ref) < 1e-10
        assert abs(ellip_e(s) - e_ref) < 1e-10

    def test_log_blowup(self):
        # K(s) ~ ln(4/sqrt(1-s)) as s -> 1
        for s in (1 - 1e-6, 1 - 1e-8):
            assert abs(ellip_k(s) - math.log(4.0 / math.sqrt(1 - s))) < 1e-3

    def test_domain(self):
        with pytest.raises(DomainError):
            ellip_k(1.0)
        with pytest.raises(DomainError):
            ellip_k(-0.1)
        with pytest.raises(DomainError):
            ellip_e(1.5)

    def test_no_hang_near_one(self):
        # regression: the AGM stop test must tolerate a one-ulp stall
        assert math.isfinite(ellip_k(1 - 2e-16))
        assert math.isfinite(ellip_e(1 - 2e-16))


class TestPotential:
    def test_half_plane_enforced(self):
        with pytest.raises(DomainError):
            HalfPlanePoint(0.0, 1.0)

    def test_singular_point_rejected(self):
        a = HalfPlanePoint(2.0, 0.5)
        with pytest.raises(DomainError):
            potential_a(a, a)

    def test_symmetry_in_axial_offset(self):
        a = HalfPlanePoint(2.0, 0.0)
        up = potential_a(a, HalfPlanePoint(2.3, 0.7))
        down = potential_a(a, HalfPlanePoint(2.3, -0.7))
        assert up == pytest.approx(down, rel=1e-14)

    def test_scaling_invariance(self):
        # A(c a, c x) = A(a, x): both kappa^2 and a1/x1 are scale free
        import random
        rng = random.Random(42)
        for _ in range(20):
            a = HalfPlanePoint(rng.uniform(0.5, 3), rng.uniform(-2, 2))
            x = HalfPlanePoint(rng.uniform(0.5, 3), rng.uniform(-2, 2))
            if (a.x1, a.x2) == (x.x1, x.x2):
                continue
            c = rng.uniform(0.1, 10)
            scaled = potential_a(HalfPlanePoint(c * a.x1, c * a.x2),
                                 HalfPlanePoint(c * x.x1, c * x.x2))
            assert scaled == pytest.approx(potential_a(a, x), rel=1e-12)

    def test_far_field_decay(self):
        a = HalfPlanePoint(1.0, 0.0)
        near = potential_a(a, HalfPlanePoint(1.0, 5.0))
        far = potential_a(a, HalfPlanePoint(1.0, 50.0))
        assert abs(far) < abs(near) < 1.0


class TestNearField:
    def test_error_ratio_bounded(self):
        a = HalfPlanePoint(2.0, 1.0)
        # below r ~ 1e-5 double-precision cancellation at kappa -> 1 swamps
        # the true asymptotic error, so stop there
        rows = near_field_report(a, [10.0 ** -k for k in range(2, 6)])
        for row in rows:
            assert abs(row.error_ratio) < 5.0
        # the raw error itself shrinks
        errs = [abs(r.error) for r in rows]
        assert all(e1 > e2 for e1, e2 in zip(errs, errs[1:]))

    def test_radial_derivative_law(self):
        # dA/dr ~ -1/r close to the ring
        a = HalfPlanePoint(2.0, 0.0)
        for r in (1e-3, 1e-4):
            assert radial_derivative(a, r) * r == pytest.approx(-1.0, abs=2e-2)

    def test_radii_validated(self):
        with pytest.raises(DomainError):
            near_field_report(HalfPlanePoint(1.0, 0.0), [2.0])


class TestAlpha0:
    def test_examples(self):
        assert alpha0(2, 1) == F(6)
        assert alpha0(6, 5) == F(22)
        assert alpha0(3, 1) == F(4)

    def test_rejects_equal(self):
        with pytest.raises(DomainError):
            alpha0(3, 3)


class TestReduced:
    def test_eps_validated(self):
        cfg = balanced_config(1)
        with pytest.raises(DomainError):
            ReducedInstance(cfg, 1.5)

    @pytest.mark.parametrize("k", [1, 2])
    def test_row1_decays_with_eps(self, k):
        cfg = balanced_config(k)
        norms = [reduced_residual(ReducedInstance(cfg, eps))[0]
                 for eps in (1e-3, 1e-5, 1e-8)]
        assert norms[0] > norms[1] > norms[2]

    def test_row2_vanishes_for_balanced(self):
        cfg = balanced_config(1)
        _, r2 = reduced_residual(ReducedInstance(cfg, 1e-5))
        assert r2 < 1e-9

    def test_contrast_config(self):
        # displacing one ring breaks the second row by a wide margin
        cfg = balanced_config(1)
        bad = cfg.with_points([cfg.points[0] + 0.5j] + cfg.points[1:])
        good_r2 = reduced_residual(ReducedInstance(cfg, 1e-5))[1]
        bad_r2 = reduced_residual(ReducedInstance(bad, 1e-5))[1]
        assert bad_r2 > 10 * max(good_r2, 1e-12)

    def test_elliptic_variant_decays(self):
        cfg = balanced_config(1)
        norms = [reduced_residual_elliptic(ReducedInstance(cfg, eps))[0]
                 for eps in (1e-3, 1e-5, 1e-8)]
        assert norms[0] > norms[1] > norms[2]

    def test_c1_sensitivity(self):
        # the profile constant enters each row as -2 c1 / p~_1; shifting c1
        # can move rowNorm1 by at most 2 c1 / (alpha0 L) to leading order
        cfg = balanced_config(1)
        inst0 = ReducedInstance(cfg, 1e-5, c1=0.0)
        inst1 = ReducedInstance(cfg, 1e-5, c1=1.0)
        a0 = float(alpha0(2, 1))
        big_l = abs(math.log(1e-5))
        shift = abs(reduced_residual_elliptic(inst1)[0]
                    - reduced_residual_elliptic(inst0)[0])
        assert shift <= 2.0 / (a0 * big_l) * 1.5

    def test_log_and_elliptic_agree_in_order(self):
        cfg = balanced_config(2)
        log_r = reduced_residual(ReducedInstance(cfg, 1e-5))[0]
        ell_r = reduced_residual_elliptic(ReducedInstance(cfg, 1e-5))[0]
        # same leading-log structure: both are O(1/L), within a small factor
        assert 0.1 < ell_r / log_r < 100
