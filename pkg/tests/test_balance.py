import math
from fractions import Fraction as F

import numpy as np
import pytest

from vortexrings.balance import (
    CoincidentPointsError,
    PresetError,
    VortexConfig,
    config_distance,
    jacobian,
    lhs,
    newton_solve,
    nondegeneracy,
    preset,
    random_search,
    rescale,
    rescale_ratio,
    residual,
    residual_norm,
)
from vortexrings.roots import find_roots
from vortexrings.sequence import AMSequence, normalized_pair


@pytest.fixture(scope="module")
def seq():
    return AMSequence.generate(7, "wronskian")


def pair_config(n, seq, preset_name="pq-roots"):
    pair = normalized_pair(n, seq)
    a = find_roots(pair.p).roots
    b = find_roots(pair.q).roots
    return VortexConfig(a, b, preset_name)


class TestResidual:
    def test_single_point(self):
        cfg = VortexConfig((0j,), (), "pq-roots")
        assert lhs(cfg) == [0j]
        assert residual_norm(cfg) == 0.0  # rhs -n/2 = 0 when n = 0

    def test_two_one_hand_values(self):
        # a = 1 +- i, b = 0: F = (-1/2, -1/2, -1) by direct evaluation
        cfg = VortexConfig((1 + 1j, 1 - 1j), (0j,), "pq-roots")
        vals = lhs(cfg)
        assert vals[0] == pytest.approx(-0.5)
        assert vals[1] == pytest.approx(-0.5)
        assert vals[2] == pytest.approx(-1.0)
        assert residual_norm(cfg) < 1e-15

    def test_halved_config_other_preset(self):
        cfg = VortexConfig((0.5 + 0.5j, 0.5 - 0.5j), (0j,), "paper-balance")
        assert residual_norm(cfg) < 1e-15

    @pytest.mark.parametrize("n", range(1, 6))
    def test_root_configs_balance(self, n, seq):
        assert residual_norm(pair_config(n, seq)) < 1e-10

    def test_coincident_rejected(self):
        with pytest.raises(CoincidentPointsError):
            residual(VortexConfig((0j, 0j), (), "pq-roots"))

    def test_signed_sum_identity(self, seq):
        # sum_k tau_k F_k vanishes identically, balanced or not
        cfg = VortexConfig((1 + 2j, -0.3 + 1j, 2.0 + 0j), (0.1 + 0.4j, -1 - 1j))
        total = sum(t * v for t, v in zip(cfg.taus, lhs(cfg)))
        assert abs(total) < 1e-13

    @pytest.mark.parametrize("name", ["paper-balance", "pq-roots", "alpha0-form"])
    def test_signed_rhs_sum(self, name):
        # the preset right-hand sides satisfy the same identity: m*rhs_a = n*rhs_b
        p = preset(name, 5, 3)
        assert 5 * p.rhs_a - 3 * p.rhs_b == 0


class TestRescale:
    def test_ratio_examples(self):
        assert rescale_ratio(preset("pq-roots", 3, 2), preset("paper-balance", 3, 2)) == F(1, 2)
        assert rescale_ratio(preset("pq-roots", 3, 2), preset("pq-roots", 3, 2)) == 1
        assert rescale_ratio(preset("pq-roots", 3, 2), preset("alpha0-form", 3, 2)) == F(-5, 2)

    def test_rescale_preserves_balance(self, seq):
        cfg = pair_config(2, seq)
        for to in ("paper-balance", "alpha0-form"):
            assert residual_norm(rescale(cfg, to)) < 1e-10

    def test_unknown_preset(self):
        with pytest.raises(PresetError):
            preset("other", 2, 1)

    def test_homogeneity(self):
        cfg = VortexConfig((1 + 2j, -0.5j), (3 + 0j,))
        lam = 1.7 - 0.3j
        scaled = cfg.with_points([lam * z for z in cfg.points])
        for u, v in zip(lhs(scaled), lhs(cfg)):
            assert abs(u - v / lam) < 1e-13


class TestInvariance:
    def test_translation(self):
        cfg = VortexConfig((1 + 1j, 1 - 1j), (0j,))
        shifted = cfg.translated(2.5 - 1.25j)
        for u, v in zip(lhs(shifted), lhs(cfg)):
            assert abs(u - v) < 1e-12

    def test_conjugation_equivariance(self):
        cfg = VortexConfig((1 + 2j, -0.3 + 1j), (0.1 + 0.4j,))
        conj = cfg.with_points([z.conjugate() for z in cfg.points])
        for u, v in zip(lhs(conj), lhs(cfg)):
            assert abs(u - v.conjugate()) < 1e-12


class TestJacobian:
    def test_entry_oracle(self):
        # two points at 0 and 1+i: dF_1/dp_2 = tau_2/(p_1-p_2)^2 = -1/(-1-i)^2
        cfg = VortexConfig((0j,), (1 + 1j,))
        jac = jacobian(cfg)
        assert jac[0, 1] == pytest.approx(-1.0 / (-1 - 1j) ** 2)
        assert jac[0, 0] == pytest.approx(-jac[0, 1])

    def test_row_sums_zero(self, seq):
        jac = jacobian(pair_config(3, seq))
        assert np.max(np.abs(jac.sum(axis=1))) < 1e-12

    def test_finite_difference_oracle(self):
        cfg = VortexConfig((1 + 2j, -0.3 + 1j, 2.0 + 0j), (0.1 + 0.4j, -1 - 1j))
        jac = jacobian(cfg)
        h = 1e-6
        pts = cfg.points
        for l in range(len(pts)):
            bumped = pts[:]
            bumped[l] = pts[l] + h
            fd = (np.array(lhs(cfg.with_points(bumped))) - np.array(lhs(cfg))) / h
            assert np.max(np.abs(fd - jac[:, l])) < 1e-5


class TestNondegeneracy:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_root_configs(self, n, seq):
        rep = nondegeneracy(pair_config(n, seq))
        assert rep.kernel_dim == 1
        assert rep.translation_aligned
        sv = rep.singular_values
        assert sv[-2] > 1e-3 * sv[0]

    def test_artificial_degenerate(self):
        # two far copies of a balanced configuration: the Jacobian nearly
        # decouples and each block contributes a translation kernel vector
        base = [1 + 1j, 1 - 1j, 0j]
        far = [z + 1e5 for z in base]
        cfg = VortexConfig((base[0], base[1], far[0], far[1]), (base[2], far[2]))
        rep = nondegeneracy(cfg)
        assert rep.kernel_dim >= 2


class TestNewton:
    def test_converges_from_solution(self, seq):
        cfg = pair_config(2, seq)
        res = newton_solve(cfg)
        assert res.converged and res.residual_norm < 1e-10

    def test_converges_from_perturbation(self, seq):
        cfg = pair_config(2, seq)
        noisy = cfg.with_points([z + 0.05 * (1 + 1j) ** k
                                 for k, z in enumerate(cfg.points)])
        res = newton_solve(noisy)
        assert res.converged
        assert config_distance(res.config, cfg) < 1e-8

    def test_impossible_counts_fail_cleanly(self):
        # two like-oriented rings and nothing else cannot balance (the rhs
        # is 0 but 1/(p_1 - p_2) never is); Newton must report failure
        res = newton_solve(VortexConfig((1 + 0j, -1 + 0j), ()))
        assert not res.converged
        assert res.reason != ""

    def test_antiparallel_pair_balances(self):
        # m = n = 1 does balance: both rows equal -1/2 at separation 2
        res = newton_solve(VortexConfig((1.3 + 0j,), (-0.9 + 0j,)))
        assert res.converged
        assert abs(res.config.a_points[0] - res.config.b_points[0] - 2) < 1e-8


class TestDistance:
    def test_translation_invariance(self, seq):
        cfg = pair_config(2, seq)
        assert config_distance(cfg, cfg.translated(5 - 3j)) < 1e-12

    def test_mismatched_counts(self):
        a = VortexConfig((0j,), ())
        b = VortexConfig((0j, 1 + 0j), ())
        assert config_distance(a, b) == float("inf")


class TestRandomSearch:
    def test_two_one_recovers_known(self, seq):
        known = pair_config(1, seq).centered()
        found = random_search(2, 1, tries=40, seed=7)
        assert len(found) == 1
        assert config_distance(found[0], known) < 1e-8

    def test_three_one_finds_nothing(self):
        # no balanced configuration exists at these counts
        assert random_search(3, 1, tries=40, seed=7) == []

    def test_three_two_recovers_known(self, seq):
        known = pair_config(2, seq).centered()
        found = random_search(3, 2, tries=60, seed=11)
        assert any(config_distance(f, known) < 1e-8 for f in found)

    def test_deterministic(self):
        a = random_search(2, 1, tries=15, seed=3)
        b = random_search(2, 1, tries=15, seed=3)
        assert [c.points for c in a] == [c.points for c in b]

    def test_bad_counts(self):
        with pytest.raises(ValueError):
            random_search(2, 2, tries=1)


class TestSerialization:
    def test_roundtrip(self):
        cfg = VortexConfig((1 + 1j, 1 - 1j), (0j,), "paper-balance")
        assert VortexConfig.from_json(cfg.to_json()) == cfg
