import math

import numpy as np
import pytest

from discendo.corona import (BoundaryNet, CompositionInDisc, GeneralizedComposition, RankOne,
                             apply_endomorphism, decay_bound, example_a_stage,
                             interpolating_check, iterate_endomorphism, lm_surrogate, psi_limit,
                             psi_stage, verify_example_a, verify_example_b)
from discendo.errors import DomainError, RangeError, TestFunctionError
from discendo.geometry import pseudo_distance
from discendo.maps import (Affine, BlaschkeProduct, Compose, Identity, Monomial, MoebiusMap, Scale,
                           Tau, evaluate, geometric_zeros)

from conftest import (GEOMETRIC12_DELTA, GEOMETRIC12_DELTA_ARGMIN, GEOMETRIC12_MIN_D, random_disc)

HALF_Z = Scale(0.5)
F_AVG = Affine(0.5, 0.5)  # (1 + z) / 2, regular up to the boundary


class TestNet:
    def test_geometric(self):
        net = BoundaryNet.geometric(4)
        assert net.stages == (0.5, 0.75, 0.875, 0.9375)
        assert net[1] == 0.5 and len(net) == 4

    def test_default_length(self):
        assert len(BoundaryNet.geometric()) == 20

    @pytest.mark.parametrize("stages", [(0.5, 0.5), (0.6, 0.4), (0.5, 1.0), ()])
    def test_invalid(self, stages):
        with pytest.raises((ValueError, DomainError)):
            BoundaryNet(stages)

    def test_stage_out_of_range(self):
        with pytest.raises(IndexError):
            BoundaryNet.geometric(3)[4]


class TestLm:
    def test_origin(self):
        net = BoundaryNet((0.3, 0.9))
        assert lm_surrogate(net, 2, 0).value == 0.9

    def test_hand_value(self):
        assert lm_surrogate(BoundaryNet((0.9,)), 1, 0.5).value == pytest.approx(0.965517, abs=1e-6)

    def test_tends_to_one(self):
        net = BoundaryNet.geometric(30)
        vals = [lm_surrogate(net, k, 0.3 - 0.4j).value for k in range(1, 31)]
        assert abs(vals[-1] - 1) < 1e-8
        assert all(abs(b - 1) < abs(a - 1) for a, b in zip(vals, vals[1:]))


class TestPsiStage:
    def test_half_identity(self):
        net = BoundaryNet.geometric(20)
        vals = [evaluate(psi_stage(HALF_Z, net, k), 0.3) for k in (1, 10, 20)]
        assert vals[-1] == pytest.approx(0.5, abs=1e-6)
        assert abs(vals[0] - 0.5) > abs(vals[1] - 0.5) > abs(vals[2] - 0.5)

    def test_tau_at_09(self):
        psi = psi_stage(Tau(), BoundaryNet((0.9,)), 1)
        v = evaluate(psi, 0)
        assert v == pytest.approx(0.45 * math.exp(-19), rel=1e-12)
        assert v == pytest.approx(2.52e-9, rel=2e-3)

    def test_blaschke_zero_on_net(self):
        net = BoundaryNet((0.5, 0.75))
        tau = Scale(0.5, BlaschkeProduct((0, 0.5, 0.75)))
        for k in (1, 2):
            assert evaluate(psi_stage(tau, net, k), 0) == 0

    def test_bounded_by_sup_tau(self, rng):
        net = BoundaryNet.geometric(8)
        z = random_disc(rng, 500, 0.99)
        for k in (1, 8):
            assert np.all(np.abs(evaluate(psi_stage(Tau(), net, k), z)) <= 0.5)

    def test_rejects_noncompact(self):
        with pytest.raises(RangeError):
            psi_stage(Identity(), BoundaryNet((0.5,)), 1)


class TestPsiLimit:
    def test_tau_converges_to_zero(self):
        rep = psi_limit(Tau(), BoundaryNet.geometric(20), 0.3)
        assert rep.converged and abs(rep.value) < 1e-20
        net = BoundaryNet.geometric(20)
        k99 = next(i for i, x in enumerate(net.stages) if x >= 0.99)
        assert all(abs(v) < 1e-20 for v in rep.stages[k99:])

    def test_half_identity(self):
        rep = psi_limit(HALF_Z, BoundaryNet.geometric(20), 0.3)
        assert rep.converged
        assert rep.value == pytest.approx(0.5, abs=1e-6)

    def test_zero_sequence_net(self):
        zs = geometric_zeros(8)
        tau = Scale(0.5, BlaschkeProduct(zs))
        rep = psi_limit(tau, BoundaryNet(tuple(z.real for z in zs[1:])), 0)
        assert rep.converged
        assert all(v == 0 for v in rep.stages)

    def test_nonconvergence_reported(self):
        rep = psi_limit(HALF_Z, BoundaryNet((0.1, 0.2, 0.3)), 0.0, tol=1e-6)
        assert not rep.converged
        assert rep.value is None
        assert len(rep.stages) == 3

    @pytest.mark.parametrize("tau", [HALF_Z, Scale(0.4, MoebiusMap(0.5)),
                                     Compose(Affine(0.3, 0.2j), Monomial(2))], ids=str)
    def test_continuous_at_one(self, tau, rng):
        net = BoundaryNet.geometric(30)
        target = evaluate(tau, 1 - 1e-14)
        for z in random_disc(rng, 10, 0.9):
            rep = psi_limit(tau, net, z)
            assert rep.converged
            assert abs(rep.value - target) <= 1e-6


class TestEndomorphisms:
    def test_composition(self):
        model = CompositionInDisc(HALF_Z)
        assert apply_endomorphism(model, Monomial(2), 0.4) == pytest.approx(0.04)
        assert iterate_endomorphism(model, Identity(), 0.8, 3) == pytest.approx(0.1)

    def test_rank_one(self):
        model = RankOne(BoundaryNet((0.5, 0.99)))
        assert apply_endomorphism(model, F_AVG, 0.3, k=2) == pytest.approx(0.995)
        # T^2 = T at every stage
        for k in (1, 2):
            for z in (0, 0.5j, -0.7):
                once = apply_endomorphism(model, F_AVG, z, k)
                assert iterate_endomorphism(model, F_AVG, z, 2, k) == once
                assert iterate_endomorphism(model, F_AVG, z, 5, k) == once

    def test_rank_one_accepts_callables(self):
        model = RankOne(BoundaryNet((0.9,)))
        assert apply_endomorphism(model, lambda w: 1 / (2 - w), 0) == pytest.approx(1 / 1.1)

    def test_generalized_hand_chain(self):
        model = GeneralizedComposition(BoundaryNet((0.9,)), Tau())
        t = 0.15 * math.exp(1.3 / -0.7)
        assert t == pytest.approx(0.0234, abs=5e-5)
        v = apply_endomorphism(model, Identity(), 0.3)
        assert v == pytest.approx((t + 0.9) / (1 + 0.9 * t), rel=1e-14)
        assert v == pytest.approx(0.90435, abs=1e-5)

    def test_generalized_second_power(self):
        x = 0.9
        model = GeneralizedComposition(BoundaryNet((x,)), Tau())
        a = MoebiusMap(x)
        z = 0.2 - 0.1j
        expected = evaluate(a, evaluate(Tau(), evaluate(a, evaluate(Tau(), z))))
        assert iterate_endomorphism(model, Identity(), z, 2) == pytest.approx(expected, rel=1e-14)

    def test_p_one_matches_apply(self):
        model = GeneralizedComposition(BoundaryNet.geometric(5), Tau())
        assert iterate_endomorphism(model, F_AVG, 0.1, 1, 3) == apply_endomorphism(model, F_AVG, 0.1, 3)

    def test_requires_compact_tau(self):
        with pytest.raises(RangeError):
            GeneralizedComposition(BoundaryNet((0.5,)), MoebiusMap(0.3))

    def test_irregular_test_function(self):
        model = RankOne(BoundaryNet((0.5,)))
        with pytest.raises(TestFunctionError):
            apply_endomorphism(model, Tau(), 0)
        # composition has no boundary limits to take
        assert apply_endomorphism(CompositionInDisc(HALF_Z), Tau(), 0) == 0

    def test_power_validated(self):
        with pytest.raises(ValueError):
            iterate_endomorphism(CompositionInDisc(HALF_Z), Identity(), 0, 0)

    def test_rank_one_collapse(self):
        grid = 0.5 * np.exp(2j * np.pi * np.arange(64) / 64) * np.linspace(0, 1, 64)
        xs = (0.9, 0.99, 0.999)
        model = GeneralizedComposition(BoundaryNet(xs), Tau())
        spreads = []
        for k in range(1, 4):
            v = iterate_endomorphism(model, F_AVG, grid, 2, k)
            spreads.append(float(np.ptp(np.abs(v)) + np.ptp(v.real) + np.ptp(v.imag)))
        assert spreads[0] >= spreads[1] >= spreads[2]
        assert spreads[2] < 1e-6
        v = iterate_endomorphism(model, F_AVG, grid, 2, 3)
        assert np.all(np.abs(v - 1) <= 1e-3)


class TestInterpolating:
    def test_pair(self):
        s = interpolating_check([0, 0.5])
        assert s.delta_n == (0.5, 0.5)
        assert s.delta == 0.5

    def test_triple(self):
        s = interpolating_check([0, 0.5, 0.75])
        assert np.allclose(s.delta_n, [0.375, 0.2, 0.3], atol=1e-15)
        assert s.delta == pytest.approx(0.2)

    def test_geometric_fixture(self):
        s = interpolating_check(geometric_zeros(12))
        assert s.delta == pytest.approx(GEOMETRIC12_DELTA, abs=1e-15)
        assert int(np.argmin(s.delta_n)) + 1 == GEOMETRIC12_DELTA_ARGMIN

    def test_monotone_under_truncation(self):
        pts = geometric_zeros(16)
        deltas = [interpolating_check(pts, n).delta for n in range(2, 17)]
        assert all(b <= a for a, b in zip(deltas, deltas[1:]))

    def test_against_pairwise_products(self, rng):
        pts = random_disc(rng, 9, 0.95)
        s = interpolating_check(pts)
        for n, zn in enumerate(pts):
            prod = 1.0
            for k, zk in enumerate(pts):
                if k != n:
                    prod *= pseudo_distance(complex(zk), complex(zn))
            assert s.delta_n[n] == pytest.approx(prod, rel=1e-13)
            assert 0 < s.delta_n[n] <= 1

    def test_repeats_rejected(self):
        with pytest.raises(ValueError):
            interpolating_check([0, 0.5, 0.5])

    def test_truncation_range(self):
        with pytest.raises(ValueError):
            interpolating_check([0, 0.5], n=3)


class TestExampleA:
    def test_degenerate_stage(self):
        s = example_a_stage(0, 0.5, 4096)
        # closed form 0.25 e^(-1/3) = 0.179133, attained at z = -0.5
        assert s.lower == pytest.approx(0.25 * math.exp(-1 / 3), abs=1e-6)
        assert s.lower <= s.upper

    def test_x09(self):
        s = example_a_stage(0.9, 0.5)
        assert s.upper <= 8.9e-4
        assert s.upper <= decay_bound(0.9, 0.5) * (1 + 1e-12)
        assert decay_bound(0.9, 0.5) == pytest.approx(0.5 * math.exp(-1.9 * 0.75 / 0.225), rel=1e-14)

    def test_x099(self):
        s = example_a_stage(0.99, 0.5)
        assert s.upper < 1e-25
        assert s.log10_upper < -25

    def test_bound_brackets_scan(self):
        # direct scan of tau(a_x(z)) on the circle |z| = 0.5 where the max lives
        t = np.linspace(0, 2 * np.pi, 100001)
        for x in (0.5, 0.75, 0.9):
            w = (0.5 * np.exp(1j * t) + x) / (1 + x * 0.5 * np.exp(1j * t))
            brute = np.max(0.5 * np.abs(w) * np.exp(((w + 1) / (w - 1)).real))
            s = example_a_stage(x, 0.5)
            assert s.lower <= brute * (1 + 1e-12)
            assert s.upper >= brute * (1 - 1e-12)

    def test_geometric_net_strictly_decreasing(self):
        rows = verify_example_a(BoundaryNet.geometric(10), 0.5)
        logs = [r.log10_upper for r in rows]
        assert all(b < a for a, b in zip(logs, logs[1:]))
        assert all(r.lower <= r.upper for r in rows)
        late = [r for r in rows if r.x >= 0.99]
        assert late and all(r.log10_upper < -20 for r in late)

    def test_radius_validated(self):
        with pytest.raises(ValueError):
            verify_example_a(BoundaryNet.geometric(3), 0.95)


class TestExampleB:
    def test_pair(self):
        rep = verify_example_b([0, 0.5])
        assert rep.d[0] == pytest.approx(0.25, abs=1e-15)

    def test_triple(self):
        rep = verify_example_b([0, 0.5, 0.75])
        assert rep.d[1] == pytest.approx(0.1, abs=1e-15)

    def test_geometric_fixture(self):
        rep = verify_example_b(geometric_zeros(12))
        assert rep.min_d == pytest.approx(GEOMETRIC12_MIN_D, abs=1e-12)
        assert np.allclose(rep.d, 0.5 * np.array(rep.delta_n), atol=1e-10, rtol=0)

    def test_d_is_derivative_of_shifted_symbol(self):
        zs = geometric_zeros(6)
        tau = Scale(0.5, BlaschkeProduct(zs))
        rep = verify_example_b(zs)
        from discendo.maps import derivative
        for n, zn in enumerate(zs):
            psi = Compose(tau, MoebiusMap(zn))
            assert abs(derivative(psi, 0)) == pytest.approx(rep.d[n], rel=1e-9)

    def test_identity_random_zeros(self, rng):
        for _ in range(10):
            zs = np.concatenate([[0], random_disc(rng, 6, 0.9)])
            verify_example_b(zs)

    def test_first_zero_must_be_origin(self):
        with pytest.raises(ValueError):
            verify_example_b([0.5, 0])
