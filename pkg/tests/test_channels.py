import math

import numpy as np
import pytest

from atomdyn.atoms import AtomicVector, inner, make_vector, norm, unit_atom
from atomdyn.algebra import (
    AlgebraElement,
    adjoint,
    compose,
    constant,
    indicator,
    point_measure,
)
from atomdyn.rand import (
    Cauchy,
    ConvolutionFamily,
    FiniteMixture,
    Gaussian,
    PointMass,
    Rademacher,
    SeededRng,
    Uniform,
)
from atomdyn.channels import (
    AveragedState,
    MixedState,
    NormalState,
    PureState,
    StateDecomposition,
    averaged_Phi,
    averaged_T,
    channel_Phi,
    channel_T,
    dephasing_kernel,
    eval_averaged_on_mult,
    eval_averaged_on_shift_convolution,
    evaluate,
    normality_witness,
    projector_value,
    semigroup_Phi,
    semigroup_T,
    yosida_hewitt_split,
)

IDENTITY = AlgebraElement.identity()


def normal_cdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def random_unit_vector(gen, max_atoms=5):
    k = int(gen.integers(1, max_atoms + 1))
    ps = gen.uniform(-8, 8, k)
    cs = gen.normal(size=k) + 1j * gen.normal(size=k)
    v = make_vector(list(zip(ps, cs)))
    return (1.0 / norm(v)) * v


def random_density(gen, m):
    a = gen.normal(size=(m, m)) + 1j * gen.normal(size=(m, m))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    return NormalState(tuple(np.sort(gen.uniform(-5, 5, m))), rho)


def uniform_pair():
    return PureState(make_vector([(0.0, 2 ** -0.5), (1.0, 2 ** -0.5)]))


class TestEvaluate:
    def test_unitality_all_kinds(self):
        gen = np.random.default_rng(1)
        states = [
            PureState(unit_atom(0.0)),
            random_density(gen, 3),
            MixedState(((0.5, PureState(unit_atom(0.0))), (0.5, uniform_pair()))),
            averaged_T(Gaussian(1.0), uniform_pair()),
        ]
        for s in states:
            assert evaluate(s, IDENTITY) == pytest.approx(1.0, abs=1e-12)

    def test_mult_on_basis_state(self):
        f = indicator(0.0, 1.0)
        assert evaluate(PureState(unit_atom(0.5)), AlgebraElement.mult(f)) == 1.0
        assert evaluate(PureState(unit_atom(2.0)), AlgebraElement.mult(f)) == 0.0

    def test_mult_weights(self):
        # <rho_u, M_f> = sum |c_k|^2 f(p_k)
        u = make_vector([(0.2, 0.6), (3.0, 0.8j)])
        f = indicator(0.0, 1.0)
        val = evaluate(PureState(u), AlgebraElement.mult(f))
        assert val == pytest.approx(0.36)

    def test_positivity(self):
        gen = np.random.default_rng(2)
        for _ in range(40):
            u = random_unit_vector(gen)
            states = [
                PureState(u),
                random_density(gen, 2),
                averaged_T(Gaussian(0.5), PureState(u)),
            ]
            terms = [
                (complex(*gen.normal(size=2)), indicator(-2, 2), float(gen.uniform(-2, 2)))
                for _ in range(int(gen.integers(1, 4)))
            ]
            A = AlgebraElement.of(terms)
            for s in states:
                val = evaluate(s, compose(adjoint(A), A), method="quadrature")
                assert val.real >= -1e-10
                assert abs(val.imag) <= 1e-9

    def test_representation_invariance_of_mixtures(self):
        # two decompositions of the same density operator agree on probes
        plus = PureState(make_vector([(0.0, 2 ** -0.5), (1.0, 2 ** -0.5)]))
        minus = PureState(make_vector([(0.0, 2 ** -0.5), (1.0, -(2 ** -0.5))]))
        basis = MixedState(
            ((0.5, PureState(unit_atom(0.0))), (0.5, PureState(unit_atom(1.0))))
        )
        rotated = MixedState(((0.5, plus), (0.5, minus)))
        probes = [
            IDENTITY,
            AlgebraElement.shift(1.0),
            AlgebraElement.mult(indicator(-0.5, 0.5)),
        ]
        for A in probes:
            a = evaluate(basis, A)
            b = evaluate(rotated, A)
            assert abs(a - b) <= 1e-12
            avg_a = evaluate(averaged_T(Gaussian(1.0), basis), A)
            avg_b = evaluate(averaged_T(Gaussian(1.0), rotated), A)
            assert abs(avg_a - avg_b) <= 1e-12

    def test_pure_state_requires_unit_norm(self):
        with pytest.raises(ValueError):
            PureState(make_vector([(0.0, 2.0)]))


class TestChannelT:
    def test_identity_shift(self):
        s = uniform_pair()
        assert channel_T(0.0, s) == s

    def test_moves_basis_state(self):
        out = channel_T(1.5, PureState(unit_atom(0.0)))
        assert out == PureState(unit_atom(-1.5))

    def test_adjoint_duality(self):
        gen = np.random.default_rng(3)
        for _ in range(30):
            s = PureState(random_unit_vector(gen))
            h = float(gen.uniform(-3, 3))
            A = AlgebraElement.of([(1.0, indicator(-2, 2), 0.5)])
            lhs = evaluate(channel_T(h, s), A)
            sandwich = compose(adjoint(AlgebraElement.shift(h)),
                               compose(A, AlgebraElement.shift(h)))
            rhs = evaluate(s, sandwich)
            assert abs(lhs - rhs) <= 1e-12

    def test_normal_state_support_shifts(self):
        gen = np.random.default_rng(4)
        s = random_density(gen, 3)
        out = channel_T(2.0, s)
        assert out.support == tuple(p - 2.0 for p in s.support)
        assert np.array_equal(out.matrix, s.matrix)

    def test_rejects_averaged(self):
        avg = averaged_T(Gaussian(1.0), uniform_pair())
        with pytest.raises(TypeError):
            channel_T(1.0, avg)


class TestAveragedT:
    def test_unital(self):
        avg = averaged_T(Gaussian(1.0), uniform_pair())
        assert evaluate(avg, IDENTITY) == pytest.approx(1.0, abs=1e-14)

    def test_shift_evaluation_invariance_exact(self):
        gen = np.random.default_rng(5)
        laws = [Gaussian(1.0), Cauchy(0.5), Uniform(-1, 1), Rademacher(),
                FiniteMixture(((0.5, Gaussian(1.0)), (0.5, Rademacher())))]
        for i in range(100):
            s = PureState(random_unit_vector(gen))
            a = float(gen.uniform(-4, 4))
            d = laws[i % len(laws)]
            A = AlgebraElement.shift(a)
            assert evaluate(averaged_T(d, s), A) == evaluate(s, A)

    def test_gaussian_indicator_value(self):
        # P(xi in [0,1]) for standard normal smoothing of the atom at 0
        avg = averaged_T(Gaussian(1.0), PureState(unit_atom(0.0)))
        val = evaluate(avg, AlgebraElement.mult(indicator(0.0, 1.0)))
        assert val == pytest.approx(normal_cdf(1.0) - normal_cdf(0.0), abs=1e-9)
        assert val == pytest.approx(0.34134, abs=1e-5)

    def test_normal_input_via_spectral_mixture(self):
        rho = NormalState((0.0, 1.0), np.array([[0.5, 0.5], [0.5, 0.5]]))
        avg = averaged_T(Gaussian(1.0), rho)
        # rank one: the spectral mixture is the single pure state (1_0+1_1)/sqrt(2)
        val = evaluate(avg, AlgebraElement.shift(1.0))
        assert val == pytest.approx(0.5, abs=1e-12)


class TestEvalAveragedOnMult:
    def test_constant_is_unital(self):
        avg = averaged_T(Cauchy(1.0), uniform_pair())
        assert eval_averaged_on_mult(avg, constant(1.0)) == pytest.approx(1.0)

    def test_single_atom_reduces_to_expectation(self):
        p0 = 0.7
        avg = averaged_T(Gaussian(1.0), PureState(unit_atom(p0)))
        f = indicator(0.0, 2.0)
        # E f(xi - p0) = P(p0 <= xi <= 2 + p0)
        expected = normal_cdf(2.0 + p0) - normal_cdf(p0)
        assert eval_averaged_on_mult(avg, f) == pytest.approx(expected, abs=1e-12)

    def test_quadrature_matches_analytic(self):
        avg = averaged_T(Gaussian(1.0), uniform_pair())
        f = indicator(-0.5, 1.5)
        a = eval_averaged_on_mult(avg, f, method="analytic")
        q = eval_averaged_on_mult(avg, f, method="quadrature")
        assert abs(a - q) <= 1e-8

    def test_mc_agrees_within_band(self):
        avg = averaged_T(Gaussian(1.0), uniform_pair())
        f = indicator(-0.5, 1.5)
        a = eval_averaged_on_mult(avg, f)
        est = eval_averaged_on_mult(
            avg, f, method="mc", mc_samples=20_000, gen=SeededRng(31).stream(0)
        )
        assert abs(est.value - a) <= 4.0 * est.stderr

    def test_discrete_smoothing_exact_sum(self):
        avg = averaged_T(Rademacher(), PureState(unit_atom(0.0)))
        f = indicator(0.5, 1.5)  # hit only by xi = +1
        assert eval_averaged_on_mult(avg, f) == pytest.approx(0.5)


class TestShiftConvolution:
    def test_identity_measure(self):
        avg = averaged_T(Gaussian(1.0), uniform_pair())
        val = eval_averaged_on_shift_convolution(avg, point_measure((0.0, 1.0)))
        assert val == pytest.approx(1.0, abs=1e-15)

    def test_half_overlap(self):
        avg = averaged_T(Gaussian(1.0), uniform_pair())
        val = eval_averaged_on_shift_convolution(avg, point_measure((1.0, 1.0)))
        assert val == pytest.approx(0.5)

    def test_off_grid_measure_vanishes(self):
        avg = averaged_T(Gaussian(1.0), uniform_pair())
        val = eval_averaged_on_shift_convolution(avg, point_measure((0.37, 1.0)))
        assert val == 0.0

    def test_matches_unaveraged_evaluation(self):
        gen = np.random.default_rng(6)
        for _ in range(20):
            s = PureState(random_unit_vector(gen))
            m = point_measure((0.0, 0.3), (1.0, 0.5j), (-2.0, 0.2))
            avg = averaged_T(Gaussian(1.0), s)
            assert eval_averaged_on_shift_convolution(avg, m) == pytest.approx(
                evaluate(s, AlgebraElement.from_measure(m)), abs=1e-13
            )


class TestSingularity:
    def test_continuous_smoothing_vanishes_analytic(self):
        gen = np.random.default_rng(7)
        for d in (Gaussian(1.0), Cauchy(0.5)):
            for _ in range(20):
                u = random_unit_vector(gen)
                v = random_unit_vector(gen)
                avg = averaged_T(d, PureState(u))
                assert projector_value(avg, v) == 0.0

    def test_continuous_smoothing_vanishes_mc(self):
        gen = np.random.default_rng(8)
        u = random_unit_vector(gen)
        v = random_unit_vector(gen)
        avg = averaged_T(Gaussian(1.0), PureState(u))
        val = projector_value(avg, v, method="mc", mc_samples=10_000,
                              gen=SeededRng(41).stream(0))
        assert val == 0.0

    def test_point_mass_lands_on_target(self):
        avg = averaged_T(PointMass(2.0), PureState(unit_atom(0.0)))
        assert projector_value(avg, unit_atom(-2.0)) == 1.0

    def test_requires_unit_direction(self):
        avg = averaged_T(Gaussian(1.0), PureState(unit_atom(0.0)))
        with pytest.raises(ValueError):
            projector_value(avg, make_vector([(0.0, 2.0)]))

    def test_normality_witness_cases(self):
        pure = PureState(unit_atom(0.0))
        assert normality_witness(pure, [[0.0]]) == 1.0
        assert normality_witness(pure, [[1.0]]) == 0.0
        avg = averaged_T(Gaussian(1.0), pure)
        assert normality_witness(avg, [[0.0], [0.0, 1.0, 2.0]]) == 0.0
        # discrete smoothing spreads mass onto shifted atoms
        avg_d = averaged_T(Rademacher(), pure)
        assert normality_witness(avg_d, [[-1.0, 1.0]]) == pytest.approx(1.0)
        assert normality_witness(avg_d, [[-1.0]]) == pytest.approx(0.5)


class TestDephasing:
    def test_channel_phi_phases(self):
        rho = NormalState((0.0, 1.0), np.array([[0.5, 0.5], [0.5, 0.5]]))
        out = channel_Phi(1.3, rho)
        assert out.matrix[0, 1] == pytest.approx(0.5 * np.exp(-1.3j))
        assert out.matrix[0, 0] == pytest.approx(0.5)

    def test_channel_phi_identity_and_diagonal(self):
        gen = np.random.default_rng(9)
        rho = random_density(gen, 4)
        assert np.allclose(channel_Phi(0.0, rho).matrix, rho.matrix)
        diag = NormalState((0.0, 1.0, 2.0), np.diag([0.2, 0.3, 0.5]).astype(complex))
        assert np.allclose(channel_Phi(2.7, diag).matrix, diag.matrix)

    def test_averaged_phi_gaussian_factors(self):
        rho = NormalState((0.0, 2.0), np.array([[0.5, 0.5], [0.5, 0.5]]))
        D = 1.5
        out = averaged_Phi(Gaussian(D), rho)
        assert out.matrix[0, 1] == pytest.approx(0.5 * math.exp(-0.5 * D * 4.0))
        assert out.matrix[0, 0] == pytest.approx(0.5)

    def test_averaged_phi_preserves_state_properties(self):
        gen = np.random.default_rng(10)
        for _ in range(100):
            m = int(gen.integers(2, 7))
            rho = random_density(gen, m)
            out = averaged_Phi(Gaussian(1.0), rho)
            M = out.matrix
            assert np.max(np.abs(M - M.conj().T)) <= 1e-12
            assert abs(np.trace(M).real - 1.0) <= 1e-12
            assert np.linalg.eigvalsh(M).min() >= -1e-10
            # entrywise factors match the closed-form kernel
            K = dephasing_kernel(Gaussian(1.0), rho.support)
            assert np.max(np.abs(M - K * rho.matrix)) <= 1e-15

    def test_averaged_phi_mc_oracle(self):
        gen = np.random.default_rng(11)
        rho = random_density(gen, 3)
        d = Gaussian(1.0)
        n = 100_000
        xs = d.sample(SeededRng(53).stream(0), n)
        p = np.array(rho.support)
        delta = p[:, None] - p[None, :]
        mean = np.mean(np.exp(1j * xs[:, None, None] * delta[None, :, :]), axis=0)
        stderr = np.std(
            np.exp(1j * xs[:, None, None] * delta[None, :, :]), axis=0
        ) / math.sqrt(n)
        expected = dephasing_kernel(d, rho.support)
        assert np.all(np.abs(mean - expected) <= 4.0 * stderr + 1e-12)

    def test_rank_one_matches_modulated_vector(self):
        # conjugating a rank-1 projector reproduces the modulated vector
        u = make_vector([(0.0, 0.6), (1.0, 0.8)])
        rho = NormalState(
            (0.0, 1.0),
            np.array([[0.36, 0.48], [0.48, 0.64]], dtype=complex),
        )
        h = 0.9
        out = channel_Phi(h, rho)
        from atomdyn.algebra import apply_mod

        mu = apply_mod(h, u)
        expected = np.array(
            [
                [abs(mu.amplitude(0.0)) ** 2,
                 mu.amplitude(0.0) * mu.amplitude(1.0).conjugate()],
                [mu.amplitude(1.0) * mu.amplitude(0.0).conjugate(),
                 abs(mu.amplitude(1.0)) ** 2],
            ]
        )
        assert np.max(np.abs(out.matrix - expected)) <= 1e-14


class TestSemigroups:
    GRID = [0.0, 0.1, 0.5, 1.0, 2.0]

    @pytest.mark.parametrize("kind", ["gaussian", "cauchy"])
    def test_T_composition_on_probes(self, kind):
        fam = ConvolutionFamily(kind)
        rho = uniform_pair()
        probes = [
            AlgebraElement.shift(1.0),
            AlgebraElement.mult(indicator(0.0, 1.0)),
            AlgebraElement.of([(0.5, indicator(-1, 1), 1.0)]),
        ]
        for t in self.GRID:
            for s in self.GRID:
                lhs = semigroup_T(fam, t, semigroup_T(fam, s, rho))
                rhs = semigroup_T(fam, t + s, rho)
                for A in probes:
                    assert abs(evaluate(lhs, A) - evaluate(rhs, A)) <= 1e-10

    def test_T_at_zero_is_identity(self):
        fam = ConvolutionFamily("gaussian")
        rho = uniform_pair()
        assert semigroup_T(fam, 0.0, rho) == rho

    def test_T_shift_probe_independent_of_t(self):
        fam = ConvolutionFamily("gaussian")
        rho = uniform_pair()
        A = AlgebraElement.shift(1.0)
        base = evaluate(rho, A)
        for t in (0.1, 1.0, 5.0):
            assert evaluate(semigroup_T(fam, t, rho), A) == base

    @pytest.mark.parametrize("kind", ["gaussian", "cauchy"])
    def test_Phi_composition_entrywise(self, kind):
        fam = ConvolutionFamily(kind)
        gen = np.random.default_rng(12)
        rho = random_density(gen, 4)
        for t in self.GRID:
            for s in self.GRID:
                m1 = semigroup_Phi(fam, t, semigroup_Phi(fam, s, rho)).matrix
                m2 = semigroup_Phi(fam, t + s, rho).matrix
                assert np.max(np.abs(m1 - m2)) <= 1e-12

    def test_Phi_cauchy_factor(self):
        rho = NormalState((0.0, 1.5), np.array([[0.5, 0.5], [0.5, 0.5]]))
        out = semigroup_Phi(ConvolutionFamily("cauchy"), 2.0, rho)
        assert out.matrix[0, 1] == pytest.approx(0.5 * math.exp(-2.0 * 1.5))

    def test_Phi_full_dephasing_limit(self):
        rho = NormalState((0.0, 1.0), np.array([[0.5, 0.5], [0.5, 0.5]]))
        out = semigroup_Phi(ConvolutionFamily("gaussian"), 200.0, rho)
        assert abs(out.matrix[0, 1]) <= 1e-12
        assert out.matrix[0, 0] == pytest.approx(0.5)

    def test_negative_time_rejected(self):
        fam = ConvolutionFamily("gaussian")
        with pytest.raises(ValueError):
            semigroup_T(fam, -0.5, uniform_pair())


class TestYosidaHewitt:
    def test_purely_normal(self):
        split = yosida_hewitt_split([(1.0, PureState(unit_atom(0.0)))])
        assert split.normal_weight == 1.0
        assert split.singular_part is None

    def test_purely_singular(self):
        avg = averaged_T(Gaussian(1.0), uniform_pair())
        split = yosida_hewitt_split([(1.0, avg)])
        assert split.normal_weight == 0.0
        assert split.normal_part is None

    def test_mixed_split_and_witness(self):
        avg = averaged_T(Gaussian(1.0), uniform_pair())
        split = yosida_hewitt_split(
            [(0.3, PureState(unit_atom(0.0))), (0.7, avg)]
        )
        assert split.normal_weight == pytest.approx(0.3, abs=1e-12)
        assert normality_witness(split, [[0.0, 1.0]]) == pytest.approx(0.3, abs=1e-12)

    def test_discrete_averaged_goes_normal(self):
        avg = averaged_T(Rademacher(), PureState(unit_atom(0.0)))
        split = yosida_hewitt_split([(1.0, avg)])
        assert split.normal_weight == 1.0

    def test_evaluation_linearity(self):
        avg = averaged_T(Gaussian(1.0), uniform_pair())
        normal = PureState(unit_atom(0.0))
        split = yosida_hewitt_split([(0.4, normal), (0.6, avg)])
        probes = [IDENTITY, AlgebraElement.shift(1.0),
                  AlgebraElement.mult(indicator(-1, 1))]
        for A in probes:
            direct = 0.4 * evaluate(normal, A) + 0.6 * evaluate(avg, A)
            assert abs(evaluate(split, A) - direct) <= 1e-12

    def test_invalid_weights(self):
        with pytest.raises(ValueError):
            yosida_hewitt_split([(0.5, PureState(unit_atom(0.0)))])
