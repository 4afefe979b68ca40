"""Ball module: basis, norms, projections, kernels, convolution, summability."""

import math

import numpy as np
import pytest

from gegenball import WeightParams, ball
from gegenball import quadrature as qd
from gegenball import special as sp

P_MAIN = WeightParams(2, (0.5, 0.0), 1.0, 0.5)
P_GEN = WeightParams(2, (0.3, 0.7), 1.0, 0.5)
P_LEB = WeightParams(2, (0.0, 0.0), 0.5, 0.0)  # Lebesgue measure on the disk


class TestWeightEval:
    def test_constant_weight(self):
        p = P_LEB
        for x in ([0.2, -0.5], [0.0, 0.0], [0.6, 0.8]):
            assert ball.weight_eval(p, x) == pytest.approx(1.0)

    def test_zero_at_origin_with_radial_exponent(self):
        assert ball.weight_eval(P_MAIN, [0.0, 0.0]) == 0.0

    def test_generic_point_recomputation(self):
        p = P_GEN
        x = np.array([0.31, -0.42])
        r2 = float(x @ x)
        expected = (
            abs(x[0]) ** 0.6 * abs(x[1]) ** 1.4 * r2**0.5 * (1 - r2) ** 0.5
        )
        assert ball.weight_eval(p, x) == pytest.approx(expected, rel=1e-14)

    def test_rejects_outside(self):
        with pytest.raises(ValueError):
            ball.weight_eval(P_MAIN, [1.2, 0.0])


class TestBasisElements:
    def test_degree_zero_constant(self):
        el = ball.basis_element(P_MAIN, 0, 0, 0)
        assert el.poly.to_float().terms == {(0, 0): 1.0}
        assert el.norm == pytest.approx(1.0)

    def test_degree_one_spans_coordinates(self):
        p = WeightParams(2, (0.0, 0.0), 0.5, 0.5)
        els = ball.ball_basis(p, 1)
        monos = set()
        for el in els:
            assert len(el.poly.terms) == 1
            monos |= set(el.poly.terms)
        assert monos == {(1, 0), (0, 1)}

    def test_pure_radial_element(self):
        # n=2, j=1: radial Jacobi degree 1 at 2||x||^2 - 1, constant harmonic
        p = P_MAIN
        el = ball.basis_element(p, 2, 1, 0)
        alpha, beta = p.mu - 0.5, p.nu + p.lambda_kappa
        t = 0.37
        x = np.array([t, 0.0])
        expected = sp.jacobi_eval(1, alpha, beta, 2 * t * t - 1)
        assert float(el.poly.eval_many(x[None, :])[0]) == pytest.approx(
            expected, rel=1e-12
        )
        assert el.poly.degree == 2

    @pytest.mark.parametrize("d,kappa", [(2, (0.3, 0.7)), (3, (0.5, 0.0, 0.3))])
    def test_completeness_count(self, d, kappa):
        p = WeightParams(d, kappa, 1.0, 0.5)
        for n in range(9):
            els = ball.ball_basis(p, n)
            assert len(els) == math.comb(n + d - 1, n)

    def test_index_validation(self):
        with pytest.raises(ValueError):
            ball.basis_element(P_MAIN, 2, 2, 0)
        with pytest.raises(ValueError):
            ball.basis_element(P_MAIN, 2, 0, 5)


class TestNormFormula:
    def test_degree_zero(self):
        assert ball.basis_norm(P_MAIN, 0, 0) == pytest.approx(1.0)

    def test_hand_derivable_value(self):
        # Lebesgue measure on the disk: norm of the degree-1 elements is 1/2
        p = WeightParams(2, (0.0, 0.0), 0.5, 0.0)
        assert ball.basis_norm(p, 1, 0) == pytest.approx(0.5, rel=1e-14)

    @pytest.mark.parametrize(
        "params",
        [P_MAIN, P_GEN, WeightParams(2, (0.0, 0.0), 0.0, 1.5),
         WeightParams(3, (0.5, 0.0, 0.3), 0.5, 0.5)],
    )
    def test_norm_vs_quadrature(self, params):
        rule = qd.ball_rule(params, 26)
        for n in range(7):
            for j in range(n // 2 + 1):
                el = ball.basis_element(params, n, j, 0)
                vals = el.poly.eval_many(rule.points)
                num = float(np.dot(rule.weights, vals * vals))
                assert num == pytest.approx(el.norm, rel=1e-8)

    def test_gram_block_diagonal(self):
        params = P_GEN
        rule = qd.ball_rule(params, 14)
        els = []
        for n in range(7):
            els.extend(ball.ball_basis(params, n))
        vals = np.vstack([el.poly.eval_many(rule.points) for el in els])
        gram = (vals * rule.weights) @ vals.T
        scale = np.sqrt(np.outer(np.diag(gram), np.diag(gram)))
        off = (gram - np.diag(np.diag(gram))) / scale
        assert np.abs(off).max() < 1e-9


class TestProject:
    def test_reproduces_own_degree(self):
        params = P_MAIN
        rule = qd.ball_rule(params, 12)
        el = ball.basis_element(params, 3, 1, 0)
        f = lambda x: float(el.poly.eval_many(np.asarray(x)[None, :])[0])
        res = ball.project(params, f, 3, rule)
        for (j, ell), c in res.coeffs.items():
            expected = el.norm if (j, ell) == (1, 0) else 0.0
            assert c == pytest.approx(expected, abs=1e-9)

    def test_annihilates_other_degrees(self):
        params = P_MAIN
        rule = qd.ball_rule(params, 12)
        el = ball.basis_element(params, 2, 0, 0)
        f = lambda x: float(el.poly.eval_many(np.asarray(x)[None, :])[0])
        res = ball.project(params, f, 4, rule)
        x = ball.random_ball_points(2, 3, seed=0)
        assert np.abs(res.evaluate(x)).max() < 1e-9

    def test_parseval_monotone(self):
        params = P_MAIN
        rule = qd.ball_rule(params, 30)
        f = lambda x: math.exp(x[0])
        exp = ball.expand(params, f, 8, rule)
        sums = exp.parseval_sums()
        assert all(b >= a - 1e-14 for a, b in zip(sums, sums[1:]))
        norm2 = float(np.dot(rule.weights, np.array([f(p) for p in rule.points]) ** 2))
        assert sums[-1] <= norm2 + 1e-12


class TestKernelDirect:
    def test_degree_zero(self):
        x, y = ball.random_ball_points(2, 2, seed=1)
        assert ball.kernel_direct(P_MAIN, 0, x, y) == pytest.approx(1.0)

    def test_symmetry(self):
        x, y = ball.random_ball_points(2, 2, seed=2)
        a = ball.kernel_direct(P_MAIN, 3, x, y)
        b = ball.kernel_direct(P_MAIN, 3, y, x)
        assert a == b  # identical symmetric sums

    def test_reproducing_property(self):
        params = P_MAIN
        n = 3
        rule = qd.ball_rule(params, 4 * n)
        rng = np.random.default_rng(4)
        els = ball.ball_basis(params, n)
        X = ball.random_ball_points(2, 10, seed=5)
        for _ in range(10):
            c = rng.standard_normal(len(els))
            qv = sum(
                ci * el.poly.eval_many(rule.points) for ci, el in zip(c, els)
            )
            for x in X[:3]:
                kv = ball.kernel_direct_pairs(
                    params, n, np.broadcast_to(x, rule.points.shape), rule.points
                )
                got = float(np.dot(rule.weights, kv * qv))
                want = float(
                    sum(
                        ci * el.poly.eval_many(x[None, :])[0]
                        for ci, el in zip(c, els)
                    )
                )
                assert got == pytest.approx(want, rel=1e-8, abs=1e-8)


class TestKernelConcise:
    def test_normalization_degree_zero(self):
        for params in (P_MAIN, P_GEN, WeightParams(2, (0.0, 0.5), 0.0, 0.0)):
            x, y = ball.random_ball_points(2, 2, seed=3)
            assert abs(ball.kernel_concise(params, 0, x, y) - 1.0) < 1e-10

    @pytest.mark.parametrize(
        "params",
        [
            P_MAIN,
            P_GEN,
            WeightParams(2, (0.0, 0.0), 0.0, 0.5),   # mu = 0 limit
            WeightParams(2, (0.0, 0.7), 1.0, 0.5),   # kappa_1 = 0 limit
            WeightParams(2, (0.3, 0.7), 0.5, 0.0),   # nu = 0 limit
            WeightParams(3, (0.5, 0.0, 0.3), 0.5, 0.5),
        ],
    )
    def test_agrees_with_direct(self, params):
        d = params.d
        X = ball.random_ball_points(d, 25, seed=10)
        Y = ball.random_ball_points(d, 25, seed=11)
        for n in range(7):
            kd = ball.kernel_direct_pairs(params, n, X, Y)
            kc = np.array(
                [ball.kernel_concise(params, n, x, y) for x, y in zip(X, Y)]
            )
            assert np.abs(kd - kc).max() < 1e-6

    def test_classical_kernel_shape_at_nu_zero(self):
        # kappa = 0, nu = 0: the kernel collapses to the single boundary integral
        params = WeightParams(2, (0.0, 0.0), 1.0, 0.0)
        lam = params.lambda_total
        rule = qd.gauss_jacobi(30, params.mu - 1, params.mu - 1)
        w = rule.weights / rule.mass
        x, y = ball.random_ball_points(2, 2, seed=12)
        bx = math.sqrt(1 - float(x @ x))
        by = math.sqrt(1 - float(y @ y))
        for n in (1, 3, 5):
            arg = float(x @ y) + bx * by * rule.nodes
            oracle = float(np.dot(w, sp.gegenbauer_kernel(n, lam, arg)))
            assert ball.kernel_concise(params, n, x, y) == pytest.approx(
                oracle, abs=1e-8
            )

    def test_nu_limit_sweep(self):
        # the nu -> 0+ kernels approach the nu = 0 limit path linearly
        x, y = ball.random_ball_points(2, 2, seed=13)
        base = WeightParams(2, (0.5, 0.0), 1.0, 0.0)
        k0 = ball.kernel_concise(base, 4, x, y)
        errs = [
            abs(ball.kernel_concise(base.with_nu(nu), 4, x, y) - k0)
            for nu in (1e-2, 1e-3, 1e-4)
        ]
        assert errs[0] > errs[1] > errs[2]

    def test_resolution_contract(self):
        x, y = ball.random_ball_points(2, 2, seed=14)
        with pytest.raises(ValueError):
            ball.kernel_concise(P_MAIN, 6, x, y, resolution=3)
        v1 = ball.kernel_concise(P_MAIN, 6, x, y, resolution=5)
        v2 = ball.kernel_concise(P_MAIN, 6, x, y, resolution=9)
        assert v1 == pytest.approx(v2, rel=1e-12, abs=1e-12)


class TestTranslation:
    def test_preserves_constants(self):
        x, y = ball.random_ball_points(2, 2, seed=15)
        val = ball.translation(P_MAIN, lambda t: np.ones_like(t), x, y, 6)
        assert val == pytest.approx(1.0, rel=1e-12)

    def test_kernel_term_recovers_kernel(self):
        params = P_GEN
        lam = params.lambda_total
        x, y = ball.random_ball_points(2, 2, seed=16)
        for n in (1, 4):
            g = lambda t: sp.gegenbauer_kernel(n, lam, t)
            got = ball.translation(params, g, x, y, resolution=6)
            assert got == pytest.approx(
                ball.kernel_direct(params, n, x, y), rel=1e-9, abs=1e-9
            )

    def test_positivity_bound(self):
        params = P_MAIN
        g = lambda t: np.sin(4 * t)
        X = ball.random_ball_points(2, 5, seed=17)
        Y = ball.random_ball_points(2, 5, seed=18)
        lhs = np.abs(ball.translation_pairs(params, g, X, Y, 16))
        rhs = ball.translation_pairs(params, lambda t: np.abs(g(t)), X, Y, 16)
        assert np.all(lhs <= rhs + 1e-12)


class TestConvolution:
    def test_constant_profile_projects_to_mean(self):
        params = P_MAIN
        rule = qd.ball_rule(params, 16)
        f = lambda x: 1.0 + x[0] + 0.3 * x[0] * x[1]
        mean = float(
            np.dot(rule.weights, np.array([f(p) for p in rule.points]))
        )
        conv = ball.convolve(params, f, lambda t: np.ones_like(t), rule, 6)
        for x in ball.random_ball_points(2, 3, seed=19):
            assert conv(x) == pytest.approx(mean, rel=1e-10)

    def test_multiplier_identity_on_eigenspace(self):
        # f in the degree-n space is multiplied by the Gegenbauer coefficient
        params = P_GEN
        lam = params.lambda_total
        rule = qd.ball_rule(params, 20)
        g = lambda t: 0.2 - t + 0.7 * t**3 + t**4
        for n, j, ell in [(1, 0, 1), (2, 1, 0), (3, 0, 0)]:
            el = ball.basis_element(params, n, j, ell)
            f = lambda x: float(el.poly.eval_many(np.asarray(x)[None, :])[0])
            conv = ball.convolve(params, f, g, rule, resolution=8)
            ghat = ball.gegenbauer_coefficient(g, n, lam)
            for x in ball.random_ball_points(2, 3, seed=20 + n):
                assert abs(conv(x) - ghat * f(x)) < 1e-7

    def test_projection_multiplier_identity(self):
        # proj_n(f * g) = ghat_n proj_n(f) for a mixed-degree polynomial f
        params = P_MAIN
        lam = params.lambda_total
        rule = qd.ball_rule(params, 24)
        els = [
            ball.basis_element(params, 1, 0, 0),
            ball.basis_element(params, 2, 1, 0),
            ball.basis_element(params, 3, 0, 1),
        ]
        f = lambda x: 0.5 + sum(
            float(el.poly.eval_many(np.asarray(x)[None, :])[0]) for el in els
        )
        g = lambda t: 1.0 + t + t * t
        fconv = ball.convolve(params, f, g, rule, resolution=8)
        for n in (1, 2, 3):
            pr_conv = ball.project(params, fconv, n, rule)
            pr_f = ball.project(params, f, n, rule)
            ghat = ball.gegenbauer_coefficient(g, n, lam)
            for key, c in pr_conv.coeffs.items():
                assert c == pytest.approx(ghat * pr_f.coeffs[key], abs=1e-7)

    def test_integral_identity_against_multiplier(self):
        # the weighted integral of (translated g) x (degree-n element)
        params = P_GEN
        lam = params.lambda_total
        rule = qd.ball_rule(params, 24)
        rng = np.random.default_rng(21)
        coef = rng.standard_normal(9)
        g = lambda t: np.polyval(coef, t)  # degree-8 polynomial profile
        for n, j, ell in [(0, 0, 0), (2, 0, 1), (4, 1, 0)]:
            el = ball.basis_element(params, n, j, ell)
            ghat = ball.gegenbauer_coefficient(g, n, lam)
            for x in ball.random_ball_points(2, 2, seed=22):
                L = ball.translation_pairs(
                    params, g, np.broadcast_to(x, rule.points.shape), rule.points, 10
                )
                Pv = el.poly.eval_many(rule.points)
                lhs = float(np.dot(rule.weights, L * Pv))
                rhs = ghat * float(el.poly.eval_many(x[None, :])[0])
                assert abs(lhs - rhs) < 1e-7

    def test_young_inequality_spot_checks(self):
        params = P_MAIN
        lam = params.lambda_total
        rule = qd.ball_rule(params, 12)
        f = lambda x: math.sin(3 * x[0]) + 0.5
        g = lambda t: np.cos(2 * t)
        conv = ball.convolve(params, f, g, rule, resolution=12)
        X = ball.random_ball_points(2, 12, seed=23)
        fvals = np.array([f(p) for p in rule.points])
        conv_vals = np.array([conv(x) for x in X])
        grule = qd.gauss_jacobi(40, lam - 0.5, lam - 0.5)
        gw = grule.weights / grule.mass
        g_l1 = float(np.dot(gw, np.abs(g(grule.nodes))))
        # (p, q, r) = (inf, inf, 1)
        f_sup = max(np.abs(fvals).max(), np.abs([f(x) for x in X]).max())
        assert np.abs(conv_vals).max() <= f_sup * g_l1 + 1e-10
        # (p, q, r) = (1, 1, 1)
        conv_on_rule = ball.convolve_on_points(params, f, g, rule, rule.points, 12)
        lhs = float(np.dot(rule.weights, np.abs(conv_on_rule)))
        rhs = float(np.dot(rule.weights, np.abs(fvals))) * g_l1
        assert lhs <= rhs + 1e-10


class TestCesaro:
    def test_reproduces_constants(self):
        params = P_MAIN
        rule = qd.ball_rule(params, 12)
        mean = ball.cesaro_mean(params, lambda x: 1.0, 4, 1.5, rule)
        for x in ball.random_ball_points(2, 3, seed=24):
            assert mean(x) == pytest.approx(1.0, rel=1e-10)

    def test_partial_sum_reproduces_polynomials(self):
        params = P_MAIN
        rule = qd.ball_rule(params, 16)
        f = lambda x: 1 + 2 * x[0] - x[1] + x[0] * x[1] - 0.3 * x[0] ** 3
        mean = ball.cesaro_mean(params, f, 3, 0.0, rule, resolution=8)
        for x in ball.random_ball_points(2, 4, seed=25):
            assert mean(x) == pytest.approx(f(x), rel=1e-8, abs=1e-8)

    def test_kernel_methods_agree(self):
        params = P_GEN
        x, y = ball.random_ball_points(2, 2, seed=26)
        a = ball.cesaro_kernel(params, 4, 1.3, x, y, method="direct")
        b = ball.cesaro_kernel(params, 4, 1.3, x, y, method="translation")
        assert a == pytest.approx(b, rel=1e-9, abs=1e-9)

    def test_positivity_at_threshold(self):
        params = P_MAIN
        delta = 2 * params.lambda_total + 1
        grid = ball.polar_grid(2, 12, 12)
        assert ball.kernel_min_on_grid(params, 6, delta, grid) >= -1e-9

    def test_lebesgue_growth_without_smoothing(self):
        params = P_MAIN
        vals = [ball.lebesgue_estimate(params, n, 0.0) for n in (4, 8, 12)]
        assert vals[0] < vals[1] < vals[2]

    def test_lebesgue_bounded_above_threshold(self):
        params = P_MAIN
        delta = params.lambda_total + 0.5
        vals = [ball.lebesgue_estimate(params, n, delta) for n in (4, 8, 12)]
        assert max(vals) / min(vals) < 3


class TestPoisson:
    def test_preserves_constants(self):
        # the translated profile is not polynomial, so the outer rule is the
        # accuracy bottleneck; a degree-40 rule brings it well under 1e-8
        params = P_MAIN
        rule = qd.ball_rule(params, 40)
        pf = ball.poisson_integral(params, lambda x: 1.0, 0.5, rule, resolution=24)
        x = ball.random_ball_points(2, 1, seed=27)[0]
        assert pf(x) == pytest.approx(1.0, rel=1e-8)

    def test_series_identity(self):
        params = WeightParams(2, (0.5, 0.0), 0.5, 0.5)
        x, y = ball.random_ball_points(2, 2, seed=28)
        kt = ball.poisson_kernel(params, 0.5, x, y, method="translation",
                                 resolution=28)
        ks = ball.poisson_kernel(params, 0.5, x, y, method="series",
                                 series_degree=26)
        assert abs(kt - ks) < 1e-6

    def test_kernel_positive_on_grid(self):
        params = P_MAIN
        grid = ball.polar_grid(2, 6, 8) * 0.95
        for x in grid[::(len(grid) // 8)]:
            for y in grid[:: len(grid) // 5]:
                assert (
                    ball.poisson_kernel(params, 0.4, x, y, method="series",
                                        series_degree=24)
                    > -1e-9
                )

    def test_boundary_convergence_trend(self):
        params = WeightParams(2, (0.5, 0.0), 0.5, 0.5)
        rule = qd.ball_rule(params, 40)
        f = lambda x: math.exp(x[0])
        exp = ball.expand(params, f, 24, rule)
        grid = ball.polar_grid(2, 5, 8) * 0.98
        fg = np.array([f(p) for p in grid])
        errs = [
            np.abs(exp.poisson_eval(r, grid) - fg).max() for r in (0.9, 0.99)
        ]
        assert errs[1] < errs[0]

    def test_rejects_bad_radius(self):
        with pytest.raises(ValueError):
            ball.poisson_kernel(P_MAIN, 1.5, [0.1, 0.1], [0.2, 0.2])


class TestDifferentialEquation:
    @pytest.mark.parametrize("params", [WeightParams(2, (0.3, 0.7), 1.0, 0.0),
                                        WeightParams(2, (0.5, 0.0), 0.5, 0.0)])
    def test_eigen_equation_at_nu_zero(self, params):
        X = ball.random_ball_points(2, 3, seed=29)
        for n in range(6):
            for j in range(n // 2 + 1):
                for x in X:
                    assert abs(ball.de_residual(params, n, j, 0, x)) < 1e-9

    @pytest.mark.parametrize("nu", [0.5, 1.5])
    def test_corrected_equation_at_nonzero_nu(self, nu):
        params = WeightParams(2, (0.3, 0.7), 1.0, nu)
        X = ball.random_ball_points(2, 3, seed=30)
        for n in range(6):
            for j in range(n // 2 + 1):
                for x in X:
                    assert abs(ball.de_residual(params, n, j, 0, x)) < 1e-9

    def test_ablation_negative_control(self):
        params = WeightParams(2, (0.3, 0.7), 1.0, 0.5)
        x = ball.random_ball_points(2, 1, seed=31)[0]
        resid = ball.de_residual(params, 4, 1, 0, x, include_singular_term=False)
        assert abs(resid) > 1e-2

    def test_rejects_origin(self):
        with pytest.raises(ValueError):
            ball.de_residual(P_MAIN, 2, 1, 0, [0.0, 0.0])


class TestContiguousRelations:
    def test_degree_zero_exact(self):
        r1, r2 = ball.contiguous_residual(P_GEN, 0, 0, 0)
        assert r1 == 0.0 and r2 == 0.0

    def test_full_range(self):
        params = P_GEN
        for n in range(6):
            for j in range(n // 2 + 1):
                r1, r2 = ball.contiguous_residual(params, n, j, 0)
                assert r1 < 1e-9 and r2 < 1e-9

    def test_harmonic_index_invariance(self):
        # both sides share the same angular factor, so the residual cannot
        # depend on which orthonormal harmonic is chosen
        params = P_MAIN
        a = ball.contiguous_residual(params, 3, 1, 0)
        b = ball.contiguous_residual(params, 3, 1, 1)
        assert a == b
