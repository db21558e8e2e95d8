import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from fractalzeta.exceptions import (
    CEqualsOne,
    DomainExcluded,
    ExploratoryRegimeWarning,
    PadInsufficient,
    SupportOverflow,
    TableTooSmall,
    TailNotNegligible,
)
from fractalzeta.spectral_operator import (
    GridFunction,
    SpectralOperator,
    WeightedGrid,
    apply_continued,
    apply_dirichlet,
    apply_euler_product,
    apply_moebius_inverse,
    apply_multiplier_oracle,
    gaussian_bump,
    grid_function_from_csv,
    grid_function_to_csv,
    random_bumps,
    relative_weighted_error,
    required_pad,
    resolvent_shift_minus_one,
    shift,
    weighted_norm,
)
from fractalzeta.zeta_core import moebius, primes_up_to, zeta


def _grid(c, t_min=-3.0, t_max=4.0, n=1024):
    return WeightedGrid(c, t_min, t_max, n)


def _brute_dirichlet(f, t):
    """Direct sum of translates, one n at a time."""
    out = np.zeros(t.size, dtype=complex)
    n = 1
    while math.log(n) <= t.max() - f.support[0]:
        out += f(t - math.log(n))
        n += 1
    return out


class TestGrid:
    def test_validation(self):
        with pytest.raises(ValueError):
            WeightedGrid(2, 0, 1, 1000)
        with pytest.raises(ValueError):
            WeightedGrid(2, 0, 1, 128)
        with pytest.raises(ValueError):
            WeightedGrid(2, 1, 0, 256)
        g = _grid(2.0)
        assert g.nodes.size == 1024 and g.step == pytest.approx(7 / 1023)
        assert g.with_c(0.5).c == 0.5

    def test_weighted_norm_of_gaussian(self):
        g = _grid(2.0, -3, 4, 2048)
        f = gaussian_bump(g, 0.5, 0.2)
        # int exp(-4t) exp(-(t-m)^2/s^2) dt in closed form
        m, s = 0.5, 0.2
        exact = math.sqrt(math.sqrt(math.pi) * s * math.exp(-4 * m + 4 * s * s))
        assert weighted_norm(f) == pytest.approx(exact, rel=1e-12)

    def test_function_invariants(self):
        g = _grid(2.0)
        f = gaussian_bump(g, 0.0, 0.2)
        with pytest.raises(ValueError):
            f.samples[0] = 1
        with pytest.raises(ValueError):
            GridFunction(g, np.ones(1024), support=(0, 1))
        with pytest.raises(SupportOverflow):
            gaussian_bump(g, 3.9, 0.2)
        assert f(np.array([-2.9, 3.9])).tolist() == [0, 0]

    def test_interpolation_without_callable(self):
        g = _grid(2.0)
        f = gaussian_bump(g, 0.0, 0.3)
        sampled = GridFunction(g, f.samples)
        t = np.linspace(-1, 1, 77)
        # linear interpolation error is at most h^2 max|f''| / 8 = h^2 / (8 sigma^2)
        assert np.max(np.abs(sampled(t) - f(t))) < g.step**2 / (8 * 0.3**2) * 1.01

    def test_random_bumps_reproducible(self):
        g = _grid(2.0)
        a, b = random_bumps(g, 5), random_bumps(g, 5)
        assert all(np.array_equal(x.samples, y.samples) for x, y in zip(a, b))
        assert not np.array_equal(random_bumps(g, 1, seed=1)[0].samples, a[0].samples)


class TestShift:
    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.5, 3.0), st.integers(-100, 300))
    def test_norm_law(self, c, k):
        g = _grid(c)
        f = gaussian_bump(g, 0.0, 0.2)
        h = k * g.step
        assert weighted_norm(shift(f, h)) == pytest.approx(
            math.exp(-c * h) * weighted_norm(f), rel=1e-12
        )

    def test_overflow(self):
        g = _grid(2.0)
        with pytest.raises(SupportOverflow):
            shift(gaussian_bump(g, 0.0, 0.2), 3.0)


class TestDirichletAndInverse:
    def test_against_brute_force(self):
        g = _grid(2.0)
        f = gaussian_bump(g, -1.0, 0.2)
        out = apply_dirichlet(f)
        assert np.max(np.abs(out.samples - _brute_dirichlet(f, g.nodes))) < 1e-13

    @pytest.mark.parametrize("c", [1.5, 2.0, 3.0])
    def test_moebius_roundtrip(self, c):
        g = _grid(c)
        for f in random_bumps(g, 5):
            back = apply_moebius_inverse(apply_dirichlet(f))
            assert relative_weighted_error(back, f) < 1e-12

    @settings(max_examples=25, deadline=None)
    @given(st.floats(1.2, 4.0), st.integers(0, 10**6))
    def test_norm_bounded_by_zeta_c(self, c, seed):
        g = _grid(c)
        f = random_bumps(g, 1, seed=seed)[0]
        out = apply_dirichlet(f)
        bound = zeta(c).real * weighted_norm(f) + out.lost_tail_bound
        assert weighted_norm(out) <= bound * (1 + 1e-9)

    def test_overflow_flag(self):
        g = _grid(2.0)
        out = apply_dirichlet(gaussian_bump(g, 0.0, 0.2))
        assert out.overflow and 0 < out.lost_tail_bound < math.inf
        small = apply_dirichlet(gaussian_bump(_grid(2.0, -3, 8), -2.0, 0.1))
        assert small.overflow  # the translates reach every t

    def test_table_too_small_and_warning(self):
        g = _grid(2.0)
        f = gaussian_bump(g, -1.0, 0.2)
        with pytest.raises(TableTooSmall):
            apply_moebius_inverse(f, table=moebius(10))
        with pytest.warns(ExploratoryRegimeWarning):
            apply_moebius_inverse(gaussian_bump(_grid(0.3), -1.0, 0.2))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            apply_moebius_inverse(f)


class TestEulerProduct:
    def test_equals_dirichlet_when_all_primes_present(self):
        g = _grid(2.0, -1.0, 3.9)
        f = gaussian_bump(g, 0.0, 0.1)
        # every n <= exp(t_max - a) factors over these primes with exponents <= 8
        n_max = math.exp(g.t_max - f.support[0])
        e = apply_euler_product(f, primes_up_to(int(n_max) + 1).tolist(), 8)
        assert np.max(np.abs(e.samples - apply_dirichlet(f).samples)) == 0

    def test_single_prime_is_geometric_sum(self):
        g = _grid(2.0)
        f = gaussian_bump(g, -2.0, 0.1)
        e = apply_euler_product(f, [2], 3)
        t = g.nodes
        ref = sum(f(t - m * math.log(2)) for m in range(4))
        assert np.max(np.abs(e.samples - ref)) < 1e-15

    def test_validation(self):
        f = gaussian_bump(_grid(2.0), 0.0, 0.2)
        with pytest.raises(ValueError):
            apply_euler_product(f, [4], 2)
        with pytest.raises(TypeError):
            apply_euler_product(f, [2.0], 2)
        same = apply_euler_product(f, [2, 3], 0)
        assert np.array_equal(same.samples, f.samples)


class TestResolventAndContinued:
    @pytest.mark.parametrize("c", [0.5, 1.5])
    def test_resolvent_solves_ode(self, c):
        g = _grid(c)
        f = gaussian_bump(g, 0.0, 0.3)
        u = resolvent_shift_minus_one(f)
        h = g.step
        t = g.nodes[5:-5]
        du = (u(t + h) - u(t - h)) / (2 * h)
        assert np.max(np.abs(du - u(t) - f(t))) < 10 * h**2

    def test_resolvent_c_one(self):
        with pytest.raises(CEqualsOne):
            resolvent_shift_minus_one(gaussian_bump(_grid(1.0), 0.0, 0.2))

    def test_continued_equals_dirichlet_right_of_one(self):
        g = _grid(2.0)
        for f in random_bumps(g, 5):
            assert relative_weighted_error(apply_continued(f), apply_dirichlet(f)) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainExcluded):
            apply_continued(gaussian_bump(_grid(-0.5), 0.0, 0.2))
        with pytest.raises(CEqualsOne):
            apply_continued(gaussian_bump(_grid(1.0), 0.0, 0.2))
        with pytest.raises(TailNotNegligible):
            apply_continued(gaussian_bump(_grid(0.5), -1.0, 0.2), tau_max=3.0)


class TestOracle:
    @pytest.mark.parametrize("c", [1.5, 2.0, 3.0])
    def test_three_way_agreement(self, c):
        g = _grid(c)
        for f in random_bumps(g, 3):
            d = apply_dirichlet(f)
            assert relative_weighted_error(apply_continued(f), d) < 1e-10
            assert relative_weighted_error(apply_multiplier_oracle(f), d) < 1e-10

    @pytest.mark.parametrize("c", [0.2, 0.3, 0.7, 0.8])
    def test_strip_agreement(self, c):
        g = _grid(c)
        for f in random_bumps(g, 3):
            assert relative_weighted_error(apply_continued(f), apply_multiplier_oracle(f)) < 1e-9

    @pytest.mark.parametrize("c", [0.3, 0.6])
    def test_xi_reflection(self, c):
        g = _grid(c)
        f = gaussian_bump(g, 0.0, 0.25)
        a = apply_multiplier_oracle(f, "xi")
        b = apply_multiplier_oracle(f, "xi_reflected")
        assert relative_weighted_error(a, b) < 1e-12

    def test_inverse_multiplier_undoes_zeta(self):
        # zeta(s) f decays only like exp((1 - c) t), so 1/zeta cancels it
        # once the window holds the whole tail
        g = WeightedGrid(2.0, -3.0, 28.0, 4096)
        f = gaussian_bump(g, 0.0, 0.25)
        forward = apply_multiplier_oracle(f, "zeta")
        back = apply_multiplier_oracle(forward, lambda s: 1 / zeta(s), pad=(4.0, math.log(1e10)))
        assert relative_weighted_error(back, f) < 1e-13

    def test_pad_rules(self):
        assert required_pad("zeta", 2.0) == (4.0, pytest.approx(math.log(1e10)))
        assert required_pad("zeta", 0.5)[0] == pytest.approx(2 * math.log(1e10))
        f = gaussian_bump(_grid(0.5), 0.0, 0.2)
        with pytest.raises(PadInsufficient):
            apply_multiplier_oracle(f, "zeta", pad=1.0)
        with pytest.raises(ValueError):
            apply_multiplier_oracle(f, lambda s: s)
        with pytest.raises(DomainExcluded):
            required_pad("xi", 0.0)
        with pytest.raises(CEqualsOne):
            required_pad("zeta", 1.0)

    def test_identity_multiplier(self):
        g = _grid(0.5)
        f = gaussian_bump(g, 0.0, 0.2)
        out = apply_multiplier_oracle(f, lambda s: np.ones_like(s), pad=1.0)
        assert relative_weighted_error(out, f) < 1e-13


class TestCsv:
    def test_roundtrip(self, tmp_path):
        g = _grid(2.0, n=256)
        f = apply_dirichlet(gaussian_bump(g, 0.0, 0.2))
        path = grid_function_to_csv(f, tmp_path / "f.csv")
        back = grid_function_from_csv(path, 2.0)
        # values round-trip exactly; sub-1e-14 edge samples may be zeroed
        assert np.max(np.abs(back.samples - f.samples)) <= 1e-14
        assert np.allclose(back.t, f.t, rtol=0, atol=1e-13)

    def test_non_uniform(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("t,re,im\n" + "".join(f"{i ** 2},0,0\n" for i in range(256)))
        with pytest.raises(ValueError):
            grid_function_from_csv(p, 2.0)


class TestEstimator:
    def _X(self, op):
        g = WeightedGrid(op.c, op.t_min, op.t_max, op.n_points)
        return np.vstack([b.samples.real for b in random_bumps(g, 3)])

    @pytest.mark.parametrize("kind", ["dirichlet", "moebius", "euler", "continued", "oracle"])
    def test_kinds_match_functions(self, kind):
        op = SpectralOperator(kind=kind, c=2.0, t_min=-3.0, t_max=4.0, n_points=1024)
        X = self._X(op)
        Y = op.fit_transform(X)
        assert Y.shape == X.shape
        f = GridFunction(op.grid_, X[0])
        if kind == "dirichlet":
            assert np.array_equal(Y[0], apply_dirichlet(f).samples)

    def test_params_and_clone(self):
        op = SpectralOperator(kind="oracle", func="xi", c=0.5)
        assert clone(op).get_params() == op.get_params()
        with pytest.raises(NotFittedError):
            op.transform(np.zeros((1, 1024)))

    def test_validation(self):
        with pytest.raises(ValueError):
            SpectralOperator(kind="bogus").fit(np.zeros((1, 1024)))
        with pytest.raises(ValueError):
            SpectralOperator().fit(np.zeros(1024))
        with pytest.raises(ValueError):
            SpectralOperator().fit(np.zeros((1, 100)))
