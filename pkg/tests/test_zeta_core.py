import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractalzeta.exceptions import (
    AccuracyNotReached,
    DomainError,
    DomainExcluded,
    PoleAtOne,
    TailNotNegligible,
    ZeroConfirmationWarning,
)
from fractalzeta.zeta_core import (
    DEFAULT_EVALUATOR,
    ZetaEvaluator,
    euler_product_partial,
    find_zeros_on_line,
    moebius,
    primes_up_to,
    winding_number,
    xi,
    zeta,
    zeta_via_integral,
)

# published ordinates (Odlyzko's tables), used only as an outside cross-check
LITERATURE_ZEROS = [
    14.134725141734693,
    21.022039638771555,
    25.010857580145688,
    30.424876125859513,
    32.935061587739189,
]

strip = st.builds(
    complex,
    st.floats(0.05, 0.95),
    st.floats(-30, 30),
)


def _mp(s):
    return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag)))


class TestZeta:
    def test_zeta_two_against_bracketed_partial_sum(self):
        N = 10**6
        n = np.arange(1, N + 1, dtype=float)
        head = math.fsum((1.0 / n**2)[::-1])
        # sum_{n > N} n^-2 lies strictly between 1/(N+1) and 1/N
        lo, hi = head + 1 / (N + 1), head + 1 / N
        z = zeta(2)
        assert lo - 1e-12 <= z.real <= hi + 1e-12
        assert abs(z - math.pi**2 / 6) < 1e-12

    def test_zeta_half(self):
        assert abs(zeta(0.5) - (-1.4603545088095868)) < 1e-10

    @pytest.mark.parametrize("d", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    def test_negative_on_critical_interval(self, d):
        z = zeta(d)
        assert z.real < 0 and abs(z.imag) < 1e-14

    def test_pole(self):
        with pytest.raises(PoleAtOne):
            zeta(1)
        with pytest.raises(PoleAtOne):
            zeta(1 + 1e-13)

    def test_trivial_zeros_and_values(self):
        assert abs(zeta(-2)) < 1e-12
        assert abs(zeta(0) + 0.5) < 1e-12
        assert abs(zeta(-1) + 1 / 12) < 1e-12

    @pytest.mark.parametrize(
        "s",
        [3 + 0j, 0.5 + 14.134725j, 0.3 + 50j, -3.5 + 2j, 1.5 + 100j, 0.5 + 500j, -10 + 30j],
    )
    def test_against_mpmath(self, s):
        assert abs(zeta(s) - _mp(s)) < 1e-10 * max(1.0, abs(_mp(s)))

    def test_vectorized_shape(self):
        s = np.array([[2, 3], [4, 0.5 + 1j]])
        out = zeta(s)
        assert out.shape == (4,) or out.shape == s.shape
        assert abs(np.ravel(out)[0] - math.pi**2 / 6) < 1e-12

    @settings(max_examples=60, deadline=None)
    @given(strip)
    def test_conjugate_symmetry(self, s):
        assert abs(zeta(s.conjugate()) - zeta(s).conjugate()) < 1e-12 * max(1, abs(zeta(s)))

    def test_direct_series_agrees_right_of_one(self):
        rng = np.random.default_rng(7)
        ev = DEFAULT_EVALUATOR
        for _ in range(10):
            s = complex(rng.uniform(1.1 + 1.5, 4), rng.uniform(-20, 20))
            n = np.arange(1, 200001, dtype=float)
            direct = np.sum(np.exp(-s * np.log(n)))
            tail_bound = 200000 ** (1 - s.real) / (s.real - 1)
            assert abs(zeta(s, ev) - direct) <= tail_bound + 10 * ev.target_abs_error

    def test_evaluator_validation(self):
        with pytest.raises(ValueError):
            ZetaEvaluator(series_cutoff=5)
        with pytest.raises(ValueError):
            ZetaEvaluator(em_order=31)
        with pytest.raises(AccuracyNotReached):
            ZetaEvaluator(target_abs_error=1e-30, max_cutoff=64).zeta(0.5 + 1000j)
        assert ZetaEvaluator().get_params()["target_abs_error"] == 1e-10


class TestIntegralPath:
    @pytest.mark.parametrize("s", [2, 0.5, 0.3 + 5j, 0.9 + 20j, 0.05 + 30j])
    def test_agrees_with_euler_maclaurin(self, s):
        assert abs(zeta_via_integral(s) - zeta(s)) < 1e-8

    def test_near_pole_dominance(self):
        s = 0.999999
        v = zeta_via_integral(s)
        assert abs(v - 1 / (s - 1)) < 1.0

    def test_domain(self):
        with pytest.raises(PoleAtOne):
            zeta_via_integral(1)
        with pytest.raises(DomainError):
            zeta_via_integral(-0.5)

    def test_tail_not_negligible(self):
        with pytest.raises(TailNotNegligible):
            zeta_via_integral(0.05 + 30j, quad_cutoff=2, tail_terms=1, tol=1e-14)


class TestXi:
    def test_functional_equation_examples(self):
        assert abs(xi(0.3) - xi(0.7)) < 1e-10
        assert abs(xi(0.5 + 14.1347251417j)) < 1e-6
        v = xi(2)
        assert abs(v.imag) < 1e-15 and v.real > 0
        # pi^-1 Gamma(1) zeta(2) = pi / 6
        assert abs(v - math.pi / 6) < 1e-12

    @settings(max_examples=200, deadline=None)
    @given(strip)
    def test_reflection(self, s):
        assert abs(xi(s) - xi(1 - s)) < 1e-8

    @pytest.mark.parametrize("s", [0, 1, 1e-14])
    def test_excluded(self, s):
        with pytest.raises(DomainExcluded):
            xi(s)

    def test_gamma_factor_against_mpmath(self):
        for s in [0.3 + 2j, 4.5 - 7j, -2.5 + 0.5j, 0.5 + 40j]:
            ref = complex(mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s))
            assert abs(xi(s) - ref) < 1e-11 * max(1, abs(ref))


class TestMoebius:
    def test_small_values(self):
        assert moebius(6).tolist() == [1, -1, -1, 0, -1, 1]
        t = moebius(30)
        assert t[30] == -1 and t[4] == 0 and t[1] == 1

    def test_divisor_sum_identity_brute_force(self):
        limit = 10**4
        mu = moebius(limit)
        sums = np.zeros(limit + 1, dtype=np.int64)
        for d in range(1, limit + 1):
            sums[d::d] += int(mu[d])
        assert sums[1] == 1
        assert np.all(sums[2:] == 0)

    def test_zero_iff_square_factor(self):
        mu = moebius(2000)
        for n in range(1, 2001):
            squareful = any(n % (p * p) == 0 for p in range(2, math.isqrt(n) + 1))
            assert (mu[n] == 0) == squareful

    def test_read_only_and_bounds(self):
        mu = moebius(10)
        with pytest.raises(ValueError):
            mu.values[1] = 5
        with pytest.raises(IndexError):
            mu[11]
        with pytest.raises(ValueError):
            moebius(0)


class TestEulerProduct:
    def test_examples(self):
        assert abs(euler_product_partial(3, 2) - 8 / 7) < 1e-15
        assert abs(euler_product_partial(2, 10**4) - math.pi**2 / 6) < 1e-4
        s = 2 + 5j
        assert abs(euler_product_partial(s, 10**4) - zeta(s)) < 1e-3

    def test_domain(self):
        with pytest.raises(DomainError):
            euler_product_partial(1.0, 100)

    def test_primes(self):
        assert primes_up_to(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        assert primes_up_to(1).size == 0


class TestZeros:
    def test_first_three(self):
        zs = find_zeros_on_line(0.5, 10, 30)
        assert len(zs) == 3
        for z, ref in zip(zs, LITERATURE_ZEROS):
            assert abs(z - ref) < 1e-6

    def test_first_hundred_against_mpmath_count(self):
        zs = find_zeros_on_line(0.5, 0, 100)
        # N(100) = 29 zeros with 0 < t < 100
        assert len(zs) == 29
        assert abs(zs[-1] - float(mpmath.zetazero(29).imag)) < 1e-6

    def test_chunk_alignment_does_not_lose_zeros(self):
        whole = find_zeros_on_line(0.5, 0, 200)
        parts = []
        for t0 in (0, 37.3, 88.1, 151.7):
            t1 = {0: 37.3, 37.3: 88.1, 88.1: 151.7, 151.7: 200}[t0]
            parts += find_zeros_on_line(0.5, t0, t1)
        assert len(whole) == 79
        assert np.allclose(sorted(set(np.round(parts, 9))), np.round(whole, 9), atol=1e-9)

    def test_off_line_empty(self):
        assert find_zeros_on_line(0.3, 0, 50) == []
        assert find_zeros_on_line(2, 0, 100) == []

    def test_near_miss_warns(self):
        with pytest.warns(ZeroConfirmationWarning):
            res = find_zeros_on_line(0.45, 0, 60)
        assert res == [] and res.unconfirmed and res.warning

    def test_no_warning_on_clean_scan(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", ZeroConfirmationWarning)
            res = find_zeros_on_line(0.5, 10, 30)
        assert res.warning is False

    def test_winding_number(self):
        n, raw = winding_number(lambda s: zeta(s), complex(0.5, LITERATURE_ZEROS[0]), 0.05)
        assert n == 1 and abs(raw - 1) < 0.05
        n, _ = winding_number(lambda s: zeta(s), complex(0.5, 17.0), 0.05)
        assert n == 0
