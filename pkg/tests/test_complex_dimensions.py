import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractalzeta.complex_dimensions import (
    continued_geometric_zeta,
    counting_table,
    explicit_counting_geometric,
    explicit_counting_spectral,
    lattice_poles,
    log_integral,
    log_integral_pv_quadrature,
    residue_at,
    riemann_explicit_formula,
    riemann_zeros,
    tube_formula_eval,
    tube_table,
    weighted_prime_count,
)
from fractalzeta.exceptions import NearJump, NotAPole, NotSelfSimilar, PrimePowerPoint
from fractalzeta.fractal_string import (
    PowerLawString,
    SelfSimilarString,
    cantor_string,
    geometric_counting,
    geometric_zeta,
    spectral_counting,
    tube_volume,
)

CANTOR_D = math.log(2) / math.log(3)
CANTOR_P = 2 * math.pi / math.log(3)

lattice = st.builds(
    lambda m, q, k: SelfSimilarString(r=q / m, m=m, l1=(q / m) ** k),
    st.integers(2, 4),
    st.floats(0.2, 0.8),
    st.integers(0, 2),
)


class TestPoles:
    def test_cantor(self):
        dims = lattice_poles(cantor_string(), 3)
        assert dims.D == pytest.approx(CANTOR_D, abs=1e-15)
        assert dims.p == pytest.approx(CANTOR_P, abs=1e-15)
        assert dims.poles.size == 7
        assert dims.residue == pytest.approx(3**-CANTOR_D / math.log(3))
        # the Cantor lengths are powers of r, so every residue is 1/(2 log 3)
        assert np.allclose(dims.residues, 1 / (2 * math.log(3)), atol=1e-15)

    def test_not_self_similar(self):
        with pytest.raises(NotSelfSimilar):
            lattice_poles(PowerLawString(1, 0.5), 2)

    @settings(max_examples=30, deadline=None)
    @given(lattice, st.integers(-4, 4))
    def test_poles_are_poles_with_matching_residue(self, S, n):
        dims = lattice_poles(S, 4)
        omega = dims.D + 1j * dims.p * n
        den = 1 - S.m * np.exp(omega * math.log(S.r))
        assert abs(den) < 1e-12
        res = residue_at(S, omega)
        assert abs(res - dims.residues[n + 4]) < 1e-9 * abs(dims.residues[n + 4])

    def test_cantor_residue_frozen(self):
        assert residue_at(cantor_string(), CANTOR_D).real == pytest.approx(0.4551196133, abs=1e-9)

    def test_not_a_pole(self):
        with pytest.raises(NotAPole):
            residue_at(cantor_string(), 0.0)
        with pytest.raises(NotAPole):
            residue_at(cantor_string(), CANTOR_D + 0.5j * CANTOR_P)

    def test_continuation_matches_series(self):
        S = cantor_string()
        for s in [1.0, 2 + 1j, 0.8 - 3j]:
            assert abs(continued_geometric_zeta(S, s) - geometric_zeta(S, s)) < 1e-12
        assert continued_geometric_zeta(S, 0) == pytest.approx(-1)


class TestTubeFormula:
    def test_frozen_example(self):
        S = cantor_string()
        val = tube_formula_eval(lattice_poles(S, 50), geometric_zeta(S, 0), 1 / 18)
        assert val == pytest.approx(0.77753, abs=5e-5)
        assert tube_volume(S, 1 / 18) == pytest.approx(7 / 9)

    @settings(max_examples=20, deadline=None)
    @given(lattice, st.floats(-7, -2))
    def test_converges_with_n_max(self, S, log_eps):
        eps = 10.0**log_eps * S.l1
        assert eps < S.l1 / 2
        direct = tube_volume(S, eps)
        z0 = geometric_zeta(S, 0)
        errs = [abs(tube_formula_eval(lattice_poles(S, n), z0, eps) - direct) for n in (50, 400)]
        assert errs[1] < 1e-2 * max(direct, 1e-300) or errs[1] < 1e-10
        assert errs[1] <= errs[0] + 1e-12

    def test_residual_is_rounding(self):
        S = cantor_string()
        _, residual = tube_formula_eval(lattice_poles(S, 200), -1, 1e-4, return_residual=True)
        assert residual < 1e-12

    def test_table(self):
        rows = tube_table(cantor_string(), [1e-3, 1e-4], 100)
        assert [sorted(r) for r in rows] == [["direct", "eps", "error", "formula"]] * 2
        for r in rows:
            assert r["error"] == r["formula"] - r["direct"]
            assert abs(r["error"]) < 1e-4 * r["direct"]


class TestCountingFormulas:
    def test_geometric_example(self):
        assert explicit_counting_geometric(10.5, 400) == pytest.approx(3, abs=0.05)
        assert explicit_counting_geometric(10.5, 200) == pytest.approx(2.99723, abs=1e-3)

    def test_spectral_example(self):
        assert explicit_counting_spectral(10.5, 200) == pytest.approx(4.97830, abs=1e-3)
        assert explicit_counting_spectral(100.2, 400) == pytest.approx(75.14, abs=0.01)
        assert spectral_counting(cantor_string(), 100.2) == 75

    def test_near_jump(self):
        with pytest.raises(NearJump):
            explicit_counting_geometric(9.0, 50)
        with pytest.raises(NearJump):
            explicit_counting_spectral(6.0005, 50)
        with pytest.raises(ValueError):
            explicit_counting_geometric(0.5, 50)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.2, 0.8), st.integers(1, 6))
    def test_geometric_rounds_to_count(self, frac, k):
        x = 3.0**k * (1 + 2 * frac)
        approx = explicit_counting_geometric(x, 400)
        assert abs(approx - geometric_counting(cantor_string(), x)) < 0.5

    def test_residuals_small(self):
        _, r1 = explicit_counting_geometric(50.5, 200, return_residual=True)
        _, r2 = explicit_counting_spectral(50.5, 200, return_residual=True)
        assert r1 < 1e-10 and r2 < 1e-10

    def test_table(self):
        rows = counting_table("geometric", [5.5, 20.5], 100)
        assert rows[0]["direct"] == 1 and rows[1]["direct"] == 3
        with pytest.raises(ValueError):
            counting_table("bogus", [5.5], 10)


class TestLogIntegral:
    @pytest.mark.parametrize("x", [0.3, 2.0, 10.0, 100.0, 1e4])
    def test_against_mpmath_and_quadrature(self, x):
        ref = float(mpmath.li(x))
        assert log_integral(x) == pytest.approx(ref, rel=1e-13, abs=1e-13)
        assert log_integral_pv_quadrature(x) == pytest.approx(ref, rel=1e-7, abs=1e-7)

    def test_example(self):
        assert log_integral(10) == pytest.approx(6.1655995, abs=1e-7)
        with pytest.raises(ValueError):
            log_integral(1)

    def test_complex_argument_against_mpmath(self):
        from scipy.special import expi

        rho = 0.5 + 14.134725141734693j
        for x in (10.0, 123.4):
            ref = complex(mpmath.ei(rho * mpmath.log(x)))
            assert abs(expi(rho * math.log(x)) - ref) < 1e-12 * abs(ref)


class TestPrimeCount:
    def test_examples(self):
        # 2,3,5,7 plus 4 and 8 (1/2, 1/3) and 9 (1/2)
        assert weighted_prime_count(10) == pytest.approx(4 + 1 / 2 + 1 / 3 + 1 / 2)
        assert weighted_prime_count(1.5) == 0

    def test_zeros(self):
        z = riemann_zeros(30)
        assert z.size == 30 and np.all(np.diff(z) > 0)
        for k in (1, 10, 30):
            assert abs(z[k - 1] - float(mpmath.zetazero(k).imag)) < 1e-9

    def test_explicit_formula_tracks_count(self):
        # 100 zeros leave an O(1/3) truncation ripple at these heights
        for x in (20.5, 50.5, 150.5):
            assert abs(riemann_explicit_formula(x, 100) - weighted_prime_count(x)) < 0.4

    def test_more_zeros_help_on_average(self):
        xs = np.linspace(30.5, 90.5, 13)
        err = lambda n: np.mean([abs(riemann_explicit_formula(x, n) - weighted_prime_count(x)) for x in xs])
        assert err(100) < err(10)

    def test_prime_power_point(self):
        with pytest.raises(PrimePowerPoint):
            riemann_explicit_formula(32.0, 10)
        with pytest.raises(ValueError):
            riemann_explicit_formula(1.5, 10)
