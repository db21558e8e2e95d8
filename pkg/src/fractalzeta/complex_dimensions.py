"""Complex dimensions of lattice strings and the explicit formulas they drive.

Covers the pole set ``D + i n p`` of a single-ratio self-similar string,
residues by contour quadrature, the exact fractal tube formula, the
Cantor-string counting formulas and Riemann's explicit formula for the
weighted prime-power count.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import expi

from ._validation import check_positive_int, check_positive_real
from .exceptions import NearJump, NotAPole, NotSelfSimilar, PrimePowerPoint
from .fractal_string import (
    PowerLawString,
    SelfSimilarString,
    cantor_string,
    geometric_counting,
    geometric_zeta,
    spectral_counting,
    tube_volume,
)
from .zeta_core import DEFAULT_EVALUATOR, find_zeros_on_line, primes_up_to, zeta

__all__ = [
    "ComplexDimensionSet",
    "lattice_poles",
    "residue_at",
    "continued_geometric_zeta",
    "tube_formula_eval",
    "explicit_counting_geometric",
    "explicit_counting_spectral",
    "log_integral",
    "log_integral_pv_quadrature",
    "weighted_prime_count",
    "riemann_zeros",
    "riemann_explicit_formula",
    "tube_table",
    "counting_table",
]


@dataclass(frozen=True)
class ComplexDimensionSet:
    """Poles ``D + i n p`` (``|n| <= n_max``) of a lattice geometric zeta function.

    ``residue`` is the residue at ``D``. Residues at the other poles are
    ``l1**omega / log(1/r)``; they all coincide when ``l1`` is an integer
    power of ``r`` (the Cantor string, for instance).
    """

    D: float
    p: float
    residue: complex
    n_max: int
    r: float
    m: int
    l1: float

    @property
    def n_range(self):
        return np.arange(-self.n_max, self.n_max + 1)

    @property
    def poles(self):
        return self.D + 1j * self.p * self.n_range

    @property
    def residues(self):
        return np.exp(self.poles * math.log(self.l1)) / math.log(1.0 / self.r)

    def string(self):
        return SelfSimilarString(r=self.r, m=self.m, l1=self.l1)


def lattice_poles(S, n_max):
    """Complex dimensions of a single-ratio self-similar string."""
    if not isinstance(S, SelfSimilarString):
        raise NotSelfSimilar(f"lattice poles need a self-similar string, got {S.kind}")
    n_max = check_positive_int(n_max, "n_max", minimum=0)
    log_inv_r = math.log(1.0 / S.r)
    D = math.log(S.m) / log_inv_r
    return ComplexDimensionSet(
        D=D,
        p=2 * math.pi / log_inv_r,
        residue=complex(S.l1**D / log_inv_r),
        n_max=n_max,
        r=S.r,
        m=S.m,
        l1=S.l1,
    )


def continued_geometric_zeta(S, s, evaluator=None):
    """Meromorphic continuation of ``zeta_L`` as a vectorized closed form.

    Self-similar: ``l1**s / (1 - m r**s)``; power law: ``L**s zeta(s/D)``;
    explicit strings are entire finite sums.
    """
    s = np.asarray(s, dtype=np.complex128)
    if isinstance(S, SelfSimilarString):
        return np.exp(s * math.log(S.l1)) / (1.0 - S.m * np.exp(s * math.log(S.r)))
    if isinstance(S, PowerLawString):
        return np.exp(s * math.log(S.L)) * zeta(s / S.D, evaluator)
    vals = np.log(np.asarray(S.values))
    return np.exp(np.multiply.outer(s, vals)).sum(axis=-1)


def residue_at(S, omega, radius=1e-3, n_points=16, evaluator=None):
    """Residue of ``zeta_L`` at ``omega`` by trapezoidal quadrature on a circle.

    Raises :class:`NotAPole` if the contour integral is below ``1e-8``.
    """
    omega = complex(omega)
    theta = 2 * math.pi * np.arange(n_points) / n_points
    dz = radius * np.exp(1j * theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = continued_geometric_zeta(S, omega + dz, evaluator)
    res = complex(np.mean(vals * dz))
    if not np.isfinite(res) or abs(res) < 1e-8:
        raise NotAPole(f"no pole of zeta_L at {omega}")
    return res


def _symmetric_real(terms):
    total = complex(np.sum(terms))
    return total.real, abs(total.imag)


def tube_formula_eval(dims, zeta_L_at_0, eps, return_residual=False):
    """Exact tube formula for a lattice string, truncated to ``|n| <= n_max``.

    ``V(eps) = sum_omega res(omega) (2 eps)**(1-omega) / (omega (1-omega))
    + 2 eps zeta_L(0)``. The pole sum is symmetric, so its imaginary part is
    a rounding residual; it is returned alongside the value when
    ``return_residual`` is true.
    """
    eps = check_positive_real(eps, "eps")
    w = dims.poles
    terms = dims.residues * np.exp((1.0 - w) * math.log(2 * eps)) / (w * (1.0 - w))
    value, residual = _symmetric_real(terms)
    value += 2 * eps * complex(zeta_L_at_0).real
    return (value, residual) if return_residual else value


def _cantor_dims(n_max):
    return lattice_poles(cantor_string(), n_max)


@functools.lru_cache(maxsize=32)
def _zeta_at_poles(D, p, n_max, evaluator):
    n = np.arange(-n_max, n_max + 1)
    vals = zeta(D + 1j * p * n, evaluator)
    vals.setflags(write=False)
    return vals


def _check_geometric_jump(S, x, tol):
    # jumps of N_L at reciprocal lengths 1/(l1 r^(n-1))
    k = math.log(x * S.l1) / math.log(1.0 / S.r)
    for n in (math.floor(k), math.ceil(k)):
        if n >= 0 and abs(x - 1.0 / (S.l1 * S.r**n)) < tol:
            raise NearJump(f"x={x} is within {tol} of the jump point {1.0 / (S.l1 * S.r**n)}")


def _check_spectral_jump(S, x, tol):
    n = 0
    while S.l1 * S.r**n * x >= 1 - tol:
        ell = S.l1 * S.r**n
        k = round(x * ell)
        if k >= 1 and abs(x - k / ell) < tol:
            raise NearJump(f"x={x} is within {tol} of the jump point {k / ell}")
        n += 1


def explicit_counting_geometric(x, n_max, S=None, jump_tol=1e-3, return_residual=False):
    """Geometric counting function from the complex dimensions.

    ``N_L(x) = sum_omega res(omega) x**omega / omega + zeta_L(0)``; for the
    Cantor string (the default) this is
    ``1/(2 log 3) sum_n x**(D+inp)/(D+inp) - 1``.
    """
    S = S or cantor_string()
    x = check_positive_real(x, "x")
    if x <= 1:
        raise ValueError("x must exceed 1")
    _check_geometric_jump(S, x, jump_tol)
    dims = lattice_poles(S, n_max)
    w = dims.poles
    value, residual = _symmetric_real(dims.residues * np.exp(w * math.log(x)) / w)
    value += geometric_zeta(S, 0).real
    return (value, residual) if return_residual else value


def explicit_counting_spectral(
    x, n_max, S=None, evaluator=None, jump_tol=1e-3, return_residual=False
):
    """Frequency counting function from the complex dimensions.

    ``N_nu(x) = zeta_L(1) x + sum_omega res(omega) zeta(omega) x**omega/omega
    + zeta_L(0) zeta(0)``. For the Cantor string ``zeta_L(1) = 1`` and the
    constant is ``(-1)(-1/2) = 1/2``.
    """
    S = S or cantor_string()
    ev = evaluator or DEFAULT_EVALUATOR
    x = check_positive_real(x, "x")
    if x <= 1:
        raise ValueError("x must exceed 1")
    _check_spectral_jump(S, x, jump_tol)
    dims = lattice_poles(S, n_max)
    w = dims.poles
    zw = _zeta_at_poles(dims.D, dims.p, dims.n_max, ev)
    value, residual = _symmetric_real(dims.residues * zw * np.exp(w * math.log(x)) / w)
    value += geometric_zeta(S, 1).real * x + geometric_zeta(S, 0).real * (-0.5)
    return (value, residual) if return_residual else value


# --------------------------------------------------------------------------
# Riemann's explicit formula
# --------------------------------------------------------------------------


def log_integral(x):
    """Principal-value ``Li(x) = int_0^x dt / log t`` (real ``x > 0``, ``x != 1``)."""
    x = check_positive_real(x, "x")
    if x == 1:
        raise ValueError("Li has a logarithmic singularity at x = 1")
    return float(expi(math.log(x)))


def log_integral_pv_quadrature(x, delta=1e-8):
    """``Li(x)`` by quadrature over ``(0, 1 - delta)`` and ``(1 + delta, x)``.

    Slow reference route. The integrand is split into the bounded part
    ``1/log t - 1/(t - 1)`` and the pole ``1/(t - 1)``; the two excised
    integrals of the pole cancel to ``log |x - 1|``.
    """
    x = check_positive_real(x, "x")

    def smooth(t):
        if abs(t - 1) < 1e-6:
            return 0.5 - (t - 1) / 12
        return 1.0 / math.log(t) - 1.0 / (t - 1.0)

    opts = dict(limit=400, epsabs=1e-13, epsrel=1e-13)
    if x <= 1 - delta:
        reg, _ = integrate.quad(smooth, 0.0, x, **opts)
        return reg + math.log(1.0 - x)
    left, _ = integrate.quad(smooth, 0.0, 1.0 - delta, **opts)
    right, _ = integrate.quad(smooth, 1.0 + delta, x, **opts)
    pole = math.log(delta) + (math.log(x - 1.0) - math.log(delta))
    return left + right + pole


def weighted_prime_count(x):
    """``Pi(x) = sum_{p^n <= x} 1/n``."""
    x = check_positive_real(x, "x")
    total = 0.0
    for p in primes_up_to(int(math.floor(x))):
        pn, n = int(p), 1
        while pn <= x:
            total += 1.0 / n
            pn *= int(p)
            n += 1
    return total


def _nearest_prime_power_distance(x):
    best = math.inf
    for p in primes_up_to(int(math.floor(x)) + 2):
        pn = int(p)
        while pn <= 2 * x + 2:
            best = min(best, abs(x - pn))
            pn *= int(p)
    return best


@functools.lru_cache(maxsize=8)
def _zeros_up_to_count(num_zeros, evaluator):
    zeros, t0, chunk = [], 0.0, 50.0
    while len(zeros) < num_zeros:
        zeros.extend(find_zeros_on_line(0.5, t0, t0 + chunk, evaluator=evaluator))
        t0 += chunk
    zeros = sorted(set(zeros))
    return tuple(zeros[:num_zeros])


def riemann_zeros(num_zeros, evaluator=None):
    """First ``num_zeros`` ordinates of zeros on the critical line, found by
    :func:`find_zeros_on_line`."""
    num_zeros = check_positive_int(num_zeros, "num_zeros")
    return np.array(_zeros_up_to_count(num_zeros, evaluator or DEFAULT_EVALUATOR))


def riemann_explicit_formula(x, num_zeros, evaluator=None, zeros=None):
    """Truncated explicit formula for ``Pi(x)``.

    ``Li(x) - sum_rho Li(x**rho) + int_x^inf dt / ((t**2 - 1) t log t) - log 2``
    with the zero sum over the first ``num_zeros`` conjugate pairs
    (``Li(x**rho)`` meaning ``Ei(rho log x)``).
    """
    x = check_positive_real(x, "x")
    if x < 2:
        raise ValueError("x must be >= 2")
    if _nearest_prime_power_distance(x) < 1e-6:
        raise PrimePowerPoint(f"x={x} is a prime power")
    gammas = riemann_zeros(num_zeros, evaluator) if zeros is None else np.asarray(zeros)
    gammas = gammas[:num_zeros]
    logx = math.log(x)
    rho = 0.5 + 1j * gammas
    zero_sum = 2.0 * expi(rho * logx).real.sum()
    tail, _ = integrate.quad(
        lambda t: 1.0 / ((t * t - 1.0) * t * math.log(t)), x, np.inf, epsabs=1e-13
    )
    return log_integral(x) - zero_sum + tail - math.log(2.0)


# --------------------------------------------------------------------------
# tables for the CLI
# --------------------------------------------------------------------------


def tube_table(S, eps_values, n_max):
    """Rows ``(eps, direct, formula, error)`` for a self-similar string."""
    dims = lattice_poles(S, n_max)
    z0 = geometric_zeta(S, 0)
    rows = []
    for eps in eps_values:
        direct = tube_volume(S, eps)
        formula = tube_formula_eval(dims, z0, eps)
        rows.append(
            {"eps": float(eps), "direct": direct, "formula": formula, "error": formula - direct}
        )
    return rows


def counting_table(kind, x_values, n_max, S=None, evaluator=None):
    """Rows ``(x, direct, formula)`` for ``kind`` in {"geometric", "spectral"}."""
    S = S or cantor_string()
    rows = []
    for x in x_values:
        if kind == "geometric":
            direct = geometric_counting(S, x)
            formula = explicit_counting_geometric(x, n_max, S)
        elif kind == "spectral":
            direct = spectral_counting(S, x)
            formula = explicit_counting_spectral(x, n_max, S, evaluator)
        else:
            raise ValueError(f"kind must be 'geometric' or 'spectral', got {kind!r}")
        rows.append({"x": float(x), "direct": int(direct), "formula": formula})
    return rows
