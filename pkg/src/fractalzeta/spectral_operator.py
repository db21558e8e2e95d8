"""The spectral operator ``zeta(d/dt)`` on a sampled weighted space.

Functions live on a uniform grid over ``[t_min, t_max]`` with weight
``exp(-2 c t)``. Every :class:`GridFunction` carries a declared compact
support and a callable that evaluates it off the grid; operators compose
those callables, so translates by ``log n`` (which never land on grid
nodes) are evaluated exactly whenever the input is known in closed form
and by linear interpolation of the samples otherwise.

Operators
---------
``shift``                 ``f(t - h)``
``apply_dirichlet``       ``sum_n f(t - log n)``
``apply_moebius_inverse`` ``sum_n mu(n) f(t - log n)``
``apply_euler_product``   truncated ``prod_p sum_m f(t - m log p)``
``apply_continued``       continuation valid for every ``c > 0``, ``c != 1``
``apply_multiplier_oracle`` FFT multiplier by ``zeta(c + i omega)`` etc.
"""
from __future__ import annotations

import math
import numbers
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import fft as sp_fft
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_positive_int, check_real
from .exceptions import (
    CEqualsOne,
    DomainExcluded,
    ExploratoryRegimeWarning,
    PadInsufficient,
    SupportOverflow,
    TableTooSmall,
    TailNotNegligible,
)
from .io import read_csv, write_csv
from .zeta_core import DEFAULT_EVALUATOR, moebius, primes_up_to, xi, zeta

__all__ = [
    "WeightedGrid",
    "GridFunction",
    "gaussian_bump",
    "random_bumps",
    "weighted_norm",
    "relative_weighted_error",
    "shift",
    "apply_dirichlet",
    "apply_euler_product",
    "apply_moebius_inverse",
    "resolvent_shift_minus_one",
    "apply_continued",
    "apply_multiplier_oracle",
    "required_pad",
    "grid_function_to_csv",
    "grid_function_from_csv",
    "SpectralOperator",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20240611
_ZERO_TOL = 1e-14
_LOG_WRAP = math.log(1e10)
_ENTIRE_SIDE_PAD = 4.0
_EDGE = 1e-12


@dataclass(frozen=True)
class WeightedGrid:
    """Uniform grid on ``[t_min, t_max]`` for the space with weight ``exp(-2ct)``."""

    c: float
    t_min: float
    t_max: float
    n_points: int = 1024

    def __post_init__(self):
        object.__setattr__(self, "c", check_real(self.c, "c"))
        object.__setattr__(self, "t_min", check_real(self.t_min, "t_min"))
        object.__setattr__(self, "t_max", check_real(self.t_max, "t_max"))
        n = check_positive_int(self.n_points, "n_points", minimum=256)
        if n & (n - 1):
            raise ValueError(f"n_points must be a power of two, got {n}")
        object.__setattr__(self, "n_points", n)
        if not self.t_min < self.t_max:
            raise ValueError("t_min must be < t_max")

    @property
    def step(self):
        return (self.t_max - self.t_min) / (self.n_points - 1)

    @property
    def nodes(self):
        return np.linspace(self.t_min, self.t_max, self.n_points)

    @property
    def weights(self):
        w = np.exp(-2.0 * self.c * self.nodes) * self.step
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def with_c(self, c):
        return WeightedGrid(c, self.t_min, self.t_max, self.n_points)

    def contains(self, a, b):
        tol = _EDGE * max(1.0, abs(self.t_min), abs(self.t_max))
        return self.t_min - tol <= a and b <= self.t_max + tol


class GridFunction:
    """Samples of a compactly supported function on a :class:`WeightedGrid`.

    Parameters
    ----------
    grid : WeightedGrid
    samples : array_like
        Values at ``grid.nodes``; must vanish (to 1e-14) outside ``support``.
    support : (float, float), optional
        Declared support ``[a, b]``. Defaults to the hull of the nonzero samples.
    func : callable, optional
        Exact evaluator used off the grid. Without it the samples are
        interpolated linearly.
    overflow : bool
        True when the mathematical result has mass beyond the window.
    lost_tail_bound : float
        Bound on the weighted norm lost beyond the window (``inf`` if unknown).
    """

    __slots__ = ("grid", "samples", "support", "func", "overflow", "lost_tail_bound")

    def __init__(self, grid, samples, support=None, func=None, overflow=False,
                 lost_tail_bound=0.0):
        samples = np.array(samples, dtype=np.complex128).ravel()
        if samples.size != grid.n_points:
            raise ValueError(f"expected {grid.n_points} samples, got {samples.size}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        nodes = grid.nodes
        if support is None:
            nz = np.flatnonzero(np.abs(samples) > _ZERO_TOL)
            if nz.size == 0:
                support = (grid.t_min, grid.t_min)
            else:
                lo, hi = max(nz[0] - 1, 0), min(nz[-1] + 1, grid.n_points - 1)
                support = (nodes[lo], nodes[hi])
        a, b = (float(v) for v in support)
        if a > b:
            raise ValueError("support must satisfy a <= b")
        if not grid.contains(a, b):
            raise SupportOverflow(f"support [{a}, {b}] leaves the window")
        outside = (nodes < a - _EDGE) | (nodes > b + _EDGE)
        if np.any(np.abs(samples[outside]) > _ZERO_TOL):
            raise ValueError("samples do not vanish outside the declared support")
        samples[outside] = 0.0
        samples.setflags(write=False)
        self.grid = grid
        self.samples = samples
        self.support = (a, b)
        self.func = func
        self.overflow = bool(overflow)
        self.lost_tail_bound = float(lost_tail_bound)

    @classmethod
    def from_callable(cls, grid, func, support, **kwargs):
        a, b = support
        t = grid.nodes
        inside = (t >= a) & (t <= b)
        samples = np.zeros(t.size, dtype=np.complex128)
        samples[inside] = func(t[inside])
        return cls(grid, samples, support=support, func=func, **kwargs)

    def __call__(self, t):
        """Evaluate at arbitrary ``t``; zero outside the declared support."""
        t = np.asarray(t, dtype=float)
        a, b = self.support
        out = np.zeros(t.shape, dtype=np.complex128)
        inside = (t >= a) & (t <= b)
        if not np.any(inside):
            return out
        ti = t[inside]
        if self.func is not None:
            out[inside] = self.func(ti)
        else:
            nodes = self.grid.nodes
            out[inside] = np.interp(ti, nodes, self.samples.real) + 1j * np.interp(
                ti, nodes, self.samples.imag
            )
        return out

    @property
    def t(self):
        return self.grid.nodes

    def __repr__(self):
        a, b = self.support
        exact = "exact" if self.func is not None else "interpolated"
        return f"GridFunction(c={self.grid.c}, support=[{a:.6g}, {b:.6g}], {exact})"


class _Gaussian:
    def __init__(self, center, sigma, amplitude):
        self.center, self.sigma, self.amplitude = center, sigma, amplitude

    def __call__(self, t):
        z = (np.asarray(t, dtype=float) - self.center) / self.sigma
        return self.amplitude * np.exp(-0.5 * z * z)


# Gaussian truncated where it falls below 1e-16 of its peak
_BUMP_HALF_WIDTH = math.sqrt(2.0 * math.log(1e16))


def gaussian_bump(grid, center, sigma, amplitude=1.0):
    """Gaussian of width ``sigma`` cut off where it drops below ``1e-16``."""
    half = _BUMP_HALF_WIDTH * sigma
    support = (center - half, center + half)
    return GridFunction.from_callable(grid, _Gaussian(center, sigma, amplitude), support)


def random_bumps(grid, count=20, seed=DEFAULT_SEED, sigma_range=(0.12, 0.25),
                 center_range=None, amplitude_range=(0.5, 1.5)):
    """Reproducible family of Gaussian bumps.

    Centers default to the first fifth of the window (after leaving room for
    the widest bump), so that Dirichlet translates stay inside the grid.
    """
    count = check_positive_int(count, "count")
    rng = np.random.default_rng(seed)
    widest = _BUMP_HALF_WIDTH * sigma_range[1]
    if center_range is None:
        lo = grid.t_min + widest
        center_range = (lo, lo + 0.2 * (grid.t_max - grid.t_min))
    bumps = []
    for _ in range(count):
        sigma = rng.uniform(*sigma_range)
        center = rng.uniform(*center_range)
        amp = rng.uniform(*amplitude_range)
        bumps.append(gaussian_bump(grid, center, sigma, amp))
    return bumps


def weighted_norm(f):
    """Trapezoid approximation of ``(int exp(-2ct) |f|^2 dt)^(1/2)``."""
    return float(math.sqrt(np.sum(f.grid.weights * np.abs(f.samples) ** 2)))


def relative_weighted_error(f, reference):
    diff = GridFunction(reference.grid, f.samples - reference.samples,
                        support=(reference.grid.t_min, reference.grid.t_max))
    return weighted_norm(diff) / weighted_norm(reference)


def shift(f, h_shift):
    """Translate: ``(shift f)(t) = f(t - h_shift)``."""
    h_shift = check_real(h_shift, "h_shift")
    if h_shift == 0.0:
        return GridFunction(f.grid, f.samples, f.support, f.func, f.overflow,
                            f.lost_tail_bound)
    a, b = f.support
    support = (a + h_shift, b + h_shift)
    if not f.grid.contains(*support):
        raise SupportOverflow(f"shift by {h_shift} moves the support outside the window")

    def shifted(t):
        return f(np.asarray(t) - h_shift)

    return GridFunction.from_callable(f.grid, shifted, support)


# --------------------------------------------------------------------------
# finite sums over log-translates
# --------------------------------------------------------------------------


def _pairs(sorted_args, lows, highs):
    """Index pairs ``(k, j)`` with ``lows[k] <= sorted_args[j] <= highs[k]``."""
    lo = np.searchsorted(sorted_args, lows, side="left")
    hi = np.searchsorted(sorted_args, highs, side="right")
    counts = np.maximum(hi - lo, 0)
    total = int(counts.sum())
    k = np.repeat(np.arange(lows.size), counts)
    starts = np.repeat(lo, counts)
    offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    return k, starts + offsets


class _LogTranslateSum:
    """``t -> sum_k coef[k] f(t - log n[k])`` restricted to the support of f."""

    def __init__(self, f, ns, coef):
        keep = np.asarray(coef) != 0
        self.f = f
        self.logs = np.log(np.asarray(ns, dtype=float)[keep])
        self.coef = np.asarray(coef, dtype=float)[keep]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        out = np.zeros(flat.size, dtype=np.complex128)
        if flat.size == 0 or self.logs.size == 0:
            return out.reshape(t.shape)
        a, b = self.f.support
        order = np.argsort(flat, kind="stable")
        sorted_t = flat[order]
        # f(t - log n) is nonzero only for a + log n <= t <= b + log n
        k, j = _pairs(sorted_t, a + self.logs, b + self.logs)
        if k.size:
            vals = self.f(sorted_t[j] - self.logs[k]) * self.coef[k]
            np.add.at(out, order[j], vals)
        return out.reshape(t.shape)


def _tail_bound(f, count_bound_log):
    """Bound on the weighted norm beyond ``t_max`` of ``sum_{n <= e^(t-a)} |f(t - log n)|``."""
    grid = f.grid
    c = grid.c
    a = f.support[0]
    m = float(np.max(np.abs(f.samples))) if f.samples.size else 0.0
    if m == 0.0:
        return 0.0
    if c <= 1.0 or not count_bound_log:
        return math.inf
    T = grid.t_max
    # |g(t)| <= m (e^(t-a) + 1)
    val = (
        math.exp(-2 * a + (2 - 2 * c) * T) / (2 * c - 2)
        + 2 * math.exp(-a + (1 - 2 * c) * T) / (2 * c - 1)
        + math.exp(-2 * c * T) / (2 * c)
    )
    return m * math.sqrt(val)


def _finite_sum_output(f, ns, coef):
    g = _LogTranslateSum(f, ns, coef)
    grid = f.grid
    support = (f.support[0], grid.t_max)
    out = GridFunction.from_callable(grid, g, support)
    scale = float(np.max(np.abs(out.samples))) if out.samples.size else 0.0
    overflow = scale > 0 and abs(out.samples[-1]) > _ZERO_TOL * scale
    out.overflow = bool(overflow)
    out.lost_tail_bound = _tail_bound(f, True) if overflow else 0.0
    return out


def _max_n(f):
    # largest n with t - log n >= a for some node t
    return max(1, int(math.floor(math.exp(f.grid.t_max - f.support[0]) * (1 + 1e-12))))


def apply_dirichlet(f):
    """Quantized Dirichlet series ``a(f)(t) = sum_{n >= 1} f(t - log n)``.

    Only ``n <= exp(t - a)`` contribute at node ``t``, so the sum is finite.
    The result is supported on ``[a, t_max]``; ``overflow`` records that the
    exact result continues past the window, with ``lost_tail_bound``
    bounding the weighted norm that was cut.
    """
    N = _max_n(f)
    return _finite_sum_output(f, np.arange(1, N + 1), np.ones(N))


def apply_moebius_inverse(f, table=None):
    """``sum_n mu(n) f(t - log n)``, the inverse of :func:`apply_dirichlet`.

    ``table`` may be a precomputed :class:`~fractalzeta.zeta_core.MoebiusTable`;
    :class:`TableTooSmall` is raised if it does not reach the largest ``n``
    needed.
    """
    N = _max_n(f)
    if table is None:
        table = moebius(N)
    elif table.limit < N:
        raise TableTooSmall(f"Moebius table stops at {table.limit}, need {N}")
    if 0 < f.grid.c < 0.5:
        warnings.warn(
            f"Moebius inversion at c={f.grid.c} in (0, 1/2) is exploratory",
            ExploratoryRegimeWarning,
            stacklevel=2,
        )
    mu = np.asarray(table.values[1 : N + 1], dtype=float)
    return _finite_sum_output(f, np.arange(1, N + 1), mu)


def _smooth_numbers(primes, m_max, limit):
    ns = [1]
    for p in primes:
        nxt = []
        for n in ns:
            pk = n
            for _ in range(m_max + 1):
                if pk > limit:
                    break
                nxt.append(pk)
                pk *= p
        ns = nxt
    return np.array(sorted(ns), dtype=np.int64)


def apply_euler_product(f, primes, m_max):
    """Truncated quantized Euler product ``prod_p sum_{m <= m_max} f(t - m log p)``.

    The composition of the factors is expanded into the equivalent single
    sum over the integers ``n = prod p^(e_p)`` with ``e_p <= m_max``; by
    unique factorization each such ``n`` appears once.
    """
    m_max = check_positive_int(m_max, "m_max", minimum=0)
    plist = []
    for p in primes:
        if isinstance(p, bool) or not isinstance(p, numbers.Integral):
            raise TypeError("primes must be integers")
        p = int(p)
        if p < 2 or primes_up_to(p)[-1] != p:
            raise ValueError(f"{p} is not a prime")
        plist.append(p)
    plist = sorted(set(plist))
    if not plist or m_max == 0:
        return GridFunction(f.grid, f.samples, f.support, f.func)
    ns = _smooth_numbers(plist, m_max, _max_n(f))
    return _finite_sum_output(f, ns, np.ones(ns.size))


# --------------------------------------------------------------------------
# resolvent and the continued operator
# --------------------------------------------------------------------------

_GL = {k: np.polynomial.legendre.leggauss(k) for k in (8, 16, 32, 64)}


class _ExpWeightedIntegral:
    """``I(x) = int_a^x exp(-v) f(v) dv`` for ``x`` clamped into ``[a, b]``.

    Gauss--Legendre on panels aligned with the grid cells (where a sampled
    ``f`` has its kinks), with node doubling until successive panel sums
    agree to ``rtol``.
    """

    def __init__(self, f, rtol=1e-14):
        self.f = f
        a, b = f.support
        self.a, self.b = a, b
        nodes = f.grid.nodes
        inner = nodes[(nodes > a) & (nodes < b)]
        self.breaks = np.concatenate([[a], inner, [b]]) if b > a else np.array([a, a])
        prev = None
        for k in sorted(_GL):
            self.k = k
            panels = self._panels(self.breaks[:-1], self.breaks[1:], k)
            if prev is not None:
                scale = max(np.sum(np.abs(panels)), 1e-300)
                if np.sum(np.abs(panels - prev)) <= rtol * scale:
                    break
            prev = panels
        self.cum = np.concatenate([[0.0], np.cumsum(panels)])

    def _panels(self, lo, hi, k):
        x, w = _GL[k]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        v = mid[:, None] + half[:, None] * x[None, :]
        vals = np.exp(-v) * self.f(v)
        return (vals * w[None, :]).sum(axis=1) * half

    def __call__(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.a, self.b)
        flat = x.ravel()
        idx = np.clip(np.searchsorted(self.breaks, flat, side="right") - 1, 0,
                      self.breaks.size - 2)
        left = self.breaks[idx]
        partial = np.zeros(flat.size, dtype=np.complex128)
        need = flat > left
        if np.any(need):
            partial[need] = self._panels(left[need], flat[need], self.k)
        return (self.cum[idx] + partial).reshape(x.shape)

    @property
    def total(self):
        return complex(self.cum[-1])


def _check_c(c):
    if abs(c - 1.0) < 1e-6:
        raise CEqualsOne("c = 1 lies on the pole of 1/(d/dt - 1)")


class _Resolvent:
    def __init__(self, I, c):
        self.I, self.c = I, c

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.c > 1:
            # u(t) = int_{-inf}^t e^(t - v) g(v) dv
            return np.where(t >= self.I.a, np.exp(t) * self.I(np.minimum(t, self.I.b)), 0)
        # u(t) = -int_t^inf e^(t - v) g(v) dv
        return np.where(
            t <= self.I.b, -np.exp(t) * (self.I.total - self.I(np.maximum(t, self.I.a))), 0
        )


def resolvent_shift_minus_one(g):
    """Solve ``u' - u = g`` with ``u`` in the weighted space.

    For ``c > 1`` the solution is ``int_{-inf}^t e^(t - v) g(v) dv``
    (supported on ``[a, t_max]``); for ``c < 1`` it is
    ``-int_t^inf e^(t - v) g(v) dv`` (supported on ``[t_min, b]``).
    """
    c = g.grid.c
    _check_c(c)
    u = _Resolvent(_ExpWeightedIntegral(g), c)
    support = (g.support[0], g.grid.t_max) if c > 1 else (g.grid.t_min, g.support[1])
    return GridFunction.from_callable(g.grid, u, support)


class _Continued:
    def __init__(self, f, c, tau_max):
        self.I = _ExpWeightedIntegral(f)
        self.resolvent = _Resolvent(self.I, c)
        self.dirichlet = _LogTranslateSum(f, np.arange(1, _max_n(f) + 1), np.ones(_max_n(f)))
        self.log_tau_max = math.log(tau_max)

    def integral(self, t):
        # int_1^tau_max f(t - log tau) dtau = e^t int_{t - log tau_max}^t e^(-v) f(v) dv
        lo = np.maximum(t - self.log_tau_max, self.I.a)
        return np.where(
            t >= self.I.a, np.exp(t) * (self.I(np.minimum(t, self.I.b)) - self.I(lo)), 0
        )

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.resolvent(t) + self.dirichlet(t) - self.integral(t)


def apply_continued(f, tau_max=None, tail_tol=1e-10):
    """Continued operator ``R f + int_1^inf (f(t - log [tau]) - f(t - log tau)) dtau``.

    ``R`` is :func:`resolvent_shift_minus_one`. With compactly supported
    ``f`` both the integer sum and the integral are finite, reaching
    ``tau = exp(t_max - a)``; a smaller ``tau_max`` truncates the integral
    and raises :class:`TailNotNegligible` when the dropped part exceeds
    ``tail_tol`` relative to the result. Valid for every ``c > 0`` except
    ``c = 1``; for ``c > 1`` it equals :func:`apply_dirichlet`.
    """
    c = f.grid.c
    if c <= 0:
        raise DomainExcluded("the continued operator needs c > 0")
    _check_c(c)
    needed = math.exp(f.grid.t_max - f.support[0])
    tau_max = needed if tau_max is None else float(tau_max)
    if tau_max < 1:
        raise ValueError("tau_max must be >= 1")
    op = _Continued(f, c, tau_max)
    support = (f.support[0], f.grid.t_max) if c > 1 else (f.grid.t_min, f.grid.t_max)
    out = GridFunction.from_callable(f.grid, op, support)
    if tau_max < needed:
        full = _Continued(f, c, needed)
        t = f.grid.nodes
        dropped = np.abs(full.integral(t) - op.integral(t))
        scale = max(float(np.max(np.abs(out.samples))), 1e-300)
        bound = float(np.max(dropped))
        if bound > tail_tol * scale:
            raise TailNotNegligible(
                f"integral truncated at tau={tau_max:g} drops up to {bound:.3g} (needs {needed:.6g})"
            )
    scale = float(np.max(np.abs(out.samples)))
    out.overflow = bool(scale > 0 and (
        abs(out.samples[-1]) > _ZERO_TOL * scale or abs(out.samples[0]) > _ZERO_TOL * scale
    ))
    out.lost_tail_bound = _tail_bound(f, True) if out.overflow else 0.0
    return out


# --------------------------------------------------------------------------
# Fourier multiplier oracle
# --------------------------------------------------------------------------

_NAMED = ("zeta", "xi", "xi_reflected")


def required_pad(func, c):
    """Padding ``(left, right)`` that keeps wrap-around below ``1e-10``.

    The output of a multiplier with a pole at distance ``d`` from the line
    ``Re s = c`` decays like ``exp(-d |t|)`` on the side facing the pole.
    """
    if func == "zeta":
        _check_c(c)
        if c < 1:
            return _LOG_WRAP / (1 - c), _ENTIRE_SIDE_PAD
        return _ENTIRE_SIDE_PAD, _LOG_WRAP / (c - 1)
    if func in ("xi", "xi_reflected"):
        _check_c(c)
        if abs(c) < 1e-6:
            raise DomainExcluded("c = 0 lies on a pole of xi")
        d = min(abs(c), abs(1 - c))
        return _LOG_WRAP / d, _LOG_WRAP / d
    raise ValueError(f"func must be one of {_NAMED} or a callable, got {func!r}")


def _multiplier(func, s, evaluator):
    if func == "zeta":
        return zeta(s, evaluator)
    if func == "xi":
        return xi(s, evaluator)
    if func == "xi_reflected":
        return xi(1.0 - s, evaluator)
    return np.asarray(func(s), dtype=np.complex128)


def apply_multiplier_oracle(f, func="zeta", pad=None, evaluator=None, band_tol=1e-16):
    """Apply ``func(c + i omega)`` as a Fourier multiplier.

    ``f`` is mapped to ``exp(-ct) f(t)``, zero-padded by ``pad = (left,
    right)`` (or a single number for both sides), transformed with the FFT,
    multiplied by ``func(c + i omega)`` on the frequencies where the
    spectrum exceeds ``band_tol`` of its peak, transformed back and
    reweighted. ``func`` is ``"zeta"``, ``"xi"``, ``"xi_reflected"``
    (``s -> xi(1 - s)``) or a vectorized callable of ``s``; callables need
    an explicit ``pad``. A pad below :func:`required_pad` raises
    :class:`PadInsufficient`.
    """
    ev = evaluator or DEFAULT_EVALUATOR
    grid = f.grid
    c, h = grid.c, grid.step
    named = isinstance(func, str)
    if named:
        need = required_pad(func, c)
        if pad is None:
            pad = need
    elif not callable(func):
        raise TypeError("func must be a name or a callable")
    elif pad is None:
        raise ValueError("a callable multiplier needs an explicit pad")
    if isinstance(pad, numbers.Real):
        pad = (float(pad), float(pad))
    left, right = (float(p) for p in pad)
    if left < 0 or right < 0:
        raise ValueError("pad must be nonnegative")
    if named and (left < need[0] * (1 - 1e-12) or right < need[1] * (1 - 1e-12)):
        raise PadInsufficient(
            f"pad ({left:g}, {right:g}) is below the required ({need[0]:.4g}, {need[1]:.4g})"
        )
    n_left = int(math.ceil(left / h))
    n_right = int(math.ceil(right / h))
    length = sp_fft.next_fast_len(grid.n_points + n_left + n_right)
    n_right = length - grid.n_points - n_left
    t_ext = grid.t_min + h * np.arange(-n_left, grid.n_points + n_right)
    F = np.exp(-c * t_ext) * f(t_ext)
    spec = sp_fft.fft(F)
    omega = 2 * np.pi * sp_fft.fftfreq(length, h)
    band = np.abs(spec) > band_tol * np.max(np.abs(spec)) if np.any(spec) else np.zeros(length, bool)
    mult = np.zeros(length, dtype=np.complex128)
    if np.any(band):
        mult[band] = _multiplier(func, c + 1j * omega[band], ev)
    G = sp_fft.ifft(spec * mult)[n_left : n_left + grid.n_points]
    samples = np.exp(c * grid.nodes) * G
    return GridFunction(grid, samples, support=(grid.t_min, grid.t_max))


# --------------------------------------------------------------------------
# CSV exchange
# --------------------------------------------------------------------------

CSV_HEADER = ("t", "re", "im")


def grid_function_to_csv(f, path):
    rows = zip(f.grid.nodes.tolist(), f.samples.real.tolist(), f.samples.imag.tolist())
    return write_csv(path, CSV_HEADER, rows)


def grid_function_from_csv(path, c, support=None):
    """Read ``t, re, im`` rows; the ``t`` column must be a uniform grid."""
    rows = np.array(read_csv(path, CSV_HEADER), dtype=float)
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise ValueError(f"{path}: no samples")
    t = rows[:, 0]
    grid = WeightedGrid(c, float(t[0]), float(t[-1]), int(t.size))
    if np.max(np.abs(t - grid.nodes)) > 1e-9 * max(1.0, np.max(np.abs(t))):
        raise ValueError(f"{path}: t column is not a uniform grid")
    return GridFunction(grid, rows[:, 1] + 1j * rows[:, 2], support=support)


# --------------------------------------------------------------------------
# estimator interface
# --------------------------------------------------------------------------

_KINDS = ("dirichlet", "moebius", "euler", "continued", "oracle")


class SpectralOperator(TransformerMixin, BaseEstimator):
    """Apply one of the quantized operators row-wise to sampled functions.

    Each row of ``X`` holds the samples of one function on the grid
    ``(c, t_min, t_max, n_points)``; its support is the hull of its nonzero
    samples. ``kind`` selects the operator; ``func`` and ``pad`` are passed
    to the multiplier oracle and ``primes``/``m_max`` to the Euler product.

    Examples
    --------
    >>> import numpy as np
    >>> op = SpectralOperator(kind="dirichlet", c=2.0, t_min=-1.0, t_max=4.0, n_points=256)
    >>> X = np.zeros((1, 256)); X[0, 10:20] = 1.0
    >>> op.fit_transform(X).shape
    (1, 256)
    """

    def __init__(self, kind="dirichlet", c=2.0, t_min=-1.0, t_max=5.0, n_points=1024,
                 func="zeta", pad=None, primes=(2, 3, 5, 7), m_max=8):
        self.kind = kind
        self.c = c
        self.t_min = t_min
        self.t_max = t_max
        self.n_points = n_points
        self.func = func
        self.pad = pad
        self.primes = primes
        self.m_max = m_max

    def _check_X(self, X):
        X = np.asarray(X)
        if X.dtype.kind not in "biufc":
            raise TypeError("X must be numeric")
        if X.ndim != 2:
            raise ValueError(f"X must be 2-d (n_functions, n_points), got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("X must be finite")
        return X.astype(np.complex128)

    def fit(self, X, y=None):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        grid = WeightedGrid(self.c, self.t_min, self.t_max, self.n_points)
        X = self._check_X(X)
        if X.shape[1] != grid.n_points:
            raise ValueError(f"X has {X.shape[1]} columns, the grid has {grid.n_points}")
        self.grid_ = grid
        self.n_features_in_ = grid.n_points
        return self

    def _apply(self, f):
        if self.kind == "dirichlet":
            return apply_dirichlet(f)
        if self.kind == "moebius":
            return apply_moebius_inverse(f)
        if self.kind == "euler":
            return apply_euler_product(f, self.primes, self.m_max)
        if self.kind == "continued":
            return apply_continued(f)
        return apply_multiplier_oracle(f, self.func, self.pad)

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = self._check_X(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        return np.vstack([self._apply(GridFunction(self.grid_, row)).samples for row in X])
