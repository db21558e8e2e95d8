"""Evaluation of the Riemann zeta function and its companions.

The continuation of ``zeta`` uses Euler--Maclaurin summation with an explicit
remainder bound, switching to the functional equation left of ``Re(s) = 0``.
``zeta_via_integral`` evaluates the same function through the integral
representation ``1/(s-1) + int_1^inf ([t]^-s - t^-s) dt`` and serves as an
independent check in the critical strip.

All evaluators accept scalars or array-likes; array input returns an array of
the same length.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import bernoulli, loggamma

from ._validation import (
    as_complex_array,
    check_positive_int,
    check_positive_real,
    check_real,
)
from .exceptions import (
    AccuracyNotReached,
    DomainError,
    DomainExcluded,
    PoleAtOne,
    TailNotNegligible,
    ZeroConfirmationWarning,
)

__all__ = [
    "ZetaEvaluator",
    "MoebiusTable",
    "ZeroSearchResult",
    "zeta",
    "zeta_via_integral",
    "xi",
    "moebius",
    "primes_up_to",
    "euler_product_partial",
    "find_zeros_on_line",
    "winding_number",
]

MAX_EM_ORDER = 30
_POLE_RADIUS = 1e-12

# B_{2k} / (2k)! for k = 1 .. MAX_EM_ORDER + 1
_B = bernoulli(2 * (MAX_EM_ORDER + 1))
_EM_COEF = np.array(
    [_B[2 * k] / math.factorial(2 * k) for k in range(1, MAX_EM_ORDER + 2)]
)


# --------------------------------------------------------------------------
# log-gamma and log-sine (internal)
# --------------------------------------------------------------------------


def _log_sin(z):
    """log(sin z) without overflow for large |Im z| (branch irrelevant)."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty_like(z)
    upper = z.imag >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        zu = z[upper]
        out[upper] = -1j * zu + np.log((np.exp(2j * zu) - 1.0) / 2j)
        zl = z[~upper]
        out[~upper] = 1j * zl + np.log((1.0 - np.exp(-2j * zl)) / 2j)
    return out


def _loggamma(z):
    return loggamma(np.atleast_1d(np.asarray(z, dtype=np.complex128)))


# --------------------------------------------------------------------------
# Zeta
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ZetaEvaluator:
    """Accuracy configuration for :func:`zeta` and everything built on it.

    Parameters
    ----------
    series_cutoff : int
        Minimum number of terms summed directly before the Euler--Maclaurin
        correction. Larger ``|Im s|`` automatically raises the cutoff.
    em_order : int
        Number of Bernoulli correction terms.
    target_abs_error : float
        Absolute error certified by the remainder bound.
    max_cutoff : int
        Largest direct-sum length tried before giving up with
        :class:`AccuracyNotReached`.
    """

    series_cutoff: int = 20
    em_order: int = 16
    target_abs_error: float = 1e-10
    max_cutoff: int = 2**18

    def __post_init__(self):
        check_positive_int(self.series_cutoff, "series_cutoff", minimum=10)
        check_positive_int(self.em_order, "em_order", minimum=0)
        if self.em_order > MAX_EM_ORDER:
            raise ValueError(f"em_order must be <= {MAX_EM_ORDER}")
        check_positive_real(self.target_abs_error, "target_abs_error")
        check_positive_int(self.max_cutoff, "max_cutoff", minimum=self.series_cutoff)

    def zeta(self, s):
        return zeta(s, self)

    def xi(self, s):
        return xi(s, self)

    def get_params(self):
        return {
            "series_cutoff": self.series_cutoff,
            "em_order": self.em_order,
            "target_abs_error": self.target_abs_error,
            "max_cutoff": self.max_cutoff,
        }


DEFAULT_EVALUATOR = ZetaEvaluator()


def _em_block(s, N, M):
    """Euler--Maclaurin value and remainder bound for a block sharing cutoff N."""
    logn = np.log(np.arange(1, N, dtype=float))
    head = np.zeros(s.shape, dtype=np.complex128)
    rows = max(1, 2_000_000 // max(N, 1))
    for lo in range(0, s.size, rows):
        blk = s[lo : lo + rows]
        head[lo : lo + rows] = np.exp(-np.outer(blk, logn)).sum(axis=1)
    n_pow = np.exp(-s * math.log(N))
    total = head + N * n_pow / (s - 1.0) + 0.5 * n_pow
    poch = s.copy()
    npow = n_pow / N
    inv_n2 = 1.0 / (N * N)
    for k in range(1, M + 1):
        total += _EM_COEF[k - 1] * poch * npow
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        npow = npow * inv_n2
    sigma = s.real
    nxt = np.abs(_EM_COEF[M] * poch * npow)
    denom = sigma + 2 * M + 1
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = np.where(denom > 0, nxt * np.abs(s + 2 * M + 1) / denom, np.inf)
    return total, bound


def _zeta_em(s, ev, target):
    """Euler--Maclaurin evaluation for Re(s) >= 0 with per-point cutoffs."""
    M = ev.em_order
    out = np.empty_like(s)
    need = np.maximum(ev.series_cutoff, np.ceil(np.abs(s + 2 * M) / math.pi) + 1)
    # round cutoffs up to a geometric ladder so points can share a block
    ladder = ev.series_cutoff * 2.0 ** np.ceil(np.log2(need / ev.series_cutoff))
    cutoff = ladder.astype(np.int64)
    pending = np.arange(s.size)
    target = np.broadcast_to(target, s.shape)
    while pending.size:
        if cutoff[pending].min() > ev.max_cutoff:
            raise AccuracyNotReached(
                f"Euler-Maclaurin bound above {target[pending].min():.3g} "
                f"with cutoff {ev.max_cutoff}"
            )
        nxt_pending = []
        for N in np.unique(cutoff[pending]):
            idx = pending[cutoff[pending] == N]
            if N > ev.max_cutoff:
                raise AccuracyNotReached(
                    f"Euler-Maclaurin cutoff {N} exceeds max_cutoff={ev.max_cutoff}"
                )
            val, bound = _em_block(s[idx], int(N), M)
            ok = bound <= target[idx]
            out[idx[ok]] = val[ok]
            bad = idx[~ok]
            cutoff[bad] *= 2
            nxt_pending.append(bad)
        pending = np.concatenate(nxt_pending) if nxt_pending else np.array([], int)
    return out


def _log_chi(s):
    """log of 2^s pi^(s-1) sin(pi s/2) Gamma(1-s)."""
    return (
        s * math.log(2.0)
        + (s - 1.0) * math.log(math.pi)
        + _log_sin(0.5 * math.pi * s)
        + _loggamma(1.0 - s)
    )


def _zeta_array(s, ev, target=None):
    target = ev.target_abs_error if target is None else target
    if np.any(np.abs(s - 1.0) < _POLE_RADIUS):
        raise PoleAtOne("zeta has a simple pole at s = 1")
    out = np.empty_like(s)
    left = s.real < 0
    if np.any(~left):
        out[~left] = _zeta_em(s[~left], ev, target)
    if np.any(left):
        sl = s[left]
        with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
            log_chi = _log_chi(sl)
            scale = np.exp(log_chi.real)
            # reflected value must be accurate relative to the amplification factor
            tgt = target / np.maximum(scale, 1.0)
            reflected = _zeta_em(1.0 - sl, ev, tgt)
            out[left] = np.exp(log_chi) * reflected
            out[left] = np.where(np.isfinite(out[left]), out[left], 0.0)
    return out


def zeta(s, evaluator=None):
    """Riemann zeta function on C minus {1}.

    Parameters
    ----------
    s : complex or array-like of complex
    evaluator : ZetaEvaluator, optional

    Raises
    ------
    PoleAtOne
        If any ``|s - 1| < 1e-12``.
    AccuracyNotReached
        If the remainder bound cannot reach ``target_abs_error``.
    """
    ev = evaluator or DEFAULT_EVALUATOR
    arr, scalar = as_complex_array(s)
    out = _zeta_array(arr, ev)
    return complex(out[0]) if scalar else out


def xi(s, evaluator=None):
    """Completed zeta ``pi^(-s/2) Gamma(s/2) zeta(s)``.

    ``s = 0`` and ``s = 1`` raise :class:`DomainExcluded`.
    """
    ev = evaluator or DEFAULT_EVALUATOR
    arr, scalar = as_complex_array(s)
    if np.any(np.abs(arr) < _POLE_RADIUS) or np.any(np.abs(arr - 1.0) < _POLE_RADIUS):
        raise DomainExcluded("xi is evaluated away from s = 0 and s = 1")
    with np.errstate(over="ignore", under="ignore"):
        factor = np.exp(-0.5 * arr * math.log(math.pi) + _loggamma(0.5 * arr))
    out = factor * _zeta_array(arr, ev)
    return complex(out[0]) if scalar else out


# --------------------------------------------------------------------------
# Integral representation (independent path for 0 < Re s)
# --------------------------------------------------------------------------

_GL_NODES_CACHE = {}


def _gauss_legendre(n):
    if n not in _GL_NODES_CACHE:
        _GL_NODES_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_NODES_CACHE[n]


def _sawtooth_integral(s, K, nodes):
    """int_1^K (floor(t)^-s - t^-s) dt by Gauss-Legendre on each [n, n+1]."""
    x, w = _gauss_legendre(nodes)
    n = np.arange(1, K, dtype=float)
    t = n[:, None] + 0.5 * (x[None, :] + 1.0)
    logt = np.log(t).ravel()
    wt = np.tile(0.5 * w, n.size)
    logn = np.log(n)
    # each unit interval has length one, so floor(t)^-s integrates to n^-s
    return np.exp(-np.outer(s, logn)).sum(axis=1) - np.exp(-np.outer(s, logt)) @ wt


def zeta_via_integral(
    s, quad_cutoff=1000, tol=1e-10, nodes=10, tail_terms=6, max_nodes=320
):
    """Zeta for ``Re(s) > 0`` from ``1/(s-1) + int_1^inf ([t]^-s - t^-s) dt``.

    The integral over ``[1, quad_cutoff]`` is computed by Gauss--Legendre
    quadrature on every unit interval; the node count doubles until two
    successive rules agree to ``tol / 10`` (at most ``max_nodes``). The remainder over ``[quad_cutoff, inf)`` is given
    by its asymptotic expansion in powers of ``1/quad_cutoff``; the first
    omitted term serves as the tail bound.

    Raises
    ------
    PoleAtOne
    DomainError
        If ``Re(s) <= 0``.
    TailNotNegligible
        If the tail or quadrature error bound exceeds ``tol``.
    """
    arr, scalar = as_complex_array(s)
    K = check_positive_int(quad_cutoff, "quad_cutoff", minimum=2)
    if np.any(np.abs(arr - 1.0) < _POLE_RADIUS):
        raise PoleAtOne("zeta has a simple pole at s = 1")
    if np.any(arr.real <= 0):
        raise DomainError("the integral representation needs Re(s) > 0")
    if tail_terms > MAX_EM_ORDER:
        raise ValueError(f"tail_terms must be <= {MAX_EM_ORDER}")
    out = np.empty_like(arr)
    rows = max(1, 1_000_000 // (K * nodes))
    for lo in range(0, arr.size, rows):
        blk = arr[lo : lo + rows]
        m = nodes
        coarse = _sawtooth_integral(blk, K, m)
        while True:
            fine = _sawtooth_integral(blk, K, 2 * m)
            quad_err = np.abs(fine - coarse)
            if quad_err.max() <= 0.1 * tol or 2 * m >= max_nodes:
                break
            m, coarse = 2 * m, fine
        # asymptotic tail: sum_{n>=K} n^-s - int_K^inf t^-s dt
        k_pow = np.exp(-blk * math.log(K))
        tail = 0.5 * k_pow
        poch = blk.copy()
        kp = k_pow / K
        for j in range(1, tail_terms + 1):
            tail = tail + _EM_COEF[j - 1] * poch * kp
            poch = poch * (blk + 2 * j - 1) * (blk + 2 * j)
            kp = kp / (K * K)
        tail_bound = np.abs(_EM_COEF[tail_terms] * poch * kp) * np.abs(
            blk + 2 * tail_terms + 1
        ) / (blk.real + 2 * tail_terms + 1)
        if np.any(tail_bound > tol):
            raise TailNotNegligible(
                f"tail bound {tail_bound.max():.3g} exceeds tol={tol:g} at cutoff {K}"
            )
        if np.any(quad_err > tol):
            raise TailNotNegligible(
                f"quadrature error estimate {quad_err.max():.3g} exceeds tol={tol:g}"
            )
        out[lo : lo + rows] = 1.0 / (blk - 1.0) + fine + tail
    return complex(out[0]) if scalar else out


# --------------------------------------------------------------------------
# Arithmetic helpers
# --------------------------------------------------------------------------


def primes_up_to(n):
    """All primes ``<= n`` as an int64 array (Eratosthenes)."""
    n = int(n)
    if n < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@dataclass(frozen=True)
class MoebiusTable:
    """Moebius function values ``mu(1..limit)``; ``values[0]`` is unused."""

    limit: int
    values: np.ndarray = field(repr=False)

    def __getitem__(self, n):
        if isinstance(n, (int, np.integer)):
            if not 1 <= n <= self.limit:
                raise IndexError(f"n={n} outside 1..{self.limit}")
        return self.values[n]

    def __len__(self):
        return self.limit

    def tolist(self):
        return self.values[1:].tolist()


def moebius(limit):
    """Sieve the Moebius function up to ``limit``."""
    limit = check_positive_int(limit, "limit")
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes_up_to(limit):
        mu[p::p] *= -1
        if p * p <= limit:
            mu[p * p :: p * p] = 0
    mu.setflags(write=False)
    return MoebiusTable(limit, mu)


def euler_product_partial(s, prime_bound, evaluator=None):
    """Partial Euler product over primes ``p <= prime_bound`` (needs Re s > 1).

    ``evaluator`` is accepted for signature symmetry with :func:`zeta`; the
    product itself is evaluated exactly.
    """
    del evaluator
    arr, scalar = as_complex_array(s)
    prime_bound = check_positive_int(prime_bound, "prime_bound")
    if np.any(arr.real <= 1):
        raise DomainError("the Euler product converges only for Re(s) > 1")
    logp = np.log(primes_up_to(prime_bound).astype(float))
    out = np.ones_like(arr)
    for lp in logp:
        out = out / (1.0 - np.exp(-arr * lp))
    return complex(out[0]) if scalar else out


# --------------------------------------------------------------------------
# Zeros on vertical lines
# --------------------------------------------------------------------------


class ZeroSearchResult(list):
    """Certified zero ordinates; ``unconfirmed`` lists rejected candidates."""

    def __init__(self, zeros=(), unconfirmed=()):
        super().__init__(zeros)
        self.unconfirmed = list(unconfirmed)

    @property
    def warning(self):
        return bool(self.unconfirmed)


def winding_number(func, center, half_width, n_points=32):
    """Winding number of ``func`` around 0 along a square contour.

    The square has the given center and half-width; ``n_points`` samples are
    spread evenly (``n_points // 4`` per side). Returns ``(count, raw)`` where
    ``raw`` is the unrounded total argument change divided by ``2 pi``.
    """
    per_side = max(1, n_points // 4)
    u = np.linspace(-1.0, 1.0, per_side, endpoint=False)
    w = half_width
    sides = [
        center + w * (u - 1j),  # bottom, left to right
        center + w * (1 + 1j * u),  # right, bottom to top
        center + w * (-u + 1j),  # top, right to left
        center + w * (-1 - 1j * u),  # left, top to bottom
    ]
    pts = np.concatenate(sides)
    vals = func(pts)
    ratios = np.roll(vals, -1) / vals
    raw = np.angle(ratios).sum() / (2 * math.pi)
    return int(round(raw)), raw


def _bisect_projection(f, a, b, za, xtol):
    """Bisect Re(f(t) conj(za)), which is positive at a and <= 0 at b."""
    for _ in range(200):
        if b - a <= xtol:
            break
        m = 0.5 * (a + b)
        if (f(m) * np.conj(za)).real > 0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def find_zeros_on_line(
    c,
    t_min,
    t_max,
    step=0.05,
    evaluator=None,
    *,
    trigger=0.1,
    box_half_width=0.05,
    contour_points=32,
    line_tol=1e-6,
    xtol=1e-12,
):
    """Locate zeros of zeta on ``Re(s) = c`` with ``t_min <= Im(s) <= t_max``.

    ``zeta(c + it)`` is sampled on a grid of spacing ``step``. Wherever the
    projection of a sample onto its predecessor changes sign (the phase of
    ``zeta`` jumps by pi across a simple zero on the line) the bracket is
    refined by bisecting that projection. Local minima of ``|zeta|`` below
    ``trigger`` with no such sign change are reported as unconfirmed. A
    candidate is accepted when its Newton distance ``|zeta| / |zeta'|`` is
    below ``line_tol`` and the argument principle on a square of half-width
    ``box_half_width`` counts exactly one zero.

    Returns
    -------
    ZeroSearchResult
        Sorted list of ordinates; rejected candidates are listed in
        ``.unconfirmed`` and trigger a :class:`ZeroConfirmationWarning`.
    """
    ev = evaluator or DEFAULT_EVALUATOR
    c = check_real(c, "c")
    t_min = check_real(t_min, "t_min")
    t_max = check_real(t_max, "t_max")
    step = check_positive_real(step, "step")
    if t_max < t_min:
        raise ValueError("t_max must be >= t_min")

    def line(t):
        return zeta(c + 1j * np.asarray(t, dtype=float), ev)

    n = int(math.ceil((t_max - t_min) / step))
    ts = t_min + step * np.arange(-1, n + 2)
    if c == 1.0:
        ts = ts[np.abs(ts) > 1e-3]
    vals = line(ts)
    mod = np.abs(vals)
    # a simple zero on the line flips the phase of zeta by pi, so the
    # projection onto the previous sample changes sign
    proj = (vals[1:] * np.conj(vals[:-1])).real
    brackets = [i for i in range(proj.size) if proj[i] <= 0]
    if c == 1.0:
        # never bisect across the excised neighbourhood of the pole
        brackets = [i for i in brackets if ts[i] >= 1e-3 or ts[i + 1] <= -1e-3]
    zeros, rejected = [], []
    for i in range(1, ts.size - 1):
        low_min = mod[i] <= mod[i - 1] and mod[i] <= mod[i + 1] and mod[i] < trigger
        if low_min and proj[i - 1] > 0 and proj[i] > 0:
            rejected.append(float(ts[i]))
    for i in brackets:
        t0 = _bisect_projection(
            lambda t: zeta(complex(c, t), ev), ts[i], ts[i + 1], vals[i], xtol
        )
        z0 = zeta(complex(c, t0), ev)
        h = 1e-5
        dz = (zeta(complex(c, t0 + h), ev) - zeta(complex(c, t0 - h), ev)) / (2j * h)
        if abs(z0) > line_tol * abs(dz):
            rejected.append(float(t0))
            continue
        count, _ = winding_number(
            lambda p: zeta(p, ev), complex(c, t0), box_half_width, contour_points
        )
        if count != 1:
            rejected.append(float(t0))
            continue
        if t_min <= t0 <= t_max and not any(abs(t0 - z) < 1e-6 for z in zeros):
            zeros.append(float(t0))
    if rejected:
        warnings.warn(
            f"{len(rejected)} zero candidates on Re(s)={c} were not "
            "confirmed as zeros",
            ZeroConfirmationWarning,
            stacklevel=2,
        )
    return ZeroSearchResult(sorted(zeros), rejected)
