"""Fractal strings: geometric zeta functions, counting functions, tube volumes
and Minkowski contents.

Three kinds of string are supported:

* :class:`ExplicitString` -- a finite list of lengths (testing only);
* :class:`PowerLawString` -- ``l_j = L * j**(-1/D)``;
* :class:`SelfSimilarString` -- length ``l1 * r**(n-1)`` repeated
  ``m**(n-1)`` times, the single-ratio lattice case (Cantor string is
  ``SelfSimilarString(r=1/3, m=2, l1=1/3)``).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from ._validation import check_grid, check_positive_int, check_positive_real
from .exceptions import (
    FiniteStringWarning,
    GridTooCoarse,
    PoleOfGeometricZeta,
    TailNotNegligible,
)
from .zeta_core import zeta as riemann_zeta

__all__ = [
    "FractalString",
    "ExplicitString",
    "PowerLawString",
    "SelfSimilarString",
    "cantor_string",
    "string_from_dict",
    "ContentEstimate",
    "MeasurabilityVerdict",
    "MeasurabilityResult",
    "WeylFit",
    "geometric_zeta",
    "minkowski_dimension",
    "geometric_counting",
    "spectral_counting",
    "tube_volume",
    "total_length",
    "minkowski_contents",
    "measurability_check",
    "weyl_fit",
]

# relative slack so that lengths such as 3**-n hit integer thresholds inclusively
_EDGE = 1e-12


class FractalString:
    """Common base; concrete strings are frozen dataclasses."""

    kind = "abstract"
    is_finite = False

    def lengths(self, count):
        """The ``count`` largest lengths, with multiplicity, nonincreasing."""
        raise NotImplementedError

    def length_at(self, j):
        """Length ``l_j`` for integer index arrays ``j >= 1``."""
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True)
class ExplicitString(FractalString):
    values: tuple

    kind = "explicit"
    is_finite = True

    def __init__(self, values):
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0 or np.any(~np.isfinite(arr)) or np.any(arr <= 0):
            raise ValueError("explicit lengths must be a nonempty list of positive numbers")
        if np.any(np.diff(arr) > 0):
            raise ValueError("explicit lengths must be nonincreasing")
        object.__setattr__(self, "values", tuple(arr.tolist()))

    def lengths(self, count):
        return np.asarray(self.values[:count], dtype=float)

    def length_at(self, j):
        j = np.asarray(j, dtype=np.int64)
        arr = np.asarray(self.values + (0.0,), dtype=float)
        return arr[np.minimum(j, len(self.values) + 1) - 1]

    def to_dict(self):
        return {"kind": "explicit", "lengths": list(self.values)}


@dataclass(frozen=True)
class PowerLawString(FractalString):
    L: float
    D: float

    kind = "power_law"

    def __post_init__(self):
        check_positive_real(self.L, "L")
        if not 0 < self.D < 1:
            raise ValueError(f"D must lie in (0, 1), got {self.D}")

    def lengths(self, count):
        return self.length_at(np.arange(1, count + 1))

    def length_at(self, j):
        return self.L * np.asarray(j, dtype=float) ** (-1.0 / self.D)

    def to_dict(self):
        return {"kind": "power_law", "L": self.L, "D": self.D}


@dataclass(frozen=True)
class SelfSimilarString(FractalString):
    r: float
    m: int
    l1: float

    kind = "self_similar"

    def __post_init__(self):
        if not 0 < self.r < 1:
            raise ValueError(f"ratio r must lie in (0, 1), got {self.r}")
        check_positive_int(self.m, "m", minimum=2)
        check_positive_real(self.l1, "l1")
        if self.m * self.r >= 1:
            raise ValueError("m * r < 1 is required for a summable string")

    def _generation_of(self, j):
        # generation n holds indices (m^(n-1)-1)/(m-1) < j <= (m^n-1)/(m-1)
        j = np.asarray(j, dtype=float)
        n = np.floor(np.log1p(j * (self.m - 1) - 1) / math.log(self.m) * (1 + 1e-15)) + 1
        # fix rounding at generation boundaries
        first = (self.m ** (n - 1) - 1) / (self.m - 1)
        n = np.where(j <= first, n - 1, n)
        last = (self.m**n - 1) / (self.m - 1)
        n = np.where(j > last, n + 1, n)
        return n

    def lengths(self, count):
        return self.length_at(np.arange(1, count + 1))

    def length_at(self, j):
        n = self._generation_of(j)
        return self.l1 * self.r ** (n - 1)

    def to_dict(self):
        return {"kind": "self_similar", "r": self.r, "m": self.m, "l1": self.l1}


def cantor_string():
    """The Cantor string: ``3**-n`` with multiplicity ``2**(n-1)``."""
    return SelfSimilarString(r=1.0 / 3.0, m=2, l1=1.0 / 3.0)


def string_from_dict(spec):
    """Build a string from its JSON description.

    Accepted forms::

        {"kind": "self_similar", "r": ..., "m": ..., "l1": ...}
        {"kind": "power_law", "L": ..., "D": ...}
        {"kind": "explicit", "lengths": [...]}
        {"kind": "cantor"}
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError('string spec must be an object with a "kind" key')
    kind = spec["kind"]
    keys = set(spec) - {"kind"}
    expected = {
        "self_similar": {"r", "m", "l1"},
        "power_law": {"L", "D"},
        "explicit": {"lengths"},
        "cantor": set(),
    }
    if kind not in expected:
        raise ValueError(f"unknown string kind {kind!r}; expected one of {sorted(expected)}")
    if keys != expected[kind]:
        raise ValueError(
            f"string kind {kind!r} takes keys {sorted(expected[kind])}, got {sorted(keys)}"
        )
    if kind == "self_similar":
        return SelfSimilarString(r=float(spec["r"]), m=int(spec["m"]), l1=float(spec["l1"]))
    if kind == "power_law":
        return PowerLawString(L=float(spec["L"]), D=float(spec["D"]))
    if kind == "explicit":
        return ExplicitString(spec["lengths"])
    return cantor_string()


# --------------------------------------------------------------------------
# zeta functions and dimension
# --------------------------------------------------------------------------


def minkowski_dimension(S):
    """Abscissa of convergence of the geometric zeta function.

    Finite strings return 0 and emit :class:`FiniteStringWarning`.
    """
    if isinstance(S, SelfSimilarString):
        return math.log(S.m) / math.log(1.0 / S.r)
    if isinstance(S, PowerLawString):
        return float(S.D)
    warnings.warn("finite string: dimension 0 by convention", FiniteStringWarning, stacklevel=2)
    return 0.0


def total_length(S):
    """``|Omega| = sum_j l_j``."""
    if isinstance(S, SelfSimilarString):
        return S.l1 / (1.0 - S.m * S.r)
    if isinstance(S, PowerLawString):
        return S.L * riemann_zeta(1.0 / S.D).real
    return float(sum(S.values))


def _power_law_zeta_sum(S, s, tolerance):
    a = s / S.D
    if a.real <= 1:
        raise TailNotNegligible(
            f"Re(s)={s.real:g} is not right of the abscissa D={S.D:g}"
        )
    # direct sum up to J-1, then Euler-Maclaurin tail with two corrections;
    # the third correction bounds the remainder
    J = 64
    while True:
        j = np.arange(1, J, dtype=float)
        head = np.exp(-a * np.log(j)).sum()
        jp = J ** (-a)
        tail = J * jp / (a - 1) + 0.5 * jp + a * jp / (12 * J)
        tail -= a * (a + 1) * (a + 2) * jp / (720 * J**3)
        bound = abs(a * (a + 1) * (a + 2) * (a + 3) * (a + 4) * jp) / (30240 * J**5)
        bound *= abs(a + 5) / (a.real + 5)
        if bound * abs(S.L**s) <= tolerance:
            break
        if J > 2**22:
            raise TailNotNegligible(f"tail bound {bound:.3g} above tolerance {tolerance:g}")
        J *= 4
    return complex(S.L**s * (head + tail))


def geometric_zeta(S, s, tolerance=1e-12):
    """Geometric zeta function ``sum_j l_j**s``.

    Self-similar strings use the closed form ``l1**s / (1 - m r**s)``, valid
    at every non-pole (the meromorphic continuation). Power-law strings are
    summed numerically with a bounded tail, so ``Re(s)`` must exceed ``D``.

    Raises
    ------
    PoleOfGeometricZeta
        At a complex dimension of a self-similar string.
    TailNotNegligible
        Too close to (or left of) the abscissa of a power-law string.
    """
    s = complex(s)
    if isinstance(S, SelfSimilarString):
        denom = 1.0 - S.m * S.r**s
        if abs(denom) < 1e-12:
            raise PoleOfGeometricZeta(f"s={s} is a complex dimension")
        return S.l1**s / denom
    if isinstance(S, PowerLawString):
        return _power_law_zeta_sum(S, s, tolerance)
    vals = np.asarray(S.values)
    return complex(np.exp(s * np.log(vals)).sum())


# --------------------------------------------------------------------------
# counting functions and tube volume
# --------------------------------------------------------------------------


def _self_similar_generations(S, threshold):
    """Number of generations whose length is >= threshold."""
    if S.l1 < threshold * (1 - _EDGE):
        return 0
    return int(math.floor(math.log(S.l1 / threshold) / math.log(1.0 / S.r) + _EDGE)) + 1


def geometric_counting(S, x):
    """``N_L(x) = #{j : 1/l_j <= x}`` counted with multiplicity."""
    x = check_positive_real(x, "x")
    if isinstance(S, SelfSimilarString):
        K = _self_similar_generations(S, 1.0 / x)
        return (S.m**K - 1) // (S.m - 1)
    if isinstance(S, PowerLawString):
        return int(math.floor((S.L * x) ** S.D * (1 + _EDGE)))
    vals = np.asarray(S.values)
    return int(np.count_nonzero(vals * x >= 1 - _EDGE))


def _floor(y):
    return math.floor(y * (1 + _EDGE))


def spectral_counting(S, x):
    """``N_nu(x) = sum_j [l_j x]`` (frequency counting function)."""
    x = check_positive_real(x, "x")
    if isinstance(S, SelfSimilarString):
        total, n = 0, 1
        while True:
            k = _floor(S.l1 * S.r ** (n - 1) * x)
            if k == 0:
                return total
            total += S.m ** (n - 1) * k
            n += 1
    if isinstance(S, PowerLawString):
        J = int(math.floor((S.L * x) ** S.D * (1 + _EDGE)))
        if J == 0:
            return 0
        y = S.L * x * np.arange(1, J + 1, dtype=float) ** (-1.0 / S.D)
        return int(np.floor(y * (1 + _EDGE)).astype(np.int64).sum())
    return int(sum(_floor(v * x) for v in S.values))


def tube_volume(S, eps):
    """Inner tube volume ``V(eps) = sum_j min(l_j, 2 eps)``."""
    eps = check_positive_real(eps, "eps")
    w = 2.0 * eps
    if isinstance(S, SelfSimilarString):
        K = _self_similar_generations(S, w)
        saturated = (S.m**K - 1) // (S.m - 1)
        tail = S.l1 * (S.m * S.r) ** K / (1.0 - S.m * S.r)
        return w * saturated + tail
    if isinstance(S, PowerLawString):
        J = int(math.floor((S.L / w) ** S.D * (1 + _EDGE)))
        return w * J + S.L * float(hurwitz_zeta(1.0 / S.D, J + 1))
    vals = np.asarray(S.values)
    return float(np.minimum(vals, w).sum())


# --------------------------------------------------------------------------
# Minkowski content, measurability, Weyl-Berry fit
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ContentEstimate:
    """Finite-grid estimates of the lower and upper Minkowski content."""

    D_used: float
    lower: float
    upper: float
    epsilons: np.ndarray = field(repr=False)
    finite_string: bool = False

    @property
    def measurable_estimate(self):
        return 0.5 * (self.lower + self.upper)


def minkowski_contents(S, D, eps_grid):
    """Estimate ``M_*`` and ``M^*`` as min and max of ``V(eps)/eps**(1-D)``
    over the finest half of a decreasing ``eps_grid`` (at least 16 points
    spanning at least four decades)."""
    eps = check_grid(eps_grid, "eps_grid", increasing=False)
    if eps.size < 16:
        raise GridTooCoarse(f"eps_grid needs >= 16 points, got {eps.size}")
    if math.log10(eps[0] / eps[-1]) < 4 - 1e-9:
        raise GridTooCoarse("eps_grid must span at least four decades")
    D = float(D)
    ratios = np.array([tube_volume(S, e) for e in eps]) / eps ** (1.0 - D)
    tail = ratios[eps.size // 2 :]
    finite = bool(S.is_finite)
    if finite:
        warnings.warn("finite string: content estimate degenerates", FiniteStringWarning, stacklevel=2)
    return ContentEstimate(
        D_used=D,
        lower=float(tail.min()),
        upper=float(tail.max()),
        epsilons=eps,
        finite_string=finite,
    )


class MeasurabilityVerdict(str, Enum):
    MEASURABLE = "Measurable"
    NOT_MEASURABLE = "NotMeasurable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class MeasurabilityResult:
    verdict: MeasurabilityVerdict
    L_est: float
    M_est: float
    oscillation: float
    finite_string: bool = False

    @property
    def measurable(self):
        return self.verdict is MeasurabilityVerdict.MEASURABLE


def measurability_check(S, D, J=10**6, threshold=1e-2, samples=400):
    """Test ``l_j ~ L j**(-1/D)`` along a geometric subsequence of ``j <= J``.

    The verdict is Measurable when ``l_j * j**(1/D)`` varies by less than
    ``threshold`` (relative) over the last decade, in which case
    ``M_est = 2**(1-D) L**D / (1-D)``.
    """
    J = check_positive_int(J, "J", minimum=1000)
    D = float(D)
    if S.is_finite:
        warnings.warn("finite string: no tail to test", FiniteStringWarning, stacklevel=2)
        return MeasurabilityResult(
            MeasurabilityVerdict.INCONCLUSIVE, math.nan, math.nan, math.nan, True
        )
    j = np.unique(np.round(np.geomspace(1, J, samples)).astype(np.int64))
    # include the ends of every self-similar generation in the last decade
    if isinstance(S, SelfSimilarString):
        gens = np.arange(1, 200)
        ends = (S.m ** gens.astype(float) - 1) / (S.m - 1)
        ends = ends[(ends >= J / 10) & (ends <= J)].astype(np.int64)
        j = np.unique(np.concatenate([j, ends, ends + 1]))
        j = j[j <= J]
    values = S.length_at(j) * j.astype(float) ** (1.0 / D)
    last = values[j >= J / 10]
    osc = float((last.max() - last.min()) / last.mean())
    if osc < threshold:
        L_est = float(last[-1])
        M_est = 2 ** (1 - D) * L_est**D / (1 - D)
        return MeasurabilityResult(MeasurabilityVerdict.MEASURABLE, L_est, M_est, osc)
    return MeasurabilityResult(MeasurabilityVerdict.NOT_MEASURABLE, math.nan, math.nan, osc)


@dataclass(frozen=True)
class WeylFit:
    weyl_coeff: float
    second_coeff: float
    band: tuple
    x_grid: np.ndarray = field(repr=False)
    normalized: np.ndarray = field(repr=False)


def weyl_fit(S, D, x_grid):
    """Second-term fit of the frequency counting function.

    Returns the Weyl coefficient ``|Omega|`` and the mean of
    ``(N_nu(x) - |Omega| x) / x**D`` over the upper half of ``x_grid``
    (plus its min/max band). For a Minkowski measurable string the mean
    approaches ``zeta(D)``.
    """
    x = check_grid(x_grid, "x_grid", increasing=True)
    if x.size < 8 or math.log10(x[-1] / x[0]) < 3 - 1e-9:
        raise GridTooCoarse("x_grid must have >= 8 points spanning >= 3 decades")
    D = float(D)
    omega = total_length(S)
    counts = np.array([spectral_counting(S, xi) for xi in x], dtype=float)
    normalized = (counts - omega * x) / x**D
    tail = normalized[x.size // 2 :]
    return WeylFit(
        weyl_coeff=float(omega),
        second_coeff=float(tail.mean()),
        band=(float(tail.min()), float(tail.max())),
        x_grid=x,
        normalized=normalized,
    )
