"""Finite-height probes of zeta on vertical lines.

Everything here is a statement about the segment ``{c + it : |t| <= T}``
and never about the whole line, which is why every verdict carries an
``UpToT`` or ``SoFar`` suffix. Since ``zeta(conj s) = conj zeta(s)`` only
``0 <= t <= T`` is sampled.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import minimize_scalar

from ._validation import check_positive_real, check_real
from .exceptions import PoleOnSegment, ZeroConfirmationWarning
from .zeta_core import DEFAULT_EVALUATOR, find_zeros_on_line, zeta

__all__ = [
    "QuasiInvertibility",
    "InvertibilityHint",
    "LineScan",
    "truncated_spectrum",
    "quasi_invertibility",
    "InvertibilityReport",
    "invertibility_probe",
    "RHScanResult",
    "rh_scan",
    "POLE_EXCLUSION",
]

POLE_EXCLUSION = 1e-3


class QuasiInvertibility(str, Enum):
    QUASI_INVERTIBLE_UP_TO_T = "QuasiInvertibleUpToT"
    NOT_QUASI_INVERTIBLE = "NotQuasiInvertible"


class InvertibilityHint(str, Enum):
    BOUNDED_AWAY_FROM_ZERO_SO_FAR = "BoundedAwayFromZeroSoFar"
    APPROACHING_ZERO = "ApproachingZero"


@dataclass(frozen=True)
class LineScan:
    """Samples of ``zeta(c + it)`` for ``0 <= t <= T`` and what they show."""

    c: float
    T: float
    step: float
    t: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    min_modulus: float
    argmin_t: float
    zeros: tuple
    unconfirmed: tuple = ()
    excluded: tuple | None = None
    local_minima: tuple = field(default=(), repr=False)

    @property
    def samples(self):
        return list(zip(self.t.tolist(), self.values.tolist()))

    def summary(self):
        return {
            "c": self.c,
            "T": self.T,
            "min_modulus": self.min_modulus,
            "zeros": list(self.zeros),
            "verdict": _verdict(self).value,
        }


def _verdict(scan):
    if scan.zeros:
        return QuasiInvertibility.NOT_QUASI_INVERTIBLE
    return QuasiInvertibility.QUASI_INVERTIBLE_UP_TO_T


def _refine(modulus, lo, hi):
    res = minimize_scalar(modulus, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    return float(res.x), float(res.fun)


def truncated_spectrum(c, T, step=0.05, exclude_pole=False, evaluator=None):
    """Scan ``zeta`` on ``c + it``, ``0 <= t <= T``.

    Every interior local minimum of the sampled modulus is refined by
    bounded golden-section search, certified zeros come from
    :func:`~fractalzeta.zeta_core.find_zeros_on_line`, and ``min_modulus`` is
    the smallest of all of these. For ``c = 1`` the points ``|t| < 1e-3``
    are dropped if ``exclude_pole`` is set; otherwise
    :class:`PoleOnSegment` is raised.
    """
    ev = evaluator or DEFAULT_EVALUATOR
    c = check_real(c, "c")
    T = check_positive_real(T, "T")
    step = check_positive_real(step, "step")
    excluded = None
    n = max(2, int(math.ceil(T / step)))
    t = np.linspace(0.0, T, n + 1)
    if c == 1.0:
        if not exclude_pole:
            raise PoleOnSegment("the segment passes through the pole at s = 1")
        t = t[t >= POLE_EXCLUSION]
        if t.size == 0 or t[0] > POLE_EXCLUSION:
            t = np.concatenate([[POLE_EXCLUSION], t])
        excluded = (-POLE_EXCLUSION, POLE_EXCLUSION)
    values = zeta(c + 1j * t, ev)
    mod = np.abs(values)

    def modulus(x):
        return abs(zeta(complex(c, x), ev))

    minima = []
    inner = np.flatnonzero((mod[1:-1] <= mod[:-2]) & (mod[1:-1] <= mod[2:])) + 1
    for i in inner:
        minima.append(_refine(modulus, t[i - 1], t[i + 1]))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ZeroConfirmationWarning)
        found = find_zeros_on_line(c, float(t[0]), T, step, ev)
    for w in caught:
        if not issubclass(w.category, ZeroConfirmationWarning):
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    for z in found:
        minima.append((z, modulus(z)))
    minima.sort()
    candidates = [(float(mod[i]), float(t[i])) for i in (0, mod.size - 1, int(np.argmin(mod)))]
    candidates += [(m, x) for x, m in minima]
    best, where = min(candidates)
    return LineScan(
        c=c,
        T=T,
        step=step,
        t=t,
        values=values,
        min_modulus=best,
        argmin_t=where,
        zeros=tuple(found),
        unconfirmed=tuple(found.unconfirmed),
        excluded=excluded,
        local_minima=tuple(minima),
    )


def quasi_invertibility(c, T, step=0.05, exclude_pole=False, evaluator=None):
    """``NotQuasiInvertible`` iff a certified zero lies on ``c + it``, ``|t| <= T``."""
    return _verdict(truncated_spectrum(c, T, step, exclude_pole, evaluator))


@dataclass(frozen=True)
class InvertibilityReport:
    c: float
    envelope: list
    b_lower: list
    verdict_hint: InvertibilityHint
    zeros: tuple

    def to_dict(self):
        return {
            "c": self.c,
            "envelope": [list(p) for p in self.envelope],
            "b_lower": [list(p) for p in self.b_lower],
            "verdict_hint": self.verdict_hint.value,
            "zeros": list(self.zeros),
        }


def invertibility_probe(c, T_schedule, step=0.05, decay_tol=0.01, evaluator=None):
    """Running infimum of ``|zeta(c + it)|`` over ``|t| <= T`` along ``T_schedule``.

    ``b_lower`` is the squared envelope (the multiplier of ``a* a``). The
    hint is ``ApproachingZero`` if the envelope reached ``1e-6`` or fell by
    more than ``decay_tol`` (relative) over the second half of the schedule,
    and ``BoundedAwayFromZeroSoFar`` otherwise. It describes the scanned
    range only.
    """
    T_schedule = [check_positive_real(T, "T") for T in T_schedule]
    if not T_schedule:
        raise ValueError("T_schedule must not be empty")
    if any(b <= a for a, b in zip(T_schedule, T_schedule[1:])):
        raise ValueError("T_schedule must be strictly increasing")
    scan = truncated_spectrum(c, T_schedule[-1], step, exclude_pole=True, evaluator=evaluator)
    # each point contributes at its own ordinate; prefix minima give the envelope
    pts = [(float(x), float(m)) for x, m in zip(scan.t, np.abs(scan.values))]
    pts += [(float(x), float(m)) for x, m in scan.local_minima]
    pts.sort()
    xs = np.array([p[0] for p in pts])
    running = np.minimum.accumulate(np.array([p[1] for p in pts]))
    envelope = []
    for T in T_schedule:
        k = int(np.searchsorted(xs, T, side="right")) - 1
        envelope.append((T, float(running[max(k, 0)])))
    b_lower = [(T, e * e) for T, e in envelope]
    last = envelope[-1][1]
    mid = envelope[len(envelope) // 2][1]
    if last < 1e-6 or last < (1.0 - decay_tol) * mid:
        hint = InvertibilityHint.APPROACHING_ZERO
    else:
        hint = InvertibilityHint.BOUNDED_AWAY_FROM_ZERO_SO_FAR
    zeros = tuple(z for z in scan.zeros if z <= T_schedule[-1])
    return InvertibilityReport(float(c), envelope, b_lower, hint, zeros)


@dataclass(frozen=True)
class RHScanResult:
    T: float
    rows: list
    asymmetry: dict

    def to_dict(self):
        return {"T": self.T, "rows": self.rows, "asymmetry": self.asymmetry}


def asymmetry_summary(rows):
    """Compare the half-strips ``c < 1/2`` and ``c > 1/2`` of a scan table."""
    left = [r for r in rows if r["c"] < 0.5]
    right = [r for r in rows if r["c"] > 0.5]
    by_c = {round(r["c"], 12): r for r in rows}
    pairs = []
    for r in left:
        mirror = by_c.get(round(1.0 - r["c"], 12))
        if mirror is not None:
            pairs.append({
                "c_left": r["c"],
                "c_right": mirror["c"],
                "min_left": r["min_modulus"],
                "min_right": mirror["min_modulus"],
                "left_greater": r["min_modulus"] > mirror["min_modulus"],
            })
    return {
        "left_zero_free": all(r["zero_count"] == 0 for r in left),
        "right_zero_free": all(r["zero_count"] == 0 for r in right),
        "left_min": min((r["min_modulus"] for r in left), default=None),
        "right_min": min((r["min_modulus"] for r in right), default=None),
        "pairs": pairs,
    }


def rh_scan(c_grid, T, step=0.05, skip_half=0.0, evaluator=None):
    """One row per ``c``: minimum modulus, zero count and verdict up to ``T``.

    Values of ``c`` within ``skip_half`` of ``1/2`` are skipped.
    """
    T = check_positive_real(T, "T")
    rows = []
    for c in c_grid:
        c = check_real(c, "c")
        if not 0 < c < 1:
            raise ValueError(f"c must lie in (0, 1), got {c}")
        if skip_half and abs(c - 0.5) <= skip_half:
            continue
        scan = truncated_spectrum(c, T, step, evaluator=evaluator)
        rows.append({
            "c": c,
            "min_modulus": scan.min_modulus,
            "argmin_t": scan.argmin_t,
            "zero_count": len(scan.zeros),
            "zeros": list(scan.zeros),
            "verdict": _verdict(scan).value,
        })
    return RHScanResult(T, rows, asymmetry_summary(rows))
