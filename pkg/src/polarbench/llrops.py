"""Check-node and variable-node LLR updates, exact and min-sum.

LLRs are float64 and may be +-inf (perfectly known bits, e.g. erasure
channels or frozen priors). inf is treated as exact knowledge, so the
updates below have closed-form shortcuts for it.
"""

from __future__ import annotations

import math

import numpy as np

BP_CLIP = 40.0  # finite-message clamp; inf passes through untouched


class LlrContradiction(ArithmeticError):
    """Two infinite LLRs asserted opposite certainties about one bit."""


def f_plus(a: float, b: float) -> float:
    """Check-node update: ln((1 + e^(a+b)) / (e^a + e^b)), the LLR of a XOR b.

    Evaluated as sign(a)sign(b)min(|a|,|b|)
                 + log1p(exp(-|a+b|)) - log1p(exp(-|a-b|)).
    """
    if math.isinf(a):
        return b if a > 0 else -b
    if math.isinf(b):
        return a if b > 0 else -a
    s = math.copysign(1.0, a) * math.copysign(1.0, b) * min(abs(a), abs(b))
    return s + math.log1p(math.exp(-abs(a + b))) - math.log1p(math.exp(-abs(a - b)))


def f_plus_minsum(a: float, b: float) -> float:
    if math.isinf(a):
        return b if a > 0 else -b
    if math.isinf(b):
        return a if b > 0 else -a
    return math.copysign(1.0, a) * math.copysign(1.0, b) * min(abs(a), abs(b))


def f_equal(a: float, b: float) -> float:
    """Variable-node update: sum of LLRs. Opposite infinities conflict."""
    if math.isinf(a) and math.isinf(b) and (a > 0) != (b > 0):
        raise LlrContradiction("opposite infinite LLRs combined at equality node")
    return a + b


def f_plus_vec(a: np.ndarray, b: np.ndarray, min_sum: bool = False) -> np.ndarray:
    """Elementwise f_plus. Handles inf entries per the scalar shortcuts."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    sign = np.sign(a) * np.sign(b)
    aa, ab = np.abs(a), np.abs(b)
    core = sign * np.minimum(aa, ab)
    if not min_sum:
        finite = np.isfinite(a) & np.isfinite(b)
        if finite.all():
            core = core + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))
        else:
            corr = np.zeros_like(core)
            af, bf = a[finite], b[finite]
            corr[finite] = np.log1p(np.exp(-np.abs(af + bf))) - np.log1p(np.exp(-np.abs(af - bf)))
            core = core + corr
    # inf against anything collapses to +-other; sign*min already does this
    # except where the finite side is 0 with an inf mate: sign()=0 kills it,
    # which matches f_plus(inf, 0) = 0.
    inf_a = np.isinf(a)
    inf_b = np.isinf(b)
    core = np.where(inf_a & ~inf_b, np.where(a > 0, b, -b), core)
    core = np.where(inf_b & ~inf_a, np.where(b > 0, a, -a), core)
    core = np.where(inf_a & inf_b, np.where(sign > 0, np.inf, -np.inf), core)
    return core


def f_equal_vec(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    conflict = np.isinf(a) & np.isinf(b) & (np.sign(a) != np.sign(b))
    if conflict.any():
        raise LlrContradiction("opposite infinite LLRs combined at equality node")
    return a + b


def decide(llr: float) -> int:
    """Hard decision: 0 when llr >= 0 (ties break toward 0)."""
    return 0 if llr >= 0 else 1


def decide_vec(llr: np.ndarray) -> np.ndarray:
    return (np.asarray(llr) < 0).astype(np.int64)


def clip_finite(llr: np.ndarray, bound: float = BP_CLIP) -> np.ndarray:
    """Clamp finite entries to [-bound, bound]; infinities pass through."""
    out = np.asarray(llr, dtype=np.float64)
    finite = np.isfinite(out)
    return np.where(finite, np.clip(out, -bound, bound), out)
