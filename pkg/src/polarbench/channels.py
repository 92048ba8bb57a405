"""Memoryless channel models and LLR/likelihood conversions.

Binary decoders consume one float LLR per output position,
lambda = ln W(y|0)/W(y|1), with +-inf for erased-to-certainty symbols.
Non-binary decoders consume per-position likelihood rows; see
likelihoods_from_llr for the bridge used when the kernel is binary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DegenerateEvidenceError(ValueError):
    """Every symbol value was assigned zero likelihood at some position."""


@dataclass(frozen=True)
class LlrFun:
    """LLR vector for one channel output: values[t] = ln W(y|0)/W(y|t).

    values[0] is identically 0 by construction.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        if self.values[0] != 0.0:
            raise ValueError("values[0] must be 0")

    @property
    def q(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ChannelModel:
    """BMS channel usable by the Monte-Carlo harness.

    kind in {'bec', 'bsc', 'biawgn'}; param is epsilon, p, or sigma.
    """

    kind: str
    param: float

    def __post_init__(self):
        if self.kind == "bec":
            if not 0.0 <= self.param <= 1.0:
                raise ValueError("erasure probability must be in [0, 1]")
        elif self.kind == "bsc":
            if not 0.0 <= self.param < 0.5:
                raise ValueError("crossover probability must be in [0, 0.5)")
        elif self.kind == "biawgn":
            if self.param <= 0.0:
                raise ValueError("noise sigma must be positive")
        else:
            raise ValueError(f"unknown channel kind {self.kind!r}")


def bec(eps: float) -> ChannelModel:
    return ChannelModel("bec", eps)


def bsc(p: float) -> ChannelModel:
    return ChannelModel("bsc", p)


def biawgn(sigma: float) -> ChannelModel:
    return ChannelModel("biawgn", sigma)


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def transmit(ch: ChannelModel, x: np.ndarray, rng) -> np.ndarray:
    """Send bits x, return the received LLR vector lambda(1) per position."""
    rng = _as_rng(rng)
    x = np.asarray(x, dtype=np.int64)
    n = len(x)
    if ch.kind == "bec":
        llr = np.where(x == 0, np.inf, -np.inf)
        erased = rng.random(n) < ch.param
        return np.where(erased, 0.0, llr)
    if ch.kind == "bsc":
        p = ch.param
        if p == 0.0:
            return np.where(x == 0, np.inf, -np.inf)
        flips = rng.random(n) < p
        y = x ^ flips.astype(np.int64)
        mag = math.log((1.0 - p) / p)
        return np.where(y == 0, mag, -mag)
    # biawgn: 0 -> +1, 1 -> -1
    s = 1.0 - 2.0 * x
    y = s + rng.normal(0.0, ch.param, size=n)
    return 2.0 * y / (ch.param**2)


def llr_to_funs(llr: np.ndarray) -> list[LlrFun]:
    """Wrap binary LLRs as per-position LlrFun objects (q = 2)."""
    return [LlrFun((0.0, float(v))) for v in np.asarray(llr, dtype=np.float64)]


def likelihoods_from_llr(funs, q: int | None = None) -> np.ndarray:
    """Per-position likelihood rows from LlrFun evidence.

    Output shape (N, q); each row is rescaled so its max entry is 1
    (common positive factor per position, harmless to any decoder).
    -inf entries map to zero mass. A row of all zeros is degenerate.
    """
    if q is None:
        q = funs[0].q
    n = len(funs)
    out = np.zeros((n, q), dtype=np.float64)
    for i, fn in enumerate(funs):
        if fn.q != q:
            raise ValueError("mixed alphabet sizes in evidence")
        vals = np.array(fn.values, dtype=np.float64)
        if np.isnan(vals).any():
            raise ValueError(f"position {i}: NaN evidence")
        # W(y|t) prop exp(-values[t]); values[t] = +inf kills symbol t,
        # values[t] = -inf concentrates all mass on the -inf symbols.
        surely = vals == -np.inf
        if surely.any():
            out[i] = np.where(surely, 1.0, 0.0)
            continue
        finite = np.isfinite(vals)
        if not finite.any():
            raise DegenerateEvidenceError(f"position {i}: no symbol has support")
        shift = vals[finite].min()
        out[i] = np.where(finite, np.exp(-(vals - shift)), 0.0)
    return out


def likelihood_rows_binary(llr: np.ndarray) -> np.ndarray:
    """Shape (N, 2) likelihood rows from binary LLRs, max-normalized."""
    return likelihoods_from_llr(llr_to_funs(llr), q=2)
