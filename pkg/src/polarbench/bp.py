"""Belief propagation on the butterfly graph of the binary recursion.

One iteration sweeps the tree in the same order as SC: prepare the
check-side message, descend into the first child, prepare the
variable-side message, descend into the second child, then push updated
messages back toward the channel. Only the child-1 ("v") messages persist
between iterations; everything else is recomputed during the sweep. At the
deepest level the children are the input coordinates themselves and their
messages are fixed priors: +-inf for frozen values, 0 for free ones.

Infinite messages of opposite sign can meet on erasure-type evidence; BP
resolves the conflict to 0, raises a flag, and keeps going, so decoding
failures surface as flags rather than exceptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import CodeSpec
from .llrops import BP_CLIP, f_plus, f_plus_minsum, f_plus_vec

STOP_RULES = ("adaptive", "frozen", "unchanged", "none")


@dataclass
class BpResult:
    u_hat: np.ndarray
    x_hat: np.ndarray
    iterations: int
    converged: bool
    contradiction: bool


@dataclass
class BpState:
    """Everything BP keeps between and during sweeps.

    mu_v[d] persists across iterations (slot r*(N_d/2)+i for butterfly i of
    node r at depth d); at the deepest depth it holds the odd-coordinate
    priors and is never rewritten. mu_u, u_msg and x_out are scratch,
    rewritten every sweep; scrub_transients poisons them to prove nothing
    else persists.
    """

    m: int
    n: int
    priors: np.ndarray
    mu_v: list = field(default_factory=list)
    mu_u: list = field(default_factory=list)
    u_msg: np.ndarray = None
    x_out: np.ndarray = None
    message_updates: int = 0
    contradiction: bool = False
    min_sum: bool = False

    def scrub_transients(self):
        for arr in self.mu_u:
            arr.fill(np.nan)
        self.u_msg.fill(np.nan)
        self.x_out.fill(np.nan)


def bp_state(spec: CodeSpec, min_sum: bool = False) -> BpState:
    if not spec.kernel.is_arikan:
        raise ValueError("belief propagation is defined for the (u+v, v) kernel")
    m, n = spec.m, spec.n
    mask, vals = spec.frozen_arrays()
    priors = np.zeros(n, dtype=np.float64)
    priors[mask] = np.where(vals[mask] == 0, np.inf, -np.inf)
    st = BpState(m=m, n=n, priors=priors, min_sum=min_sum)
    st.mu_v = [np.zeros(n // 2) for _ in range(m)]
    st.mu_v[m - 1][:] = priors[1::2]
    st.mu_u = [np.zeros(n // 2) for _ in range(m)]
    st.u_msg = np.zeros(n)
    st.x_out = np.zeros(n)
    return st


def _combine_vec(state: BpState, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    conflict = np.isinf(a) & np.isinf(b) & (np.sign(a) != np.sign(b))
    with np.errstate(invalid="ignore"):
        s = a + b
    if conflict.any():
        state.contradiction = True
        s = np.where(conflict, 0.0, s)
    finite = np.isfinite(s)
    return np.where(finite, np.clip(s, -BP_CLIP, BP_CLIP), s)


def _combine_scalar(state: BpState, a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b) and (a > 0) != (b > 0):
        state.contradiction = True
        return 0.0
    s = a + b
    if math.isfinite(s):
        return min(max(s, -BP_CLIP), BP_CLIP)
    return s


def _sweep(state: BpState, d: int, r: int, x_in: np.ndarray) -> np.ndarray:
    fp = f_plus_minsum if state.min_sum else f_plus
    if len(x_in) == 2:
        a, b = float(x_in[0]), float(x_in[1])
        pe = float(state.priors[2 * r])
        po = float(state.mu_v[d][r])  # == prior of coordinate 2r+1
        e1a0 = _combine_scalar(state, po, b)
        state.u_msg[2 * r] = fp(a, e1a0)
        a0e1 = fp(pe, a)
        v_out = _combine_scalar(state, a0e1, b)
        state.u_msg[2 * r + 1] = v_out
        x0_out = fp(e1a0, pe)
        x1_out = _combine_scalar(state, a0e1, po)
        state.message_updates += 6
        return np.array([x0_out, x1_out])

    half = len(x_in) // 2
    sl = slice(r * half, (r + 1) * half)
    x0 = x_in[0::2]
    x1 = x_in[1::2]
    ms = state.min_sum

    e1a0 = _combine_vec(state, state.mu_v[d][sl], x1)
    u_out = f_plus_vec(x0, e1a0, min_sum=ms)
    mu_u = _sweep(state, d + 1, 2 * r, u_out)
    state.mu_u[d][sl] = mu_u
    a0e1 = f_plus_vec(mu_u, x0, min_sum=ms)
    v_out = _combine_vec(state, a0e1, x1)
    mu_v = _sweep(state, d + 1, 2 * r + 1, v_out)
    state.mu_v[d][sl] = mu_v
    e1a0 = _combine_vec(state, mu_v, x1)
    x0_out = f_plus_vec(e1a0, mu_u, min_sum=ms)
    x1_out = _combine_vec(state, a0e1, mu_v)
    state.message_updates += 7 * half

    out = np.empty(len(x_in))
    out[0::2] = x0_out
    out[1::2] = x1_out
    return out


def bp_iteration(state: BpState, llr: np.ndarray) -> None:
    """One full sweep. Channel LLRs enter unchanged at the top."""
    state.x_out[:] = _sweep(state, 0, 0, llr)


def _decisions(state: BpState, mask: np.ndarray, vals: np.ndarray) -> np.ndarray:
    u = np.where(state.u_msg < 0, 1, 0).astype(np.int64)
    u[mask] = vals[mask]
    return u


def bp_decode(
    spec: CodeSpec,
    llr: np.ndarray,
    max_iters: int = 40,
    stop: str = "adaptive",
    min_sum: bool = False,
) -> BpResult:
    if stop not in STOP_RULES:
        raise ValueError(f"stop must be one of {STOP_RULES}")
    n = spec.n
    lam = np.asarray(llr, dtype=np.float64)
    if lam.shape != (n,):
        raise ValueError(f"llr must have length {n}")
    lam = np.where(np.isfinite(lam), np.clip(lam, -BP_CLIP, BP_CLIP), lam)
    mask, vals = spec.frozen_arrays()
    state = bp_state(spec, min_sum=min_sum)

    prev_u = None
    converged = False
    iters = 0
    for it in range(1, max_iters + 1):
        bp_iteration(state, lam)
        iters = it
        u_hat = _decisions(state, mask, vals)
        frozen_ok = bool(
            np.all(np.where(vals[mask] == 0, state.u_msg[mask] >= 0, state.u_msg[mask] <= 0))
        )
        unchanged = prev_u is not None and np.array_equal(u_hat, prev_u)
        prev_u = u_hat
        if stop == "frozen" and frozen_ok:
            converged = True
        elif stop == "unchanged" and unchanged:
            converged = True
        elif stop == "adaptive" and (frozen_ok or unchanged):
            converged = True
        if converged:
            break

    u_hat = prev_u
    x_belief = _combine_vec(state, lam, state.x_out)
    x_hat = np.where(x_belief < 0, 1, 0).astype(np.int64)
    return BpResult(u_hat, x_hat, iters, converged, state.contradiction)
