"""Cycle-accurate SC decoder models over the binary butterfly schedule.

All variants execute the same activation sequence (STEP I / STEP III of
every tree node, depth-first); they differ in how many processing elements
serve an activation and in where intermediate values live:

  sc_pipeline  one PE bank per depth, every activation is a single cycle
  sc_line      a single bank of N/2 PEs; partial codewords live in per-depth
               flip-flop banks updated incrementally from each bit decision
  sc_limited   the line schedule with N/2**i PEs; wide activations run as
               several one-cycle sub-passes
  sc_multi     p <= N-1 staggered codewords sharing PE instances keyed by
               (depth, cycle mod (N-1)); contention is counted, not assumed

The arithmetic is the same vector f-plus / f-equal used by the software
decoder, applied in the same order, so decisions match it bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..kernels import CodeSpec, encode_unchecked
from ..llrops import decide, f_equal_vec, f_plus_vec
from ..sc import decode_sc_arikan
from .core import CycleReport, TraceLog

_ARIKAN_GMAT: dict[int, np.ndarray] = {}


def _arikan_gmat(kernel, width: int) -> np.ndarray:
    """Rows of the width x width encode matrix, used as update indicators."""
    mat = _ARIKAN_GMAT.get(width)
    if mat is None:
        rows = []
        for i in range(width):
            e = np.zeros(width, dtype=np.int64)
            e[i] = 1
            rows.append(encode_unchecked(kernel, e))
        mat = np.stack(rows)
        _ARIKAN_GMAT[width] = mat
    return mat


class PartialSumMismatch(AssertionError):
    """A flip-flop bank disagreed with the re-encoded left half."""


@dataclass
class ScHwRun:
    u_hat: np.ndarray
    x_hat: np.ndarray
    report: CycleReport
    trace: TraceLog


class _ScEngine:
    def __init__(self, spec: CodeSpec, arch: str, i_param: int = 1,
                 min_sum: bool = False, trace: bool = False):
        if not spec.kernel.is_arikan:
            raise ValueError("SC hardware models cover the (u+v, v) kernel")
        self.spec = spec
        self.n = spec.n
        self.m = spec.m
        self.arch = arch
        self.min_sum = min_sum
        self.mask, self.vals = spec.frozen_arrays()
        self.trace = TraceLog(trace)
        self.cycle = 0
        self.sched: list[tuple[int, int]] = []  # (depth, cycle) per sub-pass
        if arch == "sc_pipeline":
            self.pe_limit = None
            self.pe_count = self.n - 1
            self.llr_regs = 2 * (self.n - 1)
            self.banks = None
            self.ps_flops = 0
        elif arch in ("sc_line", "sc_limited"):
            i = 1 if arch == "sc_line" else i_param
            if not 1 <= i <= self.m:
                raise ValueError(f"i must be in [1, {self.m}]")
            self.pe_limit = self.n // 2**i
            self.pe_count = self.pe_limit
            self.llr_regs = self.n - 1
            # per-depth partial codeword storage for nodes of size >= 4
            self.banks = {
                d: np.zeros(2 ** (self.m - d - 1), dtype=np.int64)
                for d in range(self.m - 1)
            }
            self.ps_flops = sum(len(b) for b in self.banks.values())
        else:
            raise ValueError(f"unknown arch {arch!r}")
        self.left_phase: list[tuple[int, int, int]] = []  # (depth, start, width)

    # one STEP activation; returns nothing but advances the clock
    def _fire(self, depth: int, op: str, inputs, outputs):
        width = len(outputs)
        limit = width if self.pe_limit is None else self.pe_limit
        passes = max(1, math.ceil(width / limit))
        unit = f"pe{depth}" if self.arch == "sc_pipeline" else "pe"
        for k in range(passes):
            self.sched.append((depth, self.cycle))
            if self.trace.enabled:
                lo, hi = k * limit, min((k + 1) * limit, width)
                op_k = op if passes == 1 else f"{op}.{k}"
                self.trace.fire(
                    self.cycle, unit, op_k,
                    [v for arr in inputs for v in arr[lo:hi]],
                    list(outputs[lo:hi]),
                )
            self.cycle += 1

    def _decide_leaf(self, lam: float, off: int) -> int:
        if self.mask[off]:
            u = int(self.vals[off])
        else:
            u = decide(lam)
        if self.banks is not None and u:
            kernel = self.spec.kernel
            for depth, start, width in self.left_phase:
                self.banks[depth][:width] ^= _arikan_gmat(kernel, width)[off - start]
        return u

    def _visit(self, lam: np.ndarray, off: int, depth: int):
        nd = len(lam)
        if nd == 1:
            u = self._decide_leaf(float(lam[0]), off)
            arr = np.array([u], dtype=np.int64)
            return arr, arr.copy()
        half = nd // 2
        even, odd = lam[0::2], lam[1::2]
        l1 = f_plus_vec(even, odd, min_sum=self.min_sum)
        self._fire(depth, "f", (even, odd), l1)

        track = self.banks is not None and depth <= self.m - 2
        if track:
            self.left_phase.append((depth, off, half))
        u0, x0 = self._visit(l1, off, depth + 1)
        if track:
            self.left_phase.pop()
            bank = self.banks[depth][:half]
            if not np.array_equal(bank, x0):
                raise PartialSumMismatch(f"depth {depth} bank diverged from re-encode")
            x0 = bank.copy()
            self.banks[depth][:] = 0  # release for the next node at this depth

        l2 = f_equal_vec(np.where(x0 == 1, -even, even), odd)
        self._fire(depth, "g", (even, odd), l2)
        u1, x1 = self._visit(l2, off + half, depth + 1)
        x = np.empty(nd, dtype=np.int64)
        x[0::2] = x0 ^ x1
        x[1::2] = x1
        return np.concatenate([u0, u1]), x

    def run(self, llr: np.ndarray):
        lam = np.asarray(llr, dtype=np.float64)
        if lam.shape != (self.n,):
            raise ValueError(f"llr must have length {self.n}")
        u_hat, x_hat = self._visit(lam, 0, 0)
        return u_hat, x_hat


def run_sc(
    spec: CodeSpec,
    llr: np.ndarray,
    arch: str = "sc_line",
    i_param: int = 1,
    min_sum: bool = False,
    trace: bool = False,
) -> ScHwRun:
    eng = _ScEngine(spec, arch, i_param=i_param, min_sum=min_sum, trace=trace)
    u_hat, x_hat = eng.run(llr)
    extra = {}
    if arch == "sc_limited":
        extra["i"] = i_param
        extra["root_passes"] = max(1, (spec.n // 2) // eng.pe_limit)
    report = CycleReport(
        arch=arch,
        n=spec.n,
        cycles=eng.cycle,
        pe_count=eng.pe_count,
        llr_regs=eng.llr_regs,
        ps_flops=eng.ps_flops,
        extra=extra,
    )
    return ScHwRun(u_hat, x_hat, report, eng.trace)


@dataclass
class ScMultiRun:
    results: list  # (u_hat, x_hat) per codeword
    report: CycleReport
    trace: TraceLog


def run_sc_multi(
    spec: CodeSpec,
    llr_list,
    min_sum: bool = False,
    trace: bool = False,
) -> ScMultiRun:
    """p codewords enter one cycle apart and share PE instances.

    An activation of codeword c at schedule cycle t fires the instance
    (depth, t mod (N-1)) at absolute cycle t + c. The firing grid is
    counted to show that no instance double-fires.
    """
    n = spec.n
    p = len(llr_list)
    if not 1 <= p <= n - 1:
        raise ValueError("codeword count must be in [1, N-1]")

    # The schedule is input-independent, so one engine run fixes it. The
    # other codewords go through the software recursion, which computes the
    # same values in the same order as the engine (tests pin this down).
    eng = _ScEngine(spec, "sc_pipeline", min_sum=min_sum, trace=False)
    results = [eng.run(llr_list[0])]
    sched = eng.sched
    for llr in llr_list[1:]:
        res = decode_sc_arikan(spec, llr, min_sum=min_sum)
        results.append((res.u_hat, res.x_hat))

    tl = TraceLog(trace)
    if tl.enabled:
        for c in range(p):
            for depth, t in sched:
                tl.fire(t + c, f"inst{depth}.{t % (n - 1)}", "act", [c], [])

    depths = np.array([d for d, _ in sched])
    cycles = np.array([t for _, t in sched])
    inst_keys = sorted({(int(d), int(t) % (n - 1)) for d, t in sched})
    inst_index = {k: j for j, k in enumerate(inst_keys)}
    inst_ids = np.array([inst_index[(int(d), int(t) % (n - 1))] for d, t in sched])

    total_cycles = int(cycles.max()) + p
    grid = np.zeros((len(inst_keys), total_cycles), dtype=np.int32)
    for c in range(p):
        grid[inst_ids, cycles + c] += 1
    contention = int((grid > 1).sum())

    per_level = {}
    for d, r in inst_keys:
        per_level[d] = per_level.get(d, 0) + 1
    inst_width = {j: spec.n // 2 ** (k[0] + 1) for j, k in enumerate(inst_keys)}
    pe_count = p + sum(inst_width.values())

    report = CycleReport(
        arch="sc_multi",
        n=n,
        cycles=total_cycles,
        pe_count=pe_count,
        llr_regs=p * (n - 1),
        codewords=p,
        contention=contention,
        extra={f"instances_d{d}": c for d, c in sorted(per_level.items())},
    )
    return ScMultiRun(results, report, tl)
