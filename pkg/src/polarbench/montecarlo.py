"""Seeded Monte-Carlo BER/FER trials over binary-input channels.

Trials are grouped into fixed-size lanes; lane i draws from
default_rng([seed, i]), so the tally is independent of how lanes are
scheduled and a --jobs split reproduces the single-process result byte for
byte. Decode failures (contradictory evidence) count as a frame error with
every information bit wrong; they never abort a run.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bp import bp_decode
from .channels import ChannelModel, DegenerateEvidenceError, likelihood_rows_binary, transmit
from .kernels import CodeSpec, encode
from .llrops import LlrContradiction
from .sc import decode_sc_arikan, decode_sc_general
from .scl import decode_scl

LANE_SIZE = 512
DECODERS = ("sc", "scl", "bp")


@dataclass
class TrialStats:
    trials: int
    bit_errors: int
    frame_errors: int
    info_bits: int  # per frame

    @property
    def ber(self) -> float:
        total = self.trials * self.info_bits
        return self.bit_errors / total if total else 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials if self.trials else 0.0

    def merge(self, other: "TrialStats") -> "TrialStats":
        return TrialStats(
            self.trials + other.trials,
            self.bit_errors + other.bit_errors,
            self.frame_errors + other.frame_errors,
            self.info_bits,
        )


def run_lane(
    spec: CodeSpec,
    ch: ChannelModel,
    decoder: str,
    count: int,
    rng,
    list_size: int = 8,
    iters: int = 40,
    min_sum: bool = False,
) -> TrialStats:
    if decoder not in DECODERS:
        raise ValueError(f"decoder must be one of {DECODERS}")
    if spec.kernel.q != 2:
        raise ValueError("channel trials need a binary-alphabet kernel")
    k = spec.k_info
    info_idx = np.array(spec.info_indices(), dtype=np.int64)
    bit_err = 0
    frame_err = 0
    for _ in range(count):
        u = spec.assemble(rng.integers(0, 2, k))
        x = encode(spec, u)
        lam = transmit(ch, x, rng)
        try:
            if decoder == "sc":
                if spec.kernel.is_arikan:
                    u_hat = decode_sc_arikan(spec, lam, min_sum=min_sum).u_hat
                else:
                    u_hat = decode_sc_general(spec, likelihood_rows_binary(lam)).u_hat
            elif decoder == "scl":
                u_hat = decode_scl(spec, likelihood_rows_binary(lam), list_size).u_hat
            else:
                u_hat = bp_decode(spec, lam, max_iters=iters, min_sum=min_sum).u_hat
        except (LlrContradiction, DegenerateEvidenceError):
            frame_err += 1
            bit_err += k
            continue
        if k:
            errs = int((u_hat[info_idx] != u[info_idx]).sum())
            if errs:
                frame_err += 1
                bit_err += errs
    return TrialStats(count, bit_err, frame_err, k)


def _lane_counts(trials: int) -> list[tuple[int, int]]:
    lanes = []
    idx = 0
    left = trials
    while left > 0:
        take = min(LANE_SIZE, left)
        lanes.append((idx, take))
        idx += 1
        left -= take
    return lanes


def _lane_job(args) -> TrialStats:
    spec, ch, decoder, lane_idx, count, seed, list_size, iters, min_sum = args
    rng = np.random.default_rng([seed, lane_idx])
    return run_lane(spec, ch, decoder, count, rng, list_size, iters, min_sum)


def run_trials(
    spec: CodeSpec,
    ch: ChannelModel,
    decoder: str,
    trials: int,
    seed: int,
    list_size: int = 8,
    iters: int = 40,
    min_sum: bool = False,
    jobs: int = 1,
) -> TrialStats:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    lanes = _lane_counts(trials)
    args = [
        (spec, ch, decoder, idx, count, seed, list_size, iters, min_sum)
        for idx, count in lanes
    ]
    if jobs > 1 and len(lanes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_lane_job, args))
    else:
        parts = [_lane_job(a) for a in args]
    out = parts[0]
    for p in parts[1:]:
        out = out.merge(p)
    return out


CSV_HEADER = "decoder,channel,param,N,rate,list_size,iters,trials,ber,fer,seed"


def csv_row(
    decoder: str,
    ch: ChannelModel,
    spec: CodeSpec,
    stats: TrialStats,
    seed: int,
    list_size: int = 1,
    iters: int = 0,
) -> str:
    rate = spec.k_info / spec.n
    return (
        f"{decoder},{ch.kind},{ch.param:g},{spec.n},{rate:g},{list_size},{iters},"
        f"{stats.trials},{stats.ber:.8g},{stats.fer:.8g},{seed}"
    )
