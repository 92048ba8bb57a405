#!/usr/bin/env python3

# Sweeps one channel family over a list of noise parameters for one or
# more decoders and prints CSV (same schema as `polarbench simulate`).
#
# example:
#   ./fer_sweep.py --N 128 --rate 0.5 --channel bsc \
#       --params 0.02,0.04,0.06,0.08 --decoders sc,scl --trials 4000 --jobs 4

import argparse
import sys

from polarbench.channels import ChannelModel
from polarbench.construction import construct_bec
from polarbench.montecarlo import CSV_HEADER, csv_row, run_trials

parser = argparse.ArgumentParser()
parser.add_argument("--N", type=int, required=True, help="block length, power of 2")
parser.add_argument("--rate", type=float, default=0.5)
parser.add_argument("--channel", choices=["bec", "bsc", "biawgn"], default="bec")
parser.add_argument("--params", type=str, required=True,
                    help="comma-separated channel parameters")
parser.add_argument("--decoders", type=str, default="sc",
                    help="comma-separated subset of sc,scl,bp")
parser.add_argument("--design-eps", type=float, default=0.5,
                    help="erasure rate used for code construction")
parser.add_argument("--trials", type=int, default=2000)
parser.add_argument("--list-size", type=int, default=8)
parser.add_argument("--iters", type=int, default=40)
parser.add_argument("--seed", type=int, default=0)
parser.add_argument("--jobs", type=int, default=1)
parser.add_argument("-o", "--out", type=str, default=None)
args = parser.parse_args()

m = args.N.bit_length() - 1
if args.N != 2**m or m < 1:
    parser.error(f"N={args.N} is not a power of 2")
params = [float(x) for x in args.params.split(",")]
decoders = args.decoders.split(",")
for d in decoders:
    if d not in ("sc", "scl", "bp"):
        parser.error(f"unknown decoder {d!r}")

spec = construct_bec(m, args.design_eps, args.rate)

lines = [CSV_HEADER]
for dec in decoders:
    for p in params:
        ch = ChannelModel(args.channel, p)
        stats = run_trials(
            spec, ch, dec, args.trials, seed=args.seed,
            list_size=args.list_size, iters=args.iters, jobs=args.jobs,
        )
        ls = args.list_size if dec == "scl" else 1
        it = args.iters if dec == "bp" else 0
        line = csv_row(dec, ch, spec, stats, args.seed, list_size=ls, iters=it)
        lines.append(line)
        print(line, file=sys.stderr)  # progress; the CSV goes out at the end

text = "\n".join(lines) + "\n"
if args.out:
    with open(args.out, "w") as f:
        f.write(text)
else:
    sys.stdout.write(text)
