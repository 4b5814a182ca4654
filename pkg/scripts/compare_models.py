#!/usr/bin/env python3
"""Reproduce the three-view model comparison for one dataset.

Given a real graph (from data/, see fetch_snap.py) or a synthetic target
sequence, fit the block model and the Chung-Lu baseline to the same degree
sequence, analyze all three graphs, and emit the degree / clustering /
spectrum CSVs side by side, ready for external plotting.

Usage:
  python scripts/compare_models.py --dataset ca-AstroPh --out-dir runs/astro
  python scripts/compare_models.py --powerlaw 10000,2,100 --seed 1 --out-dir runs/synth
"""

import argparse
import os
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from bter.cli import main as cli_main
from bter.communities import DATASET_FITS


def run(*args) -> None:
    code = cli_main([str(a) for a in args])
    if code != 0:
        sys.exit(code)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dataset", help="name under data/, e.g. ca-AstroPh")
    parser.add_argument("--powerlaw", metavar="N,GAMMA,DMAX")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--top-k", type=int, default=25)
    parser.add_argument("--out-dir", required=True)
    args = parser.parse_args()
    if bool(args.dataset) == bool(args.powerlaw):
        parser.error("give exactly one of --dataset / --powerlaw")

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    if args.dataset:
        data_dir = Path(os.environ.get("BTER_DATA_DIR", Path(__file__).parent.parent / "data"))
        source = data_dir / f"{args.dataset}.txt"
        if not source.is_file():
            print(f"missing {source}; run scripts/fetch_snap.py first", file=sys.stderr)
            return 1
        variant, rho, eta = DATASET_FITS.get(args.dataset, ("standard", 0.95, 0.05))
        degree_args = ("--from-graph", source)
        real_target = source
    else:
        variant, rho, eta = "standard", 0.95, 0.05
        degree_args = ("--powerlaw", args.powerlaw)
        real_target = None

    model_graph = out / "bter.txt"
    cl_graph = out / "cl.txt"
    run("generate", "--model", "bter", *degree_args, "--seed", args.seed,
        "--variant", variant, "--rho", rho, "--eta", eta, "--out", model_graph)
    run("generate", "--model", "cl", *degree_args, "--seed", args.seed,
        "--out", cl_graph)

    metrics = "degree,cc,triangles,spectrum"
    targets = {"bter": model_graph, "cl": cl_graph}
    if real_target is not None:
        targets["real"] = real_target
    for label, path in targets.items():
        run("analyze", "--graph", path, "--metrics", metrics,
            "--top-k", args.top_k, "--out-dir", out / f"report_{label}")

    if real_target is not None:
        for label in ("bter", "cl"):
            run("compare", "--report-a", out / f"report_{label}",
                "--report-b", out / "report_real",
                "--out", out / f"divergence_{label}_vs_real.csv")
    else:
        run("compare", "--report-a", out / "report_bter",
            "--report-b", out / "report_cl",
            "--out", out / "divergence_bter_vs_cl.csv")
    print(f"comparison written under {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
