#!/usr/bin/env python3
"""Run the two shipped benchmark scenarios and print a side-by-side summary.

Outputs (trajectory/energy CSVs, report, SVG plot) land under --out.
"""

import argparse
import sys
import time
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from ratelab import load_scenario, run_scenario  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out", help="output root directory")
    args = parser.parse_args()

    rows = []
    for name in ("fig1", "fig2"):
        cfg = load_scenario(REPO / "scenarios" / f"{name}.scenario")
        t0 = time.perf_counter()
        res = run_scenario(cfg, out_dir=Path(args.out) / name)
        elapsed = time.perf_counter() - t0
        eq = res.report.equilibrium
        rows.append(
            (
                name,
                cfg.params.b,
                eq.x_star,
                eq.c_star,
                res.report.verdict,
                res.classification.kind,
                res.classification.final_error,
                res.classification.tail_peak_to_peak,
                elapsed,
            )
        )
        print(f"{name}: wrote {res.paths['trajectory']}")

    print()
    print(f"{'case':6} {'b':>4} {'x*':>10} {'c*':>10} {'verdict':>16} "
          f"{'classification':>14} {'final_err':>10} {'tail_pp':>10} {'time':>6}")
    for r in rows:
        print(f"{r[0]:6} {r[1]:>4.2g} {r[2]:>10.5f} {r[3]:>10.5f} {r[4]:>16} "
              f"{r[5]:>14} {r[6]:>10.2e} {r[7]:>10.2e} {r[8]:>5.1f}s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
