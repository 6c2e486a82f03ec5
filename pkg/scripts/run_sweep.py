#!/usr/bin/env python3
"""Run every verification over a radius sweep for one configuration and
print a compact summary table.

Usage:
    python scripts/run_sweep.py scripts/configs/twisted_cubic.ini [--tol 1e-6]

This is the exploratory companion to the `nevlab` CLI: instead of one CSV
per command it runs the defect-relation check, the per-level comparisons,
the growth bound and the tautological monitor on a shared radius grid and
reports worst-case margins.
"""

import argparse
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from nevlab.cli import parse_config  # noqa: E402
from nevlab.curve import normalize  # noqa: E402
from nevlab.harness import (  # noqa: E402
    general_position_tuples,
    mcquillan_monitor,
    verify_cartan,
    verify_height_growth,
    verify_lemma55,
    verify_prop62,
)


def summarize(name, report, normalize_by_log=False):
    margins = []
    for row in report.rows:
        m = row.margin
        if normalize_by_log:
            m = m / max(1.0, math.log(row.r))
        margins.append(m)
    conv = sum(row.converged for row in report.rows)
    print(f"{name:<28} min margin {min(margins):+10.4f}   "
          f"max {max(margins):+10.4f}   converged {conv}/{len(report.rows)}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config")
    ap.add_argument("--tol", type=float, default=None)
    args = ap.parse_args()

    cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
    tol = args.tol if args.tol is not None else cfg.tol
    x = normalize(list(cfg.curve))
    hp = general_position_tuples(cfg.hyperplanes, cfg.n)
    radii = cfg.radii()
    print(f"curve n={cfg.n}, {len(hp.forms)} forms, "
          f"{len(hp.tuples)} tuples, {len(radii)} radii in "
          f"[{radii[0]:g}, {radii[-1]:g}], tol={tol:g}\n")

    summarize("defect relation", verify_cartan(x, hp, radii, tol=tol))
    summarize("pair comparison (level 1)",
              verify_lemma55(x, hp, None, radii, tol=tol))
    for d in range(1, x.n + 1):
        rep = verify_prop62(x, hp, d, radii, tol=tol)
        summarize(f"second difference d={d}", rep)
        gap = max(row.values["route_gap"] for row in rep.rows)
        print(f"{'':<28} route agreement gap {gap:.3e}")
    summarize("height growth", verify_height_growth(x, radii, tol=tol))
    summarize("tautological monitor", mcquillan_monitor(x, hp, radii, tol=tol),
              normalize_by_log=True)


if __name__ == "__main__":
    main()
