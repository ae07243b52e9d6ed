"""Dispersion speed, super-solution bound and certificate for every shipped scenario.

    python3 scripts/dispersion_scan.py [--out results/dispersion]
"""

import argparse
import csv
from pathlib import Path

from frontlab.config import load_scenario
from frontlab.speed import lambda_scan, speed_report

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(ROOT / "results" / "dispersion"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    print(f"{'scenario':28s} {'c_disp':>10s} {'attained':>8s} {'lam*':>8s} {'upper':>10s} {'cert':>10s}")
    for path in sorted((ROOT / "scenarios").glob("*.json")):
        s = load_scenario(path)
        rep = speed_report(s.measure, s.nonlinearity, certificate=True)
        if rep.c_dispersion is None:
            print(f"{s.name:28s} skipped: {rep.errors.get('dispersion')}")
            continue
        cert = rep.certificate["bound"] if rep.certificate else float("nan")
        print(f"{s.name:28s} {rep.c_dispersion:10.5f} {str(rep.dispersion_attained):>8s} "
              f"{rep.lambda_star:8.4f} {rep.upper_bound_min:10.5f} {cert:10.5f}")
        with open(out / f"{s.name}_lambda_scan.csv", "w", newline="\n") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["lambda", "c_lambda", "upper_lambda"])
            w.writerows(lambda_scan(s.measure, s.nonlinearity))


if __name__ == "__main__":
    main()
