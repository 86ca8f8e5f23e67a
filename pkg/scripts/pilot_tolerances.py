"""Pilot runs that pin the Monte Carlo tolerances used by the test suite.

Usage: python3 scripts/pilot_tolerances.py > tests/fixtures/pilot_tolerances.json

Pilot seeds (1000..1019) are disjoint from the seeds the tests use (0..19).
"""

import json
import math
import statistics
import sys

from monkeyzipf.analysis import entropy_limit, figure1_data, fit_loglog_slope, figure_keyboard
from monkeyzipf.exponent import solve_root
from monkeyzipf.keyboard import DistributionSpec, sample_spacings

PILOT_SEEDS = range(1000, 1020)
SIGMAS = 4.0


def shao_hahn_tolerance(spec, K=100_000):
    stats = [
        math.log(K) + math.fsum(map(math.log, sample_spacings(spec, K, s).spacings)) / K
        for s in PILOT_SEEDS
    ]
    sd = statistics.stdev(stats)
    mean_err = statistics.fmean(stats) - entropy_limit(spec)
    # tolerance on a 20-seed mean: SIGMAS standard errors plus the pilot's own offset
    tol = SIGMAS * sd / math.sqrt(len(stats)) + abs(mean_err)
    return {"K": K, "pilot_sd": sd, "pilot_mean_error": mean_err, "tolerance": float(f"{tol:.1g}")}


def slope_deviation(kind, N=475_255):
    devs = []
    for s in PILOT_SEEDS:
        fit = fit_loglog_slope(figure1_data(kind, N=N, seed=s))
        devs.append(fit.slope + solve_root(figure_keyboard(kind, seed=s)).beta)
    return {"N": N, "max_abs_deviation": max(map(abs, devs)), "deviations": devs}


def main():
    out = {
        "command": "python3 scripts/pilot_tolerances.py > tests/fixtures/pilot_tolerances.json",
        "pilot_seeds": [PILOT_SEEDS.start, PILOT_SEEDS.stop - 1],
        "shao_hahn": {
            "uniform": shao_hahn_tolerance(DistributionSpec.uniform()),
            "beta32": shao_hahn_tolerance(DistributionSpec.beta32()),
        },
    }
    if "--no-slopes" not in sys.argv:
        out["slope_vs_beta"] = {k: slope_deviation(k) for k in ("uniform", "beta")}
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
