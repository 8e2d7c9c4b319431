"""Sample from the single-latent fit of the 5x5 example and track estimation error against n."""
import argparse
import time

import numpy as np

from crosscov import decompose, validate
from crosscov.parameterization import single_latent_params
from crosscov.simulation import empirical_cov, fit, sample_latent

from feasible_region import EXAMPLE


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="+", default=[1000, 10000, 100000, 200000])
    ap.add_argument("--seeds", type=int, default=8)
    ap.add_argument("--alpha", type=float, default=2.0)
    args = ap.parse_args()

    cov = validate(EXAMPLE, 3, 2)
    params = single_latent_params(cov, decompose(cov), args.alpha)
    true_min, true_max = np.sqrt(2030) / 30, np.sqrt(7)
    # expected Frobenius error of a Gaussian sample covariance
    spread = np.trace(EXAMPLE) ** 2 + np.sum(EXAMPLE**2)

    print(f"{'n':>8} {'frob':>8} {'clt':>8} {'d_amin':>9} {'d_amax':>9} {'sv_ratio':>9}")
    errs = []
    t0 = time.perf_counter()
    for n in args.ns:
        rows = []
        for seed in range(args.seeds):
            data = sample_latent(params, n, seed)
            rep = fit(data)
            frob = np.linalg.norm(empirical_cov(data).sigma - EXAMPLE)
            rows.append((frob, rep.bounds.alpha_min - true_min, rep.bounds.alpha_max - true_max, rep.sv_ratio))
        m = np.mean(np.abs(rows), axis=0)
        errs.append(m[0])
        print(f"{n:8d} {m[0]:8.4f} {np.sqrt(spread / n):8.4f} {m[1]:9.4f} {m[2]:9.4f} {m[3]:9.4f}")
    slope = np.polyfit(np.log(args.ns), np.log(errs), 1)[0]
    print(f"log-log slope of Frobenius error: {slope:.3f}  ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
