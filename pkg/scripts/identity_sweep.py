"""Run the kernel identity suite and print the worst residual per identity and mass."""

import argparse
import time

from dskg.verify import DEFAULT_MASSES, IdentityConfig, reports_to_csv, run_kernel_identity_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default=None, help="also write the full report here")
    args = ap.parse_args()

    t0 = time.perf_counter()
    rep = run_kernel_identity_suite(args.samples, DEFAULT_MASSES, IdentityConfig(seed=args.seed))
    elapsed = time.perf_counter() - t0

    names = sorted({c.case_id.rpartition(":")[0] for c in rep.cases})
    worst = {}
    for c in rep.cases:
        key = (c.case_id.rpartition(":")[0], c.mass)
        worst[key] = max(worst.get(key, 0.0), c.residual)

    header = "identity".ljust(20) + "".join(f"{str(m):>11}" for m in DEFAULT_MASSES)
    print(header)
    for name in names:
        row = "".join(f"{worst[(name, complex(m))]:11.1e}" for m in DEFAULT_MASSES)
        print(name.ljust(20) + row)
    print(f"\n{len(rep.cases)} cases, {len(rep.failures)} failures, worst {rep.worst_residual:.2e}, {elapsed:.1f}s")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(reports_to_csv([rep]))


if __name__ == "__main__":
    main()
