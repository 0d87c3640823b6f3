"""Size of L1..L5 and L0 under the random-walk null for T in {250, 500, 750}."""

import argparse

from kernel_unitroot.experiments import ExperimentConfig, render, run_size_table


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--M", type=int, default=200)
    p.add_argument("--B", type=int, default=99)
    p.add_argument("--seed", type=int, default=2)
    p.add_argument("--workers", type=int, default=1)
    a = p.parse_args()
    cfg = ExperimentConfig(M=a.M, B=a.B, seed=a.seed, workers=a.workers)
    print(render(run_size_table(cfg), "markdown"))


if __name__ == "__main__":
    main()
