"""Power of L5 against L0 under the linear alternative at T = 250, with the relative reduction."""

import argparse

from kernel_unitroot.experiments import ExperimentConfig, run_power_table


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--beta", default="-0.05,-0.1,-0.2")
    p.add_argument("--M", type=int, default=200)
    p.add_argument("--B", type=int, default=99)
    p.add_argument("--seed", type=int, default=8)
    p.add_argument("--h", type=float, default=0.160)
    a = p.parse_args()
    betas = [float(b) for b in a.beta.split(",")]
    cfg = ExperimentConfig(T=[250], beta=betas, h_test={250: a.h}, M=a.M, B=a.B, seed=a.seed)
    (t,) = run_power_table(cfg, "linear")
    for i, beta in enumerate(t.betas):
        l5, l0 = t.power[i, 4], t.power[i, 5]
        print(f"beta={beta:5.2f}  L5={l5:.3f}  L0={l0:.3f}  reduction={(l0 - l5) / l0:.1%}")


if __name__ == "__main__":
    main()
