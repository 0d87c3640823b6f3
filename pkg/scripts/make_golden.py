"""Regenerate the golden CSV fixtures under tests/fixtures/."""

import math
from pathlib import Path

from kernel_unitroot import NonlinearShift, RngStream, bootstrap_resample, series_to_csv, sigma_u_hat, simulate

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    path = simulate(NonlinearShift(-0.1, 0.5, math.sqrt(0.05)), 750, RngStream(20090601, (0,)))
    (FIXTURES / "golden_nonlinear_T750.csv").write_text(series_to_csv(path))
    star = bootstrap_resample(path, sigma_u_hat(path), "normal", RngStream(20090601, (1,)))
    (FIXTURES / "golden_resample_T750.csv").write_text(series_to_csv(star))


if __name__ == "__main__":
    main()
