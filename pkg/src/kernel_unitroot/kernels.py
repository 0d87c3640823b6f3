"""Compactly supported kernels and bandwidth rules."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BandwidthWarning, ConfigError

UNIFORM = 0
EPANECHNIKOV = 1


@dataclass(frozen=True)
class Kernel:
    """Symmetric probability kernel supported on ``[-support, support]``.

    ``code`` selects the compiled evaluation used by the fast pair loops.
    The support boundary is closed.
    """

    name: str
    code: int
    support: float
    l2_norm: float

    def __call__(self, u):
        u = np.asarray(u, dtype=np.float64)
        inside = np.abs(u) <= self.support
        if self.code == UNIFORM:
            out = np.where(inside, 0.5, 0.0)
        elif self.code == EPANECHNIKOV:
            out = np.where(inside, 0.75 * (1.0 - u * u), 0.0)
        else:  # pragma: no cover
            raise ConfigError(f"unknown kernel code {self.code}")
        return out if out.ndim else float(out)

    def evaluate(self, u):
        return self(u)


def uniform_kernel() -> Kernel:
    return Kernel("uniform", UNIFORM, 1.0, 0.5)


def epanechnikov_kernel() -> Kernel:
    return Kernel("epanechnikov", EPANECHNIKOV, 1.0, 0.6)


KERNELS = {"uniform": uniform_kernel, "epanechnikov": epanechnikov_kernel}


def get_kernel(name: str) -> Kernel:
    try:
        return KERNELS[name.lower()]()
    except KeyError:
        raise ConfigError(
            f"unknown kernel {name!r}; choose from {sorted(KERNELS)}"
        ) from None


class Window(NamedTuple):
    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return not self.lo < self.hi

    def contains(self, h: float) -> bool:
        return self.lo <= h <= self.hi


def admissible_window(T: int, eps0: float = 0.1) -> Window:
    """Bandwidth range ``(T^(-1/2 + eps0), T^(-3/10))`` suggested by the rate conditions."""
    if not 0 < eps0 < 0.2:
        raise ConfigError(f"eps0 must lie in (0, 0.2), got {eps0}")
    if T < 2:
        raise ConfigError(f"T must be >= 2, got {T}")
    return Window(float(T ** (-0.5 + eps0)), float(T ** -0.3))


def check_bandwidth(h: float, T: int | None = None, eps0: float = 0.1) -> float:
    """Validate ``h`` and warn when it lies outside the admissible window."""
    h = float(h)
    if not (np.isfinite(h) and h > 0):
        raise ConfigError(f"bandwidth must be positive and finite, got {h}")
    if T is not None and T >= 2:
        win = admissible_window(T, eps0)
        if win.empty:
            warnings.warn(f"admissible window is empty for T={T}", BandwidthWarning, stacklevel=2)
        elif not win.contains(h):
            warnings.warn(
                f"h={h:.4g} outside admissible window [{win.lo:.4g}, {win.hi:.4g}] for T={T}",
                BandwidthWarning,
                stacklevel=2,
            )
    return h


def bandwidth_ladder(h_test: float) -> list[float]:
    """``[h/16, h/8, h/4, h/2, h]``; the last entry is the tested bandwidth."""
    h_test = check_bandwidth(h_test)
    return [h_test / 2 ** (5 - i) for i in range(1, 6)]
