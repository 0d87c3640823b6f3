"""Time series container, data-generating processes, CSV I/O and RNG streams."""

from __future__ import annotations

import csv
import io
import os
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import (
    ConfigError,
    CsvParseError,
    ExplosionError,
    SeriesError,
    SeriesTooShortError,
    StationarityWarning,
)


@dataclass(frozen=True)
class Series:
    """Observations ``X_0, X_1, ..., X_T``.

    ``values[0]`` is the initial value; simulated paths start at zero while
    ingested data keep their first observation.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True).ravel()
        if arr.size < 3:
            raise SeriesTooShortError(
                f"need at least 3 observations (T >= 2), got {arr.size}"
            )
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise SeriesError(f"non-finite value at index {bad}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def T(self) -> int:
        return self.values.size - 1

    @property
    def lags(self) -> np.ndarray:
        """``X_0, ..., X_{T-1}``."""
        return self.values[:-1]

    @property
    def responses(self) -> np.ndarray:
        """``X_1, ..., X_T``."""
        return self.values[1:]

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.values)

    def __len__(self):
        return self.values.size

    def __add__(self, c):
        return Series(self.values + c)

    def __mul__(self, c):
        return Series(self.values * c)

    __rmul__ = __mul__


# --------------------------------------------------------------------------
# RNG streams


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream addressed by ``(master_seed, path)``.

    Two streams with the same address produce the same draws no matter which
    process or thread asks for them; distinct paths give independent streams.
    """

    master_seed: int
    path: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(int(p) for p in self.path))
        if any(p < 0 for p in self.path):
            raise ConfigError("stream path entries must be nonnegative")

    def child(self, *indices: int) -> "RngStream":
        return RngStream(self.master_seed, self.path + tuple(indices))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(
            int(self.master_seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=self.path
        )
        return np.random.Generator(np.random.Philox(seq))


# --------------------------------------------------------------------------
# data-generating processes


@dataclass(frozen=True)
class RandomWalk:
    sigma_u: float

    def drift(self, x: float) -> float:
        return 0.0


@dataclass(frozen=True)
class LinearShift:
    beta: float
    sigma_u: float

    def drift(self, x: float) -> float:
        return self.beta * x


@dataclass(frozen=True)
class NonlinearShift:
    beta: float
    gamma: float
    sigma_u: float

    def drift(self, x: float) -> float:
        return self.beta * x + self.beta / (1.0 + abs(x) ** self.gamma)


@dataclass(frozen=True)
class CustomShift:
    delta: Callable[[float], float]
    sigma_u: float

    def drift(self, x: float) -> float:
        return float(self.delta(x))


Dgp = Union[RandomWalk, LinearShift, NonlinearShift, CustomShift]


def validate_dgp(dgp: Dgp) -> None:
    if not (np.isfinite(dgp.sigma_u) and dgp.sigma_u >= 0):
        raise ConfigError(f"sigma_u must be finite and >= 0, got {dgp.sigma_u}")
    if isinstance(dgp, NonlinearShift) and not dgp.gamma > 0:
        raise ConfigError(f"gamma must be positive, got {dgp.gamma}")
    if isinstance(dgp, (LinearShift, NonlinearShift)) and not -2 < dgp.beta < 0:
        if dgp.beta != 0:
            warnings.warn(
                f"beta={dgp.beta} lies outside the stationarity region (-2, 0)",
                StationarityWarning,
                stacklevel=3,
            )


def simulate(dgp: Dgp, T: int, stream: RngStream) -> Series:
    """Simulate ``X_t = X_{t-1} + drift(X_{t-1}) + sigma_u * eps_t`` from ``X_0 = 0``."""
    if T < 2:
        raise ConfigError(f"T must be >= 2, got {T}")
    validate_dgp(dgp)
    eps = stream.generator().standard_normal(T)
    shocks = dgp.sigma_u * eps
    x = np.empty(T + 1)
    x[0] = 0.0
    if isinstance(dgp, RandomWalk):
        # sequential accumulation, same rounding as the explicit recursion
        x[1:] = shocks
        np.cumsum(x, out=x)
    else:
        drift = dgp.drift
        prev = 0.0
        with np.errstate(over="ignore", invalid="ignore"):
            for t in range(1, T + 1):
                prev = prev + drift(prev) + shocks[t - 1]
                x[t] = prev
    finite = np.isfinite(x)
    if not finite.all():
        bad = int(np.flatnonzero(~finite)[0])
        raise ExplosionError(f"simulated path is non-finite at index {bad}", index=bad)
    return Series(x)


# --------------------------------------------------------------------------
# CSV


def ingest_csv(source) -> Series:
    """Read a series from CSV: one value per record, first column.

    An optional header line and any further columns are ignored. ``source``
    may be bytes, a binary or text file object, or a path.
    """
    if isinstance(source, (bytes, bytearray)):
        text = bytes(source).decode("utf-8-sig")
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            text = fh.read().decode("utf-8-sig")
    else:
        raw = source.read()
        text = raw.decode("utf-8-sig") if isinstance(raw, bytes) else raw

    values = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not row[0].strip():
            continue
        cell = row[0].strip()
        try:
            v = float(cell)
        except ValueError:
            if lineno == 1:
                continue
            raise CsvParseError(f"line {lineno}: cannot parse {cell!r}", line=lineno) from None
        if not np.isfinite(v):
            raise CsvParseError(f"line {lineno}: non-finite value {cell!r}", line=lineno)
        values.append(v)
    if len(values) < 3:
        raise SeriesTooShortError(f"need at least 3 numeric values, got {len(values)}")
    return Series(np.array(values))


def series_to_csv(series: Series, header: str | None = "value") -> str:
    lines = [header] if header else []
    lines.extend(format(v, ".17g") for v in series.values)
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------


def sigma_u_hat(series: Series) -> float:
    """Root mean squared first difference (no demeaning)."""
    d = series.increments
    return float(np.sqrt(np.dot(d, d) / series.T))


def standardized_increments(series: Series) -> np.ndarray:
    """Centered first differences rescaled to unit mean square."""
    d = series.increments
    c = d - d.mean()
    scale = np.sqrt(np.mean(c * c))
    if scale == 0:
        raise SeriesError("all increments equal; cannot resample differences")
    return c / scale


def parse_dgp(text: str, sigma_u: float) -> Dgp:
    """Parse ``rw``, ``linear:beta=-0.1`` or ``nonlinear:beta=-0.05,gamma=0.5``."""
    name, _, rest = text.strip().partition(":")
    params = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ConfigError(f"bad DGP parameter {item!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise ConfigError(f"bad DGP parameter {item!r}") from None
    name = name.lower()
    try:
        if name in ("rw", "randomwalk", "null"):
            return RandomWalk(sigma_u)
        if name == "linear":
            return LinearShift(params["beta"], sigma_u)
        if name == "nonlinear":
            return NonlinearShift(params["beta"], params.get("gamma", 0.5), sigma_u)
    except KeyError as exc:
        raise ConfigError(f"DGP {name!r} needs parameter {exc.args[0]}") from None
    raise ConfigError(f"unknown DGP {name!r}")
