"""Batch experiments: power and size tables, real-data pipeline, output writers."""

from __future__ import annotations

import io
import json
import math
import os
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .bootstrap import (
    ALTERNATIVE,
    MAX_DEGENERATE_RATE,
    NULL,
    BootstrapSpec,
    SizePowerCurve,
    _bootstrap_matrix,
    p_value_from,
    rejection_rates,
    select_bandwidth,
)
from .errors import BandwidthTooSmallError, ConfigError, OutputError, UnitRootTestError
from .kernels import admissible_window, bandwidth_ladder, get_kernel
from .series import (
    LinearShift,
    NonlinearShift,
    RandomWalk,
    RngStream,
    ingest_csv,
    parse_dgp,
    sigma_u_hat,
)
from .stats import df_values, dickey_fuller, l_stat

REFERENCE_H_TEST = {250: 0.160, 500: 0.117, 750: 0.097}
DATA_STREAM = 2  # hypothesis index reserved for real-data bootstraps
SCALES = {"desk": (200, 99), "full": (1000, 250)}
SCALES["paper"] = SCALES["full"]  # accepted alias


@dataclass
class ExperimentConfig:
    T: list = field(default_factory=lambda: [250, 500, 750])
    beta: list = field(default_factory=lambda: [-0.05, -0.10, -0.20, -0.40])
    gamma: float = 0.5
    sigma2: float = 0.05
    alpha: float = 0.05
    h_test: dict = field(default_factory=lambda: dict(REFERENCE_H_TEST))
    kernel: str = "uniform"
    B: int = 99
    M: int = 200
    seed: int = 0
    workers: int = 1
    innovation: str = "normal"
    scheme: str = "recursive"
    df_critical: str = "bootstrap"
    out: str = "results"

    def __post_init__(self):
        if not self.T or not self.beta:
            raise ConfigError("T and beta lists must be nonempty")
        if not self.sigma2 > 0:
            raise ConfigError(f"sigma2 must be positive, got {self.sigma2}")
        if self.df_critical not in ("bootstrap", "asymptotic"):
            raise ConfigError(f"df_critical must be 'bootstrap' or 'asymptotic', got {self.df_critical!r}")
        self.bootstrap_spec()  # validates B, M, alpha

    @property
    def sigma_u(self) -> float:
        return math.sqrt(self.sigma2)

    def bootstrap_spec(self) -> BootstrapSpec:
        return BootstrapSpec(
            B=self.B, M=self.M, alpha=self.alpha, innovation=self.innovation,
            master_seed=self.seed, workers=self.workers, scheme=self.scheme,
        )

    def h_for(self, T: int) -> float:
        try:
            return float(self.h_test[T])
        except KeyError:
            raise ConfigError(f"no h_test configured for T={T}") from None

    def with_scale(self, scale: str) -> "ExperimentConfig":
        try:
            self.M, self.B = SCALES[scale]
        except KeyError:
            raise ConfigError(f"scale must be one of {sorted(SCALES)}") from None
        return self


def _parse_list(text, conv):
    return [conv(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


def _parse_h_test(text):
    out = {}
    for item in _parse_list(text, str):
        T, sep, h = item.partition(":")
        if not sep:
            raise ConfigError(f"h_test entries look like T:h, got {item!r}")
        out[int(T)] = float(h)
    return out


CONFIG_PARSERS = {
    "T": lambda v: _parse_list(v, int),
    "beta": lambda v: _parse_list(v, float),
    "gamma": float,
    "sigma2": float,
    "alpha": float,
    "h_test": _parse_h_test,
    "kernel": str,
    "B": int,
    "M": int,
    "seed": int,
    "workers": int,
    "innovation": str,
    "scheme": str,
    "df_critical": str,
    "out": str,
}


def read_config_file(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    raw = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for n, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError(f"{path}:{n}: expected key = value")
        raw[key.strip().replace("-", "_")] = value.strip()
    return raw


def build_config(raw: dict) -> ExperimentConfig:
    kwargs = {}
    for key, value in raw.items():
        if value is None:
            continue
        if key not in CONFIG_PARSERS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            kwargs[key] = CONFIG_PARSERS[key](value) if isinstance(value, str) else value
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None
    return ExperimentConfig(**kwargs)


# --------------------------------------------------------------------------
# tables


@dataclass
class PowerTable:
    """Rejection frequencies: rows per beta, columns L1..L5 then L0."""

    T: int
    alternative: str
    h_test: float
    hs: list
    betas: list
    power: np.ndarray
    stderr: np.ndarray
    degenerate: np.ndarray
    M: int
    B: int
    alpha: float
    seed: int
    columns: tuple = ("L1", "L2", "L3", "L4", "L5", "L0")


@dataclass
class SizeTable:
    """Estimated size per sample size, columns L1..L5 then L0."""

    T: list
    hs: list  # ladder per T
    size: np.ndarray
    stderr: np.ndarray
    degenerate: np.ndarray
    M: int
    B: int
    alpha: float
    seed: int
    columns: tuple = ("L1", "L2", "L3", "L4", "L5", "L0")


def alternative_dgp(kind: str, beta: float, config: ExperimentConfig):
    if kind == "linear":
        return LinearShift(beta, config.sigma_u)
    if kind == "nonlinear":
        return NonlinearShift(beta, config.gamma, config.sigma_u)
    raise ConfigError(f"alternative must be 'linear' or 'nonlinear', got {kind!r}")


def run_power_table(config: ExperimentConfig, alternative: str = "nonlinear") -> list[PowerTable]:
    """Power of L1..L5 (bandwidth ladder around h_test) and L0 for every (T, beta).

    Replications of different beta share their innovation streams.
    """
    kernel = get_kernel(config.kernel)
    spec = config.bootstrap_spec()
    tables = []
    for T in config.T:
        h_test = config.h_for(T)
        hs = bandwidth_ladder(h_test)
        power, se, deg = [], [], []
        for beta in config.beta:
            dgp = alternative_dgp(alternative, beta, config) if beta != 0 else RandomWalk(config.sigma_u)
            res = rejection_rates(
                dgp, T, kernel, hs, spec, ALTERNATIVE, with_df=True, df_critical=config.df_critical
            )
            power.append(res.rates)
            se.append(res.stderr)
            deg.append(res.degenerate)
        tables.append(
            PowerTable(
                T, alternative, h_test, hs, list(config.beta), np.array(power), np.array(se),
                np.array(deg), spec.M, spec.B, spec.alpha, spec.master_seed,
            )
        )
    return tables


def run_size_table(config: ExperimentConfig) -> SizeTable:
    kernel = get_kernel(config.kernel)
    spec = config.bootstrap_spec()
    size, se, deg, ladders = [], [], [], []
    for T in config.T:
        hs = bandwidth_ladder(config.h_for(T))
        res = rejection_rates(
            RandomWalk(config.sigma_u), T, kernel, hs, spec, NULL, with_df=True,
            df_critical=config.df_critical,
        )
        ladders.append(hs)
        size.append(res.rates)
        se.append(res.stderr)
        deg.append(res.degenerate)
    return SizeTable(
        list(config.T), ladders, np.array(size), np.array(se), np.array(deg),
        spec.M, spec.B, spec.alpha, spec.master_seed,
    )


# --------------------------------------------------------------------------
# real data


def default_data_alternative(series, sigma_u):
    """Linear alternative with slope from the Dickey-Fuller fit, pulled into (-2, 0)."""
    try:
        beta = dickey_fuller(series).beta_hat
    except UnitRootTestError:
        beta = -0.05
    if not -2 < beta < 0:
        beta = -0.05
    return LinearShift(beta, sigma_u)


def data_grid(T: int, n: int = 7) -> list[float]:
    win = admissible_window(T, 0.1)
    return [float(h) for h in np.geomspace(win.lo / 2, 2 * win.hi, n)]


def run_data_analysis(
    source,
    config: ExperimentConfig,
    h: float | None = None,
    alternative: str | None = None,
    grid=None,
) -> dict:
    """Test one observed series for a unit root.

    Calibrates the bandwidth by the size/power search unless ``h`` is given,
    then bootstraps p-values for L-hat (upper tail) and L0 (lower tail) from
    the same B resamples. The report records everything needed to replay it.
    """
    series = ingest_csv(source)
    kernel = get_kernel(config.kernel)
    spec = config.bootstrap_spec()
    sigma = sigma_u_hat(series)
    if not sigma > 0:
        raise ConfigError("series has no variation (sigma_u_hat = 0)")

    calibration = None
    if h is None:
        null = RandomWalk(sigma)
        alt = parse_dgp(alternative, sigma) if alternative else default_data_alternative(series, sigma)
        grid = list(grid) if grid is not None else data_grid(series.T)
        h, curve = select_bandwidth(null, alt, series.T, kernel, grid, spec)
        calibration = {
            "null": repr(null),
            "alternative": repr(alt),
            "grid": grid,
            "M": spec.M,
            "curve": [asdict(r) for r in curve.rows],
        }
    h = float(h)

    outcome = l_stat(series, kernel, h)
    df = dickey_fuller(series)
    stream = RngStream(spec.master_seed, (DATA_STREAM,))
    boot = _bootstrap_matrix(series, kernel, [h], spec.B, spec.innovation, stream, spec.scheme, True, sigma)
    deg_l = int(np.count_nonzero(~np.isfinite(boot[:, 0])))
    deg_0 = int(np.count_nonzero(~np.isfinite(boot[:, 1])))
    if deg_l > MAX_DEGENERATE_RATE * spec.B:
        raise BandwidthTooSmallError(
            f"{deg_l} of {spec.B} bootstrap statistics degenerate at h={h:g}", degenerate=deg_l, total=spec.B
        )
    p_l = p_value_from(outcome.l_value, boot[:, 0], "upper")
    p_0 = p_value_from(float(df_values(series.values)[0]), boot[:, 1], "lower")
    return {
        "input": str(source) if isinstance(source, (str, os.PathLike)) else "<stream>",
        "T": series.T,
        "X0": float(series.values[0]),
        "sigma_u_hat": sigma,
        "kernel": kernel.name,
        "h": h,
        "h_source": "given" if calibration is None else "calibrated",
        "calibration": calibration,
        "statistic": outcome.to_dict(),
        "p_value": p_l,
        "dickey_fuller": {**df.to_dict(), "p_value": p_0},
        "alpha": spec.alpha,
        "reject_unit_root": {"L": p_l < spec.alpha, "L0": p_0 < spec.alpha},
        "bootstrap": {
            "B": spec.B,
            "innovation": spec.innovation.value,
            "scheme": spec.scheme.value,
            "seed": spec.master_seed,
            "stream_path": [DATA_STREAM],
            "degenerate": {"L": deg_l, "L0": deg_0},
        },
    }


# --------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    return repr(float(v))


def _power_csv(t: PowerTable) -> str:
    cols = list(t.columns)
    buf = io.StringIO()
    buf.write(",".join(["T", "beta", *cols, *(f"se_{c}" for c in cols)]) + "\n")
    for i, beta in enumerate(t.betas):
        vals = [str(t.T), _fmt(beta), *map(_fmt, t.power[i]), *map(_fmt, t.stderr[i])]
        buf.write(",".join(vals) + "\n")
    return buf.getvalue()


def _power_md(t: PowerTable) -> str:
    cols = list(t.columns)
    lines = [
        f"Power values for T = {t.T} at the {t.alpha:.0%} level "
        f"({t.alternative} alternative, h_test = {t.h_test:g}, M = {t.M}, B = {t.B})",
        "",
        "| β | " + " | ".join(cols) + " |",
        "|---" * (len(cols) + 1) + "|",
    ]
    for i, beta in enumerate(t.betas):
        lines.append(f"| {beta:.2f} | " + " | ".join(f"{p:.3f}" for p in t.power[i]) + " |")
    return "\n".join(lines) + "\n"


def _power_plot(t: PowerTable) -> str:
    buf = io.StringIO()
    buf.write("x,y,series\n")
    for j, c in enumerate(t.columns):
        for i, beta in enumerate(t.betas):
            buf.write(f"{_fmt(beta)},{_fmt(t.power[i, j])},T{t.T}_{c}\n")
    return buf.getvalue()


def _size_csv(t: SizeTable) -> str:
    cols = list(t.columns)
    buf = io.StringIO()
    buf.write(",".join(["T", *(f"h{i}" for i in range(1, 6)), *cols, *(f"se_{c}" for c in cols)]) + "\n")
    for i, T in enumerate(t.T):
        vals = [str(T), *map(_fmt, t.hs[i]), *map(_fmt, t.size[i]), *map(_fmt, t.stderr[i])]
        buf.write(",".join(vals) + "\n")
    return buf.getvalue()


def _size_md(t: SizeTable) -> str:
    cols = list(t.columns)
    lines = [
        f"Size values at the {t.alpha:.0%} level (M = {t.M}, B = {t.B})",
        "",
        "| T | " + " | ".join(cols) + " |",
        "|---" * (len(cols) + 1) + "|",
    ]
    for i, T in enumerate(t.T):
        lines.append(f"| {T} | " + " | ".join(f"{p:.3f}" for p in t.size[i]) + " |")
    return "\n".join(lines) + "\n"


def _size_plot(t: SizeTable) -> str:
    buf = io.StringIO()
    buf.write("x,y,series\n")
    for j, c in enumerate(t.columns):
        for i, T in enumerate(t.T):
            buf.write(f"{T},{_fmt(t.size[i, j])},{c}\n")
    return buf.getvalue()


CURVE_HEADER = "h,size,power,se_size,se_power,degenerate"


def _curve_csv(c: SizePowerCurve) -> str:
    rows = [CURVE_HEADER]
    for r in c.rows:
        rows.append(",".join([_fmt(r.h), _fmt(r.size), _fmt(r.power), _fmt(r.se_size), _fmt(r.se_power), str(r.degenerate)]))
    return "\n".join(rows) + "\n"


def _curve_md(c: SizePowerCurve) -> str:
    lines = ["| h | size | power | se(size) | se(power) | degenerate |", "|---|---|---|---|---|---|"]
    for r in c.rows:
        lines.append(f"| {r.h:.4g} | {r.size:.3f} | {r.power:.3f} | {r.se_size:.3f} | {r.se_power:.3f} | {r.degenerate} |")
    return "\n".join(lines) + "\n"


def _curve_plot(c: SizePowerCurve) -> str:
    lines = ["x,y,series"]
    for name in ("size", "power"):
        lines.extend(f"{_fmt(r.h)},{_fmt(getattr(r, name))},{name}" for r in c.rows)
    return "\n".join(lines) + "\n"


def _to_jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, SizePowerCurve):
        return [asdict(r) for r in obj.rows]
    if hasattr(obj, "__dataclass_fields__"):
        return {f.name: getattr(obj, f.name) for f in fields(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _json(obj) -> str:
    return json.dumps(obj, default=_to_jsonable, indent=2, sort_keys=True) + "\n"


def _report_md(rep: dict) -> str:
    st = rep["statistic"]
    df = rep["dickey_fuller"]
    lines = [
        f"Unit-root test, T = {rep['T']}, h = {rep['h']:.4g} ({rep['h_source']})",
        "",
        "| statistic | value | p-value |",
        "|---|---|---|",
        f"| L̂_T(h) | {st['l']:.3f} | {rep['p_value']:.3f} |",
        f"| L₀ | {df['l0']:.3f} | {df['p_value']:.3f} |",
        "",
        f"B = {rep['bootstrap']['B']}, seed = {rep['bootstrap']['seed']}",
    ]
    return "\n".join(lines) + "\n"


def render(artifact, fmt: str) -> str:
    """Serialize a table, curve or report; output is a pure function of the input."""
    renderers = {
        PowerTable: {"csv": _power_csv, "markdown": _power_md, "plotdata": _power_plot},
        SizeTable: {"csv": _size_csv, "markdown": _size_md, "plotdata": _size_plot},
        SizePowerCurve: {"csv": _curve_csv, "markdown": _curve_md, "plotdata": _curve_plot},
        dict: {"markdown": _report_md},
    }
    if fmt == "json":
        return _json(artifact)
    table = renderers.get(type(artifact), {})
    if fmt not in table:
        raise ConfigError(f"format {fmt!r} not available for {type(artifact).__name__}")
    return table[fmt](artifact)


EXTENSIONS = {"csv": ".csv", "json": ".json", "markdown": ".md", "plotdata": ".plot.csv"}


def emit_outputs(artifact, fmt: str, path) -> str:
    """Write ``artifact`` in ``fmt`` to ``path`` and return the path."""
    text = render(artifact, fmt)
    path = os.fspath(path)
    try:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return path
