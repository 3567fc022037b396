"""
phasemix command line.

    python -m src.main tail -m model.json --grid 0.1:1000:8
    python -m src.main mda -m exp_pareto.json --format json

Data rows go to stdout, logging and one-line error diagnostics to stderr.
Exit status is 0 on success, 2 for invalid input and 3 for a numerical failure.
"""
import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from tqdm import tqdm

from .asymptotics import build_report, geometric_grid, grid_map, model_asymptote, summary_rows
from .config import load_settings, merge_settings
from .errors import DomainError, ModelFormatError, NumericalError, ValidationError
from .formats import FORMATS, load_model, read_rows, write_document, write_rows
from .mixture import mixture_density, mixture_moment, mixture_sample, mixture_tail, series_bounds
from .phase import ph_density, ph_moment, ph_sample, ph_tail
from .scaling import DiscreteScaler

logger = logging.getLogger(__name__)

COMMANDS = ("tail", "pdf", "moments", "sample", "asymptote", "mda", "compare", "series-bounds")
DEFAULT_GRID = (0.1, 1000.0, 8)
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: int = logging.INFO, log_file: str = None):
    """stderr always, plus a log file when asked; stdout stays reserved for data."""
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)


@dataclass
class RunConfig:
    command: str
    model_path: str
    x: Optional[float] = None
    grid: Tuple[float, float, int] = DEFAULT_GRID
    fmt: str = "csv"
    seed: Optional[int] = None
    count: int = 1000
    order: int = 4
    thetas: Tuple[float, ...] = (0.1, 1.0, 10.0)
    input_path: Optional[str] = None
    overrides: Dict[str, dict] = field(default_factory=dict)
    threads: Optional[int] = None
    progress: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command '{self.command}'")
        lo, hi, ppd = self.grid
        if not (0 < lo < hi) or not math.isfinite(hi):
            raise DomainError(f"grid bounds must satisfy 0 < lo < hi, got {lo}:{hi}")
        if ppd < 1:
            raise DomainError(f"points per decade must be at least 1, got {ppd}")
        if self.x is not None and (not math.isfinite(self.x) or self.x < 0):
            raise DomainError(f"x must be nonnegative and finite, got {self.x}")
        if self.fmt not in FORMATS:
            raise DomainError(f"unknown format '{self.fmt}', expected one of {FORMATS}")
        if self.count < 1 or self.order < 1:
            raise DomainError("--count and --order must be at least 1")

    @property
    def xs(self) -> np.ndarray:
        if self.x is not None:
            return np.array([self.x])
        return geometric_grid(*self.grid)


def _grid(text: str) -> Tuple[float, float, int]:
    try:
        lo, hi, ppd = text.split(":")
        return float(lo), float(hi), int(ppd)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI:PPD, got '{text}'")


def _floats(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got '{text}'")


def _override(text: str) -> Tuple[str, str, object]:
    """section.key=value, value parsed as JSON."""
    try:
        path, raw = text.split("=", 1)
        section, key = path.split(".")
        return section, key, json.loads(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected SECTION.KEY=VALUE, got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phasemix", description="Phase-type scale mixtures and their tails.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("-m", "--model", required=True, help="model JSON file")
    where = parser.add_mutually_exclusive_group()
    where.add_argument("--x", type=float, help="evaluate at a single point")
    where.add_argument("--grid", type=_grid, default=DEFAULT_GRID, help="geometric grid LO:HI:PPD")
    parser.add_argument("--format", dest="fmt", choices=FORMATS, default="csv")
    parser.add_argument("--seed", type=int, help="seed for `sample`")
    parser.add_argument("--count", type=int, default=1000, help="number of draws for `sample`")
    parser.add_argument("--order", type=int, default=4, help="highest moment order for `moments`")
    parser.add_argument("--theta", type=_floats, default=(0.1, 1.0, 10.0),
                        help="exponential-moment thetas for `mda`")
    parser.add_argument("--input", dest="input_path", help="previous `tail` output for `compare`")
    parser.add_argument("--set", dest="overrides", type=_override, action="append", default=[],
                        metavar="SECTION.KEY=VALUE", help="policy override, e.g. quadrature.tolerance=1e-9")
    parser.add_argument("--threads", type=int, help="worker threads for grid evaluation")
    parser.add_argument("--progress", action="store_true", help="progress bar on stderr")
    parser.add_argument("--log-file", help="also write the log to this file")
    level = parser.add_mutually_exclusive_group()
    level.add_argument("-v", "--verbose", action="store_true")
    level.add_argument("-q", "--quiet", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides: Dict[str, dict] = {}
    for section, key, value in args.overrides:
        overrides.setdefault(section, {})[key] = value
    return RunConfig(
        command=args.command, model_path=args.model, x=args.x, grid=args.grid, fmt=args.fmt,
        seed=args.seed, count=args.count, order=args.order, thetas=args.theta,
        input_path=args.input_path, overrides=overrides, threads=args.threads, progress=args.progress,
    )


def _resolve(config: RunConfig):
    model = load_model(config.model_path, load_settings())
    settings = merge_settings(model.settings, config.overrides, origin="--set")
    if config.threads is not None:
        if config.threads < 1:
            raise DomainError("--threads must be at least 1")
        settings = replace(settings, threads=config.threads)
    return replace(model, settings=settings)


def _evaluate(fn, xs: Sequence[float], threads: int, progress: bool) -> List:
    """fn over the grid in grid order, with an optional progress bar on stderr."""
    with tqdm(total=len(xs), disable=not progress, leave=False) as bar:
        def step(x):
            value = fn(x)
            bar.update()
            return value
        return grid_map(step, xs, threads)


def run(config: RunConfig, out: TextIO = None) -> int:
    """Execute one command; raises library errors for main() to map."""
    out = out or sys.stdout
    model = _resolve(config)
    threads = model.settings.threads
    xs = config.xs

    if config.command in ("tail", "pdf"):
        if model.H is None:
            fn = (lambda v: float(ph_tail(model.G, v))) if config.command == "tail" else \
                (lambda v: float(ph_density(model.G, v)))
        else:
            M = model.mixture
            fn = (lambda v: float(mixture_tail(M, v))) if config.command == "tail" else \
                (lambda v: float(mixture_density(M, v)))
        values = _evaluate(fn, xs, threads, config.progress)
        write_rows(out, ("x", config.command), zip(map(float, xs), values), config.fmt)

    elif config.command == "moments":
        if model.H is None:
            rows = [(n, float(ph_moment(model.G, n))) for n in range(1, config.order + 1)]
        else:
            M = model.mixture
            rows = [(n, float(mixture_moment(M, n))) for n in range(1, config.order + 1)]
        write_rows(out, ("order", "moment"), rows, config.fmt)

    elif config.command == "sample":
        if model.H is None:
            draws = ph_sample(model.G, config.seed, config.count)
        else:
            draws = mixture_sample(model.mixture, config.seed, config.count)
        write_rows(out, ("value",), ((float(v),) for v in draws), config.fmt)

    elif config.command == "asymptote":
        asymptote = _asymptote(model.mixture)
        rows = [("kind", asymptote.kind.value), ("calibrated", str(asymptote.calibrated).lower())]
        rows.extend((k, float(v)) for k, v in asymptote.constants.items())
        write_rows(out, ("constant", "value"), rows, config.fmt)

    elif config.command == "mda":
        report = build_report(model.mixture, thetas=config.thetas, progress=config.progress)
        if config.fmt == "json":
            write_document(out, report.to_dict())
        else:
            write_rows(out, ("field", "value"), summary_rows(report), config.fmt)

    elif config.command == "compare":
        M = model.mixture
        asymptote = _asymptote(M)
        if config.input_path:
            table = read_rows(config.input_path)
            if not table or "x" not in table[0] or "tail" not in table[0]:
                raise ModelFormatError("expected columns 'x' and 'tail'", config.input_path)
            points = [float(r["x"]) for r in table]
            numeric = [float(r["tail"]) for r in table]
        else:
            points = [float(v) for v in xs]
            numeric = _evaluate(lambda v: float(mixture_tail(M, v)), points, threads, config.progress)
        rows = []
        for x, value in zip(points, numeric):
            approx = asymptote.value(x) if x > 0 else math.nan
            rows.append((x, value, approx, value / approx if approx else math.nan))
        write_rows(out, ("x", "numeric", "asymptote", "ratio"), rows, config.fmt)

    elif config.command == "series-bounds":
        M = model.mixture
        H = M.H
        if not isinstance(H, DiscreteScaler) or H.finite:
            raise DomainError(f"series bounds need an infinite discrete scaler, got {H.family}")
        kernel = M.spectral.tail_kernel()

        def summand(y, x):
            y = np.asarray(y, dtype=float)
            return kernel.scaled(x / y, H.log_pmf(y))

        def bounds(x):
            b = series_bounds(summand, x, policy=M.settings.series, quadrature=M.settings.quadrature)
            return (x, b.lower, b.integral_value, b.upper, b.peak_value)

        rows = _evaluate(bounds, [float(v) for v in xs if v > 0], threads, config.progress)
        write_rows(out, ("x", "lower", "integral", "upper", "peak"), rows, config.fmt)

    logger.info(f"{config.command} finished")
    return 0


def _asymptote(M):
    asymptote = model_asymptote(M)
    if asymptote is None:
        raise DomainError(f"no closed-form asymptote for {M.H.describe()} scaling")
    return asymptote


def main(argv: Sequence[str] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    configure_logging(level, args.log_file)
    try:
        return run(config_from_args(args))
    except (ValidationError, ValueError) as e:
        logger.debug("validation failure", exc_info=True)
        print(f"phasemix: {type(e).__name__}: {e}", file=sys.stderr)
        return ValidationError.exit_code
    except NumericalError as e:
        logger.debug("numerical failure", exc_info=True)
        print(f"phasemix: {type(e).__name__}: {e}", file=sys.stderr)
        return NumericalError.exit_code


if __name__ == '__main__':
    sys.exit(main())
