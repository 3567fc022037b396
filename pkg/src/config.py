import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import appdirs

from .errors import ModelFormatError

logger = logging.getLogger(__name__)

APP_NAME = "phasemix"
THREADS_ENV = "PHASEMIX_THREADS"


@dataclass(frozen=True)
class QuadraturePolicy:
    """Settings for the log-scale integrals behind every continuous mixture."""
    tolerance: float = 1e-10
    max_subdivisions: int = 200
    drop_nats: float = 60.0      # integration window ends where the integrand fell by e^-drop
    scan_points: int = 1024

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ModelFormatError("tolerance must be positive", "policy.quadrature.tolerance")
        if self.max_subdivisions < 1:
            raise ModelFormatError("must be at least 1", "policy.quadrature.max_subdivisions")
        if self.drop_nats <= 0 or self.scan_points < 16:
            raise ModelFormatError("invalid scan settings", "policy.quadrature")


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation settings for discrete scaling distributions."""
    tolerance: float = 1e-12
    max_terms: int = 50_000_000
    chunk: int = 1_000_000
    scan_points: int = 256

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ModelFormatError("tolerance must be positive", "policy.series.tolerance")
        if self.max_terms < 1 or self.chunk < 1:
            raise ModelFormatError("term limits must be positive", "policy.series")
        if self.scan_points < 8:
            raise ModelFormatError("need at least 8 scan points", "policy.series.scan_points")


@dataclass(frozen=True)
class SpectralPolicy:
    cluster_tol: float = 1e-8
    fallback_cluster_tol: float = 1e-4
    rank_tol: float = 1e-7
    check_tol: float = 1e-8

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ModelFormatError("must be positive", f"policy.spectral.{f.name}")


@dataclass(frozen=True)
class DiagnosticsPolicy:
    """Grids and thresholds for the asymptotic diagnostics."""
    x_lo: float = 10.0
    x_hi: float = 1e4
    points_per_decade: int = 8
    run: int = 5                  # consecutive points needed to call a trend
    gumbel_tol: float = 0.25
    subexp_margin: float = 0.05
    calibration_x: Optional[float] = None   # defaults to x_hi

    def __post_init__(self):
        if not (0 < self.x_lo < self.x_hi):
            raise ModelFormatError("need 0 < x_lo < x_hi", "policy.diagnostics")
        if self.points_per_decade < 1:
            raise ModelFormatError("must be at least 1", "policy.diagnostics.points_per_decade")
        if self.run < 2:
            raise ModelFormatError("must be at least 2", "policy.diagnostics.run")


@dataclass(frozen=True)
class Settings:
    quadrature: QuadraturePolicy = field(default_factory=QuadraturePolicy)
    series: SeriesPolicy = field(default_factory=SeriesPolicy)
    spectral: SpectralPolicy = field(default_factory=SpectralPolicy)
    diagnostics: DiagnosticsPolicy = field(default_factory=DiagnosticsPolicy)
    threads: int = 1


_SECTIONS = {
    "quadrature": QuadraturePolicy,
    "series": SeriesPolicy,
    "spectral": SpectralPolicy,
    "diagnostics": DiagnosticsPolicy,
}


def merge_settings(base: Settings, overrides: dict, origin: str = "policy") -> Settings:
    """Return `base` updated from a nested dict such as a model's "policy" block."""
    if not overrides:
        return base
    if not isinstance(overrides, dict):
        raise ModelFormatError("expected an object", origin)

    changes = {}
    for key, value in overrides.items():
        if key == "threads":
            if not isinstance(value, int) or value < 1:
                raise ModelFormatError("must be a positive integer", f"{origin}.threads")
            changes["threads"] = value
            continue
        if key not in _SECTIONS:
            raise ModelFormatError(f"unknown policy section '{key}'", origin)
        if not isinstance(value, dict):
            raise ModelFormatError("expected an object", f"{origin}.{key}")
        cls = _SECTIONS[key]
        known = {f.name for f in fields(cls)}
        unknown = set(value) - known
        if unknown:
            raise ModelFormatError(f"unknown keys {sorted(unknown)}", f"{origin}.{key}")
        try:
            changes[key] = replace(getattr(base, key), **value)
        except TypeError as e:
            raise ModelFormatError(str(e), f"{origin}.{key}") from e
    return replace(base, **changes)


def user_config_path() -> str:
    return os.path.join(appdirs.user_config_dir(APP_NAME), "config.json")


def load_settings(path: str = None, use_env: bool = True) -> Settings:
    """
    Resolve settings: defaults, then the user config file, then the environment.
    """
    settings = Settings()
    path = path or user_config_path()

    if os.path.exists(path):
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ModelFormatError(e.msg, f"{path} line {e.lineno}, column {e.colno}") from e
        settings = merge_settings(settings, data, origin=path)
        logger.info(f"Loaded settings from {path}")

    if use_env and os.environ.get(THREADS_ENV):
        raw = os.environ[THREADS_ENV]
        try:
            threads = int(raw)
        except ValueError:
            raise ModelFormatError(f"not an integer: '{raw}'", THREADS_ENV)
        if threads < 1:
            raise ModelFormatError("must be at least 1", THREADS_ENV)
        settings = replace(settings, threads=threads)

    return settings
