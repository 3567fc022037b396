import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

from ..config import Settings, merge_settings
from ..errors import ModelFormatError, NonStochasticInitial, NotSubIntensity
from ..mixture import MixtureModel, build_mixture
from ..phase import PhaseType, ph_validate
from ..scaling import FAMILIES, Scaler, make_scaler

logger = logging.getLogger(__name__)

MIXTURE_KEYS = {"ph", "scaler", "policy"}
PH_KEYS = {"beta", "lambda"}


@dataclass(frozen=True)
class ModelFile:
    """A parsed model file: a PH law, optionally with a scaler and policy overrides."""
    path: str
    G: PhaseType
    H: Optional[Scaler] = None
    settings: Settings = field(default_factory=Settings)

    @property
    def mixture(self) -> MixtureModel:
        if self.H is None:
            raise ModelFormatError("this command needs a mixture model with a \"scaler\" block", self.path)
        return build_mixture(self.G, self.H, self.settings)


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ModelFormatError(f"expected a finite number, got {value!r}", path)
    return float(value)


def _vector(value, path: str) -> list:
    if not isinstance(value, list) or not value:
        raise ModelFormatError("expected a non-empty list", path)
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def parse_ph(data, path: str = "ph") -> PhaseType:
    """{"beta": [...], "lambda": [[...], ...]} to a validated PhaseType."""
    if not isinstance(data, dict):
        raise ModelFormatError("expected an object with \"beta\" and \"lambda\"", path)
    missing = PH_KEYS - set(data)
    unknown = set(data) - PH_KEYS
    if missing:
        raise ModelFormatError(f"missing keys {sorted(missing)}", path)
    if unknown:
        raise ModelFormatError(f"unknown keys {sorted(unknown)}", path)

    beta = _vector(data["beta"], f"{path}.beta")
    rows = data["lambda"]
    if not isinstance(rows, list) or len(rows) != len(beta):
        raise ModelFormatError(f"expected {len(beta)} rows to match beta", f"{path}.lambda")
    Lambda = []
    for i, row in enumerate(rows):
        values = _vector(row, f"{path}.lambda[{i}]")
        if len(values) != len(beta):
            raise ModelFormatError(f"expected {len(beta)} entries, got {len(values)}", f"{path}.lambda[{i}]")
        Lambda.append(values)

    try:
        return ph_validate(beta, Lambda)
    except (NonStochasticInitial, NotSubIntensity) as e:
        raise type(e)(f"{path}: {e}") from e


def parse_scaler(data, path: str = "scaler") -> Scaler:
    """{"family": "pareto", "alpha": 2.5} and the analogous shape for every family."""
    if not isinstance(data, dict) or "family" not in data:
        raise ModelFormatError("expected an object with a \"family\" key", path)
    family = data["family"]
    if family not in FAMILIES:
        raise ModelFormatError(f"unknown family {family!r}, expected one of {sorted(FAMILIES)}", f"{path}.family")
    _, names = FAMILIES[family]
    params = {k: v for k, v in data.items() if k != "family"}
    unknown = set(params) - set(names)
    missing = set(names) - set(params)
    if unknown:
        raise ModelFormatError(f"unknown keys {sorted(unknown)}", path)
    if missing:
        raise ModelFormatError(f"missing keys {sorted(missing)}", path)
    for name in names:
        if family == "finite":
            params[name] = _vector(params[name], f"{path}.{name}")
        else:
            params[name] = _number(params[name], f"{path}.{name}")
    return make_scaler(family, **params)


def parse_model(data, path: str = "<model>", settings: Settings = None) -> ModelFile:
    """A PH-only document or a mixture document {"ph", "scaler", "policy"}."""
    settings = settings or Settings()
    if not isinstance(data, dict):
        raise ModelFormatError("expected a JSON object at the top level", path)
    if "ph" not in data:
        return ModelFile(path=path, G=parse_ph(data, "ph"), settings=settings)

    unknown = set(data) - MIXTURE_KEYS
    if unknown:
        raise ModelFormatError(f"unknown keys {sorted(unknown)}", path)
    G = parse_ph(data["ph"], "ph")
    H = parse_scaler(data["scaler"], "scaler") if "scaler" in data else None
    settings = merge_settings(settings, data.get("policy"), origin="policy")
    return ModelFile(path=path, G=G, H=H, settings=settings)


def load_model(path: str, settings: Settings = None) -> ModelFile:
    """Read and validate a model file. Syntax errors report line and column."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ModelFormatError(f"cannot read model file: {e.strerror}", path) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(e.msg, f"{path} line {e.lineno}, column {e.colno}") from e
    model = parse_model(data, path, settings)
    logger.info(f"Loaded model {path}: PH order {model.G.order}"
                + (f", scaler {model.H.describe()}" if model.H else ""))
    return model
