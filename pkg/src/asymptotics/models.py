import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional

import numpy as np


class TailClass(Enum):
    HEAVY = "heavy"
    LIGHT = "light"


class MdaKind(Enum):
    FRECHET = "Frechet"
    GUMBEL = "Gumbel"
    UNDETERMINED = "Undetermined"


class Trend(Enum):
    CONVERGES = "converges"
    DIVERGES = "diverges"
    VANISHES = "vanishes"
    INCONCLUSIVE = "inconclusive"


class Subexponential(Enum):
    YES = "yes"
    NO = "no"
    UNDETERMINED = "undetermined"


class AsymptoteKind(Enum):
    BREIMAN_POWER = "breiman_power"          # M * H-bar(x)
    PARETO_EXACT = "pareto_exact"            # C x^-alpha
    ZIPF_POWER = "zipf_power"                # C x^-(alpha-1)
    BESSEL_STRETCHED = "bessel_stretched"    # c x^a K_nu(b x^d)
    LOGNORMAL_GUMBEL = "lognormal_gumbel"    # c x^(eta-1) lambda^(1-eta) V(lambda x)


@dataclass(frozen=True)
class Mda:
    kind: MdaKind
    alpha: Optional[float] = None

    def __str__(self):
        return f"Frechet({self.alpha:g})" if self.kind is MdaKind.FRECHET else self.kind.value


@dataclass(frozen=True)
class AsymptoteForm:
    """
    A closed-form tail asymptote. `log_fn(x)` evaluates its logarithm; the
    constants are what the report shows.
    """
    kind: AsymptoteKind
    constants: Dict[str, float]
    log_fn: Callable = field(compare=False, repr=False)
    calibrated: bool = False
    notes: tuple = ()

    def log_value(self, x) -> float:
        return float(self.log_fn(float(x)))

    def value(self, x) -> float:
        return math.exp(self.log_value(x))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "constants": {k: float(v) for k, v in self.constants.items()},
            "calibrated": self.calibrated,
            "notes": list(self.notes),
        }


@dataclass
class Trace:
    """A diagnostic functional over a grid. `values` holds logarithms when `log_scale`."""
    name: str
    x: np.ndarray
    values: np.ndarray
    trend: Trend
    log_scale: bool = False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "x": [float(v) for v in self.x],
            "values": [float(v) for v in self.values],
            "log_scale": self.log_scale,
            "trend": self.trend.value,
        }


@dataclass
class GeneralMixtureEvidence:
    theta: float
    sum_trace: Trace       # e^{theta x} (H1-bar(x/xi) + H2-bar(xi)), logged
    product_trace: Trace   # e^{theta x} H1-bar(x/xi) H2-bar(xi), logged

    def to_dict(self) -> dict:
        return {"theta": self.theta, "sum": self.sum_trace.to_dict(), "product": self.product_trace.to_dict()}


@dataclass
class GumbelCheck:
    mda: Mda
    trace: Optional[Trace] = None
    skipped: bool = False
    theorem_route: Optional[str] = None
    notes: List[str] = field(default_factory=list)


@dataclass
class SubexpCheck:
    verdict: Subexponential
    estimates: Dict[float, float] = field(default_factory=dict)
    raw_minimum: Dict[float, float] = field(default_factory=dict)
    analytic: Dict[float, float] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "estimates": {str(t): v for t, v in self.estimates.items()},
            "raw_minimum": {str(t): v for t, v in self.raw_minimum.items()},
            "analytic": {str(t): v for t, v in self.analytic.items()},
            "notes": list(self.notes),
        }


@dataclass
class MdaReport:
    tail_class: TailClass
    mda: Mda
    asymptote: Optional[AsymptoteForm] = None
    norming: Dict[str, dict] = field(default_factory=dict)
    diagnostics: List[Trace] = field(default_factory=list)
    subexponential: Subexponential = Subexponential.UNDETERMINED
    subexp: Optional[SubexpCheck] = None
    notes: List[str] = field(default_factory=list)
    model: Optional[dict] = None

    def __post_init__(self):
        if self.mda.kind is MdaKind.FRECHET and self.tail_class is not TailClass.HEAVY:
            raise ValueError("a Frechet domain requires a heavy tail")

    def trace(self, name: str) -> Optional[Trace]:
        return next((t for t in self.diagnostics if t.name == name), None)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "tail_class": self.tail_class.value,
            "mda": str(self.mda),
            "asymptote": self.asymptote.to_dict() if self.asymptote else None,
            "norming": self.norming,
            "subexponential": self.subexponential.value,
            "subexp": self.subexp.to_dict() if self.subexp else None,
            "diagnostics": [t.to_dict() for t in self.diagnostics],
            "notes": list(self.notes),
        }
