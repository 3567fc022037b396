import math
from dataclasses import dataclass, field

from ..config import Settings
from ..phase import PhaseType, SpectralForm, ph_spectral
from ..scaling import Scaler


@dataclass(frozen=True)
class MixtureModel:
    """F(x) = int G(x/s) dH(s), the law of S*Y."""
    G: PhaseType
    H: Scaler
    settings: Settings = field(default_factory=Settings)
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def spectral(self) -> SpectralForm:
        if "spectral" not in self._cache:
            self._cache["spectral"] = ph_spectral(self.G, self.settings.spectral)
        return self._cache["spectral"]

    def describe(self) -> str:
        return f"PH(order {self.G.order}) x {self.H.describe()}"

    def to_dict(self) -> dict:
        return {"ph": self.G.to_dict(), "scaler": self.H.to_dict()}


@dataclass(frozen=True)
class SeriesBounds:
    """Bracket [lower, upper] of sum_{i>=1} g(i) from the integral of g and its peak."""
    lower: float
    upper: float
    integral_value: float
    peak_value: float
    peak_location: float
    boundary: bool = False   # peak below 1: integral test on [1, inf) instead

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def to_dict(self) -> dict:
        return {
            "lower": self.lower, "integral": self.integral_value, "upper": self.upper,
            "peak": self.peak_value, "peak_location": self.peak_location, "boundary": self.boundary,
        }


@dataclass(frozen=True)
class TailDerivatives:
    """F-bar, f and f' at one x, held as logarithms so none of them underflows."""
    x: float
    log_tail: float
    log_density: float
    slope_sign: float
    log_abs_slope: float

    @property
    def tail(self) -> float:
        return math.exp(self.log_tail)

    @property
    def density(self) -> float:
        return math.exp(self.log_density)

    @property
    def slope(self) -> float:
        return self.slope_sign * math.exp(self.log_abs_slope)

    @property
    def von_mises_ratio(self) -> float:
        """F-bar F'' / (F')^2 for the distribution function F, i.e. F-bar f' / f^2."""
        if self.slope_sign == 0:
            return 0.0
        return self.slope_sign * math.exp(self.log_tail + self.log_abs_slope - 2.0 * self.log_density)

    @property
    def auxiliary(self) -> float:
        """a(x) = F-bar(x) / f(x)."""
        return math.exp(self.log_tail - self.log_density)
