"""
Registry of density families.

A family ties together its analytical density, the name of its bifurcation
parameter, default parameters, analytic critical levels and the SDE whose
stationary density it is. New families (e.g. closed forms transcribed for
other oscillators) plug in through `register_family`.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Optional, Tuple

from .config import CRATER_SAMPLES, D11, GRID_SIZE, KAPPA, Q1, RIM, WINDOW
from .cubical import Window
from .densities import (
    CriticalLevels,
    DensityModel,
    crater_critical_levels,
    crater_pdf,
    duffing_critical_levels,
    duffing_pdf,
)
from .errors import FormatError, UnknownFamilyError
from .stochastic import SdeSystem, SimulationConfig, crater_system, duffing_system


@dataclass(frozen=True)
class FamilySpec:
    name: str
    pdf: Callable[..., Any]
    sweep_param: str
    defaults: Dict[str, float] = field(default_factory=dict)
    critical_levels: Optional[Callable[..., CriticalLevels]] = None
    system: Optional[Callable[..., SdeSystem]] = None
    simulation: Dict[str, Any] = field(default_factory=dict)  # SimulationConfig overrides


FAMILIES: Dict[str, FamilySpec] = {}


def register_family(spec: FamilySpec) -> FamilySpec:
    FAMILIES[spec.name] = spec
    return spec


def get_family(name: str) -> FamilySpec:
    try:
        return FAMILIES[name]
    except KeyError:
        raise UnknownFamilyError(f"unknown family {name!r}; registered: {sorted(FAMILIES)}") from None


def family_params(name: str, **params: float) -> Dict[str, float]:
    spec = get_family(name)
    merged = dict(spec.defaults)
    merged.update({k: float(v) for k, v in params.items()})
    if spec.sweep_param not in merged:
        raise ValueError(f"family {name!r} needs a value for {spec.sweep_param!r}")
    return merged


def make_model(name: str, **params: float) -> DensityModel:
    spec = get_family(name)
    return DensityModel(name, family_params(name, **params), spec.pdf)


def make_system(name: str, **params: float) -> SdeSystem:
    spec = get_family(name)
    if spec.system is None:
        raise UnknownFamilyError(f"family {name!r} has no SDE to simulate")
    return spec.system(**family_params(name, **params))


def simulation_config(name: str, **overrides: Any) -> SimulationConfig:
    """The family's simulation defaults, with every non-None override applied."""
    sim = replace(SimulationConfig(), **get_family(name).simulation)
    return replace(sim, **{k: v for k, v in overrides.items() if v is not None})


def critical_levels(name: str, **params: float) -> Optional[CriticalLevels]:
    spec = get_family(name)
    if spec.critical_levels is None:
        return None
    return spec.critical_levels(**family_params(name, **params))


def model_from_spec(spec: Dict[str, Any]) -> Tuple[DensityModel, Window, int, int]:
    """`{family, params, window, nx, ny}` -> (model, window, nx, ny)."""
    try:
        family = spec["family"]
        params = spec.get("params", {})
        raw_window = spec.get("window", list(WINDOW))
        if isinstance(raw_window, dict):
            window = Window(raw_window["x_min"], raw_window["x_max"], raw_window["y_min"], raw_window["y_max"])
        else:
            window = Window(*[float(v) for v in raw_window])
        nx = int(spec.get("nx", GRID_SIZE))
        ny = int(spec.get("ny", GRID_SIZE))
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed model spec: {e}") from e
    return make_model(family, **params), window, nx, ny


register_family(FamilySpec(
    name="duffing",
    pdf=duffing_pdf,
    sweep_param="h",
    defaults={"q1": Q1, "D11": D11},
    critical_levels=duffing_critical_levels,
    system=duffing_system,
))

register_family(FamilySpec(
    name="crater",
    pdf=crater_pdf,
    sweep_param="a",
    defaults={"kappa": KAPPA, "a": RIM},
    critical_levels=crater_critical_levels,
    system=crater_system,
    simulation={"n_samples": CRATER_SAMPLES},
))
