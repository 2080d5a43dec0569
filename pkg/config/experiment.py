"""Experiment configuration schema (JSON, versioned)."""

import json
import math
from pathlib import Path
from typing import Any, List, Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from core import ConfigError, get_logger
from flux import SpaceTimeFlux
from stepfn import StepFunction
from tracker import Domain, Problem

logger = get_logger(__name__)


class DomainConfig(BaseModel):
    kind: Literal['half_line', 'segment'] = 'half_line'
    length: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode='after')
    def check_length(self) -> 'DomainConfig':
        if self.kind == 'segment' and self.length is None:
            raise ValueError("a segment needs a length")
        return self

    def to_domain(self) -> Domain:
        return Domain.segment(self.length) if self.kind == 'segment' else Domain.half_line()


class FluxConfig(BaseModel):
    """Dense coefficient matrix, coefficients[j][k] multiplying tʲ·uᵏ."""

    coefficients: List[List[float]]

    @field_validator('coefficients')
    @classmethod
    def check_finite(cls, rows: List[List[float]]) -> List[List[float]]:
        if not rows or not any(rows):
            raise ValueError("flux needs at least one coefficient")
        if not all(math.isfinite(c) for row in rows for c in row):
            raise ValueError("flux coefficients must be finite")
        return rows

    def to_flux(self) -> SpaceTimeFlux:
        return SpaceTimeFlux.from_matrix(self.coefficients)


class StepData(BaseModel):
    """Step function as breakpoints and one more value than breakpoints."""

    breakpoints: List[float] = Field(default_factory=list)
    values: List[float]

    @field_validator('breakpoints')
    @classmethod
    def check_sorted(cls, xs: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not math.isfinite(x) or x <= 0 for x in xs):
            raise ValueError("breakpoints must be finite and positive")
        return xs

    @model_validator(mode='after')
    def check_counts(self) -> 'StepData':
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError(f"need {len(self.breakpoints) + 1} values for {len(self.breakpoints)} breakpoints")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("values must be finite")
        return self

    def to_step(self, end: float = math.inf) -> StepFunction:
        return StepFunction.make(self.breakpoints, self.values, 0.0, end)

    @classmethod
    def from_step(cls, u: StepFunction) -> 'StepData':
        return cls(breakpoints=list(u.breakpoints), values=list(u.values))


class StudyOptions(BaseModel):
    times: Optional[List[float]] = None
    time_samples: int = Field(default=20, ge=1)
    cauchy_samples: int = Field(default=32, ge=1)
    seed: int = 0
    runs: int = Field(default=200, ge=1)
    pairs: int = Field(default=20, ge=1)
    bumps: int = Field(default=10, ge=1)
    mutations: int = Field(default=100, ge=0)
    refinement_time: Optional[float] = None

    @field_validator('times')
    @classmethod
    def check_times(cls, times: Optional[List[float]]) -> Optional[List[float]]:
        if times is not None and any(b < a for a, b in zip(times, times[1:])):
            raise ValueError("times must be sorted")
        return times


class SweepConfig(BaseModel):
    eps: List[float] = Field(default_factory=list)
    depth: List[int] = Field(default_factory=list)

    @field_validator('eps')
    @classmethod
    def check_eps(cls, values: List[float]) -> List[float]:
        if any(not e > 0 for e in values):
            raise ValueError("grid spacings must be positive")
        return values


class ExperimentConfig(BaseModel):
    schema_version: Literal[1] = 1
    domain: DomainConfig = Field(default_factory=DomainConfig)
    flux: FluxConfig
    flux_g: Optional[FluxConfig] = None
    eps: float = Field(gt=0)
    eps_list: Optional[List[float]] = None
    horizon: float = Field(gt=0)
    depth: Optional[int] = Field(default=None, ge=0)
    depths: Optional[List[int]] = None
    initial: StepData
    boundary: StepData
    boundary_right: Optional[StepData] = None
    options: StudyOptions = Field(default_factory=StudyOptions)
    sweep: Optional[SweepConfig] = None
    output_dir: Optional[str] = None

    @field_validator('depths')
    @classmethod
    def check_depths(cls, depths: Optional[List[int]]) -> Optional[List[int]]:
        if depths is not None and (any(n < 0 for n in depths) or any(b <= a for a, b in zip(depths, depths[1:]))):
            raise ValueError("depths must be nonnegative and strictly increasing")
        return depths

    @field_validator('eps_list')
    @classmethod
    def check_eps_list(cls, values: Optional[List[float]]) -> Optional[List[float]]:
        if values is not None and any(not e > 0 for e in values):
            raise ValueError("grid spacings must be positive")
        return values

    @model_validator(mode='after')
    def check_domain(self) -> 'ExperimentConfig':
        if self.domain.kind == 'segment':
            if self.boundary_right is None:
                raise ValueError("a segment needs boundary_right data")
            if self.initial.breakpoints and self.initial.breakpoints[-1] >= self.domain.length:
                raise ValueError("initial breakpoints must lie inside the segment")
        for name, data in (('boundary', self.boundary), ('boundary_right', self.boundary_right)):
            if data is not None and data.breakpoints and data.breakpoints[-1] >= self.horizon:
                logger.debug(f"{name} breakpoints past the horizon are ignored")
        return self

    def to_problem(self, eps: Optional[float] = None, flux: Optional[SpaceTimeFlux] = None) -> Problem:
        domain = self.domain.to_domain()
        u_b2 = self.boundary_right.to_step(self.horizon) if self.boundary_right else None
        return Problem(
            flux=flux or self.flux.to_flux(),
            u_o=self.initial.to_step(domain.end),
            u_b=self.boundary.to_step(self.horizon),
            domain=domain,
            eps=float(eps if eps is not None else self.eps),
            horizon=self.horizon,
            u_b2=u_b2,
        )

    def time_grid(self) -> List[float]:
        if self.options.times is not None:
            return [t for t in self.options.times if 0.0 <= t <= self.horizon]
        return [float(t) for t in np.linspace(0.0, self.horizon, self.options.time_samples + 1)]


def _locate(text: str, loc: Sequence[Union[str, int]]) -> int:
    """Line number of the innermost key of a validation error location."""
    position = 0
    for part in loc:
        if isinstance(part, str):
            found = text.find(f'"{part}"', position)
            if found >= 0:
                position = found
    return text.count('\n', 0, position) + 1


def parse_experiment(text: str, source: str = '<config>') -> ExperimentConfig:
    """Validate an experiment from JSON text; errors name the path and line."""
    try:
        raw: Any = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}:{e.lineno}: invalid JSON: {e.msg}") from e
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        loc = first.get('loc', ())
        path = '.'.join(str(p) for p in loc) or '<root>'
        raise ConfigError(f"{source}:{_locate(text, loc)}: {path}: {first.get('msg')}") from e


def load_experiment(path: Union[str, Path]) -> ExperimentConfig:
    """Load and validate an experiment configuration file."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_experiment(text, str(path))
