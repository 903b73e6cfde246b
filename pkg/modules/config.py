"""
Scenario files.

A scenario is a TOML file with the sections [algebra], [parameters],
[skew], [window] and [run].  Every exact number is written as a string
("1/2", "q^-1", "-(t-1)^2/4") and parsed by ``modules.notation``.
Environment variables (read through a .env file when present) provide
defaults for the resource caps and the worker count.
"""
from pathlib import Path
from typing import List, Optional, Union
import logging
import os

import toml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from modules.base_algebra import AlgebraKind, Automorphism, BaseAlgebra
from modules.complexes import FAMILIES, VARIANTS
from modules.errors import ConfigError, NotationError, SkewHochschildError
from modules.notation import parse_a_element, parse_scalar
from modules.scalars import ParameterSet
from modules.skew_algebra import SkewAlgebra, validate_spec
from modules.windows import Margin, Window

load_dotenv()
logger = logging.getLogger(__name__)

SUITES = (
    "lemma-1.3", "casimir", "square-zero", "thm-1.7-reduction", "cor-1.8", "thm-2.1.1",
    "x-twisted-exactness", "prop-2.2.1-chainmap", "prop-2.2.2", "lemma-2.2.3", "lemma-2.2.5",
    "lemma-2.2.7", "thm-2.2.8", "cor-2.2.9", "prop-2.3.1-chainmap", "cor-2.3.2", "bar-oracle",
)
FORMATS = ("table", "json")
AUTOMORPHISMS = ("identity", "scaling", "translation")


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"environment variable {name} must be an integer, got {value!r}") from None


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AlgebraSection(_Section):
    kind: AlgebraKind = AlgebraKind.POLYNOMIAL
    variables: int = Field(1, ge=1)
    qmatrix: Optional[List[List[str]]] = None

    @model_validator(mode="after")
    def _shape(self):
        if self.kind != AlgebraKind.QUANTUM_AFFINE and self.variables != 1:
            raise ValueError(f"{self.kind.value} algebras have one variable")
        if self.qmatrix is not None and (len(self.qmatrix) != self.variables
                                         or any(len(row) != self.variables for row in self.qmatrix)):
            raise ValueError(f"qmatrix must be {self.variables}x{self.variables}")
        return self


class ParametersSection(_Section):
    q: str = "q"
    p: str = "1"

    @field_validator("q", "p")
    @classmethod
    def _parses(cls, text: str) -> str:
        parse_scalar(text)
        return text


class SkewSection(_Section):
    u: str = "0"
    alpha: str = "identity"
    alpha_factors: Optional[List[str]] = None
    lambda_: Optional[str] = Field(None, alias="lambda")
    gamma: str = "identity"
    gamma_factors: Optional[List[str]] = None

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    @field_validator("alpha", "gamma")
    @classmethod
    def _known(cls, kind: str) -> str:
        if kind not in AUTOMORPHISMS:
            raise ValueError(f"automorphism must be one of {AUTOMORPHISMS}, got {kind!r}")
        return kind

    @model_validator(mode="after")
    def _complete(self):
        if self.alpha == "scaling" and not self.alpha_factors:
            raise ValueError("alpha = scaling needs alpha_factors")
        if self.alpha == "translation" and self.lambda_ is None:
            raise ValueError("alpha = translation needs lambda")
        if self.gamma == "scaling" and not self.gamma_factors:
            raise ValueError("gamma = scaling needs gamma_factors")
        if self.gamma == "translation":
            raise ValueError("gamma must be the identity or a scaling")
        return self


class WindowSection(_Section):
    weights: List[int] = Field(default_factory=lambda: [0])
    max_index: int = Field(3, ge=0)
    max_degree: int = 3
    min_degree: int = 0
    max_tensor: int = Field(3, ge=0)
    margin_index: Optional[int] = Field(None, ge=0)
    margin_degree: Optional[int] = Field(None, ge=0)
    margin_tensor: Optional[int] = Field(None, ge=0)


class RunSection(_Section):
    family: str = "Y"
    suites: List[str] = Field(default_factory=list)
    format: str = "table"
    seed: int = 0
    variant: str = "statement"
    max_basis: int = Field(default_factory=lambda: _env_int("SKEWHH_MAX_BASIS", 20000))
    max_entries: int = Field(default_factory=lambda: _env_int("SKEWHH_MAX_ENTRIES", 400000))
    jobs: int = Field(default_factory=lambda: _env_int("SKEWHH_JOBS", 1))
    samples: int = Field(20, ge=1)

    @field_validator("suites")
    @classmethod
    def _suites(cls, names: List[str]) -> List[str]:
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            raise ValueError(f"unknown suites {unknown}")
        return names

    @field_validator("format")
    @classmethod
    def _format(cls, value: str) -> str:
        if value not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        return value

    @field_validator("family")
    @classmethod
    def _family(cls, value: str) -> str:
        if value not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        return value

    @field_validator("variant")
    @classmethod
    def _variant(cls, value: str) -> str:
        if value not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        return value


class ScenarioConfig(_Section):
    """A parsed scenario; ``build_spec`` turns it into a SkewAlgebra"""
    name: str = "scenario"
    algebra: AlgebraSection = Field(default_factory=AlgebraSection)
    parameters: ParametersSection = Field(default_factory=ParametersSection)
    skew: SkewSection = Field(default_factory=SkewSection)
    window: WindowSection = Field(default_factory=WindowSection)
    run: RunSection = Field(default_factory=RunSection)

    @model_validator(mode="after")
    def _spec_parses(self):
        self.build_spec()
        return self

    def parameter_set(self) -> ParameterSet:
        q = parse_scalar(self.parameters.q)
        p = parse_scalar(self.parameters.p, q=q)
        return ParameterSet(q, p)

    def _automorphism(self, base: BaseAlgebra, kind: str, factors, shift, params: ParameterSet) -> Automorphism:
        if kind == "identity":
            return Automorphism.identity(base)
        if kind == "scaling":
            if len(factors) != base.variables:
                raise ValueError(f"{kind} needs {base.variables} factors, got {len(factors)}")
            return Automorphism.scaling(base, [parse_scalar(f, params.q, params.p) for f in factors])
        return Automorphism.translation(base, parse_scalar(shift, params.q, params.p))

    def build_spec(self) -> SkewAlgebra:
        params = self.parameter_set()
        qmatrix = None
        if self.algebra.qmatrix is not None:
            qmatrix = [[parse_scalar(entry, params.q, params.p) for entry in row] for row in self.algebra.qmatrix]
        base = BaseAlgebra(self.algebra.kind.value, self.algebra.variables, qmatrix)
        skew = self.skew
        alpha = self._automorphism(base, skew.alpha, skew.alpha_factors, skew.lambda_, params)
        gamma = self._automorphism(base, skew.gamma, skew.gamma_factors, None, params)
        u = parse_a_element(skew.u, base, params.q, params.p)
        return SkewAlgebra(base, alpha, gamma, u, params.p)

    def build_window(self) -> Window:
        w = self.window
        return Window(tuple(w.weights), w.max_index, w.max_degree, w.min_degree, w.max_tensor)

    def build_margin(self, minimum: Margin) -> Margin:
        """Configured margin, with missing components taken from the family minimum"""
        w = self.window
        return Margin(
            minimum.index if w.margin_index is None else w.margin_index,
            minimum.degree if w.margin_degree is None else w.margin_degree,
            minimum.tensor if w.margin_tensor is None else w.margin_tensor,
        )

    def with_run(self, **overrides) -> "ScenarioConfig":
        """Copy with [run] values replaced; None leaves a value alone"""
        changes = {k: v for k, v in overrides.items() if v is not None}
        if not changes:
            return self
        run = self.run.model_copy(update=changes)
        RunSection.model_validate(run.model_dump())
        return self.model_copy(update={"run": run})


def _reraise(exc: ValidationError, source: str):
    for error in exc.errors():
        original = (error.get("ctx") or {}).get("error")
        if isinstance(original, NotationError):
            raise original from None
    raise ConfigError(f"invalid scenario {source}: {exc}") from None


def parse_config(data: dict, source: str = "<memory>") -> ScenarioConfig:
    data = dict(data)
    data.setdefault("name", Path(source).stem)
    try:
        config = ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        _reraise(exc, source)
    except SkewHochschildError:
        raise
    problems = validate_spec(config.build_spec())
    if problems:
        first = problems[0]
        raise ConfigError(f"scenario {source} fails {first.check}: {first.witness}")
    logger.info(f"loaded scenario {config.name} ({config.algebra.kind.value}, u = {config.skew.u})")
    return config


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a TOML scenario file"""
    path = Path(path)
    try:
        data = toml.load(path)
    except FileNotFoundError:
        raise ConfigError(f"scenario file {path} does not exist") from None
    except toml.TomlDecodeError as exc:
        raise ConfigError(f"scenario file {path} is not valid TOML: {exc}") from None
    return parse_config(data, str(path))
