"""Flat key = value run configuration

One ``key = value`` pair per line. A ``#`` at the start of a line or after
whitespace starts a comment, so ``results#1.csv`` is a plain value. List
values are comma separated. Every key maps to a RunConfig field and unknown
keys are rejected with the offending line number.
"""

import re
from typing import Any, Mapping, Optional
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from qisim.enums import MuTotalLaw, ReceiverKind, RunMode
from qisim.exceptions import ConfigError
from qisim.models import FockConfig, ScenarioParams

SCENARIO_KEYS = tuple(ScenarioParams.model_fields)
LIST_KEYS = ("receivers", "M_values", "N_S_values", "fock_pairs", "fock_truncations")
INTEGER_KEYS = ("M", "K", "trials", "seed", "h_true", "count_threshold", "fock_samples")
# "#" opens a comment only at line start or after whitespace
_COMMENT = re.compile(r"(?:^|\s)#.*$")


class RunConfig(BaseModel):
    """Everything one CLI invocation needs; scenario keys left unset use the defaults"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    N_S: Optional[float] = None
    kappa: Optional[float] = None
    N_B: Optional[float] = None
    M: Optional[int] = None
    eta: Optional[float] = None
    epsilon: Optional[float] = None
    K: Optional[int] = None
    prior_h1: Optional[float] = None
    g: Optional[float] = None

    mode: RunMode = RunMode.FIG2A
    receivers: tuple[ReceiverKind, ...] = (ReceiverKind.SFG, ReceiverKind.FF_SFG)
    trials: int = Field(100_000, ge=100)
    seed: int = Field(0, ge=0)
    M_values: tuple[float, ...] = (1e7, 2e7, 4e7, 8e7)
    N_S_values: tuple[float, ...] = (1e-4, 1e-3, 1e-2)
    qcb: Optional[float] = Field(None, gt=0, lt=0.5)
    out: Optional[str] = None
    h_true: int = Field(0, ge=0, le=1)
    mu_total_law: MuTotalLaw = MuTotalLaw.GAUSSIAN
    count_threshold: int = Field(0, ge=0)
    fock_n_s: float = Field(0.0025, ge=0)
    fock_n_i: float = Field(0.002, ge=0)
    fock_C: float = -0.0015
    fock_pairs: tuple[int, ...] = (1, 2, 3)
    fock_truncations: tuple[int, ...] = (4, 4, 3)
    fock_samples: int = Field(101, ge=2)

    @field_validator(*LIST_KEYS, mode="before")
    @classmethod
    def _split_list(cls, value: Any) -> Any:
        if isinstance(value, str):
            return tuple(item.strip() for item in value.split(",") if item.strip())
        return value

    @field_validator(*INTEGER_KEYS, mode="before")
    @classmethod
    def _integral(cls, value: Any) -> Any:
        if isinstance(value, str):
            try:
                number = float(value)
            except ValueError:
                return value
            if number.is_integer():
                return int(number)
        return value

    @model_validator(mode="after")
    def _consistent(self) -> "RunConfig":
        if self.mode is RunMode.FIG2B and self.qcb is None:
            raise ValueError("qcb: fig2b mode needs a QCB target")
        if len(self.fock_pairs) != len(self.fock_truncations):
            raise ValueError("fock_truncations: need one cutoff per entry of fock_pairs")
        return self

    def scenario(self) -> ScenarioParams:
        """ScenarioParams from the keys that were set

        Raises:
            pydantic.ValidationError: a scenario value is out of range
        """
        values = {key: getattr(self, key) for key in SCENARIO_KEYS}
        return ScenarioParams(**{key: value for key, value in values.items() if value is not None})

    def fock_configs(self) -> list[FockConfig]:
        return [
            FockConfig(M=pairs, truncation=cutoff, samples=self.fock_samples)
            for pairs, cutoff in zip(self.fock_pairs, self.fock_truncations)
        ]


def _error_key(error: Mapping[str, Any]) -> Optional[str]:
    location = error.get("loc") or ()
    if location:
        return str(location[0])
    message = str(error.get("msg", ""))
    head = message.removeprefix("Value error, ").split(":", 1)[0]
    return head if head in RunConfig.model_fields else None


def _to_config_error(exc: ValidationError, lines: Mapping[str, int]) -> ConfigError:
    error = exc.errors()[0]
    key = _error_key(error)
    message = str(error.get("msg", exc))
    return ConfigError(message, key=key, line=lines.get(key) if key else None)


def validate_config(values: Mapping[str, Any], lines: Optional[Mapping[str, int]] = None) -> RunConfig:
    """Build a RunConfig and check its scenario

    Raises:
        ConfigError: any validation failure, located by key and line
    """
    lines = lines or {}
    try:
        config = RunConfig(**values)
        config.scenario()
    except ValidationError as exc:
        raise _to_config_error(exc, lines) from exc
    return config


def parse_config(text: str) -> RunConfig:
    """Parse flat key = value text into a validated RunConfig

    Raises:
        ConfigError: unknown or repeated key, a line without '=', or a value
            failing validation
    """
    values: dict[str, str] = {}
    lines: dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _COMMENT.sub("", raw).strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in RunConfig.model_fields:
            raise ConfigError("unknown key", key=key, line=number)
        if key in values:
            raise ConfigError(f"repeated key (first set on line {lines[key]})", key=key, line=number)
        if not value:
            raise ConfigError("missing value", key=key, line=number)
        values[key] = value
        lines[key] = number
    return validate_config(values, lines)


def with_overrides(config: RunConfig, overrides: Mapping[str, Any]) -> RunConfig:
    """Apply non-None command-line values on top of a parsed config"""
    updates = {key: value for key, value in overrides.items() if value is not None}
    if not updates:
        return config
    for key in updates:
        if key not in RunConfig.model_fields:
            raise ConfigError("unknown key", key=key)
    merged = {**config.model_dump(exclude_unset=True), **updates}
    if "K" in updates and "epsilon" not in updates:
        merged.pop("epsilon", None)
    if "epsilon" in updates and "K" not in updates:
        merged.pop("K", None)
    return validate_config(merged)


def _render_value(value: Any) -> str:
    if isinstance(value, tuple):
        return ",".join(_render_value(item) for item in value)
    if hasattr(value, "value"):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(config: RunConfig) -> str:
    """Text that parse_config turns back into an equal RunConfig

    Raises:
        ConfigError: a value contains a " #" that would read back as a comment
    """
    lines = []
    for key in RunConfig.model_fields:
        value = getattr(config, key)
        if value is None:
            continue
        rendered = _render_value(value)
        if _COMMENT.search(rendered):
            raise ConfigError("value would read back as a comment", key=key)
        lines.append(f"{key} = {rendered}")
    return "\n".join(lines) + "\n"
