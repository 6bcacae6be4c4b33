"""Experiment configuration: JSON schema, builtin algebra and homomorphism registries."""

from __future__ import annotations

import json
import typing as t
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import Algebra, Homomorphism
from .chem import (
    ReducerConfig,
    coarse_grain,
    corrupted_library,
    division_algebra,
    fine_library,
    coarse_library,
    lambda_algebra,
    modular_group_algebra,
    projection_hom,
    power_hom,
    reduce_mod,
    string_monoid_algebra,
)
from .flask import DEFAULT_BUDGET, FlaskProcess
from .multiset import Multiset
from .signature import Protocol, ProtocolError, Signature, check_protocol

__all__ = [
    "ConfigError",
    "UnknownHom",
    "ExperimentConfig",
    "CheckSpec",
    "ALGEBRAS",
    "HOMS",
    "build_algebra",
    "build_hom",
    "load_config",
]

MODES = ("exact-step", "sample")


class ConfigError(ValueError):
    pass


class UnknownHom(KeyError):
    def __str__(self) -> str:
        return f"unknown homomorphism {self.args[0]!r}; known: {sorted(HOMS)}"


def _param(params: dict, name: str, kind: type, default: t.Any = None) -> t.Any:
    value = params.get(name, default)
    if value is None:
        raise ConfigError(f"algebra parameter {name!r} is required")
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(f"algebra parameter {name!r} must be {kind.__name__}, got {value!r}")
    return value


ALGEBRAS: dict[str, t.Callable[[dict], Algebra]] = {
    "lambda": lambda p: lambda_algebra(ReducerConfig(_param(p, "max_steps", int, 1000))),
    "division": lambda p: division_algebra(),
    "library": lambda p: fine_library(),
    "library-coarse": lambda p: coarse_library(),
    "library-corrupted": lambda p: corrupted_library(),
    "modular": lambda p: modular_group_algebra(_param(p, "n", int)),
    "string": lambda p: string_monoid_algebra(_param(p, "alphabet", str)),
}


def build_algebra(spec: t.Any) -> Algebra:
    if isinstance(spec, str):
        spec = {"name": spec}
    if not isinstance(spec, dict) or "name" not in spec:
        raise ConfigError(f"algebra must be a name or an object with a 'name', got {spec!r}")
    name = spec["name"]
    if name not in ALGEBRAS:
        raise ConfigError(f"unknown algebra {name!r}; known: {sorted(ALGEBRAS)}")
    params = {k: v for k, v in spec.items() if k != "name"}
    try:
        return ALGEBRAS[name](params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _identity_hom(alg: Algebra, params: dict) -> Homomorphism:
    return Homomorphism(alg, alg, lambda x: x, name="identity")


def _reduce_mod_hom(alg: Algebra, params: dict) -> Homomorphism:
    if not alg.name.startswith("Z/"):
        raise ConfigError("reduce-mod needs a modular algebra as source")
    m = len(alg.carrier or ())
    n = _param(params, "target", int)
    try:
        return reduce_mod(m, n, source=alg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _square_hom(alg: Algebra, params: dict) -> Homomorphism:
    if alg.name != "division":
        raise ConfigError("square needs the division algebra as source")
    return power_hom(alg, _param(params, "exponent", int, 2))


def _project_hom(alg: Algebra, params: dict) -> Homomorphism:
    if alg.name != "strings":
        raise ConfigError("project needs a string algebra as source")
    return projection_hom(alg, _param(params, "keep", str))


def _coarse_grain_hom(alg: Algebra, params: dict) -> Homomorphism:
    if not alg.name.startswith("library") or alg.name == "library-coarse":
        raise ConfigError("coarse-grain needs a fine library algebra as source")
    return coarse_grain(alg)


HOMS: dict[str, t.Callable[[Algebra, dict], Homomorphism]] = {
    "identity": _identity_hom,
    "coarse-grain": _coarse_grain_hom,
    "reduce-mod": _reduce_mod_hom,
    "square": _square_hom,
    "project": _project_hom,
}


def build_hom(name: str, source: Algebra, params: dict | None = None) -> Homomorphism:
    if name not in HOMS:
        raise UnknownHom(name)
    return HOMS[name](source, params or {})


@dataclass
class CheckSpec:
    states: list[Multiset] = field(default_factory=list)
    random_states: int = 0
    max_total: int = 4
    params: dict = field(default_factory=dict)


@dataclass
class ExperimentConfig:
    signature: Signature
    algebra: Algebra
    protocols: tuple[Protocol, ...]
    initial_state: Multiset
    mode: str = "sample"
    steps: int = 1
    trajectories: int = 1
    seed: int = 0
    exact_budget: int = DEFAULT_BUDGET
    record_every: int = 1
    record_states: bool = False
    check: CheckSpec = field(default_factory=CheckSpec)
    raw: dict = field(default_factory=dict, repr=False)

    def process(self) -> FlaskProcess:
        return FlaskProcess(self.algebra, self.protocols, budget=self.exact_budget)

    @classmethod
    def from_json(cls, obj: t.Any) -> ExperimentConfig:
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        known = {
            "signature", "algebra", "protocols", "initial_state", "mode", "steps",
            "trajectories", "seed", "exact_budget", "record_every", "record_states", "check",
        }
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        for name in ("algebra", "protocols", "initial_state"):
            if name not in obj:
                raise ConfigError(f"missing required field {name!r}")

        alg = build_algebra(obj["algebra"])
        try:
            sig = Signature.from_json(obj["signature"]) if "signature" in obj else alg.sig
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad signature: {exc}") from exc
        if sig != alg.sig:
            raise ConfigError(
                f"signature {sig.to_json()} does not match algebra {alg.name!r} ({alg.sig.to_json()})"
            )

        if not isinstance(obj["protocols"], list) or not obj["protocols"]:
            raise ConfigError("protocols must be a non-empty list")
        protocols = []
        for i, spec in enumerate(obj["protocols"]):
            try:
                protocols.append(check_protocol(sig, Protocol.from_json(spec)))
            except ProtocolError as exc:
                raise ConfigError(f"protocol {i}: {exc}") from exc
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"protocol {i} is malformed: {exc}") from exc

        initial = _multiset(obj["initial_state"], alg, "initial_state")

        mode = obj.get("mode", "sample")
        if mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")

        def natural(name: str, default: int, minimum: int = 0) -> int:
            v = obj.get(name, default)
            if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
                raise ConfigError(f"{name} must be an integer >= {minimum}, got {v!r}")
            return v

        steps = natural("steps", 1)
        trajectories = natural("trajectories", 0 if mode == "exact-step" else 1)
        if mode == "exact-step" and trajectories != 0:
            raise ConfigError("exact-step mode computes a single distribution; trajectories must be 0")
        seed = natural("seed", 0)
        if seed >= 1 << 64:
            raise ConfigError("seed must fit in 64 bits")
        budget = natural("exact_budget", DEFAULT_BUDGET, 1)
        record_every = natural("record_every", 1, 1)
        record_states = obj.get("record_states", False)
        if not isinstance(record_states, bool):
            raise ConfigError("record_states must be a boolean")

        check_obj = obj.get("check", {})
        if not isinstance(check_obj, dict):
            raise ConfigError("check must be an object")
        check = CheckSpec(
            states=[_multiset(s, alg, "check.states") for s in check_obj.get("states", [])],
            random_states=check_obj.get("random_states", 0),
            max_total=check_obj.get("max_total", 4),
            params=check_obj.get("params", {}),
        )

        return cls(
            signature=sig,
            algebra=alg,
            protocols=tuple(protocols),
            initial_state=initial,
            mode=mode,
            steps=steps,
            trajectories=trajectories,
            seed=seed,
            exact_budget=budget,
            record_every=record_every,
            record_states=record_states,
            check=check,
            raw=obj,
        )


def _multiset(entries: t.Any, alg: Algebra, where: str) -> Multiset:
    if not isinstance(entries, list):
        raise ConfigError(f"{where} must be a list of {{element, count}} entries")
    try:
        return Multiset.from_json(entries, alg.decode)
    except (KeyError, TypeError, ValueError, SyntaxError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return ExperimentConfig.from_json(obj)
