"""Operation signatures and protocols (term tuples in k input variables)."""

from __future__ import annotations

import typing as t
from dataclasses import dataclass, field

__all__ = [
    "OpSymbol",
    "Signature",
    "Var",
    "App",
    "Term",
    "Protocol",
    "ProtocolError",
    "UnknownOp",
    "ArityMismatch",
    "VarOutOfRange",
    "validate_protocol",
    "check_protocol",
    "protocol_vars_used",
    "term_from_json",
    "term_to_json",
]


@dataclass(frozen=True)
class OpSymbol:
    name: str
    arity: int

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise ValueError("operation name must be a non-empty string")
        if not isinstance(self.arity, int) or self.arity < 0:
            raise ValueError(f"arity of {self.name!r} must be a natural number")

    def to_json(self) -> dict:
        return {"name": self.name, "arity": self.arity}

    @classmethod
    def from_json(cls, obj: dict) -> OpSymbol:
        return cls(obj["name"], obj["arity"])


@dataclass(frozen=True)
class Signature:
    """An ordered list of operation symbols with distinct names."""

    ops: tuple[OpSymbol, ...]
    _by_name: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, ops: t.Iterable[OpSymbol]) -> None:
        ops = tuple(ops)
        by_name = {}
        for op in ops:
            if op.name in by_name:
                raise ValueError(f"duplicate operation {op.name!r}")
            by_name[op.name] = op
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "_by_name", by_name)

    @classmethod
    def of(cls, **arities: int) -> Signature:
        """``Signature.of(interact=2)``"""
        return cls(OpSymbol(name, n) for name, n in arities.items())

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def __getitem__(self, name: str) -> OpSymbol:
        return self._by_name[name]

    def arity(self, name: str) -> int:
        return self._by_name[name].arity

    def to_json(self) -> list[dict]:
        return [op.to_json() for op in self.ops]

    @classmethod
    def from_json(cls, objs: t.Iterable[dict]) -> Signature:
        return cls(OpSymbol.from_json(o) for o in objs)


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self) -> None:
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError("variable index must be a natural number")


@dataclass(frozen=True)
class App:
    op: str
    args: tuple[Term, ...] = ()

    def __init__(self, op: str, *args: Term) -> None:
        if len(args) == 1 and isinstance(args[0], (tuple, list)):
            args = tuple(args[0])
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "args", tuple(args))


Term = t.Union[Var, App]


def term_to_json(term: Term) -> dict:
    if isinstance(term, Var):
        return {"var": term.index}
    return {"op": term.op, "args": [term_to_json(a) for a in term.args]}


def term_from_json(obj: t.Any) -> Term:
    if not isinstance(obj, dict):
        raise ValueError(f"term must be an object, got {obj!r}")
    if "var" in obj:
        return Var(obj["var"])
    if "op" in obj:
        return App(obj["op"], tuple(term_from_json(a) for a in obj.get("args", [])))
    raise ValueError(f"term needs a 'var' or 'op' key: {obj!r}")


class ProtocolError(ValueError):
    """Base class for protocol well-formedness errors.

    ``path`` is the position of the offending subterm: the output index
    followed by argument indices.
    """

    def __init__(self, message: str, path: tuple[int, ...] = ()) -> None:
        super().__init__(f"{message} at output path {list(path)}")
        self.path = path


class UnknownOp(ProtocolError):
    def __init__(self, name: str, path: tuple[int, ...] = ()) -> None:
        super().__init__(f"unknown operation {name!r}", path)
        self.name = name


class ArityMismatch(ProtocolError):
    def __init__(self, op: str, expected: int, got: int, path: tuple[int, ...] = ()) -> None:
        super().__init__(f"{op!r} expects {expected} arguments, got {got}", path)
        self.op = op
        self.expected = expected
        self.got = got


class VarOutOfRange(ProtocolError):
    def __init__(self, index: int, k: int, path: tuple[int, ...] = ()) -> None:
        super().__init__(f"variable {index} out of range for {k} inputs", path)
        self.index = index
        self.k = k


@dataclass(frozen=True)
class Protocol:
    """A morphism X^k -> X^l given as ``l`` terms in the variables ``0..k-1``."""

    inputs: int
    outputs: tuple[Term, ...]

    def __init__(self, inputs: int, outputs: t.Iterable[Term] = ()) -> None:
        if not isinstance(inputs, int) or inputs < 0:
            raise ValueError("protocol inputs must be a natural number")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", tuple(outputs))

    @property
    def k(self) -> int:
        return self.inputs

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.outputs)

    def permuted(self, perm: t.Sequence[int]) -> Protocol:
        """Same protocol with outputs reordered as ``outputs[perm[j]]``."""
        if sorted(perm) != list(range(self.l)):
            raise ValueError(f"{list(perm)} is not a permutation of {self.l} outputs")
        return Protocol(self.inputs, (self.outputs[i] for i in perm))

    def to_json(self) -> dict:
        return {"inputs": self.inputs, "outputs": [term_to_json(o) for o in self.outputs]}

    @classmethod
    def from_json(cls, obj: dict) -> Protocol:
        return cls(obj["inputs"], (term_from_json(o) for o in obj.get("outputs", [])))


def _first_error(sig: Signature, term: Term, k: int, path: tuple[int, ...]) -> ProtocolError | None:
    if isinstance(term, Var):
        if term.index >= k:
            return VarOutOfRange(term.index, k, path)
        return None
    if not isinstance(term, App):
        return ProtocolError(f"not a term: {term!r}", path)
    if term.op not in sig:
        return UnknownOp(term.op, path)
    expected = sig.arity(term.op)
    if len(term.args) != expected:
        return ArityMismatch(term.op, expected, len(term.args), path)
    for i, arg in enumerate(term.args):
        err = _first_error(sig, arg, k, path + (i,))
        if err is not None:
            return err
    return None


def validate_protocol(sig: Signature, p: Protocol) -> ProtocolError | None:
    """Return the first well-formedness error in ``p``, or None if valid.

    Never raises for protocol defects; callers that want an exception can
    raise the returned error.
    """
    for j, out in enumerate(p.outputs):
        err = _first_error(sig, out, p.inputs, (j,))
        if err is not None:
            return err
    return None


def check_protocol(sig: Signature, p: Protocol) -> Protocol:
    err = validate_protocol(sig, p)
    if err is not None:
        raise err
    return p


def _vars(term: Term, acc: set[int]) -> None:
    if isinstance(term, Var):
        acc.add(term.index)
    else:
        for a in term.args:
            _vars(a, acc)


def protocol_vars_used(p: Protocol) -> set[int]:
    acc: set[int] = set()
    for out in p.outputs:
        _vars(out, acc)
    return acc
