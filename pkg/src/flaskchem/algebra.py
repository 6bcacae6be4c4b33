"""Algebras over a signature, term evaluation, and homomorphisms."""

from __future__ import annotations

import itertools
import typing as t
from dataclasses import dataclass, field

from .signature import Protocol, Signature, Term, Var, check_protocol

__all__ = [
    "Algebra",
    "Homomorphism",
    "HomCheck",
    "HomReport",
    "eval_term",
    "eval_protocol",
    "check_hom_property",
    "exhaustive_samples",
    "validated",
]


def _identity(x: t.Any) -> t.Any:
    return x


@dataclass(frozen=True, eq=False)
class Algebra:
    """A carrier with one total function per operation symbol.

    ``carrier`` lists every element when the carrier is finite and is None
    otherwise. ``encode``/``decode`` convert elements to and from JSON.
    """

    sig: Signature
    interp: t.Mapping[str, t.Callable[..., t.Any]]
    name: str = "algebra"
    carrier: tuple | None = None
    encode: t.Callable[[t.Any], t.Any] = _identity
    decode: t.Callable[[t.Any], t.Any] = _identity

    def __post_init__(self) -> None:
        names = {op.name for op in self.sig.ops}
        missing = names - set(self.interp)
        extra = set(self.interp) - names
        if missing or extra:
            raise ValueError(
                f"interpretation of {self.name} must cover the signature exactly "
                f"(missing {sorted(missing)}, extra {sorted(extra)})"
            )

    def op(self, name: str) -> t.Callable[..., t.Any]:
        return self.interp[name]

    def __call__(self, name: str, *args: t.Any) -> t.Any:
        return self.interp[name](*args)

    def __repr__(self) -> str:
        return f"Algebra({self.name!r})"


def eval_term(alg: Algebra, term: Term, env: t.Sequence) -> t.Any:
    if isinstance(term, Var):
        return env[term.index]
    return alg.interp[term.op](*(eval_term(alg, a, env) for a in term.args))


def eval_protocol(alg: Algebra, p: Protocol, env: t.Sequence) -> tuple:
    """Interpret ``p`` as a map carrier^k -> carrier^l applied to ``env``."""
    if len(env) != p.inputs:
        raise ValueError(f"protocol takes {p.inputs} inputs, got {len(env)}")
    return tuple(eval_term(alg, out, env) for out in p.outputs)


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: Algebra
    target: Algebra
    fn: t.Callable[[t.Any], t.Any]
    name: str = "hom"

    def __post_init__(self) -> None:
        if self.source.sig != self.target.sig:
            raise ValueError("homomorphism endpoints must share a signature")

    def __call__(self, x: t.Any) -> t.Any:
        return self.fn(x)


@dataclass(frozen=True)
class HomCheck:
    op: str
    args: tuple
    mapped_result: t.Any
    result_of_mapped: t.Any

    @property
    def ok(self) -> bool:
        return self.mapped_result == self.result_of_mapped


@dataclass
class HomReport:
    checks: list[HomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[HomCheck]:
        return [c for c in self.checks if not c.ok]


def check_hom_property(h: Homomorphism, samples: t.Iterable[tuple[str, t.Sequence]]) -> HomReport:
    """Test ``h(op(a...)) == op(h(a)...)`` on each ``(op, args)`` sample."""
    report = HomReport()
    for op, args in samples:
        args = tuple(args)
        lhs = h(h.source(op, *args))
        rhs = h.target(op, *(h(a) for a in args))
        report.checks.append(HomCheck(op, args, lhs, rhs))
    return report


def exhaustive_samples(sig: Signature, elements: t.Sequence) -> t.Iterator[tuple[str, tuple]]:
    """Every ``(op, args)`` pair with arguments drawn from ``elements``."""
    for op in sig.ops:
        for args in itertools.product(elements, repeat=op.arity):
            yield op.name, args


def validated(alg: Algebra, protocols: t.Iterable[Protocol]) -> tuple[Protocol, ...]:
    return tuple(check_protocol(alg.sig, p) for p in protocols)

