"""The finite distribution monad over exact rationals."""

from __future__ import annotations

import typing as t
from fractions import Fraction

from .multiset import canonical_key
from .rng import Stream

__all__ = ["Distribution", "unit", "join", "sample", "tv_distance", "empirical"]

S = t.TypeVar("S", bound=t.Hashable)
T = t.TypeVar("T", bound=t.Hashable)


class Distribution(t.Generic[S]):
    """A finitely supported probability distribution with rational weights.

    Zero weights are dropped on construction; the rest must be positive
    and sum to exactly 1.
    """

    __slots__ = ("_weights", "_hash")

    def __init__(self, weights: t.Mapping[S, int | Fraction]) -> None:
        clean: dict = {}
        for s, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"negative weight {w} for {s!r}")
            if w:
                clean[s] = w
        if sum(clean.values()) != 1:
            raise ValueError(f"weights sum to {sum(clean.values())}, not 1")
        self._weights = clean
        self._hash: int | None = None

    @classmethod
    def _trusted(cls, weights: dict) -> Distribution:
        d = cls.__new__(cls)
        d._weights = weights
        d._hash = None
        return d

    @classmethod
    def from_terms(cls, terms: t.Iterable[tuple[Fraction, S]]) -> Distribution[S]:
        """Collect like terms of a formal sum ``sum(w * s)``."""
        acc: dict = {}
        for w, s in terms:
            if w:
                acc[s] = acc.get(s, 0) + w
        return cls(acc)

    def __getitem__(self, s: S) -> Fraction:
        return self._weights.get(s, Fraction(0))

    def __len__(self) -> int:
        return len(self._weights)

    def __contains__(self, s: object) -> bool:
        return s in self._weights

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Distribution):
            return self._weights == other._weights
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._weights.items()))
        return self._hash

    def __repr__(self) -> str:
        body = " + ".join(f"{w}*{s!r}" for s, w in self.items())
        return f"Distribution({body})"

    def support(self) -> list[S]:
        return sorted(self._weights, key=canonical_key)

    def items(self) -> list[tuple[S, Fraction]]:
        return [(s, self._weights[s]) for s in self.support()]

    def sort_key(self) -> tuple:
        return tuple((canonical_key(s), w) for s, w in self.items())

    def map(self, f: t.Callable[[S], T]) -> Distribution[T]:
        """Push weights along ``f``, summing over preimages."""
        acc: dict = {}
        for s, w in self._weights.items():
            y = f(s)
            acc[y] = acc.get(y, 0) + w
        return Distribution._trusted(acc)

    def bind(self, f: t.Callable[[S], Distribution[T]]) -> Distribution[T]:
        acc: dict = {}
        for s, w in self._weights.items():
            for y, v in f(s)._weights.items():
                acc[y] = acc.get(y, 0) + w * v
        return Distribution._trusted(acc)

    def to_json(self, encode_state: t.Callable[[S], t.Any] = lambda s: s) -> list[dict]:
        return [
            {"state": encode_state(s), "num": str(w.numerator), "den": str(w.denominator)}
            for s, w in self.items()
        ]

    @classmethod
    def from_json(cls, entries: t.Iterable[dict], decode_state: t.Callable[[t.Any], S] = lambda s: s) -> Distribution[S]:
        acc: dict = {}
        for e in entries:
            s = decode_state(e["state"])
            acc[s] = acc.get(s, 0) + Fraction(int(e["num"]), int(e["den"]))
        return cls(acc)


def unit(s: S) -> Distribution[S]:
    """Point mass at ``s``."""
    return Distribution._trusted({s: Fraction(1)})


def join(dd: Distribution[Distribution[S]]) -> Distribution[S]:
    """Flatten: the weight of ``s`` is the sum of ``e(s) * dd(e)`` over inner ``e``."""
    acc: dict = {}
    for e, w in dd._weights.items():
        for s, v in e._weights.items():
            acc[s] = acc.get(s, 0) + v * w
    return Distribution._trusted(acc)


def sample(d: Distribution[S], rng: Stream) -> S:
    """Inverse-CDF draw over the canonically ordered support.

    The uniform draw is ``word / 2**64``; the comparison against cumulative
    weights is exact. Advances ``rng``.
    """
    items = d.items()
    if len(items) == 1:
        return items[0][0]
    u = rng.uniform()
    acc = Fraction(0)
    for s, w in items:
        acc += w
        if u < acc:
            return s
    return items[-1][0]


def tv_distance(d1: Distribution, d2: Distribution) -> Fraction:
    keys = set(d1._weights) | set(d2._weights)
    return sum((abs(d1[s] - d2[s]) for s in keys), Fraction(0)) / 2


def empirical(draws: t.Iterable[S]) -> Distribution[S]:
    """Normalized frequency distribution of a finite sample."""
    acc: dict = {}
    n = 0
    for s in draws:
        acc[s] = acc.get(s, 0) + 1
        n += 1
    if n == 0:
        raise ValueError("empty sample")
    return Distribution._trusted({s: Fraction(c, n) for s, c in acc.items()})

