"""Finitely supported multisets (reactor states) and their surgery operations."""

from __future__ import annotations

import typing as t
from fractions import Fraction
from functools import singledispatch

__all__ = [
    "Multiset",
    "canonical_key",
    "add",
    "remove",
    "surgery",
    "total",
    "pick",
    "pushforward",
]


@singledispatch
def canonical_key(x: t.Any) -> tuple:
    """Total order key over heterogeneous labels.

    Objects may opt in by defining ``sort_key()``; anything else falls back
    to ``repr``, which is deterministic for the builtin carriers.
    """
    sort_key = getattr(x, "sort_key", None)
    if sort_key is not None:
        return (4, type(x).__name__, sort_key())
    return (5, type(x).__name__, repr(x))


@canonical_key.register
def _(x: int) -> tuple:
    return (0, x)


@canonical_key.register
def _(x: str) -> tuple:
    return (1, x)


@canonical_key.register
def _(x: tuple) -> tuple:
    return (2, tuple(canonical_key(v) for v in x))


class Multiset(t.Mapping[t.Hashable, int]):
    """An immutable multiset: a map from labels to positive counts.

    Absent labels have count 0. Instances are hashable and compare equal
    iff they have the same counts, so they can key distributions.
    """

    __slots__ = ("_counts", "_total", "_hash")

    def __init__(self, counts: t.Mapping[t.Hashable, int] | t.Iterable = ()) -> None:
        if isinstance(counts, t.Mapping):
            items = counts.items()
        else:
            acc: dict = {}
            for x in counts:
                acc[x] = acc.get(x, 0) + 1
            items = acc.items()
        clean = {}
        for x, n in items:
            if not isinstance(n, int) or n < 0:
                raise ValueError(f"multiplicity of {x!r} must be a natural number, got {n!r}")
            if n:
                clean[x] = n
        self._counts: dict = clean
        self._total = sum(clean.values())
        self._hash: int | None = None

    @classmethod
    def _trusted(cls, counts: dict) -> Multiset:
        ms = cls.__new__(cls)
        ms._counts = counts
        ms._total = sum(counts.values())
        ms._hash = None
        return ms

    def __getitem__(self, x: t.Hashable) -> int:
        # a multiset is a total function to the naturals, like Counter
        return self._counts.get(x, 0)

    def get(self, x: t.Hashable, default: t.Any = None) -> t.Any:
        return self._counts.get(x, default)

    def count(self, x: t.Hashable) -> int:
        return self._counts.get(x, 0)

    def __contains__(self, x: object) -> bool:
        return x in self._counts

    def __iter__(self) -> t.Iterator:
        return iter(self.support())

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multiset):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{x!r}: {n}" for x, n in self.items())
        return f"Multiset({{{body}}})"

    def support(self) -> list:
        """Supported labels in canonical order."""
        return sorted(self._counts, key=canonical_key)

    def items(self) -> list[tuple[t.Any, int]]:  # type: ignore[override]
        return [(x, self._counts[x]) for x in self.support()]

    def sort_key(self) -> tuple:
        return tuple((canonical_key(x), n) for x, n in self.items())

    def total(self) -> int:
        return self._total

    def tokens(self) -> list:
        """One entry per member, in canonical label order."""
        return [x for x, n in self.items() for _ in range(n)]

    def add(self, x: t.Hashable) -> Multiset:
        counts = dict(self._counts)
        counts[x] = counts.get(x, 0) + 1
        return Multiset._trusted(counts)

    def remove(self, x: t.Hashable) -> Multiset:
        n = self._counts.get(x, 0)
        if n == 0:
            return self
        counts = dict(self._counts)
        if n == 1:
            del counts[x]
        else:
            counts[x] = n - 1
        return Multiset._trusted(counts)

    def surgery(self, removals: t.Iterable = (), insertions: t.Iterable = ()) -> Multiset:
        counts = dict(self._counts)
        for x in removals:
            n = counts.get(x, 0)
            if n > 1:
                counts[x] = n - 1
            elif n == 1:
                del counts[x]
        for x in insertions:
            counts[x] = counts.get(x, 0) + 1
        return Multiset._trusted(counts)

    def pick(self, labels: t.Sequence) -> Fraction:
        """Probability of drawing ``labels`` in order, without replacement."""
        n = self._total
        k = len(labels)
        if n == 0 or k > n:
            return Fraction(0)
        num = 1
        den = 1
        left = dict(self._counts)
        for i, x in enumerate(labels):
            c = left.get(x, 0)
            if c == 0:
                return Fraction(0)
            num *= c
            den *= n - i
            left[x] = c - 1
        return Fraction(num, den)

    def pushforward(self, f: t.Callable[[t.Any], t.Hashable]) -> Multiset:
        counts: dict = {}
        for x, n in self._counts.items():
            y = f(x)
            counts[y] = counts.get(y, 0) + n
        return Multiset._trusted(counts)

    def to_json(self, encode: t.Callable[[t.Any], t.Any] = lambda x: x) -> list[dict]:
        return [{"element": encode(x), "count": n} for x, n in self.items()]

    @classmethod
    def from_json(cls, entries: t.Iterable[dict], decode: t.Callable[[t.Any], t.Any] = lambda x: x) -> Multiset:
        counts: dict = {}
        for entry in entries:
            x = decode(entry["element"])
            n = entry.get("count", 1)
            if not isinstance(n, int) or n < 0:
                raise ValueError(f"bad count {n!r} for element {entry['element']!r}")
            counts[x] = counts.get(x, 0) + n
        return cls(counts)


def add(sigma: Multiset, x: t.Hashable) -> Multiset:
    return sigma.add(x)


def remove(sigma: Multiset, x: t.Hashable) -> Multiset:
    """Remove one member labelled ``x``; saturates at zero."""
    return sigma.remove(x)


def surgery(sigma: Multiset, removals: t.Iterable = (), insertions: t.Iterable = ()) -> Multiset:
    """All removals left to right (saturating), then all insertions."""
    return sigma.surgery(removals, insertions)


def total(sigma: Multiset) -> int:
    return sigma.total()


def pick(sigma: Multiset, labels: t.Sequence) -> Fraction:
    """Exact probability of drawing ``labels`` in order without replacement.

    Zero when the multiset is empty or too small; the empty tuple has
    probability 1 on any non-empty multiset.
    """
    return sigma.pick(labels)


def pushforward(f: t.Callable[[t.Any], t.Hashable], sigma: Multiset) -> Multiset:
    """Relabel every member by ``f``, merging counts over preimages."""
    return sigma.pushforward(f)
