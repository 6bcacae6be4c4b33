"""Cyclic groups and free string monoids, mostly as naturality test beds."""

from __future__ import annotations

import typing as t

from ..algebra import Algebra, Homomorphism
from ..signature import Signature


class InvalidModulus(ValueError):
    pass


def modular_group_algebra(n: int) -> Algebra:
    """Integers mod ``n`` under addition, as a ``star/2`` algebra."""
    if not isinstance(n, int) or n < 1:
        raise InvalidModulus(f"modulus must be a positive integer, got {n!r}")

    def decode(x: object) -> int:
        v = int(x)  # type: ignore[arg-type]
        if not 0 <= v < n:
            raise ValueError(f"{x!r} is not a residue mod {n}")
        return v

    return Algebra(
        Signature.of(star=2),
        {"star": lambda a, b: (a + b) % n},
        name=f"Z/{n}",
        carrier=tuple(range(n)),
        decode=decode,
    )


def reduce_mod(m: int, n: int, source: Algebra | None = None, target: Algebra | None = None) -> Homomorphism:
    """Residue map Z/m -> Z/n, defined when ``n`` divides ``m``."""
    if not isinstance(m, int) or not isinstance(n, int) or m < 1 or n < 1 or m % n:
        raise InvalidModulus(f"reduction Z/{m} -> Z/{n} needs {n} to divide {m}")
    return Homomorphism(
        source or modular_group_algebra(m),
        target or modular_group_algebra(n),
        lambda x: x % n,
        name=f"reduce-mod-{m}-{n}",
    )


def string_monoid_algebra(alphabet: t.Iterable[str]) -> Algebra:
    """Strings over ``alphabet`` with ``interact`` = concatenation."""
    letters = frozenset(alphabet)

    def decode(x: object) -> str:
        if not isinstance(x, str) or not set(x) <= letters:
            raise ValueError(f"{x!r} is not a string over {sorted(letters)}")
        return x

    return Algebra(
        Signature.of(interact=2),
        {"interact": lambda a, b: a + b},
        name="strings",
        decode=decode,
    )


def projection_hom(source: Algebra, keep: t.Iterable[str], target: Algebra | None = None) -> Homomorphism:
    """Erase letters outside ``keep``; a monoid homomorphism."""
    kept = frozenset(keep)
    return Homomorphism(
        source,
        target or string_monoid_algebra(kept),
        lambda s: "".join(c for c in s if c in kept),
        name="project",
    )
