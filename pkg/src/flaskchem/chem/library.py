"""Library communication tables: a fine model, a coarse model, and the map between them."""

from __future__ import annotations

import typing as t

from ..algebra import Algebra, Homomorphism
from ..signature import Signature

LIBRARIAN = "l"
NOISY = "m_n"
QUIET = "m_q"
MEMBER = "m"

# interact(sender, receiver) -> new state of the receiver
FINE_TABLE: dict[tuple[str, str], str] = {
    (LIBRARIAN, LIBRARIAN): LIBRARIAN,
    (LIBRARIAN, NOISY): QUIET,
    (LIBRARIAN, QUIET): QUIET,
    (NOISY, LIBRARIAN): LIBRARIAN,
    (NOISY, NOISY): NOISY,
    (NOISY, QUIET): NOISY,
    (QUIET, LIBRARIAN): LIBRARIAN,
    (QUIET, NOISY): NOISY,
    (QUIET, QUIET): QUIET,
}

COARSE_GRAIN = {LIBRARIAN: LIBRARIAN, NOISY: MEMBER, QUIET: MEMBER}


def table_algebra(states: t.Sequence[str], table: t.Mapping[tuple[str, str], str], name: str = "table") -> Algebra:
    states = tuple(states)
    missing = [(x, y) for x in states for y in states if (x, y) not in table]
    if missing:
        raise ValueError(f"table is not total; missing {missing}")
    if any(v not in states for v in table.values()):
        raise ValueError("table values must be states")
    frozen = dict(table)

    def interact(x: str, y: str) -> str:
        try:
            return frozen[x, y]
        except KeyError:
            raise ValueError(f"{(x, y)!r} is outside the carrier of {name}") from None

    def decode(x: object) -> str:
        if x not in states:
            raise ValueError(f"{x!r} is not a state of {name}; expected one of {list(states)}")
        return t.cast(str, x)

    return Algebra(
        Signature.of(interact=2),
        {"interact": interact},
        name=name,
        carrier=states,
        decode=decode,
    )


def fine_library() -> Algebra:
    return table_algebra((LIBRARIAN, NOISY, QUIET), FINE_TABLE, name="library")


def coarse_library() -> Algebra:
    states = (LIBRARIAN, MEMBER)
    return table_algebra(states, {(x, y): y for x in states for y in states}, name="library-coarse")


def corrupted_library() -> Algebra:
    """The fine table with one entry changed so that coarse-graining is no longer a homomorphism."""
    table = dict(FINE_TABLE)
    table[LIBRARIAN, NOISY] = LIBRARIAN
    return table_algebra((LIBRARIAN, NOISY, QUIET), table, name="library-corrupted")


def coarse_grain(source: Algebra, target: Algebra | None = None) -> Homomorphism:
    return Homomorphism(source, target or coarse_library(), COARSE_GRAIN.__getitem__, name="coarse-grain")


def library_algebras() -> tuple[Algebra, Algebra, Homomorphism]:
    a, b = fine_library(), coarse_library()
    return a, b, coarse_grain(a, b)
