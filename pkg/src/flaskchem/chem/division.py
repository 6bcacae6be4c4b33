"""Number-division chemistry on the positive integers."""

from __future__ import annotations

from ..algebra import Algebra, Homomorphism
from ..signature import Signature


def divide_or_keep(a: int, b: int) -> int:
    """``a // b`` when ``b`` divides ``a``, otherwise ``a``."""
    return a // b if a % b == 0 else a


def _decode(x: object) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ValueError(f"division elements are integers, got {x!r}")
    n = int(x)
    if n < 1:
        raise ValueError(f"division carrier is the positive integers, got {x!r}")
    return n


def division_algebra() -> Algebra:
    return Algebra(
        Signature.of(interact=2),
        {"interact": divide_or_keep},
        name="division",
        encode=int,
        decode=_decode,
    )


def power_hom(alg: Algebra, exponent: int = 2) -> Homomorphism:
    """``x -> x**exponent``, a monoid endomorphism of the positive integers.

    It is an algebra homomorphism because ``b | a`` iff ``b**e | a**e``.
    """
    if exponent < 1:
        raise ValueError("exponent must be positive")
    return Homomorphism(alg, alg, lambda x: x**exponent, name=f"power-{exponent}")


def square_hom(alg: Algebra) -> Homomorphism:
    return power_hom(alg, 2)
