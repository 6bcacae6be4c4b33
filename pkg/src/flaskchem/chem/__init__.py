"""Builtin chemistries and their stock protocols."""

from ..flask import FlaskProcess
from ..signature import App as Op
from ..signature import Protocol, Var
from .division import divide_or_keep, division_algebra, power_hom, square_hom
from .lam import (
    I,
    K,
    OMEGA,
    S,
    LambdaSyntaxError,
    ReducerConfig,
    lambda_algebra,
    parse_lambda,
    reduce_E,
    reduce_term,
    show,
)
from .library import coarse_grain, coarse_library, corrupted_library, fine_library, library_algebras
from .monoids import InvalidModulus, modular_group_algebra, projection_hom, reduce_mod, string_monoid_algebra

x0, x1 = Var(0), Var(1)

#: x1 + x2 -> x1 + x2 + interact(x1, x2)
P1 = Protocol(2, (x0, x1, Op("interact", x0, x1)))
#: x -> (nothing)
DELETE = Protocol(1, ())
P2 = DELETE
#: sender + receiver -> sender + interact(sender, receiver)
C = Protocol(2, (x0, Op("interact", x0, x1)))
#: g1 + g2 -> g1 g2
STAR = Protocol(2, (Op("star", x0, x1),))


def mc0(cfg: ReducerConfig = ReducerConfig()) -> FlaskProcess:
    return FlaskProcess(lambda_algebra(cfg), (P1, P2))


__all__ = [
    "C",
    "DELETE",
    "I",
    "K",
    "OMEGA",
    "P1",
    "P2",
    "S",
    "STAR",
    "InvalidModulus",
    "LambdaSyntaxError",
    "ReducerConfig",
    "coarse_grain",
    "coarse_library",
    "corrupted_library",
    "divide_or_keep",
    "division_algebra",
    "fine_library",
    "lambda_algebra",
    "library_algebras",
    "mc0",
    "modular_group_algebra",
    "parse_lambda",
    "power_hom",
    "projection_hom",
    "reduce_E",
    "reduce_mod",
    "reduce_term",
    "show",
    "square_hom",
    "string_monoid_algebra",
]
