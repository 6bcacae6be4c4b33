"""Enumerators and generators shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from flaskchem import App, Distribution, Multiset, Protocol, Var
from flaskchem.chem import lam


def all_multisets(labels, max_total: int):
    """Every multiset over ``labels`` with total <= max_total."""
    labels = list(labels)
    for n in range(max_total + 1):
        for combo in itertools.combinations_with_replacement(labels, n):
            yield Multiset(combo)


def all_tuples(labels, max_len: int):
    for k in range(max_len + 1):
        yield from itertools.product(labels, repeat=k)


def protocol_family(op: str, k: int, max_outputs: int = 2):
    """Every protocol with k inputs whose outputs are variables or op(var, var)."""
    vs = [Var(i) for i in range(k)]
    terms = vs + [App(op, a, b) for a in vs for b in vs]
    for n in range(max_outputs + 1):
        for outs in itertools.product(terms, repeat=n):
            yield Protocol(k, outs)


def random_multiset(rng: random.Random, labels, max_total: int, min_total: int = 0) -> Multiset:
    labels = list(labels)
    n = rng.randint(min_total, max_total)
    return Multiset(rng.choice(labels) for _ in range(n))


def random_distribution(rng: random.Random, states, max_support: int = 8) -> Distribution:
    states = list(states)
    chosen = rng.sample(states, rng.randint(1, min(max_support, len(states))))
    raw = [Fraction(rng.randint(1, 50), rng.randint(1, 50)) for _ in chosen]
    z = sum(raw)
    weights: dict = {}
    for s, w in zip(chosen, raw):  # distinct inputs may still be equal values
        weights[s] = weights.get(s, 0) + w / z
    return Distribution(weights)


def random_lambda(rng: random.Random, depth: int, scope: int = 0) -> lam.LambdaTerm:
    """Random closed term; leaves are bound variables in scope."""
    if depth <= 0 or (scope and rng.random() < 0.3):
        if scope == 0:
            return lam.Abs(lam.BoundVar(0))
        return lam.BoundVar(rng.randrange(scope))
    if rng.random() < 0.45:
        return lam.Abs(random_lambda(rng, depth - 1, scope + 1))
    return lam.App(random_lambda(rng, depth - 1, scope), random_lambda(rng, depth - 1, scope))
