"""Markov processes built from an algebra and a list of protocols.

A reactor state is a :class:`Multiset` of carrier elements. One step of a
single protocol ``P : X^k -> X^l`` draws an ordered k-tuple of members
without replacement, removes them, and inserts the ``l`` results of
evaluating ``P`` on the drawn labels. If fewer than ``k`` members are
present the state is left unchanged. A list of protocols is applied in
order, composing the single-protocol kernels with the distribution monad.

Protocols with ``k = 0`` fire on every state, including the empty one, and
inject their (closed) output terms.
"""

from __future__ import annotations

import itertools
import typing as t
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Algebra, Homomorphism, eval_protocol
from .dist import Distribution, join, unit
from .multiset import Multiset
from .rng import Stream
from .signature import Protocol, check_protocol

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "ProtocolMismatch",
    "FlaskProcess",
    "MarkovMorphism",
    "NaturalityResult",
    "step_exact_single",
    "step_exact",
    "step_sample",
    "iter_trajectory",
    "run_trajectory",
    "markov_morphism",
    "check_naturality",
    "check_output_order_invariance",
]

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    def __init__(self, tuples: int, budget: int) -> None:
        super().__init__(
            f"exact step would enumerate {tuples} tuples (budget {budget}); use sampling instead"
        )
        self.tuples = tuples
        self.budget = budget


class ProtocolMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FlaskProcess:
    alg: Algebra
    protocols: tuple[Protocol, ...]
    budget: int = DEFAULT_BUDGET

    def __init__(self, alg: Algebra, protocols: t.Iterable[Protocol], budget: int = DEFAULT_BUDGET) -> None:
        protocols = tuple(protocols)
        if not protocols:
            raise ValueError("a flask needs at least one protocol")
        for p in protocols:
            check_protocol(alg.sig, p)
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "protocols", protocols)
        object.__setattr__(self, "budget", budget)

    def step_exact(self, sigma: Multiset) -> Distribution[Multiset]:
        return step_exact(self, sigma)

    def step_sample(self, sigma: Multiset, rng: Stream) -> Multiset:
        return step_sample(self, sigma, rng)


def step_exact_single(
    alg: Algebra, p: Protocol, sigma: Multiset, budget: int = DEFAULT_BUDGET
) -> Distribution[Multiset]:
    """Exact next-state distribution for one protocol.

    Sums ``pick(sigma, a) * [sigma - a + P(a)]`` over ordered k-tuples
    ``a`` of supported labels with positive pick.
    """
    k = p.inputs
    n = sigma.total()
    if k > n:
        return unit(sigma)
    if k == 0:
        # The empty draw is certain, even on the empty state where pick() is 0.
        return unit(sigma.surgery((), eval_protocol(alg, p, ())))
    labels = sigma.support()
    tuples = len(labels) ** k
    if tuples > budget:
        raise BudgetExceeded(tuples, budget)
    acc: dict[Multiset, Fraction] = {}
    for a in itertools.product(labels, repeat=k):
        w = sigma.pick(a)
        if not w:
            continue
        nxt = sigma.surgery(a, eval_protocol(alg, p, a))
        acc[nxt] = acc.get(nxt, 0) + w
    return Distribution._trusted(acc)


def step_exact(proc: FlaskProcess, sigma: Multiset) -> Distribution[Multiset]:
    """Exact one-step distribution of the composite process.

    Each further protocol is applied to every state in the support of the
    previous result and the nested distribution is flattened.
    """
    alg, budget = proc.alg, proc.budget
    d = step_exact_single(alg, proc.protocols[0], sigma, budget)
    for p in proc.protocols[1:]:
        d = join(d.map(lambda s, p=p: step_exact_single(alg, p, s, budget)))
    return d


def _draw_tokens(sigma: Multiset, k: int, rng: Stream) -> tuple:
    # Sequential draws without replacement, each uniform over remaining members.
    labels = sigma.support()
    counts = [sigma.count(x) for x in labels]
    remaining = sigma.total()
    drawn = []
    for _ in range(k):
        r = rng.below(remaining)
        for i, c in enumerate(counts):
            if r < c:
                drawn.append(labels[i])
                counts[i] -= 1
                break
            r -= c
        remaining -= 1
    return tuple(drawn)


def step_sample(proc: FlaskProcess, sigma: Multiset, rng: Stream) -> Multiset:
    """Draw one transition, protocol by protocol. Advances ``rng``."""
    for p in proc.protocols:
        if p.inputs > sigma.total():
            continue
        a = _draw_tokens(sigma, p.inputs, rng)
        sigma = sigma.surgery(a, eval_protocol(proc.alg, p, a))
    return sigma


def iter_trajectory(proc: FlaskProcess, sigma0: Multiset, steps: int, rng: Stream) -> t.Iterator[Multiset]:
    sigma = sigma0
    yield sigma
    for _ in range(steps):
        sigma = step_sample(proc, sigma, rng)
        yield sigma


def run_trajectory(proc: FlaskProcess, sigma0: Multiset, steps: int, rng: Stream) -> list[Multiset]:
    """``sigma0`` followed by ``steps`` sampled transitions."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    return list(iter_trajectory(proc, sigma0, steps, rng))


@dataclass(frozen=True, eq=False)
class MarkovMorphism:
    """The relabelling map between two flasks induced by an algebra homomorphism."""

    source: FlaskProcess
    target: FlaskProcess
    hom: Homomorphism

    def __call__(self, sigma: Multiset) -> Multiset:
        return sigma.pushforward(self.hom.fn)


def markov_morphism(src: FlaskProcess, tgt: FlaskProcess, h: Homomorphism) -> MarkovMorphism:
    if src.protocols != tgt.protocols:
        raise ProtocolMismatch("source and target flasks must use identical protocol lists")
    if src.alg is not h.source or tgt.alg is not h.target:
        raise ValueError("homomorphism endpoints must be the flasks' algebras")
    return MarkovMorphism(src, tgt, h)


@dataclass(frozen=True)
class NaturalityResult:
    state: Multiset
    step_then_map: Distribution
    map_then_step: Distribution

    @property
    def ok(self) -> bool:
        return self.step_then_map == self.map_then_step

    def __bool__(self) -> bool:
        return self.ok


def check_naturality(m: MarkovMorphism, sigma: Multiset) -> NaturalityResult:
    """Compare stepping then relabelling with relabelling then stepping."""
    lhs = step_exact(m.source, sigma).map(m)
    rhs = step_exact(m.target, m(sigma))
    return NaturalityResult(sigma, lhs, rhs)


def check_output_order_invariance(
    alg: Algebra, p: Protocol, perm: t.Sequence[int], sigma: Multiset, budget: int = DEFAULT_BUDGET
) -> bool:
    return step_exact_single(alg, p, sigma, budget) == step_exact_single(alg, p.permuted(perm), sigma, budget)
