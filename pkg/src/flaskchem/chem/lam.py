"""Untyped lambda terms in de Bruijn form with a bounded normal-order reducer.

Terms are hash-consed: constructing a term returns the unique live
instance with that structure, so alpha-equivalent terms are the same
object. Each node caches its size, a digest that is stable across processes, the
bound on its dangling de Bruijn indices, and (once computed) its normal
form. Reduction works on the shared graph, so terms that are huge as
trees but small as graphs stay cheap.
"""

from __future__ import annotations

import hashlib
import re
import threading
import typing as t
import weakref
from dataclasses import dataclass

from ..algebra import Algebra
from ..signature import Signature

__all__ = [
    "LambdaTerm",
    "BoundVar",
    "FreeVar",
    "Abs",
    "App",
    "LambdaSyntaxError",
    "ReducerConfig",
    "Reduction",
    "parse_lambda",
    "show",
    "reduce_term",
    "reduce_E",
    "lambda_algebra",
    "is_normal",
    "size",
    "I",
    "K",
    "S",
    "OMEGA",
]

_table: weakref.WeakValueDictionary = weakref.WeakValueDictionary()
_lock = threading.Lock()


def _intern(cls: type, key: tuple, init: t.Callable[[t.Any], None]) -> t.Any:
    with _lock:
        node = _table.get(key)
        if node is None:
            node = object.__new__(cls)
            init(node)
            node._nf = None
            _table[key] = node
        return node


class LambdaTerm:
    """Base class for interned terms.

    ``size`` counts tree nodes, ``loose`` is one more than the largest de
    Bruijn index escaping the term (0 when closed), ``normal`` tells
    whether the term has no redex.
    """

    __slots__ = ("digest", "size", "loose", "normal", "_nf", "__weakref__")

    def sort_key(self) -> tuple:
        return (self.size, self.digest)

    def __hash__(self) -> int:
        return self.digest

    def __repr__(self) -> str:
        return f"<{show(self, limit=200)}>"

    def __str__(self) -> str:
        return show(self)


class BoundVar(LambdaTerm):
    __slots__ = ("index",)

    def __new__(cls, index: int) -> BoundVar:
        if index < 0:
            raise ValueError("de Bruijn index must be non-negative")

        def init(n: BoundVar) -> None:
            n.index = index
            n.size, n.loose, n.normal = 1, index + 1, True
            n.digest = hash((1, index))

        return _intern(cls, (1, index), init)

    def __reduce__(self) -> tuple:
        return (BoundVar, (self.index,))


class FreeVar(LambdaTerm):
    __slots__ = ("name",)

    def __new__(cls, name: str) -> FreeVar:
        def init(n: FreeVar) -> None:
            n.name = name
            n.size, n.loose, n.normal = 1, 0, True
            n.digest = hash((2, int.from_bytes(hashlib.blake2b(name.encode(), digest_size=8).digest(), "big")))

        return _intern(cls, (2, name), init)

    def __reduce__(self) -> tuple:
        return (FreeVar, (self.name,))


class Abs(LambdaTerm):
    __slots__ = ("body",)

    def __new__(cls, body: LambdaTerm) -> Abs:
        def init(n: Abs) -> None:
            n.body = body
            n.size = body.size + 1
            n.loose = max(body.loose - 1, 0)
            n.normal = body.normal
            n.digest = hash((3, body.digest))

        return _intern(cls, (3, id(body)), init)

    def __reduce__(self) -> tuple:
        return (Abs, (self.body,))


class App(LambdaTerm):
    __slots__ = ("fn", "arg")

    def __new__(cls, fn: LambdaTerm, arg: LambdaTerm) -> App:
        def init(n: App) -> None:
            n.fn, n.arg = fn, arg
            n.size = fn.size + arg.size + 1
            n.loose = max(fn.loose, arg.loose)
            n.normal = fn.normal and arg.normal and not isinstance(fn, Abs)
            n.digest = hash((4, fn.digest, arg.digest))

        return _intern(cls, (4, id(fn), id(arg)), init)

    def __reduce__(self) -> tuple:
        return (App, (self.fn, self.arg))


def size(term: LambdaTerm) -> int:
    """Number of nodes of the term as a tree."""
    return term.size


def is_normal(term: LambdaTerm) -> bool:
    return term.normal


# -- concrete syntax -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<lam>\\|λ)|(?P<dot>\.)|(?P<lp>\()|(?P<rp>\))|(?P<id>[A-Za-z0-9_']+))")


_NAMES = {"lam": "'\\'", "dot": "'.'", "lp": "'('", "rp": "')'", "id": "a variable name"}


class LambdaSyntaxError(SyntaxError):
    def __init__(self, message: str, source: str, pos: int) -> None:
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
        self.source = source


class _Parser:
    def __init__(self, src: str) -> None:
        self.src = src
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(src):
            if src[pos:].strip() == "":
                break
            m = _TOKEN.match(src, pos)
            if m is None or m.end() == pos:
                at = pos + len(src[pos:]) - len(src[pos:].lstrip())
                raise LambdaSyntaxError(f"unexpected character {src[at]!r}", src, at)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.src)

    def expect(self, kind: str) -> str:
        if self.peek() != kind:
            found = "end of input" if self.peek() is None else repr(self.tokens[self.i][1])
            raise LambdaSyntaxError(f"expected {_NAMES[kind]}, found {found}", self.src, self.pos())
        text = self.tokens[self.i][1]
        self.i += 1
        return text

    def found(self) -> str:
        return "end of input" if self.peek() is None else repr(self.tokens[self.i][1])

    def parse(self) -> LambdaTerm:
        # Explicit stack of open levels, so nesting depth is not limited by
        # the interpreter stack. A level is a parenthesised group (or the
        # whole input) or an abstraction body, which extends to the end of
        # the enclosing group. Each level accumulates a left-nested application.
        levels: list[list] = [["group", None, None, 0]]  # kind, binder, fn, pos
        scope: list[str] = []

        def add(x: LambdaTerm) -> None:
            top = levels[-1]
            top[2] = x if top[2] is None else App(top[2], x)

        def close_group() -> LambdaTerm:
            while levels[-1][0] == "lam":
                kind, name, body, _ = levels.pop()
                if body is None:
                    raise LambdaSyntaxError(f"expected a term, found {self.found()}", self.src, self.pos())
                scope.pop()
                add(Abs(body))
            if levels[-1][2] is None:
                raise LambdaSyntaxError(f"expected a term, found {self.found()}", self.src, self.pos())
            return levels[-1][2]

        while True:
            kind = self.peek()
            if kind == "lam":
                self.i += 1
                name = self.expect("id")
                self.expect("dot")
                levels.append(["lam", name, None, self.pos()])
                scope.append(name)
            elif kind == "id":
                name = self.expect("id")
                for depth, bound in enumerate(reversed(scope)):
                    if bound == name:
                        add(BoundVar(depth))
                        break
                else:
                    add(FreeVar(name))
            elif kind == "lp":
                levels.append(["group", None, None, self.pos()])
                self.i += 1
            elif kind == "rp":
                inner = close_group()
                if len(levels) == 1:
                    raise LambdaSyntaxError("unexpected ')'", self.src, self.pos())
                levels.pop()
                self.i += 1
                add(inner)
            else:
                term = close_group()
                if len(levels) > 1:
                    raise LambdaSyntaxError("expected ')', found end of input", self.src, self.pos())
                return term


def parse_lambda(src: str) -> LambdaTerm:
    r"""Parse ``\x.body``/application syntax into de Bruijn form.

    Application is left-associative and an abstraction body extends as far
    right as possible. Unbound names become free variables.
    """
    return _Parser(src).parse()


def show(term: LambdaTerm, limit: int | None = None) -> str:
    """Canonical text; binders are named ``x0, x1, ...`` by depth.

    With ``limit`` the text is cut after about that many characters and
    ends in ``...``.
    """
    out: list[str] = []
    length = 0
    stack: list = [(term, 0)]
    while stack:
        if limit is not None and length > limit:
            out.append("...")
            break
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            length += len(item)
            continue
        u, depth = item
        if isinstance(u, BoundVar):
            piece = f"x{depth - 1 - u.index}"
        elif isinstance(u, FreeVar):
            piece = u.name
        elif isinstance(u, Abs):
            piece = f"\\x{depth}."
            stack.append((u.body, depth + 1))
        else:
            wrap_arg = isinstance(u.arg, (Abs, App))
            wrap_fn = isinstance(u.fn, Abs)
            if wrap_arg:
                stack.append(")")
            stack.append((u.arg, depth))
            stack.append(" (" if wrap_arg else " ")
            if wrap_fn:
                stack.append(")")
            stack.append((u.fn, depth))
            if wrap_fn:
                stack.append("(")
            continue
        out.append(piece)
        length += len(piece)
    return "".join(out)


# -- reduction -------------------------------------------------------------


def _rebuild(
    root: LambdaTerm,
    bound: int,
    leaf: t.Callable[[BoundVar, int], LambdaTerm],
    memo: dict,
) -> LambdaTerm:
    """Rebuild ``root`` bottom-up, replacing bound variables via ``leaf``.

    ``bound`` is the number of enclosing binders at ``root``; subterms with
    no index at or above the current binder count are shared unchanged.
    Iterative, so graph depth is not limited by the interpreter stack.
    """
    if root.loose <= bound:
        return root
    stack: list[tuple[LambdaTerm, int]] = [(root, bound)]
    while stack:
        u, d = stack[-1]
        key = (id(u), d)
        if key in memo:
            stack.pop()
            continue
        if isinstance(u, BoundVar):
            memo[key] = leaf(u, d)
            stack.pop()
        elif isinstance(u, Abs):
            body = u.body
            if body.loose <= d + 1:
                memo[key] = u
                stack.pop()
                continue
            done = memo.get((id(body), d + 1))
            if done is None:
                stack.append((body, d + 1))
                continue
            memo[key] = Abs(done)
            stack.pop()
        else:
            parts = []
            pending = False
            for c in (u.fn, u.arg):  # type: ignore[attr-defined]
                if c.loose <= d:
                    parts.append(c)
                    continue
                done = memo.get((id(c), d))
                if done is None:
                    stack.append((c, d))
                    pending = True
                parts.append(done)
            if pending:
                continue
            memo[key] = App(parts[0], parts[1])
            stack.pop()
    return memo[(id(root), bound)]


def _shift(u: LambdaTerm, d: int) -> LambdaTerm:
    """Add ``d`` to every index that escapes ``u``."""
    return _rebuild(u, 0, lambda v, depth: BoundVar(v.index + d), {})


def _contract(body: LambdaTerm, arg: LambdaTerm) -> LambdaTerm:
    """``body[0 := arg]`` with the outer indices of ``body`` lowered by one."""
    shifted: dict[int, LambdaTerm] = {0: arg}

    def leaf(v: BoundVar, depth: int) -> LambdaTerm:
        if v.index < depth:
            return v
        if v.index > depth:
            return BoundVar(v.index - 1)
        if depth not in shifted:
            shifted[depth] = _shift(arg, depth)
        return shifted[depth]

    return _rebuild(body, 0, leaf, {})


def _quick(u: LambdaTerm, fuel: list[int]) -> LambdaTerm | None:
    if u.normal:
        return u
    cached = u._nf
    if cached is not None and cached[1] <= fuel[0]:
        fuel[0] -= cached[1]
        return cached[0]
    if fuel[0] == 0:
        return u
    return None


def _normalizer(u: LambdaTerm, fuel: list[int]) -> t.Generator[LambdaTerm, LambdaTerm, LambdaTerm]:
    """Normal-order reduction of ``u`` as a coroutine.

    Contracts the head redex until the head is a variable or an
    abstraction with no arguments, then proceeds into the arguments left
    to right, or under the binder; this is exactly leftmost-outermost
    order. Sub-normalisations are yielded to the driver instead of
    recursing. A node whose normalisation completes records
    ``(normal form, steps)``; later visits replay it and are charged the
    same number of steps.
    """
    start = fuel[0]
    head = u
    args: list[LambdaTerm] = []  # innermost argument last
    while True:
        while isinstance(head, App):
            args.append(head.arg)
            head = head.fn
        if isinstance(head, Abs) and args and fuel[0]:
            fuel[0] -= 1
            head = _contract(head.body, args.pop())
            continue
        break
    if isinstance(head, Abs) and not args:
        body = _quick(head.body, fuel)
        if body is None:
            body = yield head.body
        out: LambdaTerm = Abs(body)
    elif isinstance(head, Abs):
        out = head
        for a in reversed(args):
            out = App(out, a)
    else:
        out = head
        for a in reversed(args):
            b = _quick(a, fuel)
            if b is None:
                b = yield a
            out = App(out, b)
    if out.normal:
        u._nf = (out, start - fuel[0])
    return out


def _normalize(u: LambdaTerm, fuel: list[int]) -> LambdaTerm:
    done = _quick(u, fuel)
    if done is not None:
        return done
    stack = [_normalizer(u, fuel)]
    value: LambdaTerm | None = None
    while stack:
        try:
            sub = stack[-1].send(value)  # type: ignore[arg-type]
        except StopIteration as stop:
            stack.pop()
            value = stop.value
            continue
        stack.append(_normalizer(sub, fuel))
        value = None
    assert value is not None
    return value


@dataclass(frozen=True)
class ReducerConfig:
    max_steps: int = 1000

    def __post_init__(self) -> None:
        if self.max_steps < 0:
            raise ValueError("max_steps must be non-negative")


@dataclass(frozen=True)
class Reduction:
    term: LambdaTerm
    steps: int
    limit_hit: bool


def reduce_term(term: LambdaTerm, cfg: ReducerConfig = ReducerConfig()) -> Reduction:
    """Normal-order reduction, stopping at normal form or after ``max_steps`` steps.

    ``limit_hit`` is true when the step budget ran out with a redex left.
    """
    fuel = [cfg.max_steps]
    out = _normalize(term, fuel)
    return Reduction(out, cfg.max_steps - fuel[0], not out.normal)


def reduce_E(term: LambdaTerm, cfg: ReducerConfig = ReducerConfig()) -> LambdaTerm:
    return reduce_term(term, cfg).term


def lambda_algebra(cfg: ReducerConfig = ReducerConfig()) -> Algebra:
    """Terms interact by application followed by bounded reduction."""

    def interact(t1: LambdaTerm, t2: LambdaTerm) -> LambdaTerm:
        return reduce_term(App(t1, t2), cfg).term

    return Algebra(
        Signature.of(interact=2),
        {"interact": interact},
        name="lambda",
        encode=show,
        decode=parse_lambda,
    )


I = parse_lambda(r"\x.x")
K = parse_lambda(r"\x.\y.x")
S = parse_lambda(r"\x.\y.\z.x z (y z)")
OMEGA = parse_lambda(r"(\x.x x) (\x.x x)")
