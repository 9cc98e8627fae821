"""Core syntax: sorts, annotations, hash-consed terms, contexts and syntactic classes.

Bound variables use de Bruijn indices, so alpha-equivalent terms are the very same
interned object. Free variables are named and carry their sort tag (star or box).
Binders remember a display hint which is ignored by equality.
"""

from __future__ import annotations

import enum
import threading
import weakref
import zlib
from dataclasses import dataclass
from typing import Iterator


class Sort(enum.Enum):
    STAR = "star"
    BOX = "box"
    TRIANGLE = "triangle"


class Annot(enum.IntEnum):
    """Binder annotation, ordered U < R."""

    U = 0
    R = 1

    def __str__(self) -> str:
        return self.name.lower()


class Class(enum.IntEnum):
    O = 0
    P = 1
    K = 2
    E = 3
    TRIANGLE = 4
    BOTTOM = 5

    def succ(self) -> "Class":
        return Class(min(self + 1, Class.BOTTOM))


class UnknownVariable(LookupError):
    pass


def _stable(s: str) -> int:
    return zlib.crc32(s.encode("utf-8"))


_TABLE: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()
_LOCK = threading.Lock()


class Term:
    """Base class of interned terms. Compare with ``==`` (identity) or ``is``."""

    __slots__ = ("_hash", "loose", "size", "_fv", "_cls", "__weakref__")

    def __eq__(self, other: object) -> bool:
        return self is other

    def __ne__(self, other: object) -> bool:
        return self is not other

    def __hash__(self) -> int:
        return self._hash

    def __reduce__(self):
        return (self.__class__, self._args())

    def _args(self) -> tuple:
        raise NotImplementedError

    def children(self) -> tuple["Term", ...]:
        return ()

    def __repr__(self) -> str:
        from .printer import show

        return f"<{type(self).__name__} {show(self)}>"


def _intern(cls, key: tuple, init) -> Term:
    with _LOCK:
        t = _TABLE.get(key)
        if t is not None:
            return t
        t = object.__new__(cls)
        init(t)
        t._fv = None
        t._cls = None
        _TABLE[key] = t
        return t


class Var(Term):
    __slots__ = ("name", "sort")

    def __new__(cls, name: str, sort: Sort = Sort.STAR):
        if sort is Sort.TRIANGLE:
            raise ValueError("variables are star- or box-sorted")

        def init(t):
            t.name, t.sort = name, sort
            t._hash = hash((1, _stable(name), sort is Sort.BOX))
            t.loose, t.size = 0, 1

        return _intern(cls, ("var", name, sort), init)

    def _args(self):
        return (self.name, self.sort)


class BVar(Term):
    __slots__ = ("index", "sort")

    def __new__(cls, index: int, sort: Sort = Sort.STAR):
        def init(t):
            t.index, t.sort = index, sort
            t._hash = hash((2, index, sort is Sort.BOX))
            t.loose, t.size = index + 1, 1

        return _intern(cls, ("bvar", index, sort), init)

    def _args(self):
        return (self.index, self.sort)


class SortTerm(Term):
    __slots__ = ("sort",)

    def __new__(cls, sort: Sort):
        def init(t):
            t.sort = sort
            t._hash = hash((3, _stable(sort.value)))
            t.loose, t.size = 0, 1

        return _intern(cls, ("sort", sort), init)

    def _args(self):
        return (self.sort,)


class Const(Term):
    """One of the constants nat, eq (the polymorphic equality), zero, succ, plus."""

    __slots__ = ("kind",)
    KINDS = ("nat", "eq", "zero", "succ", "plus")

    def __new__(cls, kind: str):
        if kind not in cls.KINDS:
            raise ValueError(f"unknown constant {kind!r}")

        def init(t):
            t.kind = kind
            t._hash = hash((4, _stable(kind)))
            t.loose, t.size = 0, 1

        return _intern(cls, ("const", kind), init)

    def _args(self):
        return (self.kind,)


class EqI(Term):
    __slots__ = ("proof",)

    def __new__(cls, proof: Term):
        def init(t):
            t.proof = proof
            t._hash = hash((5, proof._hash))
            t.loose, t.size = proof.loose, proof.size + 1

        return _intern(cls, ("eqi", proof), init)

    def _args(self):
        return (self.proof,)

    def children(self):
        return (self.proof,)


class App(Term):
    __slots__ = ("fn", "arg")

    def __new__(cls, fn: Term, arg: Term):
        def init(t):
            t.fn, t.arg = fn, arg
            t._hash = hash((6, fn._hash, arg._hash))
            t.loose = max(fn.loose, arg.loose)
            t.size = fn.size + arg.size + 1

        return _intern(cls, ("app", fn, arg), init)

    def _args(self):
        return (self.fn, self.arg)

    def children(self):
        return (self.fn, self.arg)


class Binder(Term):
    __slots__ = ("annot", "domain", "body", "hint")
    TAG = ""

    def __new__(cls, annot: Annot, domain: Term, body: Term, hint: str = "x"):
        annot = Annot(annot)

        def init(t):
            t.annot, t.domain, t.body, t.hint = annot, domain, body, hint
            t._hash = hash((_stable(cls.TAG), int(annot), domain._hash, body._hash))
            t.loose = max(domain.loose, body.loose - 1, 0)
            t.size = domain.size + body.size + 1

        return _intern(cls, (cls.TAG, annot, domain, body), init)

    def _args(self):
        return (self.annot, self.domain, self.body, self.hint)

    def children(self):
        return (self.domain, self.body)

    @property
    def vsort(self) -> Sort:
        """Sort tag of the bound variable, read off the class of the domain."""
        return Sort.BOX if classify(self.domain) is Class.K else Sort.STAR


class Lam(Binder):
    __slots__ = ()
    TAG = "lam"


class Pi(Binder):
    __slots__ = ()
    TAG = "pi"


class Rec(Term):
    __slots__ = ("scrut", "motive", "zero_case", "succ_case")

    def __new__(cls, scrut: Term, motive: Term, zero_case: Term, succ_case: Term):
        def init(t):
            t.scrut, t.motive, t.zero_case, t.succ_case = scrut, motive, zero_case, succ_case
            kids = (scrut, motive, zero_case, succ_case)
            t._hash = hash((9,) + tuple(k._hash for k in kids))
            t.loose = max(k.loose for k in kids)
            t.size = sum(k.size for k in kids) + 1

        return _intern(cls, ("rec", scrut, motive, zero_case, succ_case), init)

    def _args(self):
        return (self.scrut, self.motive, self.zero_case, self.succ_case)

    def children(self):
        return (self.scrut, self.motive, self.zero_case, self.succ_case)


STAR = SortTerm(Sort.STAR)
BOX = SortTerm(Sort.BOX)
TRIANGLE = SortTerm(Sort.TRIANGLE)
NAT = Const("nat")
EQ = Const("eq")
ZERO = Const("zero")
SUCC = Const("succ")
PLUS = Const("plus")
ONE = App(SUCC, ZERO)


# -- smart constructors ------------------------------------------------------


def succ(t: Term) -> Term:
    return App(SUCC, t)


def plus(a: Term, b: Term) -> Term:
    return App(App(PLUS, a), b)


def eq(carrier: Term, a: Term, b: Term) -> Term:
    return App(App(App(EQ, carrier), a), b)


def numeral(n: int) -> Term:
    t = ZERO
    for _ in range(n):
        t = App(SUCC, t)
    return t


def apps(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def lam(name: str, annot: Annot, domain: Term, body: Term) -> Term:
    """Build a lambda from a body mentioning the free variable ``name``."""
    return Lam(annot, domain, abstract(body, name), name)


def pi(name: str, annot: Annot, domain: Term, body: Term) -> Term:
    return Pi(annot, domain, abstract(body, name), name)


def arrow(domain: Term, codomain: Term, annot: Annot = Annot.U) -> Term:
    return Pi(annot, domain, shift(codomain, 1), "_")


def match_succ(t: Term) -> Term | None:
    if isinstance(t, App) and t.fn is SUCC:
        return t.arg
    return None


def match_plus(t: Term) -> tuple[Term, Term] | None:
    if isinstance(t, App) and isinstance(t.fn, App) and t.fn.fn is PLUS:
        return t.fn.arg, t.arg
    return None


def match_eq(t: Term) -> tuple[Term, Term, Term] | None:
    """Return (carrier, lhs, rhs) when ``t`` is a full application of eq."""
    if isinstance(t, App) and isinstance(t.fn, App) and isinstance(t.fn.fn, App) and t.fn.fn.fn is EQ:
        return t.fn.fn.arg, t.fn.arg, t.arg
    return None


def numeral_value(t: Term) -> int | None:
    n = 0
    while True:
        if t is ZERO:
            return n
        inner = match_succ(t)
        if inner is None:
            return None
        n += 1
        t = inner


# -- de Bruijn plumbing ------------------------------------------------------


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if d == 0 or t.loose <= cutoff:
        return t
    if isinstance(t, BVar):
        return BVar(t.index + d, t.sort) if t.index >= cutoff else t
    if isinstance(t, App):
        return App(shift(t.fn, d, cutoff), shift(t.arg, d, cutoff))
    if isinstance(t, Binder):
        return type(t)(t.annot, shift(t.domain, d, cutoff), shift(t.body, d, cutoff + 1), t.hint)
    if isinstance(t, Rec):
        return Rec(*(shift(k, d, cutoff) for k in t.children()))
    if isinstance(t, EqI):
        return EqI(shift(t.proof, d, cutoff))
    return t


def instantiate(body: Term, u: Term, depth: int = 0) -> Term:
    """Replace bound index ``depth`` by ``u`` and lower the indices above it."""
    if body.loose <= depth:
        return body
    if isinstance(body, BVar):
        if body.index == depth:
            return shift(u, depth)
        return BVar(body.index - 1, body.sort) if body.index > depth else body
    if isinstance(body, App):
        return App(instantiate(body.fn, u, depth), instantiate(body.arg, u, depth))
    if isinstance(body, Binder):
        return type(body)(
            body.annot, instantiate(body.domain, u, depth), instantiate(body.body, u, depth + 1), body.hint
        )
    if isinstance(body, Rec):
        return Rec(*(instantiate(k, u, depth) for k in body.children()))
    if isinstance(body, EqI):
        return EqI(instantiate(body.proof, u, depth))
    return body


def abstract(t: Term, name: str, depth: int = 0) -> Term:
    """Turn free occurrences of ``name`` into bound index ``depth``."""
    if name not in free_vars(t) and t.loose <= depth:
        return t
    if isinstance(t, Var):
        return BVar(depth, t.sort) if t.name == name else t
    if isinstance(t, BVar):
        return BVar(t.index + 1, t.sort) if t.index >= depth else t
    if isinstance(t, App):
        return App(abstract(t.fn, name, depth), abstract(t.arg, name, depth))
    if isinstance(t, Binder):
        return type(t)(t.annot, abstract(t.domain, name, depth), abstract(t.body, name, depth + 1), t.hint)
    if isinstance(t, Rec):
        return Rec(*(abstract(k, name, depth) for k in t.children()))
    if isinstance(t, EqI):
        return EqI(abstract(t.proof, name, depth))
    return t


def free_vars(t: Term) -> frozenset[str]:
    fv = t._fv
    if fv is None:
        if isinstance(t, Var):
            fv = frozenset((t.name,))
        else:
            fv = frozenset().union(*(free_vars(k) for k in t.children()))
        t._fv = fv
    return fv


def free_var_terms(t: Term) -> Iterator[Var]:
    seen = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            if u not in seen:
                seen.add(u)
                yield u
        elif free_vars(u):
            stack.extend(reversed(u.children()))


def substitute(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding ``t{x := u}`` (de Bruijn binders cannot capture names)."""

    def go(s: Term, depth: int) -> Term:
        if x not in free_vars(s):
            return s
        if isinstance(s, Var):
            return shift(u, depth)
        if isinstance(s, App):
            return App(go(s.fn, depth), go(s.arg, depth))
        if isinstance(s, Binder):
            return type(s)(s.annot, go(s.domain, depth), go(s.body, depth + 1), s.hint)
        if isinstance(s, Rec):
            return Rec(*(go(k, depth) for k in s.children()))
        if isinstance(s, EqI):
            return EqI(go(s.proof, depth))
        return s

    return go(t, 0)


def fresh_name(hint: str, avoid) -> str:
    base = hint.rstrip("'") or "x"
    if base == "_":
        base = "x"
    name = base
    while name in avoid:
        name += "'"
    return name


def open_binder(b: Binder, avoid) -> tuple[str, Term]:
    """Instantiate a binder body with a fresh free variable; return (name, body)."""
    name = fresh_name(b.hint, avoid)
    return name, instantiate(b.body, Var(name, b.vsort))


def subterms(t: Term) -> Iterator[Term]:
    """All subterms without loose bound variables, outermost first."""
    seen = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        if u.loose == 0:
            yield u
        stack.extend(reversed(u.children()))


# -- syntactic classes --------------------------------------------------------


def _binder_ok(b: Binder) -> bool:
    d = classify(b.domain)
    return (d is Class.P and b.vsort is Sort.STAR) or (d is Class.K and b.vsort is Sort.BOX)


def classify(t: Term) -> Class:
    c = t._cls
    if c is None:
        c = _classify(t)
        t._cls = c
    return c


def _classify(t: Term) -> Class:
    if isinstance(t, (Var, BVar)):
        return Class.O if t.sort is Sort.STAR else Class.P
    if isinstance(t, SortTerm):
        return {Sort.STAR: Class.K, Sort.BOX: Class.E, Sort.TRIANGLE: Class.TRIANGLE}[t.sort]
    if isinstance(t, Const):
        return Class.P if t.kind in ("nat", "eq") else Class.O
    if isinstance(t, App):
        f, a = classify(t.fn), classify(t.arg)
        if f in (Class.O, Class.P, Class.K) and a in (Class.O, Class.P):
            return f
        return Class.BOTTOM
    if isinstance(t, Lam):
        body = classify(t.body)
        if _binder_ok(t) and body in (Class.O, Class.P, Class.K):
            return body
        return Class.BOTTOM
    if isinstance(t, Pi):
        body = classify(t.body)
        if _binder_ok(t) and body in (Class.P, Class.K, Class.E):
            return body
        return Class.BOTTOM
    if isinstance(t, Rec):
        if all(classify(k) is Class.O for k in (t.scrut, t.zero_case, t.succ_case)):
            return Class.O
        return Class.BOTTOM
    if isinstance(t, EqI):
        return Class.O if classify(t.proof) is Class.O else Class.BOTTOM
    return Class.BOTTOM


# -- contexts ----------------------------------------------------------------


@dataclass(frozen=True)
class Binding:
    name: str
    annot: Annot
    type: Term

    @property
    def sort(self) -> Sort:
        return Sort.BOX if classify(self.type) is Class.K else Sort.STAR

    @property
    def var(self) -> Var:
        return Var(self.name, self.sort)


class Context:
    """Immutable ordered list of bindings with unique names."""

    __slots__ = ("bindings", "_index", "_hash")

    def __init__(self, bindings=()):
        self.bindings: tuple[Binding, ...] = tuple(bindings)
        index = {}
        for i, b in enumerate(self.bindings):
            if b.name in index:
                raise ValueError(f"variable {b.name!r} bound twice in context")
            index[b.name] = i
        self._index = index
        self._hash = hash(tuple((_stable(b.name), int(b.annot), b.type._hash) for b in self.bindings))

    def __len__(self) -> int:
        return len(self.bindings)

    def __iter__(self):
        return iter(self.bindings)

    def __getitem__(self, i):
        return self.bindings[i]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, Context) and self.bindings == other.bindings

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Context({[b.name for b in self.bindings]})"

    def names(self) -> frozenset[str]:
        return frozenset(self._index)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def lookup(self, name: str) -> tuple[Annot, Term]:
        b = self.bindings[self.index(name)]
        return b.annot, b.type

    def extend(self, name: str, annot: Annot, type_: Term) -> "Context":
        return Context(self.bindings + (Binding(name, Annot(annot), type_),))

    def prefix(self, n: int) -> "Context":
        return Context(self.bindings[:n])


def ctx_lookup(ctx: Context, name: str) -> tuple[Annot, Term]:
    return ctx.lookup(name)
