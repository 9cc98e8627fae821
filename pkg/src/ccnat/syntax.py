"""S-expression reader and term elaboration shared by the script front-end and certificates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .term import (
    BOX,
    EQ,
    NAT,
    PLUS,
    STAR,
    SUCC,
    TRIANGLE,
    Annot,
    App,
    Class,
    EqI,
    Rec,
    Sort,
    Term,
    Var,
    arrow,
    classify,
    lam,
    numeral,
    pi,
)

MAX_NUMERAL = 100_000


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.msg, self.line, self.col = msg, line, col


class UnboundName(ParseError):
    """A name that is neither bound locally nor declared in the context."""


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    col: int


SExpr = Atom | SList


def read_all(src: str) -> list[SExpr]:
    """Parse every top-level s-expression in ``src``; ``;`` starts a line comment."""
    out: list[SExpr] = []
    stack: list[tuple[list, int, int]] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == ";":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if ch == "(":
            stack.append(([], line, col))
            i, col = i + 1, col + 1
            continue
        if ch == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else out).append(node)
            i, col = i + 1, col + 1
            continue
        j = i
        while j < n and not src[j].isspace() and src[j] not in "();":
            j += 1
        atom = Atom(src[i:j], line, col)
        (stack[-1][0] if stack else out).append(atom)
        col += j - i
        i = j
    if stack:
        _, l0, c0 = stack[-1]
        raise ParseError("unclosed '('", l0, c0)
    return out


def read_one(src: str) -> SExpr:
    items = read_all(src)
    if len(items) != 1:
        raise ParseError(f"expected one expression, found {len(items)}")
    return items[0]


_ATOMS = {
    "nat": NAT,
    "star": STAR,
    "box": BOX,
    "triangle": TRIANGLE,
    "eq": EQ,
    "+": PLUS,
    "S": SUCC,
}
KEYWORDS = frozenset({"lam", "pi", "->", "app", "rec", "eqi"})


def parse_annot(a: SExpr) -> Annot | None:
    if isinstance(a, Atom) and a.text in ("u", "r"):
        return Annot.U if a.text == "u" else Annot.R
    return None


class Elaborator:
    """Turns s-expressions into terms.

    ``lookup`` gives the sort tag of a context variable (None when undeclared);
    ``defs`` maps transparent names to the terms they stand for;
    ``default_annot`` is used for binders written without an annotation.
    """

    def __init__(
        self,
        lookup: Callable[[str], Sort | None],
        defs: Mapping[str, Term] | None = None,
        default_annot: Annot = Annot.U,
    ):
        self.lookup = lookup
        self.defs = dict(defs or {})
        self.default_annot = default_annot

    def term(self, sx: SExpr) -> Term:
        return self._term(sx, {})

    def _term(self, sx: SExpr, local: dict[str, Sort]) -> Term:
        if isinstance(sx, Atom):
            return self._atom(sx, local)
        if not sx.items:
            raise ParseError("empty list", sx.line, sx.col)
        head = sx.items[0]
        args = sx.items[1:]
        if isinstance(head, Atom) and head.text in KEYWORDS:
            return self._form(head.text, args, sx, local)
        f = self._term(head, local)
        if not args:
            raise ParseError("application without arguments", sx.line, sx.col)
        for a in args:
            f = App(f, self._term(a, local))
        return f

    def _atom(self, a: Atom, local: dict[str, Sort]) -> Term:
        t = a.text
        if t.isdigit():
            k = int(t)
            if k > MAX_NUMERAL:
                raise ParseError(f"numeral {k} exceeds {MAX_NUMERAL}", a.line, a.col)
            return numeral(k)
        if t in local:
            return Var(t, local[t])
        if t in _ATOMS:
            return _ATOMS[t]
        if t in self.defs:
            return self.defs[t]
        s = self.lookup(t)
        if s is None:
            raise UnboundName(f"unbound name {t!r}", a.line, a.col)
        return Var(t, s)

    def _binder(self, args, sx: SList, local):
        if len(args) == 4:
            name, ann, dom, body = args
            annot = parse_annot(ann)
            if annot is None:
                raise ParseError("annotation must be u or r", ann.line, ann.col)
        elif len(args) == 3:
            name, dom, body = args
            annot = self.default_annot
        else:
            raise ParseError("binder takes a name, an optional annotation, a domain and a body", sx.line, sx.col)
        if not isinstance(name, Atom) or name.text in KEYWORDS or name.text.isdigit():
            raise ParseError("bad binder name", sx.line, sx.col)
        domain = self._term(dom, local)
        sort = Sort.BOX if classify(domain) is Class.K else Sort.STAR
        inner = dict(local)
        inner[name.text] = sort
        return name.text, annot, domain, self._term(body, inner)

    def _form(self, kw: str, args, sx: SList, local) -> Term:
        if kw in ("lam", "pi"):
            name, annot, domain, body = self._binder(args, sx, local)
            return (lam if kw == "lam" else pi)(name, annot, domain, body)
        if kw == "->":
            if len(args) < 2:
                raise ParseError("-> needs at least two types", sx.line, sx.col)
            ts = [self._term(a, local) for a in args]
            out = ts[-1]
            for d in reversed(ts[:-1]):
                out = arrow(d, out, self.default_annot)
            return out
        if kw == "app":
            if len(args) < 2:
                raise ParseError("app needs a function and an argument", sx.line, sx.col)
            f = self._term(args[0], local)
            for a in args[1:]:
                f = App(f, self._term(a, local))
            return f
        if kw == "rec":
            if len(args) != 4:
                raise ParseError("rec takes scrutinee, motive and two branches", sx.line, sx.col)
            return Rec(*(self._term(a, local) for a in args))
        if kw == "eqi":
            if len(args) != 1:
                raise ParseError("eqi takes one proof", sx.line, sx.col)
            return EqI(self._term(args[0], local))
        raise AssertionError(kw)


__all__ = [
    "Atom",
    "Elaborator",
    "KEYWORDS",
    "ParseError",
    "SExpr",
    "SList",
    "UnboundName",
    "parse_annot",
    "read_all",
    "read_one",
]
