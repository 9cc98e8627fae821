"""Named s-expression rendering of terms (the same syntax the script parser reads)."""

from __future__ import annotations

from .term import (
    App,
    BVar,
    Binder,
    Const,
    EqI,
    Lam,
    Rec,
    SortTerm,
    Term,
    Var,
    fresh_name,
    free_vars,
    match_eq,
    match_plus,
    match_succ,
    numeral_value,
)

_CONST = {"nat": "nat", "eq": "eq", "zero": "0", "succ": "S", "plus": "+"}


def show(t: Term, names: tuple[str, ...] = ()) -> str:
    """Render ``t``; ``names`` gives display names for loose indices (innermost first)."""
    return _show(t, list(names), set(free_vars(t)) | set(names))


def _show(t: Term, env: list[str], used: set[str]) -> str:
    n = numeral_value(t)
    if n is not None:
        return str(n)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, BVar):
        if t.index < len(env):
            return env[t.index]
        return f"#{t.index}"
    if isinstance(t, SortTerm):
        return t.sort.value
    if isinstance(t, Const):
        return _CONST[t.kind]
    if isinstance(t, EqI):
        return f"(eqi {_show(t.proof, env, used)})"
    if isinstance(t, Rec):
        parts = " ".join(_show(k, env, used) for k in t.children())
        return f"(rec {parts})"
    if isinstance(t, Binder):
        dom = _show(t.domain, env, used)
        if isinstance(t, Lam) or _mentions(t.body, 0):
            name = fresh_name(t.hint, used)
            body = _show(t.body, [name] + env, used | {name})
            head = "lam" if isinstance(t, Lam) else "pi"
            return f"({head} {name} {t.annot} {dom} {body})"
        body = _show(t.body, ["_"] + env, used)
        if t.annot == 0:
            return f"(-> {dom} {body})"
        return f"(pi _ {t.annot} {dom} {body})"
    if isinstance(t, App):
        e = match_eq(t)
        if e is not None:
            return "(eq " + " ".join(_show(k, env, used) for k in e) + ")"
        p = match_plus(t)
        if p is not None:
            return f"(+ {_show(p[0], env, used)} {_show(p[1], env, used)})"
        s = match_succ(t)
        if s is not None:
            return f"(S {_show(s, env, used)})"
        args = []
        while isinstance(t, App):
            args.append(t.arg)
            t = t.fn
        args.reverse()
        return "(app " + " ".join(_show(k, env, used) for k in [t] + args) + ")"
    raise TypeError(t)


def _mentions(t: Term, index: int) -> bool:
    if t.loose <= index:
        return False
    if isinstance(t, BVar):
        return t.index == index
    if isinstance(t, Binder):
        return _mentions(t.domain, index) or _mentions(t.body, index + 1)
    return any(_mentions(k, index) for k in t.children())
