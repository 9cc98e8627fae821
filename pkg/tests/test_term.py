import random

import pytest

from ccnat.printer import show
from ccnat.term import (
    BOX,
    NAT,
    STAR,
    TRIANGLE,
    ZERO,
    Annot,
    Class,
    Context,
    UnknownVariable,
    Var,
    classify,
    ctx_lookup,
    eq,
    free_vars,
    lam,
    numeral,
    pi,
    plus,
    substitute,
    succ,
)

from generators import raw_term

x, y, z = Var("x"), Var("y"), Var("z")


def test_free_vars_examples():
    assert free_vars(lam("x", Annot.U, NAT, x)) == frozenset()
    assert free_vars(plus(x, succ(y))) == {"x", "y"}
    assert free_vars(pi("x", Annot.U, NAT, eq(NAT, x, z))) == {"z"}


def test_substitute_examples():
    assert substitute(plus(x, y), "x", ZERO) is plus(ZERO, y)
    ident = lam("x", Annot.U, NAT, x)
    assert substitute(ident, "x", ZERO) is ident
    # the binder named y must not capture the substituted y
    out = substitute(lam("y", Annot.U, NAT, x), "x", y)
    assert out is lam("w", Annot.U, NAT, y)
    # the printed binder name comes from whichever alpha-variant was interned first
    binder = show(out).split()[1]
    assert show(out) == f"(lam {binder} u nat y)" and binder != "y"


def test_alpha_equivalence_is_identity():
    assert lam("a", Annot.U, NAT, Var("a")) is lam("b", Annot.U, NAT, Var("b"))
    assert lam("a", Annot.U, NAT, Var("a")) is not lam("a", Annot.R, NAT, Var("a"))


@pytest.mark.parametrize(
    "term, cls",
    [
        (ZERO, Class.O),
        (NAT, Class.P),
        (STAR, Class.K),
        (BOX, Class.E),
        (TRIANGLE, Class.TRIANGLE),
        (x, Class.O),
        (numeral(3), Class.O),
        (eq(NAT, x, y), Class.P),
        (pi("n", Annot.U, NAT, STAR), Class.K),
        (lam("n", Annot.U, NAT, succ(Var("n"))), Class.O),
        (succ(STAR), Class.BOTTOM),
    ],
)
def test_classify(term, cls):
    assert classify(term) is cls


def test_lookup():
    ctx = Context().extend("x", Annot.U, NAT)
    assert ctx_lookup(ctx, "x") == (Annot.U, NAT)
    ctx2 = Context().extend("x", Annot.R, eq(NAT, ZERO, ZERO))
    assert ctx_lookup(ctx2, "x") == (Annot.R, eq(NAT, ZERO, ZERO))
    with pytest.raises(UnknownVariable):
        ctx_lookup(Context(), "x")


def test_context_rejects_duplicates():
    with pytest.raises(ValueError):
        Context().extend("x", Annot.U, NAT).extend("x", Annot.U, NAT)


def test_annotation_order():
    assert Annot.U < Annot.R


def test_class_successor():
    assert [c.succ() for c in Class] == [Class.P, Class.K, Class.E, Class.TRIANGLE, Class.BOTTOM, Class.BOTTOM]


def _corpus(n, seed):
    rng = random.Random(seed)
    return [raw_term(rng, rng.randint(0, 5)) for _ in range(n)]


def test_classify_total_and_disjoint_on_corpus():
    proper = {Class.O, Class.P, Class.K, Class.E, Class.TRIANGLE}
    seen = set()
    for t in _corpus(10_000, 1):
        c = classify(t)
        assert isinstance(c, Class)
        seen.add(c)
        # the class is a function of the term: recomputing from a fresh copy agrees
        t._cls = None
        assert classify(t) is c
    assert proper <= seen


def test_substitution_laws():
    rng = random.Random(5)
    us = [ZERO, y, succ(z), plus(y, numeral(2)), lam("k", Annot.U, NAT, Var("k"))]
    for t in _corpus(2000, 2):
        u = rng.choice(us)
        once = substitute(t, "x", u)
        assert substitute(once, "x", u) is once
        assert free_vars(once) <= (free_vars(t) - {"x"}) | free_vars(u)
        if "x" not in free_vars(t):
            assert once is t


def test_interning_is_thread_safe():
    from concurrent.futures import ThreadPoolExecutor

    def build(i):
        return plus(numeral(i % 7), Var(f"v{i % 5}"))

    with ThreadPoolExecutor(8) as pool:
        a = list(pool.map(build, range(2000)))
    b = [build(i) for i in range(2000)]
    assert all(p is q for p, q in zip(a, b))
