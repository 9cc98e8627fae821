import dataclasses
import random


from ccnat.arith import (
    CaseEnumeration,
    IntCombination,
    LinEq,
    LinPoly,
    cap,
    check,
    consistent,
    entails,
    is_algebraic,
    var_id,
)
from ccnat.term import Var

import grids
from conftest import Scope
from oracles import BruteArith, integer_feasible

s = Scope("(decl x u nat) (decl y u nat) (decl f u (-> nat nat))")
P = LinPoly


def eq(text: str) -> LinEq:
    """``"x + 2 = y"`` style equations over single-letter variables."""
    lhs, rhs = text.split("=")

    def side(e):
        const, co = 0, {}
        for part in e.split("+"):
            part = part.strip()
            if part.isdigit():
                const += int(part)
            else:
                k, _, v = part.rpartition("*")
                co[v] = co.get(v, 0) + (int(k) if k else 1)
        return P(const, co)

    return LinEq(side(lhs), side(rhs))


def test_is_algebraic_examples():
    assert is_algebraic(s("(+ x (f y))"))
    assert not is_algebraic(s("(f y)"))
    assert is_algebraic(s("0"))


def test_cap_examples():
    names = {}

    def ab(t):
        return names.setdefault(t, f"a{len(names)}")

    assert cap(s("(S (S 0))"), ab) == P(2)
    assert cap(s("(+ x (S (f y)))"), ab) == P(1, {var_id("x"): 1, "a0": 1})
    assert cap(s("(f y)"), ab) == P(0, {"a0": 1})


def test_cap_is_homomorphic():
    rng = random.Random(0)
    leaves = ["x", "y", "0", "(f x)", "(f (+ y 1))", "3"]

    def gen(d):
        if d == 0 or rng.random() < 0.3:
            return rng.choice(leaves)
        return rng.choice([f"(S {gen(d - 1)})", f"(+ {gen(d - 1)} {gen(d - 1)})"])

    table = {}

    def ab(t):
        return table.setdefault(t, f"a{len(table)}")

    for _ in range(500):
        a, b = gen(3), gen(3)
        assert cap(s(f"(+ {a} {b})"), ab) == cap(s(a), ab) + cap(s(b), ab)
        assert cap(s(f"(S {a})"), ab) == cap(s(a), ab) + P(1)


def test_lineq_normalization():
    assert eq("x + 2 = y") == eq("y = x + 2")
    assert eq("2*x + 4 = 2*y") == eq("x + 2 = y")
    assert eq("x + y = y + 3") == eq("x = 3")
    e = eq("x + 1 = 3*y + 2")
    assert e.lhs.is_natural() and e.rhs.is_natural()
    assert not set(e.lhs.coeffs) & set(e.rhs.coeffs)


def test_entails_examples():
    assert entails([], eq("x = x"))[0]
    assert entails([eq("z = x + 2"), eq("z + 2 = y"), eq("y + 1 = x + 2")], eq("0 = 1"))[0]
    assert entails([eq("x + y = 0")], eq("x = 0"))[0]
    assert not entails([eq("x + y = 1"), eq("z = 0"), eq("w = 1")], eq("x = z"))[0]


def test_consistent_examples():
    assert consistent([])
    assert not consistent([eq("z = x + 2"), eq("z + 2 = y"), eq("y + 1 = x + 2")])
    assert consistent([eq("x + x = y + y")])


def test_natural_semantics_witness_is_a_case_split():
    ok, w = entails([eq("x + y = 0")], eq("x = 0"))
    assert ok and w is not None
    assert check(w, [eq("x + y = 0").diff()], eq("x = 0").diff())
    # not valid over the integers, so no plain linear combination can prove it
    assert isinstance(w, CaseEnumeration)


def _perturbations(w):
    """Every witness obtained by moving one multiplier, anywhere in the tree, by +-1."""
    for k, (i, m) in enumerate(w.multipliers):
        for d in (1, -1):
            ms = list(w.multipliers)
            ms[k] = (i, m + d)
            yield dataclasses.replace(w, multipliers=tuple(ms))
    if isinstance(w, CaseEnumeration):
        for j, (val, sub) in enumerate(w.cases):
            for alt in _perturbations(sub):
                cases = list(w.cases)
                cases[j] = (val, alt)
                yield dataclasses.replace(w, cases=tuple(cases))


def _entailed_instances():
    for system in grids.random_triples(400, seed=9):
        E = [grids.as_eq(r) for r in system]
        for g in grids.GOALS + [(1, {})]:
            ok, w = entails(E, grids.as_eq(g))
            if ok:
                yield E, grids.as_eq(g), w


def test_witnesses_replay_and_resist_perturbation():
    count = perturbed = 0
    for E, g, w in _entailed_instances():
        premises = [e.diff() for e in E]
        assert check(w, premises, g.diff())
        for alt in _perturbations(w):
            perturbed += 1
            assert not check(alt, premises, g.diff()), (E, g, w, alt)
        count += 1
    assert count >= 500 and perturbed >= count


def test_monotonicity_and_vacuity():
    rng = random.Random(3)
    systems = list(grids.random_triples(600, seed=4))
    for system in systems:
        E = [grids.as_eq(r) for r in system]
        extra = grids.as_eq(rng.choice(systems)[0])
        for g in grids.GOALS:
            goal = grids.as_eq(g)
            if entails(E, goal, witness=False)[0]:
                assert entails(E + [extra], goal, witness=False)[0]
        if not consistent(E):
            assert all(entails(E, grids.as_eq(g), witness=False)[0] for g in grids.GOALS)


def test_consistent_matches_zero_one_entailment():
    for system in grids.random_triples(300, seed=8):
        E = [grids.as_eq(r) for r in system]
        assert consistent(E) == (not entails(E, eq("0 = 1"), witness=False)[0])


def _milp_feasible(system, names):
    rows = [([co.get(v, 0) for v in names], -c) for c, co in system]
    if any(not any(r) and rhs != 0 for r, rhs in rows):
        return False
    rows = [(r, rhs) for r, rhs in rows if any(r)]
    if not rows:
        return True
    rhs = [v for _, v in rows]
    return integer_feasible([r for r, _ in rows], rhs, rhs)


def test_oracle_agrees_with_independent_integer_programming():
    """Sanity check of the enumeration bound: the brute-force oracle and HiGHS agree."""
    for system in list(grids.random_triples(500, seed=12)) + list(grids.single_equations()):
        oracle = BruteArith(system)
        assert oracle.feasible() == _milp_feasible(system, oracle.names), system


def test_grid_single_equations_agree_with_oracle():
    tally = grids.compare(grids.single_equations())
    assert tally.systems == 343
    assert not tally.disagreements


def test_resource_limit_is_unknown_not_wrong():
    from ccnat.arith import ArithResourceLimit

    E = [eq("3*x + 5*y = 7*z + 1"), eq("2*x + 7 = 3*y + 2*z")]
    try:
        ok, _ = entails(E, eq("x = y"), node_limit=1)
    except ArithResourceLimit:
        return
    assert ok == BruteArith([(e.diff().const, e.diff().coeffs) for e in E], "xy").entails((0, {"x": 1, "y": -1}))
