"""Reference oracles the implementation is measured against.

Both oracles are deliberately naive and share no code with the package's
decision procedures.

Arithmetic: bounded enumeration of natural assignments. Every natural solution
of ``A x = b`` is a minimal solution plus a sum of Hilbert-basis elements of
``{A x = 0, x >= 0}``. Pottier's bound limits both kinds of vector to an L1 norm
of ``(1 + max_i sum_j |a_ij|) ** rank``, using the augmented matrix for minimal
solutions. If some solution violates a goal, then a minimal solution ``m`` or
``m + h`` for a single basis element ``h`` violates it as well. Enumerating
every solution with L1 norm at most ``B_inh + B_hom`` is therefore exhaustive.

Conversion (first-order fragment): semantic entailment in naturals plus
uninterpreted functions. Function symbols are eliminated by Ackermann's
reduction, and every application pair is split into "arguments equal" or
"some argument differs". Each leaf is an integer program solved with HiGHS.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

# -- arithmetic ------------------------------------------------------------------


def _rref(rows: list[list[Fraction]], ncols: int):
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        pr = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        p = rows[rank][c]
        rows[rank] = [v / p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(c)
        rank += 1
    return rows, pivots, rank


def _pottier(rows: list[list[int]], rank: int) -> int:
    if rank == 0:
        return 1
    norm = max((sum(abs(v) for v in r) for r in rows), default=0)
    return (1 + norm) ** rank


class BruteArith:
    """Exhaustive natural-assignment search for a system of ``diff = 0`` rows.

    ``system`` is a list of ``(const, {var: coeff})`` pairs meaning
    ``const + sum(coeff * var) = 0``.
    """

    def __init__(self, system, extra_vars=()):
        names = sorted({v for _, co in system for v in co} | set(extra_vars))
        self.names = names
        n = len(names)
        col = {v: i for i, v in enumerate(names)}
        A, b = [], []
        self.trivially_false = False
        for const, co in system:
            row = [0] * n
            for v, k in co.items():
                row[col[v]] += k
            if not any(row):
                if const != 0:
                    self.trivially_false = True
                continue
            A.append(row)
            b.append(-const)
        self.A, self.b = A, b
        aug = [r + [bb] for r, bb in zip(A, b)]
        _, _, rank_a = _rref([[Fraction(v) for v in r] for r in A], n)
        red, pivots, rank_aug = _rref([[Fraction(v) for v in r] for r in aug], n + 1)
        if n in pivots:  # rationally inconsistent
            self.trivially_false = True
        self.bound = _pottier(aug, rank_aug) + _pottier(A, rank_a)
        self.pivots = pivots
        self.free = [i for i in range(n) if i not in set(pivots)]
        self.red = red[:rank_aug]

    def solutions(self) -> np.ndarray:
        """Every natural solution with L1 norm at most ``self.bound``, one per row."""
        n = len(self.names)
        if self.trivially_false:
            return np.zeros((0, n), dtype=np.int64)
        B = self.bound
        k = len(self.free)
        if k == 0:
            grid = np.zeros((1, 0), dtype=np.int64)
        else:
            axis = np.arange(B + 1, dtype=np.int64)
            grid = np.stack(np.meshgrid(*([axis] * k), indexing="ij"), axis=-1).reshape(-1, k)
            grid = grid[grid.sum(axis=1) <= B]
        x = np.zeros((grid.shape[0], n), dtype=np.int64)
        x[:, self.free] = grid
        ok = np.ones(grid.shape[0], dtype=bool)
        for c, row in zip(self.pivots, self.red):
            den = 1
            for v in row:
                den = lcm(den, v.denominator)
            num = np.full(grid.shape[0], int(row[-1] * den), dtype=np.int64)
            for j, f in enumerate(self.free):
                a = int(row[f] * den)
                if a:
                    num -= a * grid[:, j]
            ok &= (num >= 0) & (num % den == 0)
            x[:, c] = num // den
        x = x[ok]
        return x[x.sum(axis=1) <= B]

    def feasible(self) -> bool:
        return self.solutions().shape[0] > 0

    def entails(self, goal) -> bool:
        const, co = goal
        sols = self.solutions()
        if sols.shape[0] == 0:
            return True
        vals = np.full(sols.shape[0], const, dtype=np.int64)
        for v, k in co.items():
            vals += k * sols[:, self.names.index(v)]
        return bool(np.all(vals == 0))


def brute_entails(system, goal) -> bool:
    return BruteArith(system, extra_vars=goal[1]).entails(goal)


def brute_feasible(system) -> bool:
    return BruteArith(system).feasible()


# -- first-order conversion --------------------------------------------------------
#
# Terms are tuples: ("0",), ("S", t), ("+", a, b), ("v", name), ("f", head, args...)


def subterms(t, acc):
    if t in acc:
        return
    acc.add(t)
    if t[0] == "S":
        subterms(t[1], acc)
    elif t[0] == "+":
        subterms(t[1], acc)
        subterms(t[2], acc)
    elif t[0] == "f":
        for a in t[2:]:
            subterms(a, acc)


def linear(t, atom) -> dict:
    """Linear form of ``t`` as ``{atom_index | None: coeff}`` (None holds the constant)."""
    if t[0] == "0":
        return {}
    if t[0] == "S":
        out = dict(linear(t[1], atom))
        out[None] = out.get(None, 0) + 1
        return out
    if t[0] == "+":
        out = dict(linear(t[1], atom))
        for k, v in linear(t[2], atom).items():
            out[k] = out.get(k, 0) + v
        return out
    return {atom(t): 1}


def _diff(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


class OracleError(RuntimeError):
    pass


def integer_feasible(A, lo, hi) -> bool:
    """Is ``lo <= A x <= hi`` solvable in naturals? HiGHS, with every answer cross-checked.

    HiGHS's presolve has been seen to report a "solution" that violates an equality
    row, so every claimed point is verified exactly, and the problem is solved both
    with and without presolve.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[1]

    def run(presolve: bool) -> str:
        res = milp(
            c=np.zeros(n),
            constraints=LinearConstraint(A, lo, hi),
            integrality=np.ones(n),
            bounds=Bounds(0, np.inf),
            options={"presolve": presolve},
        )
        if res.status == 2:
            return "unsat"
        if res.status != 0:
            raise OracleError(res.message)
        x = np.rint(res.x).astype(np.int64)
        ax = A.astype(np.int64) @ x
        ok = (x >= 0).all() and (ax >= np.asarray(lo)).all() and (ax <= np.asarray(hi)).all()
        return "sat" if ok else "bogus"

    verdicts = {run(True), run(False)}
    if "sat" in verdicts:
        return True
    if "unsat" in verdicts:
        # the only contrary claim was a point that failed exact verification
        return False
    raise OracleError(f"integer programming gave no trustworthy verdict: {sorted(verdicts)}")


class _Problem:
    def __init__(self, nvars: int):
        self.n = nvars

    def feasible(self, cons) -> bool:
        """``cons`` is a list of ``(diff, op)`` with op in '=', '>=1', '<=-1'."""
        rows, lo, hi = [], [], []
        for d, op in cons:
            const = d.get(None, 0)
            if all(k is None for k in d):
                good = {"=": const == 0, ">=1": const >= 1, "<=-1": const <= -1}[op]
                if not good:
                    return False
                continue
            r = np.zeros(self.n)
            for k, v in d.items():
                if k is not None:
                    r[k] += v
            rows.append(r)
            if op == "=":
                lo.append(-const)
                hi.append(-const)
            elif op == ">=1":
                lo.append(1 - const)
                hi.append(np.inf)
            else:
                lo.append(-np.inf)
                hi.append(-1 - const)
        if not rows:
            return True
        return integer_feasible(np.array(rows), lo, hi)


def _ackermann(hyps, extra):
    universe: set = set()
    for l, r in hyps:
        subterms(l, universe)
        subterms(r, universe)
    for x in extra:
        subterms(x, universe)
    atoms = sorted(x for x in universe if x[0] in ("v", "f"))
    index = {a: i for i, a in enumerate(atoms)}
    lin = {x: linear(x, index.__getitem__) for x in universe}
    base = [(_diff(lin[l], lin[r]), "=") for l, r in hyps]
    apps = [a for a in atoms if a[0] == "f"]
    choices = []
    for a, b in itertools.combinations(apps, 2):
        if a[1] != b[1] or len(a) != len(b):
            continue
        same = [(_diff(lin[x], lin[y]), "=") for x, y in zip(a[2:], b[2:])]
        alts = [same + [(_diff(lin[a], lin[b]), "=")]]
        for x, y in zip(a[2:], b[2:]):
            d = _diff(lin[x], lin[y])
            alts += [[(d, ">=1")], [(d, "<=-1")]]
        choices.append(alts)
    return lin, base, choices, _Problem(max(len(atoms), 1))


def _satisfiable(prob, base, choices) -> bool:
    def search(i, cons) -> bool:
        if not prob.feasible(cons):
            return False
        return i == len(choices) or any(search(i + 1, cons + alt) for alt in choices[i])

    return search(0, base)


def semantic_convertible(hyps, t, u) -> bool:
    """True iff every natural model of ``hyps`` (with uninterpreted functions) equates ``t`` and ``u``."""
    lin, base, choices, prob = _ackermann(hyps, (t, u))
    g = _diff(lin[t], lin[u])
    return not _satisfiable(prob, base, [[[(g, ">=1")], [(g, "<=-1")]]] + choices)


def semantic_consistent(hyps) -> bool:
    _, base, choices, prob = _ackermann(hyps, ())
    return _satisfiable(prob, base, choices)
