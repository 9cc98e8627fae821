"""Saturation of a context's equality hypotheses.

The state holds a finite universe of closed, beta-iota-normal object terms split
into classes by a union-find. Saturation alternates three steps until nothing
changes: congruence closure over application, recursor and Eq nodes; iota
expansion of recursors whose scrutinee class holds a constructor; and
arithmetic propagation, which purifies every class through the alien table and
merges two classes when the resulting equation pool entails their caps equal.

Every merge is recorded as an edge of a proof forest, so any derived equality
can be explained later as a derivation tree (see ``proof``).
"""

from __future__ import annotations

import enum
import heapq
import threading
from typing import Iterable

from .._kernels import UnionFind
from ..arith.decide import WitnessError, entails_poly, feasible, prove
from ..arith.linpoly import LinEq, LinPoly, aliens, cap, is_algebraic, syntactic_system
from ..arith.models import ModelFinder
from ..arith.omega import ArithResourceLimit
from ..arith.witness import CaseEnumeration
from ..printer import show
from ..reduce import DEFAULT_FUEL, normalize, normalize_trace
from ..term import (
    ONE,
    PLUS,
    SUCC,
    ZERO,
    App,
    Class,
    EqI,
    Lam,
    Rec,
    Term,
    classify,
    match_succ,
    subterms,
)
from .hyps import Hypothesis
from .proof import PArith, PBetaIota, PCollapse, PCongr, PHyp, Proof, chain, refl, sym

MAX_UNIVERSE = 20_000


class Consistency(enum.Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    UNDETERMINED = "undetermined"


class ConversionFuelExhausted(RuntimeError):
    """Normalization ran out of fuel; no verdict is possible."""


def nf(t: Term, fuel: int) -> Term:
    r = normalize(t, fuel)
    if not r.normal:
        raise ConversionFuelExhausted(f"normalization exceeded {fuel} steps")
    return r.term


def beta_proof(t: Term, target: Term, fuel: int) -> Proof:
    if t is target:
        return refl(t)
    res, paths = normalize_trace(t, fuel)
    if res.term is not target:
        raise AssertionError("normal form mismatch while explaining a reduction")
    return PBetaIota(t, target, tuple(paths))


def _eligible(t: Term) -> bool:
    """Classes are compared arithmetically through members that denote numbers."""
    if t is SUCC or t is PLUS or isinstance(t, Lam):
        return False
    return not (isinstance(t, App) and t.fn is PLUS)


def witness_indices(w, n: int) -> set[int]:
    out: set[int] = set()
    stack = [w]
    while stack:
        x = stack.pop()
        out.update(i for i, _ in x.multipliers if i < n)
        if isinstance(x, CaseEnumeration):
            stack.extend(sub for _, sub in x.cases)
    return out


class ConversionState:
    """Saturated classes of object terms for one set of hypotheses.

    A state is mutated only while it is being built or extended; ``extended``
    returns a saturated copy, leaving the receiver untouched.
    """

    def __init__(self, hyps: Iterable[Hypothesis] = (), fuel: int = DEFAULT_FUEL, key=None):
        self.key = key
        self.hyps = tuple(hyps)
        self.fuel = fuel
        self.terms: list[Term] = []
        self.ids: dict[Term, int] = {}
        self.uf = UnionFind()
        self.members: dict[int, list[int]] = {}
        self.pf: list[tuple | None] = []  # proof forest: (neighbour, reason, stamp)
        self.trace: list[str] = []
        self.pool: list[tuple[LinEq, str]] = []
        self.flag = Consistency.CONSISTENT
        self.collapse_pairs: list[tuple[int, int]] | None = None
        self.collapse_stamp = 0
        self.diagnostics: list[str] = []
        self.merges = 0
        self._pending: list[tuple[int, int, tuple]] = []
        self._iota_done: set[tuple[int, int]] = set()
        self._explained: dict[tuple[int, int], Proof] = {}
        self._reason_proofs: dict[int, Proof] = {}
        self._lock = threading.RLock()
        self.add(ZERO)
        for h in self.hyps:
            lhs, rhs = nf(h.lhs, fuel), nf(h.rhs, fuel)
            a, b = self.add(lhs), self.add(rhs)
            if a is not None and b is not None:
                self._pending.append((a, b, ("hyp", h, lhs, rhs)))
        self.saturate()

    # -- universe ----------------------------------------------------------------

    @property
    def incomplete(self) -> bool:
        return bool(self.diagnostics) or self.flag is Consistency.UNDETERMINED

    def add(self, t: Term) -> int | None:
        """Add the closed object subterms of ``t`` (assumed normal); return the id of ``t``."""
        for u in subterms(t):
            if u in self.ids or classify(u) is not Class.O:
                continue
            if len(self.terms) >= MAX_UNIVERSE:
                self._note(f"universe limit {MAX_UNIVERSE} reached")
                break
            i = self.uf.add()
            self.terms.append(u)
            self.ids[u] = i
            self.members[i] = [i]
            self.pf.append(None)
        return self.ids.get(t)

    def find(self, t: Term) -> int | None:
        i = self.ids.get(t)
        return None if i is None else self.uf.find(i)

    def classes(self) -> list[list[Term]]:
        return [[self.terms[i] for i in ms] for _, ms in sorted(self.members.items())]

    def alien_table(self) -> dict[int, str]:
        """Class id -> alien variable, for classes holding at least one alien term."""
        out = {}
        for root, ms in self.members.items():
            if any(not is_algebraic(self.terms[m]) for m in ms):
                out[root] = f"a:{root}"
        return out

    def _note(self, msg: str) -> None:
        if msg not in self.diagnostics:
            self.diagnostics.append(msg)
            self.trace.append(f"unknown {msg}")

    # -- merging -------------------------------------------------------------------

    def _reroot(self, a: int) -> None:
        incoming = None
        cur = a
        while True:
            edge = self.pf[cur]
            self.pf[cur] = incoming
            if edge is None:
                return
            parent, reason, stamp = edge
            incoming = (cur, reason, stamp)
            cur = parent

    def _merge(self, a: int, b: int, reason: tuple) -> bool:
        ra, rb = self.uf.find(a), self.uf.find(b)
        if ra == rb:
            return False
        root = self.uf.union(ra, rb)
        other = rb if root == ra else ra
        self.members[root] = list(heapq.merge(self.members[root], self.members.pop(other)))
        self._reroot(a)
        self.merges += 1
        self.pf[a] = (b, reason, self.merges)
        tag = reason[0]
        if tag == "hyp":
            tag = f"hyp {reason[1].name}"
        self.trace.append(f"merge [{tag}] {show(self.terms[a])} = {show(self.terms[b])}")
        return True

    def _signature(self, t: Term):
        if isinstance(t, App):
            return (0, self._key(t.fn), self._key(t.arg))
        if isinstance(t, Rec):
            return (1,) + tuple(self._key(k) for k in t.children())
        if isinstance(t, EqI):
            return (2, self._key(t.proof))
        return None

    def _key(self, c: Term):
        i = self.ids.get(c)
        return ("t", c) if i is None else self.uf.find(i)

    def _congruence(self) -> bool:
        changed = False
        while True:
            table: dict = {}
            merged = False
            for i, t in enumerate(self.terms):
                s = self._signature(t)
                if s is None:
                    continue
                j = table.get(s)
                if j is None:
                    table[s] = i
                elif self._merge(j, i, ("congr",)):
                    merged = True
            if not merged:
                return changed
            changed = True

    def _iota(self) -> bool:
        changed = False
        for i in range(len(self.terms)):
            t = self.terms[i]
            if not isinstance(t, Rec):
                continue
            if classify(t.zero_case) is not Class.O or classify(t.succ_case) is not Class.O:
                continue
            s = self.ids.get(t.scrut)
            if s is None:
                continue
            root = self.uf.find(s)
            if (i, root) in self._iota_done:
                continue
            self._iota_done.add((i, root))
            c = next(
                (self.terms[m] for m in self.members[root] if self.terms[m] is ZERO or match_succ(self.terms[m])),
                None,
            )
            if c is None:
                continue
            red = Rec(c, t.motive, t.zero_case, t.succ_case)
            target = nf(red, self.fuel)
            j = self.add(target)
            if j is not None and self._merge(i, j, ("iota", t, red, target)):
                changed = True
        return changed

    # -- arithmetic ------------------------------------------------------------------

    def _alien(self, u: Term) -> str:
        i = self.ids.get(u)
        if i is None:
            # only reachable past the universe limit
            return f"x:{u._hash}"
        return f"a:{self.uf.find(i)}"

    def _arith_round(self) -> bool:
        reps: dict[int, int] = {}
        for root, ms in self.members.items():
            # an algebraic anchor keeps pool equations free of needless aliens
            ok = [m for m in ms if _eligible(self.terms[m])]
            if ok:
                reps[root] = next((m for m in ok if is_algebraic(self.terms[m])), ok[0])
        caps: dict[int, LinPoly] = {}
        pool: list[tuple[LinPoly, int, int]] = []
        for root in sorted(reps):
            anchor = reps[root]
            ca = cap(self.terms[anchor], self._alien)
            caps[root] = ca
            for m in self.members[root]:
                if m == anchor or not _eligible(self.terms[m]):
                    continue
                d = cap(self.terms[m], self._alien) - ca
                if not d.is_zero():
                    pool.append((d, m, anchor))
        polys = [d for d, _, _ in pool]
        self.pool = [(LinEq(d, LinPoly()), self._origin(m)) for d, m, _ in pool]
        try:
            ok = feasible(polys)
            if self.flag is Consistency.UNDETERMINED:
                self.flag = Consistency.CONSISTENT
        except ArithResourceLimit:
            self.flag = Consistency.UNDETERMINED
            self._note("consistency check exceeded the arithmetic budget")
            ok = True
        if not ok:
            self.flag = Consistency.INCONSISTENT
            self.collapse_pairs = [(m, a) for _, m, a in pool]
            self.collapse_stamp = self.merges + 1
            self.trace.append(f"inconsistent [ded] {show(ZERO)} = {show(ONE)}")
            return False
        names = {v for p in polys for v in p.coeffs}
        finder = ModelFinder(polys)
        models = []
        m0 = finder.find()
        if m0 is not None:
            models.append(m0)

        def bucket(root: int):
            c = caps[root]
            inside = sum(k * models[0][v] for v, k in c.coeffs.items() if v in names) if models else 0
            outside = tuple((v, k) for v, k in c.coeffs.items() if v not in names)
            return (inside + c.const if models else 0, outside)

        groups: dict = {}
        for root in sorted(reps):
            groups.setdefault(bucket(root), []).append(root)
        snapshot = [(m, a) for _, m, a in pool]
        merged = False
        for roots in groups.values():
            for x in range(len(roots)):
                for y in range(x + 1, len(roots)):
                    r1, r2 = roots[x], roots[y]
                    a, b = reps[r1], reps[r2]
                    if self.uf.find(a) == self.uf.find(b):
                        continue
                    d = caps[r1] - caps[r2]
                    if any(v not in names for v in d.coeffs):
                        continue
                    if not d.is_zero():
                        if any(d.evaluate(m) != 0 for m in models):
                            continue
                        found = finder.find(d)
                        if found is not None:
                            models.append(found)
                            continue
                        try:
                            if not entails_poly(polys, d):
                                continue
                        except ArithResourceLimit:
                            self._note(f"entailment {show(self.terms[a])} = {show(self.terms[b])} undecided")
                            continue
                    if self._merge(a, b, ("ded", snapshot, self.merges + 1)):
                        merged = True
        return merged

    def _origin(self, m: int) -> str:
        edge = self.pf[m]
        return "hypothesis" if edge is None else {"hyp": "hypothesis", "congr": "congruence"}.get(
            edge[1][0], "arithmetic"
        )

    # -- fixpoint --------------------------------------------------------------------

    def saturate(self) -> int:
        """Run to the fixpoint; return the number of merges performed."""
        with self._lock:
            before = self.merges
            while self.flag is not Consistency.INCONSISTENT:
                pending, self._pending = self._pending, []
                for a, b, reason in pending:
                    self._merge(a, b, reason)
                while self._congruence() | self._iota():
                    pass
                if not self._arith_round():
                    break
            return self.merges - before

    def extended(self, terms: Iterable[Term]) -> "ConversionState":
        """A saturated copy whose universe also holds ``terms`` (self if nothing is new)."""
        terms = [t for t in terms if classify(t) is Class.O]
        if all(t in self.ids for t in terms):
            return self
        with self._lock:
            other = object.__new__(ConversionState)
            other.__dict__.update(self.__dict__)
            other.terms = list(self.terms)
            other.ids = dict(self.ids)
            other.uf = self.uf.copy()
            other.members = {k: list(v) for k, v in self.members.items()}
            other.pf = list(self.pf)
            other.trace = list(self.trace)
            other.pool = list(self.pool)
            other.diagnostics = list(self.diagnostics)
            other._pending = []
            other._iota_done = set(self._iota_done)
            other._explained = {}
            other._reason_proofs = {}
            other._lock = threading.RLock()
        for t in terms:
            other.add(t)
        other.saturate()
        return other

    def equal(self, t: Term, u: Term) -> bool:
        if t is u:
            return True
        if self.flag is Consistency.INCONSISTENT:
            return classify(t) is Class.O and classify(u) is Class.O
        a, b = self.ids.get(t), self.ids.get(u)
        return a is not None and b is not None and self.uf.find(a) == self.uf.find(b)

    # -- explanations ------------------------------------------------------------------

    def explain(self, t: Term, u: Term) -> Proof:
        """Derivation of ``t ~ u`` for terms this state equates."""
        with self._lock:
            if t is u:
                return refl(t)
            a, b = self.ids.get(t), self.ids.get(u)
            if a is not None and b is not None and self.uf.find(a) == self.uf.find(b):
                return self._explain_ids(a, b)
            if self.flag is Consistency.INCONSISTENT:
                refutation = self._arith_proof(self.collapse_pairs or [], ZERO, ONE, self.collapse_stamp)
                return PCollapse(t, u, refutation)
            raise ValueError("terms are not equated by this state")

    def _explain_ids(self, a: int, b: int) -> Proof:
        if a == b:
            return refl(self.terms[a])
        hit = self._explained.get((a, b))
        if hit is not None:
            return hit
        up = {}
        x = a
        while x is not None:
            up[x] = True
            e = self.pf[x]
            x = None if e is None else e[0]
        lca = b
        while lca not in up:
            lca = self.pf[lca][0]
        proofs = []
        x = a
        while x != lca:
            p, reason, _ = self.pf[x]
            proofs.append(self._edge_proof(x, p, reason))
            x = p
        tail = []
        y = b
        while y != lca:
            p, reason, _ = self.pf[y]
            tail.append(sym(self._edge_proof(y, p, reason)))
            y = p
        proofs.extend(reversed(tail))
        out = chain(self.terms[a], *proofs)
        self._explained[(a, b)] = out
        return out

    def _edge_proof(self, x: int, p: int, reason: tuple) -> Proof:
        pr = self._reason_proof(x, p, reason)
        if pr.lhs is self.terms[x] and pr.rhs is self.terms[p]:
            return pr
        return sym(pr)

    def _reason_proof(self, x: int, p: int, reason: tuple) -> Proof:
        key = (min(x, p), max(x, p))
        hit = self._reason_proofs.get(key)
        if hit is not None:
            return hit
        kind = reason[0]
        lhs, rhs = self.terms[x], self.terms[p]
        if kind == "hyp":
            h, nl, nr = reason[1], reason[2], reason[3]
            out = chain(
                nl,
                sym(beta_proof(h.lhs, nl, self.fuel)),
                PHyp(h.lhs, h.rhs, h.index, h.beta_steps),
                beta_proof(h.rhs, nr, self.fuel),
            )
        elif kind == "congr":
            kids = []
            for c1, c2 in zip(lhs.children(), rhs.children()):
                if c1 is c2:
                    kids.append(None)
                else:
                    kids.append(self._explain_ids(self.ids[c1], self.ids[c2]))
            out = PCongr(lhs, rhs, tuple(kids))
        elif kind == "iota":
            rec, red, target = reason[1], reason[2], reason[3]
            scrut = self._explain_ids(self.ids[rec.scrut], self.ids[red.scrut])
            out = chain(rec, PCongr(rec, red, (scrut, None, None, None)), beta_proof(red, target, self.fuel))
        elif kind == "ded":
            pairs = [(self.terms[m], self.terms[n]) for m, n in reason[1]]
            out = self._arith_proof_terms(pairs, lhs, rhs, reason[2])
        else:
            raise AssertionError(kind)
        self._reason_proofs[key] = out
        return out

    def _arith_proof(self, pair_ids, lhs: Term, rhs: Term, stamp: int) -> Proof:
        return self._arith_proof_terms([(self.terms[m], self.terms[n]) for m, n in pair_ids], lhs, rhs, stamp)

    def _joined_before(self, a: int, b: int, stamp: int) -> bool:
        """Were ``a`` and ``b`` already equated before merge number ``stamp``?

        Forest paths never change once formed, so the answer is whether every
        edge on the current path is older than ``stamp``.
        """
        if self.uf.find(a) != self.uf.find(b):
            return False
        depth: dict[int, int] = {}
        x, worst = a, 0
        while x is not None:
            depth[x] = worst
            e = self.pf[x]
            if e is None:
                break
            worst = max(worst, e[2])
            x = e[0]
        y, worst = b, 0
        while y not in depth:
            e = self.pf[y]
            worst = max(worst, e[2])
            y = e[0]
        return max(worst, depth[y]) < stamp

    def _arith_proof_terms(self, pairs, lhs: Term, rhs: Term, stamp: int) -> Proof:
        seen: dict[Term, None] = {}
        for l, r in pairs + [(lhs, rhs)]:
            for al in aliens(l) + aliens(r):
                seen.setdefault(al)
        groups: list[list[Term]] = []
        for al in seen:
            i = self.ids.get(al)
            if i is None:
                continue
            for g in groups:
                if self._joined_before(self.ids[g[0]], i, stamp):
                    g.append(al)
                    break
            else:
                groups.append([al])
        aliases = [(g[0], x) for g in groups for x in g[1:]]
        premises = pairs + aliases
        polys, goal = syntactic_system(premises, (lhs, rhs))
        try:
            w = prove(polys, goal)
            used = sorted(witness_indices(w, len(polys)))
            kept = [premises[i] for i in used]
            polys, goal = syntactic_system(kept, (lhs, rhs))
            w = prove(polys, goal)
        except WitnessError as e:
            raise AssertionError(f"cannot justify arithmetic step: {e}") from e
        proofs = tuple(self._explain_ids(self.ids[l], self.ids[r]) for l, r in kept)
        return PArith(lhs, rhs, proofs, w)


__all__ = [
    "Consistency",
    "ConversionFuelExhausted",
    "ConversionState",
    "MAX_UNIVERSE",
    "beta_proof",
    "nf",
]
