"""Linearise conversion proofs into certificates."""

from __future__ import annotations

from ..congruence.proof import (
    PArith,
    PBetaIota,
    PBinder,
    PCollapse,
    PCongr,
    PHyp,
    Proof,
    PSym,
    PTrans,
)
from ..term import Context, Sort, free_var_terms
from .model import Arith, BetaIota, Binder, Certificate, Collapse, Congr, Hyp, Step, Sym, Trans, context_hash


class EmitError(RuntimeError):
    """The proof does not justify the judgment; this is a kernel bug."""


class _Emitter:
    def __init__(self):
        self.steps: list[Step] = []
        self.memo: dict[tuple, int] = {}

    def push(self, step: Step) -> int:
        key = (type(step), step)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.steps.append(step)
        self.memo[key] = len(self.steps) - 1
        return len(self.steps) - 1

    def emit(self, p: Proof, ext: tuple) -> int:
        key = (id(p), ext)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        i = self._emit(p, ext)
        self.memo[key] = i
        return i

    def _emit(self, p: Proof, ext: tuple) -> int:
        base = dict(lhs=p.lhs, rhs=p.rhs, ext=ext)
        if isinstance(p, PBetaIota):
            return self.push(BetaIota(**base, paths=tuple(tuple(x) for x in p.paths)))
        if isinstance(p, PHyp):
            return self.push(Hyp(**base, index=p.index, beta_steps=p.beta_steps))
        if isinstance(p, PCongr):
            kids = tuple(None if c is None else self.emit(c, ext) for c in p.children)
            return self.push(Congr(**base, children=kids))
        if isinstance(p, PBinder):
            dom = None if p.domain is None else self.emit(p.domain, ext)
            inner = ext + ((p.var, p.annot, p.lhs.domain),)
            body = self.emit(p.body, inner)
            return self.push(Binder(**base, domain=dom, body=body, var=p.var, annot=p.annot))
        if isinstance(p, PArith):
            prem = tuple(self.emit(q, ext) for q in p.premises)
            return self.push(Arith(**base, premises=prem, witness=p.witness))
        if isinstance(p, PSym):
            return self.push(Sym(**base, sub=self.emit(p.sub, ext)))
        if isinstance(p, PTrans):
            a = self.emit(p.first, ext)
            b = self.emit(p.second, ext)
            return self.push(Trans(**base, first=a, second=b))
        if isinstance(p, PCollapse):
            return self.push(Collapse(**base, refutation=self.emit(p.refutation, ext)))
        raise EmitError(f"unknown proof node {type(p).__name__}")


def certificate(ctx: Context, proof: Proof) -> Certificate:
    em = _Emitter()
    last = em.emit(proof, ())
    if last != len(em.steps) - 1:
        raise EmitError("goal step is not last")
    names = set(ctx.names())
    free: dict[str, Sort] = {}
    for s in em.steps:
        terms = [s.lhs, s.rhs] + [T for _, _, T in s.ext]
        bound = {n for n, _, _ in s.ext}
        for t in terms:
            for v in free_var_terms(t):
                if v.name not in names and v.name not in bound:
                    free.setdefault(v.name, v.sort)
    return Certificate(context_hash(ctx), proof.lhs, proof.rhs, tuple(em.steps), tuple(sorted(free.items())))


def emit(judgment) -> Certificate:
    """Certificate for an accepted judgment produced with ``certify=True``."""
    if not judgment.verdict:
        raise EmitError("only accepted judgments have certificates")
    if judgment.proof is None:
        raise EmitError("judgment carries no proof; rerun with certify=True")
    p = judgment.proof
    if p.lhs is not judgment.lhs or p.rhs is not judgment.rhs:
        raise EmitError("proof concludes a different goal")
    return certificate(judgment.context, p)


__all__ = ["EmitError", "certificate", "emit"]
