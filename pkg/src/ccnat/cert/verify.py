"""Independent certificate replay.

Each step is checked by a local computation: a named contraction, a bounded
beta replay of a context type, a structural comparison, or a witness replay.
Nothing here searches for proofs; this module must stay clear of the
saturation engine and the arithmetic decision procedure.
"""

from __future__ import annotations

from ..arith.linpoly import syntactic_system
from ..arith.witness import check as check_witness
from ..reduce import contract_at, whnf_beta
from ..term import (
    ONE,
    ZERO,
    Annot,
    App,
    Binder as BinderTerm,
    Class,
    Context,
    EqI,
    Rec,
    Term,
    Var,
    classify,
    free_vars,
    instantiate,
    match_eq,
)
from .model import (
    Arith,
    BetaIota,
    Binder,
    Certificate,
    CertificateFormatError,
    Collapse,
    Congr,
    Hyp,
    Step,
    Sym,
    Trans,
    context_hash,
    loads,
)

MAX_BETA_REPLAY = 10_000_000


class Rejected(Exception):
    pass


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise Rejected(msg)


class _Replay:
    def __init__(self, ctx: Context, cert: Certificate):
        self.ctx = ctx
        self.cert = cert
        self.ctxs: dict[tuple, Context] = {(): ctx}

    def context(self, ext) -> Context:
        c = self.ctxs.get(ext)
        if c is None:
            parent = self.context(ext[:-1])
            name, annot, T = ext[-1]
            _need(name not in parent, f"extension rebinds {name}")
            c = parent.extend(name, annot, T)
            self.ctxs[ext] = c
        return c

    def ref(self, i: int, at: int) -> Step:
        _need(0 <= i < at, f"step {at} cites step {i}")
        return self.cert.steps[i]

    def same(self, i: int, at: int, lhs: Term, rhs: Term, ext) -> None:
        s = self.ref(i, at)
        _need(s.ext == ext, f"step {at} cites step {i} under another context")
        _need(s.lhs is lhs and s.rhs is rhs, f"step {at}: step {i} concludes something else")

    def run(self) -> None:
        steps = self.cert.steps
        _need(len(steps) > 0, "no steps")
        for at, s in enumerate(steps):
            self.context(s.ext)
            self.step(at, s)
        last = steps[-1]
        _need(last.ext == (), "final step is under binders")
        _need(last.lhs is self.cert.lhs and last.rhs is self.cert.rhs, "final step does not conclude the goal")

    def step(self, at: int, s: Step) -> None:
        if isinstance(s, BetaIota):
            t = s.lhs
            for p in s.paths:
                t = contract_at(t, p)
                _need(t is not None, f"step {at}: no redex at {p}")
            _need(t is s.rhs, f"step {at}: reduction ends elsewhere")
        elif isinstance(s, Hyp):
            ctx = self.context(s.ext)
            _need(s.index < len(ctx), f"step {at}: no binding {s.index}")
            b = ctx[s.index]
            _need(b.annot is Annot.R, f"step {at}: binding {b.name} is not restricted")
            _need(s.beta_steps <= MAX_BETA_REPLAY, f"step {at}: beta budget")
            head, used = whnf_beta(b.type, s.beta_steps)
            _need(used == s.beta_steps, f"step {at}: beta replay stopped early")
            m = match_eq(head)
            _need(m is not None, f"step {at}: not an equation")
            _need(m[1] is s.lhs and m[2] is s.rhs, f"step {at}: equation differs")
            _need(classify(s.lhs) is Class.O and classify(s.rhs) is Class.O, f"step {at}: sides not objects")
        elif isinstance(s, Congr):
            a, b = s.lhs, s.rhs
            _need(type(a) is type(b) and isinstance(a, (App, Rec, EqI)), f"step {at}: heads differ")
            ka, kb = a.children(), b.children()
            _need(len(s.children) == len(ka), f"step {at}: arity")
            for x, y, c in zip(ka, kb, s.children):
                if c is None:
                    _need(x is y, f"step {at}: unjustified component")
                else:
                    self.same(c, at, x, y, s.ext)
        elif isinstance(s, Binder):
            a, b = s.lhs, s.rhs
            _need(isinstance(a, BinderTerm) and type(a) is type(b), f"step {at}: not binders")
            _need(a.annot is s.annot and b.annot is s.annot, f"step {at}: annotations differ")
            if s.domain is None:
                _need(a.domain is b.domain, f"step {at}: unjustified domain")
            else:
                self.same(s.domain, at, a.domain, b.domain, s.ext)
            ctx = self.context(s.ext)
            _need(s.var not in ctx and s.var not in free_vars(a) and s.var not in free_vars(b), f"step {at}: var")
            v = Var(s.var, a.vsort)
            inner = s.ext + ((s.var, s.annot, a.domain),)
            self.same(s.body, at, instantiate(a.body, v), instantiate(b.body, v), inner)
        elif isinstance(s, Arith):
            _need(classify(s.lhs) is Class.O and classify(s.rhs) is Class.O, f"step {at}: sides not objects")
            pairs = []
            for i in s.premises:
                p = self.ref(i, at)
                _need(p.ext == s.ext, f"step {at}: premise {i} under another context")
                pairs.append((p.lhs, p.rhs))
            polys, goal = syntactic_system(pairs, (s.lhs, s.rhs))
            _need(s.witness is not None and check_witness(s.witness, polys, goal), f"step {at}: witness fails")
        elif isinstance(s, Sym):
            self.same(s.sub, at, s.rhs, s.lhs, s.ext)
        elif isinstance(s, Trans):
            f, g = self.ref(s.first, at), self.ref(s.second, at)
            _need(f.ext == s.ext and g.ext == s.ext, f"step {at}: premises under another context")
            _need(f.lhs is s.lhs and f.rhs is g.lhs and g.rhs is s.rhs, f"step {at}: does not chain")
        elif isinstance(s, Collapse):
            _need(classify(s.lhs) is Class.O and classify(s.rhs) is Class.O, f"step {at}: sides not objects")
            r = self.ref(s.refutation, at)
            _need(isinstance(r, Arith), f"step {at}: refutation is not arithmetic")
            self.same(s.refutation, at, ZERO, ONE, s.ext)
        else:
            raise Rejected(f"step {at}: unknown kind")


def check_certificate(ctx: Context, cert: Certificate, lhs: Term | None = None, rhs: Term | None = None) -> str | None:
    """None when ``cert`` proves its goal under ``ctx``; otherwise the first failure."""
    try:
        if cert.context_hash != context_hash(ctx):
            return "context fingerprint mismatch"
        if lhs is not None and (cert.lhs is not lhs or cert.rhs is not rhs):
            return "certificate proves a different goal"
        for name, _ in cert.free:
            if name in ctx:
                return f"free variable {name} is bound in the context"
        _Replay(ctx, cert).run()
    except Rejected as e:
        return str(e)
    except (RecursionError, ValueError, TypeError, AttributeError, IndexError) as e:
        return f"malformed certificate: {e}"
    return None


def verify(ctx: Context, cert: Certificate | str, lhs: Term | None = None, rhs: Term | None = None) -> bool:
    """True iff ``cert`` replays and concludes ``lhs ~ rhs`` (the stated goal when omitted)."""
    if isinstance(cert, str):
        try:
            cert = loads(cert, ctx)
        except CertificateFormatError:
            return False
    return check_certificate(ctx, cert, lhs, rhs) is None


__all__ = ["MAX_BETA_REPLAY", "Rejected", "check_certificate", "verify"]
