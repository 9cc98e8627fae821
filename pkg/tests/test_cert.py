import dataclasses
import json
import random
import subprocess
import sys

import pytest

from ccnat.cert import CertificateFormatError, dumps, emit, loads, verify
from ccnat.cert.model import Arith, BetaIota, Collapse, Congr, Hyp
from ccnat.congruence import convertible

import mutants
from conftest import GAMMA_EX, Scope


@pytest.fixture(scope="module")
def corpus():
    return mutants.corpus()


def _cert(scope, a, b):
    j = convertible(scope.ctx, scope(a), scope(b), certify=True)
    assert j.verdict
    return emit(j)


def kinds(cert):
    return [type(s).__name__ for s in cert.steps]


def test_gamma_ex_certificate_shape(gamma_ex):
    c = _cert(gamma_ex, "(+ y t)", "(+ x 3)")
    hyps = [s.index for s in c.steps if isinstance(s, Hyp)]
    names = [gamma_ex.ctx[i].name for i in hyps]
    assert sorted(names) == ["p1", "p4"]
    assert kinds(c).count("Arith") == 1
    assert verify(gamma_ex.ctx, c, gamma_ex("(+ y t)"), gamma_ex("(+ x 3)"))


def test_reflexive_certificate_is_one_empty_step(gamma_ex):
    c = _cert(gamma_ex, "(lam k u nat (f k))", "(lam k u nat (f k))")
    assert len(c.steps) == 1
    assert isinstance(c.steps[0], BetaIota) and c.steps[0].paths == ()


def test_collapse_certificate_shape(gamma_ex):
    c = _cert(gamma_ex, "0", "1")
    ks = kinds(c)
    assert ks.count("Hyp") == 4 and ks.count("Congr") >= 1
    assert isinstance(c.steps[-1], Collapse)
    ref = c.steps[c.steps[-1].refutation]
    assert isinstance(ref, Arith) and (ref.lhs, ref.rhs) == (gamma_ex("0"), gamma_ex("1"))
    assert verify(gamma_ex.ctx, c)


def test_text_format_header(gamma_ex):
    text = dumps(_cert(gamma_ex, "(+ y t)", "(+ x 3)"))
    lines = text.splitlines()
    assert lines[0] == "ccnat-cert v1"
    assert lines[1].startswith("(context ") and lines[3] == "(goal (+ y t) (+ x 3))"
    text.encode("utf-8")


def test_perturbed_multiplier_is_rejected(gamma_ex):
    c = _cert(gamma_ex, "(+ y t)", "(+ x 3)")
    i = next(k for k, s in enumerate(c.steps) if isinstance(s, Arith))
    s = c.steps[i]
    (idx, m), *rest = s.witness.multipliers
    w = dataclasses.replace(s.witness, multipliers=((idx, m + 1), *rest))
    bad = dataclasses.replace(c, steps=c.steps[:i] + (dataclasses.replace(s, witness=w),) + c.steps[i + 1 :])
    assert not verify(gamma_ex.ctx, bad)


def test_forward_reference_is_rejected(gamma_ex):
    c = _cert(gamma_ex, "(+ y t)", "(+ x 3)")
    steps = list(c.steps)
    i = next(k for k, s in enumerate(steps) if isinstance(s, Arith))
    steps.insert(0, steps.pop(i))
    assert not verify(gamma_ex.ctx, dataclasses.replace(c, steps=tuple(steps)))


def test_wrong_goal_or_context_is_rejected(gamma_ex, empty):
    c = _cert(gamma_ex, "(+ y t)", "(+ x 3)")
    assert not verify(gamma_ex.ctx, c, gamma_ex("(+ y t)"), gamma_ex("(+ x 4)"))
    other = Scope(GAMMA_EX.replace("(eq nat t 2)", "(eq nat t 3)"))
    assert not verify(other.ctx, c)


def test_malformed_text_is_rejected(gamma_ex):
    text = dumps(_cert(gamma_ex, "(+ y t)", "(+ x 3)"))
    with pytest.raises(CertificateFormatError):
        loads(text.replace("ccnat-cert v1", "ccnat-cert v2"), gamma_ex.ctx)
    assert not verify(gamma_ex.ctx, text[: len(text) // 2])
    assert not verify(gamma_ex.ctx, text.replace("(steps", "(stops"))


def test_emit_refuses_rejected_judgments(empty):
    from ccnat.cert import EmitError

    j = convertible(empty.ctx, empty("0"), empty("1"), certify=True)
    with pytest.raises(EmitError):
        emit(j)


def test_round_trip(corpus):
    for ctx, lhs, rhs, cert in corpus:
        text = dumps(cert)
        again = loads(text, ctx)
        assert dumps(again) == text
        assert verify(ctx, again, lhs, rhs), text


def tamper(corpus, n=1000, seed=5):
    """Return (mutants, rejected, accepted pairs)."""
    rng = random.Random(seed)
    made, rejected, accepted = 0, 0, []
    while made < n:
        ctx, _, _, cert = corpus[rng.randrange(len(corpus))]
        m = mutants.mutate(rng, cert)
        if m == cert:
            continue
        made += 1
        if verify(ctx, m):
            accepted.append((ctx, cert, m))
        else:
            rejected += 1
    return made, rejected, accepted


def test_tamper_resistance(corpus):
    made, rejected, accepted = tamper(corpus)
    assert rejected / made >= 0.99
    for ctx, cert, m in accepted:
        # what survives is neutral: the same goal, still convertible
        assert (m.lhs, m.rhs) == (cert.lhs, cert.rhs)
        assert convertible(ctx, m.lhs, m.rhs).verdict


VERIFIER_ONLY = r"""
import json, sys
from ccnat.cert import loads, verify
from ccnat.cli import load_context
ctx = load_context(sys.argv[1]).ctx
print(json.dumps({"ok": verify(ctx, loads(sys.stdin.read(), ctx)), "mods": sorted(sys.modules)}))
"""


def test_verifier_independence(gamma_ex):
    text = dumps(_cert(gamma_ex, "0", "1"))
    out = subprocess.run(
        [sys.executable, "-c", VERIFIER_ONLY, GAMMA_EX], input=text, capture_output=True, text=True, check=True
    )
    res = json.loads(out.stdout)
    assert res["ok"]
    forbidden = {
        "ccnat.congruence",
        "ccnat.cert.emitter",
        "ccnat.arith.decide",
        "ccnat.arith.omega",
        "ccnat.arith.models",
        "ccnat.arith.lp",
        "ccnat.typecheck",
    }
    assert not forbidden & set(res["mods"]), forbidden & set(res["mods"])
