"""One check per acceptance criterion, each reported as a PASS/FAIL line."""

import random
import subprocess
import sys
import time
from pathlib import Path

from ccnat.cli import main
from ccnat.congruence import clear_caches, convertible
from ccnat.reduce import contract_at, normalize
from ccnat.term import numeral

import grids
import suites
from conftest import GAMMA_EX, Scope
from generators import fo_instance, fo_script, render
from oracles import semantic_convertible
from test_cert import tamper
import mutants

HERE = Path(__file__).parent


def test_1_contradiction_reproduction(tmp_path, capsys, acceptance):
    script = tmp_path / "gamma.ccn"
    script.write_text(
        GAMMA_EX + "(convert (+ y t) (+ x 3))\n(convert (app f (+ y t)) (app f (+ x 3)))\n(consistent)\n"
    )
    clear_caches()
    start = time.perf_counter()
    code = main(["run", str(script)])
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out.splitlines()
    ok = code == 0 and out == ["CONVERT yes", "CONVERT yes", "CONSISTENT no"] and elapsed < 1.0
    acceptance("1 contradiction reproduction", ok, f"{' / '.join(out)} in {elapsed:.3f}s, exit {code}")


def test_2_axiom_table(capsys, acceptance):
    scripts = sorted((HERE / "golden" / "axioms").glob("*.ccn"))
    bad = []
    for s in scripts:
        main(["run", str(s)])
        if capsys.readouterr().out.encode() != s.with_suffix(".out").read_bytes():
            bad.append(s.stem)
    acceptance("2 axiom table", len(scripts) == 7 and not bad, f"{len(scripts) - len(bad)}/{len(scripts)} byte-exact")


def test_3_iota_goldens(acceptance):
    s = Scope()
    double = "(lam k u nat (lam p u nat (S (S p))))"
    add = "(lam m u nat (lam n u nat (rec m (lam k u nat nat) n (lam k u nat (lam p u nat (S p))))))"
    rows = [
        [c.strip() for c in line.split("|")]
        for line in (HERE / "golden" / "iota.txt").read_text().splitlines()
        if line.strip() and not line.startswith(";")
    ]
    bad = 0
    for n, step, nf in rows:
        t = s(f"(rec {n} (lam k u nat nat) 0 {double})")
        bad += contract_at(t, ()) is not s(step) or normalize(t).term is not s(nf)
    sums = sum(normalize(s(f"({add} {m} {n})")).term is not numeral(m + n) for m in range(6) for n in range(6))
    acceptance("3 iota goldens", len(rows) == 6 and not bad and not sums, f"{len(rows)} goldens, 36 sums, {bad + sums} mismatches")


def test_4_arith_oracle(acceptance):
    start = time.perf_counter()
    tally = grids.compare(grids.grid())
    elapsed = time.perf_counter() - start
    ok = not tally.disagreements and elapsed < 300 and tally.systems >= 1000
    acceptance(
        "4 arith oracle",
        ok,
        f"{tally.systems} systems, {tally.queries} queries, {len(tally.disagreements)} disagreements, {elapsed:.0f}s",
    )


def test_5_conversion_oracle(acceptance):
    rng = random.Random(2718)
    n, unsound, incomplete = 1000, 0, 0
    for _ in range(n):
        hyps, t, u = fo_instance(rng)
        s = Scope(fo_script(hyps))
        ours = convertible(s.ctx, s(render(t)), s(render(u))).verdict
        ref = semantic_convertible(hyps, t, u)
        unsound += ours and not ref
        incomplete += ref and not ours
    ok = unsound == 0 and incomplete < n / 100
    acceptance("5 conversion oracle", ok, f"{n} instances, {unsound} unsound, {incomplete} incomplete")


def test_6_property_suites(acceptance):
    results = {
        name: getattr(suites, name)()
        for name in ("conversion_laws", "zero_succ_separation", "subject_reduction", "substitution_stability", "confluence")
    }
    ok = all(cases >= 500 and not fails for cases, fails in results.values())
    ok = ok and results["subject_reduction"][0] >= 1000
    detail = ", ".join(f"{k} {c}/{len(f)}" for k, (c, f) in results.items())
    acceptance("6 property suites", ok, detail + " (cases/failures)")


def test_7_certificates(acceptance):
    from ccnat.cert import dumps, loads, verify

    corpus = mutants.corpus()
    trips = sum(verify(ctx, loads(dumps(c), ctx), l, r) for ctx, l, r, c in corpus)
    made, rejected, accepted = tamper(corpus)
    unsound = sum(not convertible(ctx, m.lhs, m.rhs).verdict for ctx, _, m in accepted)
    ok = trips == len(corpus) and rejected / made >= 0.99 and unsound == 0
    acceptance(
        "7 certificates",
        ok,
        f"round-trip {trips}/{len(corpus)}, {rejected}/{made} mutants rejected, "
        f"{len(accepted)} neutral accepted, {unsound} on non-convertible goals",
    )


def test_8_no_proof_of_falsity(acceptance):
    scripts = sorted((HERE / "adversarial").glob("*.ccn"))
    rejected = 0
    for s in scripts:
        p = subprocess.run([sys.executable, "-m", "ccnat.cli", "run", str(s)], capture_output=True, text=True)
        rejected += p.returncode == 1 and p.stdout.startswith("CHECK fail")
    acceptance("8 no proof of falsity", len(scripts) == 50 and rejected == 50, f"{rejected}/{len(scripts)} rejected with exit 1")
