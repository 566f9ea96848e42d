"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import io
import json
import time
from contextlib import redirect_stdout
from fractions import Fraction

from hankelbound import errata, reference
from hankelbound.classmodel import F_CLASS, G_CLASS, closed_form_coefficients, derive_coefficients
from hankelbound.cli import run
from hankelbound.decomp import builtin_decomposition, tamper, verify_decomposition
from hankelbound.hankel import hankel_poly
from hankelbound.optimize import OMEGA, certify_max, critical_points, edge_profiles, find_critical_points
from hankelbound.polycore import parse, x
from hankelbound.schwarz import SchurParams, check_lemmas
from hankelbound.search import default_seed, evaluate_candidate, search_extremal

F = Fraction
LINES = []


def record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title} -- {detail}"
    LINES.append(line)
    print(line)
    assert ok, line


def cli(argv):
    buf = io.StringIO()
    t0 = time.perf_counter()
    with redirect_stdout(buf):
        code, rep = run(argv)
    return code, rep, time.perf_counter() - t0


def test_criterion_1_coefficients():
    code_f, rep_f, tf = cli(["derive", "--class", "F", "--order", "5"])
    code_g, rep_g, tg = cli(["derive", "--class", "G", "--order", "5"])
    cf = {k: parse(v) for k, v in rep_f["results"]["coefficients"].items()}
    cg = {k: parse(v) for k, v in rep_g["results"]["coefficients"].items()}
    pf = reference.PRINTED_COEFFS["F"]
    ok_f = all(cf[k] == pf[k] for k in ("a2", "a3", "a5"))
    ok_a4 = cf["a4"] == parse("1/8*(2*c3 + 13*c1*c2 + 20*c1^3)")
    at_z = [cf[f"a{n}"].eval({"c1": 1, "c2": 0, "c3": 0, "c4": 0}) for n in range(2, 6)]
    ok_oracle = at_z == [F(3, 2), 2, F(5, 2), 3] == closed_form_coefficients(F_CLASS, 1, 1)
    ok_g = all(cg[k] == v for k, v in reference.PRINTED_COEFFS["G"].items())
    ok = code_f == 0 and code_g == 0 and ok_f and ok_a4 and ok_oracle and ok_g and tf < 1 and tg < 1
    record(1, "coefficient derivation", ok,
           f"a2,a3,a5 {ok_f}; a4=1/8(...) {ok_a4}; w=z oracle {ok_oracle}; G list {ok_g};"
           f" runtime {tf:.2f}s/{tg:.2f}s (<1s)")


def test_criterion_2_expansions():
    t0 = time.perf_counter()
    pf = hankel_poly(derive_coefficients(F_CLASS, 5), 3, 1, 320).poly
    pg = hankel_poly(derive_coefficients(G_CLASS, 5), 3, 1, 8640).poly
    dt = time.perf_counter() - t0
    ok_f = pf == reference.PRINTED_H3["F"]
    ok_g = pg == reference.PRINTED_H3["G"]
    record(2, "determinant expansion", ok_f and ok_g and dt < 1,
           f"320*H3(F) exact {ok_f}; 8640*H3(G) exact {ok_g}; runtime {dt:.2f}s (<1s)")


def _tamper_cases(d):
    for i, g in enumerate(d.groups):
        if g.rule.kind == "PS":
            yield i, {"mu": g.rule.mu + F(1, 10)}
            yield i, {"nu": g.rule.nu + F(1, 10)}
        yield i, {"kind": "ModulusSub" if g.rule.kind != "ModulusSub" else "CarlsonC4"}


def test_criterion_3_decomposition():
    details = []
    ok = True
    for spec in (F_CLASS, G_CLASS):
        d = builtin_decomposition(spec)
        rep = verify_decomposition(d)
        ok &= rep.identity_ok and rep.admissibility_ok and rep.majorization_ok
        flips = 0
        cases = list(_tamper_cases(d))
        for i, change in cases:
            bad = verify_decomposition(tamper(d, i, **change), sample=False)
            if not bad.admissibility[i].passed and not bad.ok:
                flips += 1
        ok &= flips == len(cases)
        details.append(f"{spec.name}: identity/admissibility/relaxation {rep.ok}, tampers flipped {flips}/{len(cases)}")
    record(3, "decomposition soundness", ok, "; ".join(details))


def test_criterion_4_certified_maxima():
    details = []
    ok = True
    for spec, value, bound, slack in ((F_CLASS, 20, F(1, 8), 3.2e-12), (G_CLASS, 76, F(17, 1080), 1.2e-13)):
        h = builtin_decomposition(spec).majorant
        t0 = time.perf_counter()
        b = certify_max(h, OMEGA, 1e-9)
        code, rep, t_cli = cli(["verify-bound", "--class", spec.name, "--eps", "1e-9"])
        dt = time.perf_counter() - t0
        hi = F(rep["results"]["abs_H3_bound"]["hi"])
        good = (b.lb == value and value <= b.ub <= value + 1e-9 and b.witness == {"x": 0, "y": 1}
                and code == 0 and hi <= bound + F(slack) and dt < 30)
        ok &= good
        details.append(f"{spec.name}: [{b.lb}, {b.ub!r}] at (0,1), |H3| <= {float(hi)!r}"
                       f" (limit {float(bound)!r} + {slack}), {dt:.2f}s (<30s)")
    record(4, "certified maxima", ok, "; ".join(details))


def test_criterion_5_edges():
    hf = builtin_decomposition(F_CLASS).majorant
    hg = builtin_decomposition(G_CLASS).majorant
    (y0,) = [e for e in edge_profiles(F_CLASS) if e.label == "y=0"]
    ok1 = y0.bound.lb == 8 and y0.bound.witness["x"] == 1 and y0.bound.ub <= 8 + 1e-9
    ok2 = hf.subs({"y": 1 - x * x}).diff("x") == parse("-12/5*x*(1 - x)*(11 + x + 37*x^2 + 37*x^3)")
    ok3 = hg.subs({"y": 1 - x * x}) == parse("-182/5*x^6 + 204/5*x^4 + 72*x^3 - 402/5*x^2 + 76")
    ok4 = hg.eval({"x": 0, "y": 1}) == 76 and hg.eval({"x": 1, "y": 0}) == 72
    record(5, "edge analysis replay", ok1 and ok2 and ok3 and ok4,
           f"h_F(x,0) max 8 at x=1 {ok1}; g' factorization {ok2}; h_G(x,1-x^2) {ok3}; corners 76/72 {ok4}")


def test_criterion_6_critical_points():
    hf = builtin_decomposition(F_CLASS).majorant
    hg = builtin_decomposition(G_CLASS).majorant
    pf = critical_points(hf)
    pg = critical_points(hg)
    conclusive = not find_critical_points(hf).inconclusive and not find_critical_points(hg).inconclusive
    ok = pf == [] and len(pg) == 1 and conclusive
    if len(pg) == 1:
        p = pg[0]
        ok = ok and abs(p.x - 0.2311) < 1e-3 and abs(p.y - 0.6130) < 1e-3 and abs(p.value - 62.10899) < 1e-4
        where = f"({p.x:.6f}, {p.y:.6f}) value {p.value:.6f}"
    else:
        where = f"{len(pg)} points"
    record(6, "critical points", ok, f"F interior points {len(pf)}; G: {where}; conclusive {conclusive}")


def test_criterion_7_conjecture():
    ok = evaluate_candidate(F_CLASS, SchurParams([0, 1]))[1] == F(1, 16)
    ok &= evaluate_candidate(G_CLASS, SchurParams([0, 1]))[1] == F(19, 2160)
    details = [f"exact at gamma=(0,1) {ok}"]
    for spec, conj, proven in ((F_CLASS, F(1, 16), F(1, 8)), (G_CLASS, F(19, 2160), F(17, 1080))):
        t0 = time.perf_counter()
        r = search_extremal(spec, m=4, restarts=1000, seed=default_seed())
        dt = time.perf_counter() - t0
        good = float(conj) - 1e-9 <= r.best_value <= float(proven) and not r.counterexample_candidate and dt < 60
        ok &= good
        details.append(f"{spec.name}: best {r.best_value!r} in [{float(conj) - 1e-9!r}, {float(proven)!r}],"
                       f" counterexample {r.counterexample_candidate}, {dt:.2f}s (<60s)")
    record(7, "conjecture probes", ok, "; ".join(details))


def test_criterion_8_lemmas():
    t0 = time.perf_counter()
    stats = check_lemmas(seed=7, m=3, count=100_000)
    dt = time.perf_counter() - t0
    ok = stats["passed"] and stats["ps_max"] <= 1 + 1e-12 and dt < 60
    record(8, "lemma property suite", ok,
           f"{stats['count']} samples; Carlson failures {stats['carlson_c2_failures']}+{stats['carlson_c4_failures']};"
           f" PS failures {stats['ps_failures']} over {stats['ps_grid_points']} grid points,"
           f" max {stats['ps_max']:.15f} (<= 1+1e-12); {dt:.2f}s (<60s)")


def test_criterion_9_ledger():
    code, rep, _ = cli(["verify-bound", "--class", "G"])
    listed = {e["key"]: e for e in rep["results"]["errata"]}
    present = [k for k in errata.REQUIRED if k in listed and listed[k]["confirmed"]]
    ok = len(present) == 3 and all(listed[k]["evidence"] for k in present)
    ok &= any(c["name"] == "discrepancy ledger complete" and c["status"] == "pass" for c in rep["checks"])
    record(9, "discrepancy ledger", ok, f"confirmed entries with evidence: {present}")
