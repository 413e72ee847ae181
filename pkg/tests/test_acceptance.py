"""Acceptance criteria 1-10, one test each.

Every test records a ``CRITERION k: PASS/FAIL ...`` line that is printed in
the terminal summary.
"""
from __future__ import annotations

import io
import json
import math
import time

import numpy as np

import conftest
from powerdist import cli
from powerdist.constancy import constancy_set_even, max_constancy_bound, spread_on_sphere
from powerdist.polytopes import PolytopeFamily, generate
from powerdist.powersum import PowerSumParams, SphereSpec, evaluate, tangential_gradient
from powerdist.verify import FAIL, PASS, extremum_case, run_suite


def _record(k: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _suite_ok(rows) -> tuple[bool, str]:
    fails = [r for r in rows if r.status == FAIL]
    passed = sum(r.status == PASS for r in rows)
    info = len(rows) - passed - len(fails)
    msg = f"{passed} PASS, {len(fails)} FAIL" + (f", {info} INFO (exploratory)" if info else "")
    if fails:
        msg += "; first failure: " + " | ".join(fails[0].as_list())
    return not fails, msg


def test_criterion_1_planar_constancy():
    t0 = time.perf_counter()
    bad = []
    for n in range(3, 11):
        vs = generate(PolytopeFamily.ngon(n))
        sphere = SphereSpec.circumsphere(vs)
        want = list(range(2, 2 * n - 1, 2))
        got = constancy_set_even(vs, sphere, 2 * n + 2)
        inside = max(spread_on_sphere(vs, sphere, PowerSumParams(l)).spread_rel for l in want)
        at_2n = spread_on_sphere(vs, sphere, PowerSumParams(2 * n)).spread_rel
        if got != want or inside >= 1e-10 or at_2n <= 1e-6:
            bad.append(f"n={n} set={got} inside={inside:.1e} at2n={at_2n:.1e}")
    dt = time.perf_counter() - t0
    _record(1, not bad and dt < 10, f"n=3..10 sets and spreads ({dt:.2f} s) {'; '.join(bad)}")


def test_criterion_2_planar_extrema():
    total, bad = 0, []
    for n in range(3, 9):
        vs = generate(PolytopeFamily.ngon(n))
        for h, R in ((0.0, 1.5), (0.3, 1.0)):
            sphere = SphereSpec.concentric(vs, R)
            for lam in (-2, -1, 1, 3, 2 * n + 1):
                ok, exp, obs = extremum_case(vs, sphere, lam, h)
                total += 1
                if not ok:
                    bad.append(f"n={n} lambda={lam} h={h}: {exp} vs {obs}")
    _record(2, not bad, f"{total - len(bad)}/{total} cases {'; '.join(bad[:3])}")


def test_criterion_3_dodecahedron():
    vs = generate(PolytopeFamily.dodecahedron())
    circ = SphereSpec.circumsphere(vs)
    got = constancy_set_even(vs, circ, 18)
    spreads = [spread_on_sphere(vs, circ, PowerSumParams(l)).spread_rel for l in range(12, 19, 2)]
    b_circ = max_constancy_bound(vs, circ)
    b_out = max_constancy_bound(vs, SphereSpec.concentric(vs, 1.7))
    ok = got == [2, 4, 6, 8, 10] and min(spreads) > 1e-6 and (b_circ, b_out) == (8, 9)
    _record(3, ok, f"set={got} min spread 12..18={min(spreads):.2e} bounds={b_circ},{b_out}")


def test_criterion_4_icosahedron():
    vs = generate(PolytopeFamily.icosahedron())
    circ = SphereSpec.circumsphere(vs)
    s = {l: spread_on_sphere(vs, circ, PowerSumParams(l)) for l in (2, 4, 6, 8, 10, 12)}
    proven = all(s[l].spread_rel < 1e-10 for l in (2, 4, 6))
    unproven = all(s[l].is_constant for l in (8, 10))
    code, text = _cli(["constancy", "--family", "icosahedron", "--lambda-max", "12"])
    reported = json.loads(text)["unproven"]
    ok = proven and unproven and s[12].spread_rel > 1e-6 and reported == [8, 10] and code == 0
    _record(4, ok, f"2,4,6 max spread={max(s[l].spread_rel for l in (2, 4, 6)):.1e}; "
                   f"8,10 numerically constant (unproven, reported {reported}); "
                   f"12 spread={s[12].spread_rel:.2e}")


def test_criterion_5_simplex():
    ok, msg = _suite_ok(run_suite("simplex"))
    _record(5, ok, f"simplex dims 2..6: {msg}")


def test_criterion_6_cross_polytope_hypercube():
    rows = run_suite("crosspolytope") + run_suite("hypercube") + run_suite("duality")
    ok, msg = _suite_ok(rows)
    _record(6, ok, f"cross-polytope, hypercube, duality dims 3..6: {msg}")


def test_criterion_7_sign_changes():
    ok, msg = _suite_ok(run_suite("signchanges"))
    _record(7, ok, f"1000 random exponential sums: {msg}")


def test_criterion_8_closed_form():
    ok, msg = _suite_ok(run_suite("closedform"))
    _record(8, ok, f"1000 random tuples and n=4 anchors: {msg}")


def _fd_tangent(vs, m, sphere, p, step=1e-5):
    u = (m - sphere.center) / sphere.radius
    basis = np.linalg.svd(np.eye(len(m)) - np.outer(u, u))[0][:, :len(m) - 1]
    g = np.zeros(len(m))
    for e in basis.T:
        def at(s):
            a = s / sphere.radius
            return evaluate(vs, sphere.center + sphere.radius * (math.cos(a) * u + math.sin(a) * e),
                            p)
        g += (at(step) - at(-step)) / (2 * step) * e
    return g


def test_criterion_9_moments_and_gradients():
    ok, msg = _suite_ok(run_suite("moments"))
    rng = np.random.default_rng(9)
    families = [PolytopeFamily.ngon(5), PolytopeFamily.ngon(8), PolytopeFamily.simplex(3),
                PolytopeFamily.simplex(4), PolytopeFamily.cross_polytope(4),
                PolytopeFamily.hypercube(3)]
    worst = 0.0
    for _ in range(1000):
        vs = generate(families[int(rng.integers(len(families)))])
        R = rng.uniform(0.5, 1.5)
        sphere = SphereSpec.concentric(vs, R)
        u = rng.standard_normal(vs.dim)
        m = R * u / np.linalg.norm(u)
        p = PowerSumParams(rng.uniform(-2, 4), rng.uniform(0.1, 1.0))
        g = tangential_gradient(vs, m, sphere, p)
        worst = max(worst, float(np.max(np.abs(g - _fd_tangent(vs, m, sphere, p)))))
    _record(9, ok and worst < 1e-6, f"{msg}; 1000 gradient checks max FD error {worst:.1e}")


def _cli(argv) -> tuple[int, str]:
    buf = io.StringIO()
    code = cli.run(argv, buf)
    return code, buf.getvalue()


def _without_duration(text: str) -> str:
    if text.startswith("# manifest: "):
        head, rest = text.split("\n", 1)
        m = json.loads(head.removeprefix("# manifest: "))
        m.pop("durationSeconds")
        return json.dumps(m, sort_keys=True) + "\n" + rest
    doc = json.loads(text)
    doc["manifest"].pop("durationSeconds")
    return json.dumps(doc, sort_keys=True, indent=2)


def test_criterion_10_determinism():
    commands = [
        ["constancy", "--family", "dodecahedron", "--lambda-max", "14", "--seed", "4"],
        ["constancy", "--family", "hypercube", "--dim", "5", "--sphere-radius", "1.3",
         "--h", "0.2", "--seed", "4"],
        ["extrema", "--family", "cross-polytope", "--dim", "5", "--lambda", "5.5", "--h", "0.1",
         "--seed", "3"],
        ["oracle", "--family", "simplex", "--dim", "5", "--lambda", "-1", "--h", "0.2",
         "--seed", "3"],
        ["conjecture", "--n", "4", "--iterations", "30000", "--seed", "5"],
        ["verify-theorems", "--suite", "simplex", "--seed", "1"],
    ]
    differing = []
    for argv in commands:
        outs = {_without_duration(_cli(["--threads", str(t), *argv])[1]) for t in (1, 4, 8)}
        outs.add(_without_duration(_cli(["--threads", "4", *argv])[1]))
        if len(outs) != 1:
            differing.append(argv[0])
    _record(10, not differing,
            f"{len(commands)} commands byte-identical across threads 1,4,8 and repeat runs "
            f"{'; differing: ' + ', '.join(differing) if differing else ''}")
