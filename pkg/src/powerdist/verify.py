"""Theorem verification matrix.

Each suite returns rows ``(suite, case, expected, observed, status)`` with
status ``PASS``, ``FAIL`` or ``INFO`` (exploratory cases with no ground
truth). The same suites back the ``verify-theorems`` command and the
acceptance tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import polytopes as P
from .constancy import (count_sign_changes, constancy_set_even, max_constancy_bound,
                        spread_on_sphere, ExponentialSum)
from .extrema import (CONSTANT, VERTEX_PROJECTIONS, angular_distance, candidate_catalog,
                      find_extrema, predict_regime, verify_duality)
from .moments import (PlanarConfig, constancy_over_radii, regularity_from_constancy,
                      tetrahedron_from_constancy)
from .oracle import grid_extrema_circle, grid_extrema_sphere, lattice_resolution
from .polytopes import PolytopeFamily, generate
from .powersum import PowerSumParams, SphereSpec, closed_form_even, values_at
from .tolerances import CONSTANT_RTOL, NONCONSTANT_RTOL

PASS, FAIL, INFO = "PASS", "FAIL", "INFO"
ORACLE_N = 100_000
SUITES = ("planar", "simplex", "crosspolytope", "hypercube", "platonic", "signchanges",
          "closedform", "moments", "duality")


@dataclass(frozen=True)
class Row:
    suite: str
    case: str
    expected: str
    observed: str
    status: str

    def as_list(self) -> list[str]:
        return [self.suite, self.case, self.expected, self.observed, self.status]


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _fmt_set(s) -> str:
    return "{" + ",".join(str(x) for x in s) + "}"


def _within(point, orbit, center, tol: float) -> bool:
    return bool(np.min(angular_distance(point, orbit, center)) <= tol)


def extremum_case(vs, sphere: SphereSpec, lam: float, h: float, *, seed: int = 0,
                  oracle_n: int = ORACLE_N, threads=None) -> tuple[bool, str, str]:
    """Compare find_extrema labels with the theorem and the grid oracle.

    Returns ``(ok, expected, observed)``.
    """
    fam = vs.family
    pred = predict_regime(fam, lam, circumscribed=sphere.is_circumsphere_of(vs), h=h)
    p = PowerSumParams(lam, h)
    rep = find_extrema(vs, sphere, p, seed=seed, threads=threads)
    expected = f"max={pred.predicted_max} min={pred.predicted_min}"
    observed = f"max={rep.max_label} min={rep.min_label}"
    ok = rep.max_label == pred.predicted_max and rep.min_label == pred.predicted_min
    if pred.is_constant:
        return ok, expected, observed

    if vs.dim == 2:
        grid = grid_extrema_circle(vs, sphere, p, oracle_n, threads=threads)
    else:
        grid = grid_extrema_sphere(vs, sphere, p, oracle_n, seed=seed, threads=threads)
    # with catalog points on the grid the oracle hits the orbit exactly
    tol = lattice_resolution(oracle_n, vs.dim) if vs.dim <= 3 else 1e-9
    catalog = candidate_catalog(vs, sphere)
    c = sphere.center
    min_ok = _within(grid.argmin, catalog[pred.predicted_min], c, tol)
    # the optimizer must do at least as well as the grid
    min_ok &= rep.min_value <= grid.min_value * (1 + 1e-12)
    if rep.unbounded:
        max_ok = math.isinf(rep.max_value) and pred.boundary == "unbounded"
    else:
        max_ok = _within(grid.argmax, catalog[pred.predicted_max], c, tol)
        max_ok &= rep.max_value >= grid.max_value * (1 - 1e-12)
    observed += f" oracle={'ok' if min_ok and max_ok else 'mismatch'}"
    return ok and min_ok and max_ok, expected, observed


def _extrema_rows(suite, vs, geometries, lams, seed, threads) -> list[Row]:
    rows = []
    for h, R in geometries:
        sphere = SphereSpec.concentric(vs, R)
        for lam in lams:
            ok, exp, obs = extremum_case(vs, sphere, lam, h, seed=seed, threads=threads)
            rows.append(Row(suite, f"{vs.family} lambda={lam:g} h={h:g} R={R:g}", exp, obs,
                            _status(ok)))
    return rows


def _constancy_row(suite, vs, sphere, lambda_max, expected) -> Row:
    got = constancy_set_even(vs, sphere, lambda_max)
    return Row(suite, f"{vs.family} constancy set lambda<={lambda_max}", _fmt_set(expected),
               _fmt_set(got), _status(got == list(expected)))


def suite_planar(seed: int = 0, threads=None) -> list[Row]:
    rows = []
    for n in range(3, 11):
        vs = generate(PolytopeFamily.ngon(n))
        sphere = SphereSpec.circumsphere(vs)
        rows.append(_constancy_row("planar", vs, sphere, 2 * n + 2, range(2, 2 * n - 1, 2)))
        inside = max(spread_on_sphere(vs, sphere, PowerSumParams(lam)).spread_rel
                     for lam in range(2, 2 * n - 1, 2))
        at_2n = spread_on_sphere(vs, sphere, PowerSumParams(2 * n)).spread_rel
        rows.append(Row("planar", f"{vs.family} spreads", "inside<1e-10 at2n>1e-6",
                        f"inside={inside:.1e} at2n={at_2n:.1e}",
                        _status(inside < 1e-10 and at_2n > 1e-6)))
    for n in range(3, 9):
        vs = generate(PolytopeFamily.ngon(n))
        rows += _extrema_rows("planar", vs, [(0.0, 1.5), (0.3, 1.0)],
                              [-2, -1, 1, 3, 2 * n + 1], seed, threads)
    return rows


def suite_simplex(seed: int = 0, threads=None) -> list[Row]:
    rows = []
    for d in range(2, 7):
        vs = generate(PolytopeFamily.simplex(d))
        rows.append(_constancy_row("simplex", vs, SphereSpec.circumsphere(vs), 12, [2, 4]))
        rows += _extrema_rows("simplex", vs, [(0.1, 1.0)], [-1, 1, 3, 5], seed, threads)
    return rows


def _cp_hc_suite(suite, make, seed, threads) -> list[Row]:
    rows = []
    for d in range(3, 7):
        vs = generate(make(d))
        rows.append(_constancy_row(suite, vs, SphereSpec.circumsphere(vs), 12, [2, 4, 6]))
        rows += _extrema_rows(suite, vs, [(0.0, 1.5), (0.3, 1.0)], [-1, 1, 3, 5, 7], seed,
                              threads)
    return rows


def suite_crosspolytope(seed: int = 0, threads=None) -> list[Row]:
    return _cp_hc_suite("crosspolytope", PolytopeFamily.cross_polytope, seed, threads)


def suite_hypercube(seed: int = 0, threads=None) -> list[Row]:
    return _cp_hc_suite("hypercube", PolytopeFamily.hypercube, seed, threads)


def suite_duality(seed: int = 0, threads=None) -> list[Row]:
    rows = []
    for d in range(3, 7):
        cube = generate(PolytopeFamily.hypercube(d))
        cross = generate(PolytopeFamily.cross_polytope(d))
        for h, R in [(0.0, 1.5), (0.3, 1.0)]:
            sphere = SphereSpec.concentric(cube, R)
            for lam in (-1, 1, 3, 4, 5, 7):
                ok = verify_duality(cube, cross, sphere, lam, h, seed=seed, threads=threads)
                rows.append(Row("duality", f"hypercube({d})/cross-polytope({d}) lambda={lam:g} "
                                f"h={h:g} R={R:g}", "True", str(ok), _status(ok)))
    ico, dod = generate(PolytopeFamily.icosahedron()), generate(PolytopeFamily.dodecahedron())
    for lam in (-1, 1, 12):
        ok = verify_duality(dod, ico, SphereSpec.concentric(dod, 1.5), lam, 0.0, seed=seed,
                            threads=threads)
        rows.append(Row("duality", f"dodecahedron/icosahedron lambda={lam:g} h=0 R=1.5",
                        "exploratory", str(ok), INFO))
    return rows


def suite_platonic(seed: int = 0, threads=None) -> list[Row]:
    rows = []
    dod = generate(PolytopeFamily.dodecahedron())
    circ = SphereSpec.circumsphere(dod)
    rows.append(_constancy_row("platonic", dod, circ, 18, [2, 4, 6, 8, 10]))
    for lam in range(12, 19, 2):
        s = spread_on_sphere(dod, circ, PowerSumParams(lam), seed=seed, threads=threads)
        rows.append(Row("platonic", f"dodecahedron spread lambda={lam}", ">1e-6",
                        f"{s.spread_rel:.3e}", _status(s.spread_rel > NONCONSTANT_RTOL)))
    for label, sphere, want in [("circumsphere", circ, 8),
                                ("R=1.7", SphereSpec.concentric(dod, 1.7), 9)]:
        b = max_constancy_bound(dod, sphere)
        rows.append(Row("platonic", f"dodecahedron bound {label}", str(want), str(b),
                        _status(b == want)))

    ico = generate(PolytopeFamily.icosahedron())
    circ = SphereSpec.circumsphere(ico)
    for lam in (2, 4, 6, 8, 10, 12):
        s = spread_on_sphere(ico, circ, PowerSumParams(lam), seed=seed, threads=threads)
        if lam <= 6:
            exp, ok = "constant (proven) <1e-10", s.spread_rel < 1e-10
        elif lam <= 10:
            exp, ok = "constant (unproven)", s.spread_rel < CONSTANT_RTOL
        else:
            exp, ok = ">1e-6", s.spread_rel > NONCONSTANT_RTOL
        rows.append(Row("platonic", f"icosahedron spread lambda={lam}", exp,
                        f"{s.spread_rel:.3e}", _status(ok)))
    rows.append(_constancy_row("platonic", ico, circ, 12, [2, 4, 6, 8, 10]))
    return rows


def random_exponential_sum(rng: np.random.Generator, max_terms: int = 6) -> ExponentialSum:
    k = int(rng.integers(1, max_terms + 1))
    a = rng.standard_normal(k) * 10.0 ** rng.uniform(-2, 2, k)
    b = np.exp(rng.uniform(-2, 2, k))
    return ExponentialSum(tuple(zip(a, b)))


def suite_sign_changes(seed: int = 0, threads=None, trials: int = 1000) -> list[Row]:
    rng = np.random.default_rng(seed)
    worst, bad = 0, 0
    for _ in range(trials):
        es = random_exponential_sum(rng)
        c = count_sign_changes(es, -10.0, 10.0, 10_000)
        worst = max(worst, c - (len(es) - 1))
        bad += c > len(es) - 1
    return [Row("signchanges", f"{trials} random sums, <=6 terms", "sign changes <= terms-1",
                f"violations={bad} max excess={worst}", _status(bad == 0))]


def suite_closed_form(seed: int = 0, threads=None, trials: int = 1000) -> list[Row]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(3, 13))
        k = int(rng.integers(1, n))
        R, r = rng.uniform(0.2, 3.0, 2)
        vs = generate(PolytopeFamily.ngon(n), r)
        t = rng.uniform(0, 2 * math.pi)
        m = R * np.array([[math.cos(t), math.sin(t)]])
        brute = float(values_at(vs.vertices, m, 2.0 * k)[0])
        worst = max(worst, abs(closed_form_even(n, R, r, k) - brute) / brute)
    rows = [Row("closedform", f"{trials} random (n,k,R,r)", "rel err < 1e-10", f"{worst:.2e}",
                _status(worst < 1e-10))]
    for k, want in [(1, 8), (2, 24), (3, 80)]:
        got = closed_form_even(4, 1.0, 1.0, k)
        rows.append(Row("closedform", f"n=4 R=r=1 k={k}", str(want), f"{got:g}",
                        _status(got == want and got == 4 * math.comb(2 * k, k))))
    return rows


def _random_irregular(rng, n):
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PlanarConfig(z, SphereSpec(rng.standard_normal(2), rng.uniform(0.3, 3.0)))


def _random_regular(rng, n):
    c = rng.standard_normal(2)
    return PlanarConfig.regular(n, radius=rng.uniform(0.2, 3.0), phase=rng.uniform(0, 2 * np.pi),
                                center=complex(c[0], c[1]), circle_radius=rng.uniform(0.2, 3.0))


def _random_on_circle(rng, n):
    """``n`` random points on a circle concentric with the test circle."""
    c = rng.standard_normal(2)
    z = complex(c[0], c[1]) + rng.uniform(0.2, 3.0) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    return PlanarConfig(z, SphereSpec(c, rng.uniform(0.2, 3.0)))


def _random_tetra(rng, regular: bool):
    t = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float) / math.sqrt(3)
    c = rng.standard_normal(3)
    if regular:
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        pts = c + rng.uniform(0.2, 3.0) * t @ q.T
    else:
        pts = c + rng.standard_normal((4, 3))
    return pts, SphereSpec(c, rng.uniform(0.2, 3.0))


def moment_cases(rng, regular: bool):
    """One random instance per regularity statement, as ``(name, hypothesis, conclusion)``."""
    n = int(rng.integers(3, 11))
    out = []
    cfg = _random_regular(rng, n) if regular else _random_irregular(rng, n)
    out.append(("all k<n", *regularity_from_constancy(cfg, range(1, n))))
    cfg = _random_regular(rng, n) if regular else _random_on_circle(rng, n)
    out.append(("one k>[n/2]", *regularity_from_constancy(cfg, [n // 2 + 1])))
    cfg = _random_regular(rng, 3) if regular else _random_irregular(rng, 3)
    out.append(("triangle k=2", *regularity_from_constancy(cfg, [2])))
    cfg = _random_regular(rng, n) if regular else _random_irregular(rng, n)
    out.append(("k=n-1 radius sweep", constancy_over_radii(cfg, n - 1),
                regularity_from_constancy(cfg, [n - 1])[1]))
    out.append(("tetrahedron", *tetrahedron_from_constancy(*_random_tetra(rng, regular))))
    return out


def suite_moments(seed: int = 0, threads=None, trials: int = 1000) -> list[Row]:
    rng = np.random.default_rng(seed)
    reg: dict[str, int] = {}
    irr: dict[str, int] = {}
    for _ in range(trials):
        for name, hyp, conc in moment_cases(rng, True):
            reg[name] = reg.get(name, 0) + (hyp and conc)
        for name, hyp, _ in moment_cases(rng, False):
            irr[name] = irr.get(name, 0) + hyp
    rows = []
    for name in reg:
        rows.append(Row("moments", f"{name} regular x{trials}", f"(True,True) x{trials}",
                        f"{reg[name]}", _status(reg[name] == trials)))
        rows.append(Row("moments", f"{name} irregular x{trials}", "hypothesis never holds",
                        f"holds {irr[name]}", _status(irr[name] == 0)))
    return rows


_SUITES = {
    "planar": suite_planar, "simplex": suite_simplex, "crosspolytope": suite_crosspolytope,
    "hypercube": suite_hypercube, "platonic": suite_platonic, "signchanges": suite_sign_changes,
    "closedform": suite_closed_form, "moments": suite_moments, "duality": suite_duality,
}


def run_suite(name: str, seed: int = 0, threads=None) -> list[Row]:
    if name == "all":
        return [r for s in SUITES for r in _SUITES[s](seed=seed, threads=threads)]
    if name not in _SUITES:
        raise KeyError(name)
    return _SUITES[name](seed=seed, threads=threads)
