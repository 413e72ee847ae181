"""Planar complex moments: power sums, Newton's identities, regularity tests
driven by constancy hypotheses, and a search for near-counterexamples to the
``2n - 2`` constancy conjecture."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from ._workers import ordered_map
from .constancy import _slice_check, chebyshev_offsets, slice_count
from .errors import DimensionMismatch, InvalidParameter
from .powersum import SphereSpec, values_at
from .summation import pairwise_sum

REGULAR_RTOL = 1e-10
DISTINCT_ATOL = 1e-12
DFT_RTOL = 1e-10
RADIUS_SWEEP = (0.5, 1.0, 2.0)

# Annealing schedule.
COOLING = 0.995
MOVE_SCALE = 0.05           # times the configuration diameter
RESTART_EVERY = 10_000
INITIAL_TEMPERATURE = 1.0
PENALTY_RESIDUAL = 1e-3     # regularity residual below this is penalized
PENALTY = 1.0


@dataclass(frozen=True, eq=False)
class PlanarConfig:
    """Distinct complex points ``a_i`` and a circle in the plane."""

    points: np.ndarray
    circle: SphereSpec

    def __post_init__(self):
        z = np.array(self.points, dtype=complex).reshape(-1)
        if z.size < 1 or not np.all(np.isfinite(z)):
            raise InvalidParameter("need at least one finite point")
        if self.circle.dim != 2:
            raise DimensionMismatch("the circle must be planar")
        if z.size > 1:
            gaps = np.abs(z[:, None] - z[None, :])[np.triu_indices(z.size, 1)]
            if np.min(gaps) <= DISTINCT_ATOL:
                raise InvalidParameter("points must be pairwise distinct")
        z.setflags(write=False)
        object.__setattr__(self, "points", z)

    @classmethod
    def from_xy(cls, xy, center=(0.0, 0.0), radius: float = 1.0) -> "PlanarConfig":
        xy = np.asarray(xy, dtype=float)
        return cls(xy[:, 0] + 1j * xy[:, 1], SphereSpec(center, radius))

    @classmethod
    def regular(cls, n: int, radius: float = 1.0, phase: float = 0.0, center=0j,
                circle_radius: float = 1.0) -> "PlanarConfig":
        z = center + radius * np.exp(1j * (phase + 2.0 * np.pi * np.arange(n) / n))
        return cls(z, SphereSpec((center.real, center.imag), circle_radius))

    @property
    def n(self) -> int:
        return self.points.size

    def centered(self) -> np.ndarray:
        """Points relative to the circle center, as complex numbers."""
        c = self.circle.center
        return self.points - complex(c[0], c[1])

    def xy(self) -> np.ndarray:
        return np.column_stack([self.points.real, self.points.imag])

    def with_circle_radius(self, radius: float) -> "PlanarConfig":
        return PlanarConfig(self.points, SphereSpec(self.circle.center, radius))


def newton_elementary(p: np.ndarray, n: int) -> np.ndarray:
    """``e_1..e_n`` from power sums ``p_1..p_n`` via Newton's identities."""
    e = np.zeros(n + 1, dtype=complex)
    e[0] = 1.0
    for k in range(1, n + 1):
        s = sum((-1) ** (i - 1) * e[k - i] * p[i - 1] for i in range(1, k + 1))
        e[k] = s / k
    return e[1:]


@dataclass(frozen=True, eq=False)
class MomentReport:
    """Power sums and elementary symmetric polynomials about the circle center.

    ``residual`` compares the Newton-identity ``e_k`` with a direct product
    expansion, relative to ``max|a|**k``. ``power_sums_vanish`` and
    ``equal_moduli`` are the two halves of the regularity decision.
    """

    power_sums: np.ndarray
    elementary: np.ndarray
    residual: float
    power_sums_vanish: bool
    equal_moduli: bool
    regularity_residual: float

    @property
    def is_regular(self) -> bool:
        return self.power_sums_vanish and self.equal_moduli

    def to_dict(self) -> dict:
        def cplx(a):
            return [[float(z.real), float(z.imag)] for z in a]
        return {
            "powerSums": cplx(self.power_sums),
            "elementarySymmetric": cplx(self.elementary),
            "residual": self.residual,
            "isRegular": self.is_regular,
            "powerSumsVanish": self.power_sums_vanish,
            "equalModuli": self.equal_moduli,
            "regularityResidual": self.regularity_residual,
        }


def _regularity(z: np.ndarray) -> tuple[float, float]:
    """Largest normalized ``|p_k|`` for ``k < n`` and relative modulus spread."""
    n = z.size
    mod = np.abs(z)
    top = float(np.max(mod))
    if top == 0:
        return 0.0, 0.0
    w = z / top
    ps = max((abs(complex(np.sum(w ** k))) / n for k in range(1, n)), default=0.0)
    return ps, float((top - np.min(mod)) / top)


def power_sums(cfg: PlanarConfig, kmax: int | None = None) -> MomentReport:
    """``p_k = sum a_i^k`` about the circle center for ``k = 1..kmax``.

    >>> r = power_sums(PlanarConfig([1, 1j, -1, -1j], SphereSpec((0, 0), 1)))
    >>> r.is_regular, float(abs(r.power_sums[3]))
    (True, 4.0)
    """
    n = cfg.n
    kmax = n if kmax is None else int(kmax)
    if kmax < 1:
        raise InvalidParameter("kmax must be at least 1")
    z = cfg.centered()
    kk = max(kmax, n)
    p = np.array([np.sum(z ** k) for k in range(1, kk + 1)], dtype=complex)
    e = newton_elementary(p, n)
    direct = np.poly(z)[1:] * (-1.0) ** np.arange(1, n + 1)
    scale = np.maximum(float(np.max(np.abs(z))), 1e-300) ** np.arange(1, n + 1)
    residual = float(np.max(np.abs(e - direct) / scale)) if n else 0.0
    ps, mods = _regularity(z)
    return MomentReport(
        power_sums=p[:kmax], elementary=e, residual=residual,
        power_sums_vanish=ps < REGULAR_RTOL, equal_moduli=mods < REGULAR_RTOL,
        regularity_residual=max(ps, mods))


def _circle_sum(cfg: PlanarConfig, k: int, N: int, radius: float | None = None) -> np.ndarray:
    R = cfg.circle.radius if radius is None else radius
    t = 2.0 * math.pi * np.arange(N) / N
    pts = cfg.circle.center + R * np.column_stack([np.cos(t), np.sin(t)])
    return values_at(cfg.xy(), pts, 2.0 * k, 0.0)


def trig_spread(values: np.ndarray, degree: int, dense: int = 64) -> float:
    """Peak-to-peak of the degree-``degree`` trigonometric interpolant of
    equispaced samples, evaluated on a grid ``dense`` times finer."""
    F = np.fft.rfft(values)[: degree + 1]
    M = dense * values.size
    fine = np.fft.irfft(F, n=M) * (M / values.size)
    return float(np.max(fine) - np.min(fine))


def constancy_even_on_circle(cfg: PlanarConfig, k: int, radius: float | None = None
                             ) -> tuple[bool, float]:
    """Exact test that ``sum |P a_i|^(2k)`` is constant on the circle.

    The sum is a trigonometric polynomial of degree ``k`` in the angle of
    ``P``; ``2k + 2`` samples determine it. Returns the decision and the
    relative peak-to-peak spread of the interpolant.
    """
    if k < 1:
        raise InvalidParameter("k must be at least 1")
    vals = _circle_sum(cfg, k, 2 * k + 2, radius)
    F = np.abs(np.fft.rfft(vals))
    constant = bool(np.all(F[1:k + 1] < DFT_RTOL * F[0]))
    mean = float(pairwise_sum(vals)) / vals.size
    return constant, trig_spread(vals, k) / mean


def constancy_over_radii(cfg: PlanarConfig, k: int, factors=RADIUS_SWEEP) -> bool:
    """Constancy on every concentric circle with radius ``f * R`` for ``f`` in
    ``factors``."""
    R = cfg.circle.radius
    return all(constancy_even_on_circle(cfg, k, f * R)[0] for f in factors)


def regularity_from_constancy(cfg: PlanarConfig, kset, *, radii=None) -> tuple[bool, bool]:
    """``(hypothesis, conclusion)``: constancy of ``sum |P a_i|^(2k)`` for every
    ``k`` in ``kset`` (on each radius in ``radii`` times the circle radius, if
    given), and regularity of the points about the circle center."""
    kset = list(kset)
    if not kset:
        raise InvalidParameter("kset must be nonempty")
    if radii is None:
        hyp = all(constancy_even_on_circle(cfg, k)[0] for k in kset)
    else:
        hyp = all(constancy_over_radii(cfg, k, radii) for k in kset)
    return hyp, power_sums(cfg).is_regular


def tetrahedron_from_constancy(points, sphere: SphereSpec) -> tuple[bool, bool]:
    """``(hypothesis, conclusion)`` for four points in space: constancy of
    ``sum |M A_i|^lam`` on the sphere for ``lam = 2`` and 4 (exact slice test),
    and equality of all six edge lengths to relative 1e-9."""
    a = np.asarray(points, dtype=float)
    if a.shape != (4, 3) or sphere.dim != 3:
        raise DimensionMismatch("need four points in R^3 and a sphere in R^3")
    d = np.linalg.norm(a[:, None] - a[None, :], axis=-1)[np.triu_indices(4, 1)]
    if np.min(d) <= DISTINCT_ATOL:
        raise InvalidParameter("points must be pairwise distinct")
    c, R = sphere.center, sphere.radius
    eye = np.eye(3)
    hyp = all(_slice_check(a, c, R, eye, (eye[0], eye[1]),
                           chebyshev_offsets(R, slice_count(lam)), lam, 0.0)
              for lam in (2, 4))
    conc = bool((np.max(d) - np.min(d)) / np.max(d) < 1e-9)
    return hyp, conc


@dataclass(frozen=True, eq=False)
class SearchResult:
    """Outcome of :func:`conjecture_search`."""

    best_spread: float
    best_config: PlanarConfig
    restart_spreads: tuple[float, ...]
    seed: int
    iterations: int
    penalize: bool
    schedule: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        ps = power_sums(self.best_config)
        return {
            "n": self.best_config.n,
            "bestSpread": self.best_spread,
            "bestPoints": [[float(z.real), float(z.imag)] for z in self.best_config.points],
            "regularityResidual": ps.regularity_residual,
            "restartSpreads": list(self.restart_spreads),
            "seed": self.seed,
            "iterations": self.iterations,
            "penalize": self.penalize,
            "schedule": self.schedule,
        }


def _unpack(x: np.ndarray, n: int) -> np.ndarray:
    z = x[:n] + 1j * x[n:]
    top = np.max(np.abs(z))
    return z / top if top > 0 else z


def _energy(x: np.ndarray, n: int, penalize: bool) -> float:
    """Relative spread of ``sum |P a_i|^(2n-2)`` on the unit circle (plus penalty)."""
    z = _unpack(x, n)
    k = n - 1
    t = 2.0 * math.pi * np.arange(2 * k + 2) / (2 * k + 2)
    P = np.exp(1j * t)
    vals = pairwise_sum(np.abs(P[:, None] - z[None, :]) ** (2 * k))
    spread = trig_spread(vals, k) / (float(pairwise_sum(vals)) / vals.size)
    if penalize and max(_regularity(z)) < PENALTY_RESIDUAL:
        spread += PENALTY
    gaps = np.abs(z[:, None] - z[None, :])[np.triu_indices(n, 1)]
    if np.min(gaps) <= 1e-6:
        spread += PENALTY
    return spread


def _fourier_residuals(x: np.ndarray, n: int, penalize: bool) -> np.ndarray:
    """Smooth surrogate for the spread: non-constant Fourier coefficients over
    the mean, with the points scaled to unit RMS modulus."""
    z = x[:n] + 1j * x[n:]
    z = z / math.sqrt(float(np.mean(np.abs(z) ** 2)))
    k = n - 1
    t = 2.0 * math.pi * np.arange(2 * k + 2) / (2 * k + 2)
    vals = pairwise_sum(np.abs(np.exp(1j * t)[:, None] - z[None, :]) ** (2 * k))
    F = np.fft.rfft(vals)
    r = F[1:k + 1] / F[0].real
    out = [r.real, r.imag]
    if penalize:
        reg = max(_regularity(z))
        out.append([PENALTY * max(0.0, 1.0 - reg / PENALTY_RESIDUAL)])
    return np.concatenate(out)


def _anneal(n: int, steps: int, seed_seq: np.random.SeedSequence, penalize: bool):
    rng = np.random.default_rng(seed_seq)
    z = np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    x = np.concatenate([z.real, z.imag])
    e = _energy(x, n, penalize)
    best_x, best_e = x.copy(), e
    T = INITIAL_TEMPERATURE
    for _ in range(steps):
        zc = _unpack(x, n)
        diam = float(np.max(np.abs(zc[:, None] - zc[None, :])))
        y = x.copy()
        i = rng.integers(n)
        step = MOVE_SCALE * diam * rng.standard_normal(2)
        y[i] += step[0]
        y[n + i] += step[1]
        ey = _energy(y, n, penalize)
        # Metropolis on the log spread, since spreads span many decades
        d = math.log(ey + 1e-300) - math.log(e + 1e-300)
        if d <= 0 or rng.random() < math.exp(-d / T):
            x, e = y, ey
            if e < best_e:
                best_x, best_e = x.copy(), e
        T *= COOLING
    # least-squares polish on a smooth surrogate; scored by the true energy
    z0 = best_x[:n] + 1j * best_x[n:]
    z0 = z0 / math.sqrt(float(np.mean(np.abs(z0) ** 2)))
    res = least_squares(_fourier_residuals, np.concatenate([z0.real, z0.imag]),
                        args=(n, penalize), method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                        max_nfev=200 * n)
    e = _energy(res.x, n, penalize)
    if e < best_e:
        best_x, best_e = res.x, e
    return best_e, best_x


def conjecture_search(n: int, iterations: int = 20_000, seed: int = 0, *, penalize: bool = True,
                      threads: int | None = None) -> SearchResult:
    """Search for ``n`` non-regular points with a nearly constant
    ``sum |P a_i|^(2n-2)`` on a concentric circle.

    The circle is the unit circle and the points are scaled to max modulus 1
    (a free circle radius is degenerate: the relative spread decays like
    ``1 / radius`` for any configuration). Simulated annealing is restarted
    every ``RESTART_EVERY`` steps from a fresh seeded state; each restart ends
    with a least-squares polish of the non-constant Fourier coefficients. With ``penalize``,
    configurations whose regularity residual is below ``PENALTY_RESIDUAL`` are
    pushed away, so a spread floor bounded away from zero is evidence that no
    non-regular solution exists.
    """
    if n < 3:
        raise InvalidParameter("n must be at least 3")
    if iterations < 1:
        raise InvalidParameter("iterations must be positive")
    restarts = max(1, math.ceil(iterations / RESTART_EVERY))
    steps = [min(RESTART_EVERY, iterations - r * RESTART_EVERY) for r in range(restarts)]
    seqs = np.random.SeedSequence(seed).spawn(restarts)
    runs = ordered_map(lambda a: _anneal(n, a[0], a[1], penalize), list(zip(steps, seqs)),
                       threads)
    energies = [float(e) for e, _ in runs]
    i = int(np.argmin(energies))
    cfg = PlanarConfig(_unpack(runs[i][1], n), SphereSpec((0.0, 0.0), 1.0))
    schedule = {"cooling": COOLING, "moveScale": MOVE_SCALE, "restartEvery": RESTART_EVERY,
                "initialTemperature": INITIAL_TEMPERATURE, "penaltyResidual": PENALTY_RESIDUAL,
                "polish": "least-squares"}
    return SearchResult(best_spread=energies[i], best_config=cfg,
                        restart_spreads=tuple(energies), seed=int(seed), iterations=int(iterations),
                        penalize=penalize, schedule=schedule)
