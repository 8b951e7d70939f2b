"""Seeded batch checks of the invariants, as run by ``critblaschke verify``.

Each suite draws its instances from its own stream
``default_rng([seed, suite_index, trial])``, so results do not depend on
the order (or concurrency) in which trials run. Summaries contain no
timings and serialize with sorted keys, so equal seeds give equal bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import linear_sum_assignment

from .critical import forward_phi
from .disk import (
    BlaschkeProduct,
    Composition,
    DiskAutomorphism,
    PointMultiset,
    beta_eval,
    log_derivative_on_circle,
)
from .errors import IndecisiveRoot, StepUnderflow
from .inverse import SolverConfig, hyperbolic_match_distance, invert_phi
from .metrics import (
    boundary_limit_scan,
    boundary_rate,
    curvature_residual,
    distance_ratio,
)

MAX_MODULUS = 0.95
CIRCLE_POINTS = 64
SCAN_RADII = (0.9, 0.99, 0.999, 0.9999)
CURVATURE_SPACINGS = (8e-3, 4e-3, 2e-3)
CURVATURE_MAX_DEGREE = 4


def random_zeros(rng: np.random.Generator, d: int, max_modulus: float = MAX_MODULUS) -> PointMultiset:
    """``d`` points with modulus uniform on ``[0, max_modulus]`` and uniform angle."""
    r = rng.uniform(0.0, max_modulus, d)
    t = rng.uniform(0.0, 2 * np.pi, d)
    return PointMultiset(tuple(complex(z) for z in r * np.exp(1j * t)))


def random_disk_points(rng: np.random.Generator, n: int, max_modulus: float = 0.999) -> np.ndarray:
    r = max_modulus * np.sqrt(rng.uniform(0.0, 1.0, n))
    return r * np.exp(1j * rng.uniform(0.0, 2 * np.pi, n))


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    worst: float = 0.0
    notes: list = field(default_factory=list)

    def record(self, ok: bool, value: float, note: str | None = None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if note:
                self.notes.append(note)
        if np.isfinite(value):
            self.worst = max(self.worst, float(value))
        else:
            self.worst = float("inf")

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failed": self.failed,
            "worst": float(f"{self.worst:.3e}"),
            "notes": self.notes[:5],
        }


def _degree(rng, max_degree: int, low: int = 1) -> int:
    return int(rng.integers(low, max_degree + 1))


def check_circle_identity(rng, max_degree):
    f = BlaschkeProduct(random_zeros(rng, _degree(rng, max_degree, 0)))
    z = np.exp(2j * np.pi * np.arange(CIRCLE_POINTS) / CIRCLE_POINTS)
    err = float(np.max(np.abs(np.abs(f.derivative(z)) - log_derivative_on_circle(f, z))))
    return err <= 1e-10, err


def check_schwarz_pick(rng, max_degree, samples=200):
    d = _degree(rng, max_degree, 0)
    f = BlaschkeProduct(random_zeros(rng, d))
    R = distance_ratio(f, random_disk_points(rng, samples))
    excess = float(np.max(R) - 1.0)
    strict = d == 0 or float(np.min(R)) < 1.0 - 1e-6
    return excess <= 1e-12 and strict, max(excess, 0.0)


def _random_map(rng, max_degree):
    if rng.uniform() < 0.3:
        return DiskAutomorphism(complex(random_zeros(rng, 1)[0]), rng.uniform(-np.pi, np.pi))
    return BlaschkeProduct(random_zeros(rng, _degree(rng, max_degree, 0)))


def check_composition(rng, max_degree, samples=20):
    f, g = _random_map(rng, max_degree), _random_map(rng, max_degree)
    z = random_disk_points(rng, samples, 0.99)
    lhs = distance_ratio(Composition(f, g), z)
    rhs = distance_ratio(f, g(z)) * distance_ratio(g, z)
    err = float(np.max(np.abs(lhs - rhs)))
    return err <= 1e-11, err


def check_boundary_limit(rng, max_degree):
    f = BlaschkeProduct(random_zeros(rng, _degree(rng, max_degree)))
    dev = boundary_limit_scan(f, SCAN_RADII)
    K = float(np.max(boundary_rate(f, 2 * np.pi * np.arange(4096) / 4096)))
    bound = 10.0 * K * np.log(SCAN_RADII[-1]) ** 2
    monotone = all(b < a for a, b in zip(dev, dev[1:]))
    return monotone and dev[-1] <= bound, dev[-1] / bound


def check_curvature(rng, max_degree):
    d = _degree(rng, min(max_degree, CURVATURE_MAX_DEGREE), 0)
    f = BlaschkeProduct(random_zeros(rng, d))
    crit = forward_phi(f.zeros).critical_points if d else ()
    res = [curvature_residual(f, h, critical_points=crit).max_residual for h in CURVATURE_SPACINGS]
    ratios = [b / a for a, b in zip(res, res[1:])]
    ok = all(0.15 <= q <= 0.4 for q in ratios)
    return ok, max(abs(q - 0.25) for q in ratios)


def check_forward_structure(rng, max_degree):
    zeros = random_zeros(rng, _degree(rng, max_degree))
    res = forward_phi(zeros)
    d = len(zeros)
    if len(res.critical_points) != d:
        return False, float("inf")
    # C has real-symmetric structure: interior roots reflect onto the finite partners
    finite = np.array([p for p in res.reflected_partners if np.isfinite(p)], dtype=complex)
    raw = np.array(res.raw_interior, dtype=complex)
    nonzero = raw[np.abs(raw) > 1e-300]
    reflected = 1.0 / np.conj(nonzero)
    sym = 0.0
    if len(finite) or len(reflected):
        if len(finite) != len(reflected):
            return False, float("inf")
        cost = np.abs(finite[:, None] - reflected[None, :]) / np.maximum(1.0, np.abs(finite[:, None]))
        r, c = linear_sum_assignment(cost)
        sym = float(cost[r, c].max())
    worst = max(max(res.residuals), sym)
    return max(res.residuals) <= 1e-9 and sym <= 1e-8, worst


def check_round_trip(rng, max_degree):
    zeros = random_zeros(rng, _degree(rng, max_degree))
    crit = forward_phi(zeros).critical_points
    report = invert_phi(crit)
    dist = hyperbolic_match_distance(report.zeros, zeros)
    return report.converged and dist <= 1e-7, dist


def check_uniqueness(rng, max_degree):
    d = _degree(rng, min(max_degree, 6))
    target = forward_phi(random_zeros(rng, d)).critical_points
    a = invert_phi(target, SolverConfig(initial_step=0.1))
    b = invert_phi(target, SolverConfig(initial_step=0.03, max_step=0.1, predictor_jitter=1e-3, seed=int(rng.integers(2**31))))
    dist = hyperbolic_match_distance(a.zeros, b.zeros)
    return a.converged and b.converged and dist <= 1e-7, dist


def check_degeneration(rng, max_degree):
    del rng, max_degree
    direction = np.exp(1j * np.pi / 3)
    k = np.arange(1, 41)
    vals = np.array([abs(beta_eval((1 - 2.0**-j) * direction, 0.0)) for j in k])
    monotone = bool(np.all(np.diff(vals[1:]) > 0))
    real_err = abs(beta_eval(1 - 2.0**-40, 0.0) + 1.0)
    return monotone and real_err <= 1e-6 and abs(vals[-1] - 1) <= 1e-6, real_err


SUITES: tuple[tuple[str, Callable], ...] = (
    ("circle_identity", check_circle_identity),
    ("schwarz_pick", check_schwarz_pick),
    ("composition", check_composition),
    ("boundary_limit", check_boundary_limit),
    ("curvature", check_curvature),
    ("forward_structure", check_forward_structure),
    ("round_trip", check_round_trip),
    ("uniqueness", check_uniqueness),
    ("degeneration", check_degeneration),
)

# expensive suites run on a fixed fraction of trials
TRIAL_CAP = {"curvature": 10, "uniqueness": 25, "degeneration": 1}


def run_suite(index: int, name: str, check, seed: int, trials: int, max_degree: int) -> SuiteResult:
    result = SuiteResult(name)
    for trial in range(min(trials, TRIAL_CAP.get(name, trials))):
        rng = np.random.default_rng([seed, index, trial])
        try:
            ok, value = check(rng, max_degree)
        except (IndecisiveRoot, StepUnderflow, ArithmeticError, ValueError) as exc:
            ok, value = False, float("inf")
            result.record(ok, value, f"trial {trial}: {type(exc).__name__}: {exc}")
            continue
        result.record(bool(ok), float(value), f"trial {trial}: value {value:.3e}")
    return result


def run_verify(seed: int, trials: int, max_degree: int) -> dict:
    """Run every suite; returns the summary dictionary."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    suites = {name: run_suite(i, name, check, seed, trials, max_degree) for i, (name, check) in enumerate(SUITES)}
    return {
        "seed": seed,
        "trials": trials,
        "max_degree": max_degree,
        "suites": {name: r.to_dict() for name, r in suites.items()},
        "all_passed": all(r.ok for r in suites.values()),
    }


def summary_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"
