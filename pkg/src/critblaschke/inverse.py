"""Inverting the critical-set map by homotopy continuation.

The unknown is the zero multiset, carried in elementary symmetric
coordinates ``s = e(a)``; the equation is ``e(Phi(a)) = e(t c*)``. The path
starts at ``t = 0`` where the answer is ``a = 0`` (``f = z**(d+1)``) and is
tracked to ``t = 1`` with an Euler predictor and a damped Newton corrector
on a central-difference Jacobian.

Symmetric coordinates on both sides keep the system smooth where zeros or
critical points collide, including at the starting point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .critical import (
    _critical_from_monic,
    forward_phi,
    interior_symmetric,
    monic_coefficients,
    monic_from_symmetric,
)
from .disk import PointMultiset
from .errors import (
    BoundaryEscape,
    IndecisiveRoot,
    JacobianSingular,
    NewtonDiverged,
    StepUnderflow,
)
from .poly import cluster_roots, find_roots, poly_derivative

log = logging.getLogger(__name__)

PREDICTOR_TOL = 1e-2
SINGULAR_RCOND = 1e-12
POLISH_TOL = 1e-15


@dataclass(frozen=True)
class SolverConfig:
    initial_step: float = 0.1
    min_step: float = 1e-6
    max_step: float = 0.25
    corrector_tol: float = 1e-10
    max_newton_iters: int = 25
    boundary_guard: float = 1e-6
    fd_step: float = 1e-6
    max_halvings: int = 8
    growth: float = 1.5
    grow_after: int = 3
    # random kick added to each predictor step, scaled by the step length (tests only)
    predictor_jitter: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.min_step <= self.initial_step <= self.max_step <= 1:
            raise ValueError("need 0 < min_step <= initial_step <= max_step <= 1")
        if self.corrector_tol <= 0:
            raise ValueError("corrector_tol must be positive")
        if not 1e-8 <= self.fd_step <= 1e-4:
            raise ValueError("fd_step must lie in [1e-8, 1e-4]")


@dataclass(frozen=True)
class SymmetricCoordinates:
    """Elementary symmetric values ``e_1..e_d`` of a point multiset."""

    e: tuple[complex, ...]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.e, dtype=complex)

    def __len__(self):
        return len(self.e)


@dataclass(frozen=True)
class ContinuationState:
    t: float
    zeros: PointMultiset
    step: float
    newton_iters: int = 0
    max_zero_modulus: float = 0.0
    coords: np.ndarray = field(default=None, compare=False, repr=False)
    residual: float = np.inf


@dataclass(frozen=True)
class SolverReport:
    zeros: PointMultiset
    residual: float
    steps_taken: int
    step_rejections: int
    converged: bool
    match_distance: float = np.nan


def to_symmetric(points) -> SymmetricCoordinates:
    c = monic_coefficients(points)
    d = len(c) - 1
    return SymmetricCoordinates(tuple(complex((-1) ** k * c[d - k]) for k in range(1, d + 1)))


def from_symmetric(e, initial=None) -> np.ndarray:
    """Points (with multiplicity, unsorted) whose symmetric values are ``e``."""
    e = np.asarray(e, dtype=complex)
    if len(e) == 0:
        return np.zeros(0, dtype=complex)
    return find_roots(monic_from_symmetric(e), initial=initial)


def _as_real(v: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(v))
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def _as_complex(x: np.ndarray) -> np.ndarray:
    return x[0::2] + 1j * x[1::2]


def _phi_coords(s: np.ndarray, hint=None):
    """Critical-set symmetric values for zero coordinates ``s``; also returns the zeros."""
    zeros = from_symmetric(s, initial=hint)
    return interior_symmetric(zeros), zeros


def phi_residual(zeros, target: SymmetricCoordinates) -> np.ndarray:
    """Interleaved real/imag parts of ``e(Phi(zeros)) - target``."""
    zeros = zeros if isinstance(zeros, PointMultiset) else PointMultiset(tuple(zeros))
    return _as_real(interior_symmetric(zeros.as_array()) - target.array)


def _safe_step(h: float, zeros) -> float:
    # a probe of size h must not push a zero across the unit circle
    gap = 1.0 - float(np.max(np.abs(zeros), initial=0.0))
    return min(h, 0.1 * gap)


def _jacobian(s: np.ndarray, h: float, hint=None) -> np.ndarray:
    d = len(s)
    J = np.empty((2 * d, 2 * d))
    x = _as_real(s)
    for k in range(2 * d):
        xp = x.copy()
        xm = x.copy()
        xp[k] += h
        xm[k] -= h
        fp, _ = _phi_coords(_as_complex(xp), hint)
        fm, _ = _phi_coords(_as_complex(xm), hint)
        J[:, k] = _as_real(fp - fm) / (2 * h)
    return J


def _check_conditioning(J: np.ndarray):
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[0] == 0 or sv[-1] / sv[0] < SINGULAR_RCOND:
        raise JacobianSingular(f"Jacobian condition estimate {sv[0] / max(sv[-1], 1e-300):.3e}")


def numerical_jacobian(zeros, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of ``phi_residual`` in the real coordinates of ``e(zeros)``.

    Columns follow the interleaved (re, im) layout of ``to_symmetric(zeros)``;
    symmetric coordinates make the result independent of point order.
    """
    if not 1e-8 <= h <= 1e-4:
        raise ValueError("h must lie in [1e-8, 1e-4]")
    zeros = zeros if isinstance(zeros, PointMultiset) else PointMultiset(tuple(zeros))
    arr = zeros.as_array()
    if len(arr) and 1.0 - np.max(np.abs(arr)) <= 10 * h:
        raise ValueError("zeros too close to the unit circle for this step")
    J = _jacobian(to_symmetric(zeros).array, h, hint=arr)
    _check_conditioning(J)
    return J


def _trial(s, target_e, hint, guard):
    zeros = from_symmetric(s, initial=hint)
    modulus = float(np.max(np.abs(zeros), initial=0.0))
    if modulus >= 1.0 - guard:
        raise BoundaryEscape(f"zero of modulus {modulus:.12f} reached the guard")
    F = _as_real(interior_symmetric(zeros) - target_e)
    return F, zeros, modulus


def _correct(
    state: ContinuationState,
    target_e: np.ndarray,
    config: SolverConfig,
    best_effort: bool = False,
    start_tol: float = PREDICTOR_TOL,
):
    """Damped Newton iterations; with ``best_effort`` a stall returns the best state so far.

    A starting residual above ``start_tol`` is rejected outright: inside the
    continuation loop it means the predictor overshot.
    """
    s = np.array(state.coords, dtype=complex)
    hint = state.zeros.as_array()
    F, zeros, modulus = _trial(s, target_e, hint, config.boundary_guard)
    res = float(np.linalg.norm(F))
    if res > start_tol:
        raise NewtonDiverged(f"starting residual {res:.3e} above predictor tolerance")
    J = None
    iters = 0
    while res > config.corrector_tol:
        if iters >= config.max_newton_iters:
            if best_effort:
                break
            raise NewtonDiverged(f"residual {res:.3e} after {iters} iterations")
        J = _jacobian(s, _safe_step(config.fd_step, zeros), zeros)
        _check_conditioning(J)
        dx = _as_complex(np.linalg.solve(J, -F))
        lam = 1.0
        escaped = False
        for _ in range(config.max_halvings + 1):
            try:
                Fc, zc, mc = _trial(s + lam * dx, target_e, zeros, config.boundary_guard)
            except BoundaryEscape:
                escaped = True
            except IndecisiveRoot:
                escaped = False
            else:
                rc = float(np.linalg.norm(Fc))
                if rc < res:
                    s, F, zeros, modulus, res = s + lam * dx, Fc, zc, mc, rc
                    break
            lam *= 0.5
        else:
            if best_effort:
                break
            if escaped:
                raise BoundaryEscape("every damped step crossed the modulus guard")
            raise NewtonDiverged(f"no damped step reduced the residual {res:.3e}")
        iters += 1
    new = replace(
        state,
        zeros=PointMultiset(tuple(zeros)),
        coords=s,
        newton_iters=iters,
        max_zero_modulus=modulus,
        residual=res,
    )
    return new, J


def newton_correct(state: ContinuationState, target: SymmetricCoordinates, config: SolverConfig = SolverConfig()):
    """Damped Newton correction of ``state`` toward ``target``.

    Raises :class:`NewtonDiverged` or :class:`BoundaryEscape`; the
    continuation loop answers either by halving its step.
    """
    if state.coords is None:
        state = replace(state, coords=to_symmetric(state.zeros).array)
    new, _ = _correct(state, target.array, config, start_tol=np.inf)
    return new


def invert_phi(target_critical, config: SolverConfig | None = None) -> SolverReport:
    """Zeros of the unique normalized Blaschke product with the given critical multiset.

    Raises :class:`StepUnderflow` (carrying the last accepted state as an
    unconverged report) if the step size falls below ``config.min_step``.
    """
    config = config or SolverConfig()
    target = target_critical if isinstance(target_critical, PointMultiset) else PointMultiset(tuple(target_critical))
    d = len(target)
    if d == 0:
        return SolverReport(PointMultiset(), 0.0, 0, 0, True, 0.0)
    cstar = target.as_array()
    estar = to_symmetric(target).array
    powers = np.arange(1, d + 1)

    def path(t):
        return estar * t**powers

    rng = np.random.default_rng(config.seed)
    state = ContinuationState(
        t=0.0,
        zeros=PointMultiset((0j,) * d),
        step=config.initial_step,
        coords=np.zeros(d, dtype=complex),
        residual=0.0,
    )
    J = None
    steps = rejections = accepts = 0
    step = config.initial_step

    def unconverged(msg):
        report = SolverReport(state.zeros, state.residual, steps, rejections, False)
        return StepUnderflow(msg, report)

    while state.t < 1.0:
        t_new = min(1.0, state.t + step)
        assert np.max(np.abs(t_new * cstar)) < 1.0, "homotopy path left the disk"
        s = state.coords
        if J is None:
            try:
                J = _jacobian(s, _safe_step(config.fd_step, state.zeros.as_array()), state.zeros.as_array())
                _check_conditioning(J)
            except (JacobianSingular, IndecisiveRoot):
                J = None
        s_pred = s
        if J is not None:
            s_pred = s + _as_complex(np.linalg.solve(J, _as_real(path(t_new) - path(state.t))))
        if config.predictor_jitter:
            kick = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            s_pred = s_pred + config.predictor_jitter * (t_new - state.t) * kick
        trial = replace(state, t=t_new, coords=s_pred, step=t_new - state.t)
        try:
            new, J_new = _correct(trial, path(t_new), config)
        except (NewtonDiverged, BoundaryEscape, IndecisiveRoot, JacobianSingular) as exc:
            rejections += 1
            accepts = 0
            step *= 0.5
            log.debug("t=%.6f rejected step (%s); step -> %.3e", t_new, exc, step)
            if step < config.min_step:
                raise unconverged(f"step {step:.3e} below floor at t={state.t:.6f}") from exc
            continue
        state = new
        steps += 1
        accepts += 1
        J = J_new if J_new is not None else J
        if accepts >= config.grow_after:
            step = min(step * config.growth, config.max_step)
            accepts = 0

    # a few extra iterations past the tolerance, down to the rounding floor
    polish = replace(config, corrector_tol=POLISH_TOL, max_newton_iters=3)
    state, _ = _correct(state, path(1.0), polish, best_effort=True)
    groups = cluster_roots(cstar)
    if any(m > 1 for _, m in groups):
        state = _polish_multiple(state, groups, estar, config)
    converged = state.residual <= config.corrector_tol
    match = hyperbolic_match_distance(forward_phi(state.zeros).critical_points, target)
    return SolverReport(state.zeros, state.residual, steps, rejections, converged, match)


def _pointwise_conditions(s: np.ndarray, groups) -> np.ndarray:
    # C and its first m - 1 derivatives vanish at each target point of multiplicity m
    C = _critical_from_monic(monic_from_symmetric(s))
    vals = []
    for c, m in groups:
        q = C
        powers = abs(c) ** np.arange(len(C.coeffs))
        for _ in range(m):
            # relative to the rounding scale of the evaluation at c
            scale = np.dot(np.abs(q.coeffs), powers[: len(q.coeffs)])
            vals.append(q(c) / scale if scale > 0 else 0j)
            q = poly_derivative(q)
    return _as_real(np.array(vals, dtype=complex))


def _polish_multiple(state: ContinuationState, groups, estar: np.ndarray, config: SolverConfig, iters: int = 6):
    """Newton on pointwise vanishing conditions at repeated target points.

    The quadrature residual is accurate to rounding in absolute terms, which
    splits an m-fold target by roughly its m-th root. The pointwise
    conditions are evaluated directly from the coefficients, so they keep
    relative accuracy near small targets.
    """
    x = _as_real(state.coords)
    g = _pointwise_conditions(state.coords, groups)
    moved = False
    for _ in range(iters):
        h = 1e-7 * max(1.0, float(np.max(np.abs(x))))
        J = np.empty((len(x), len(x)))
        for k in range(len(x)):
            xp, xm = x.copy(), x.copy()
            xp[k] += h
            xm[k] -= h
            J[:, k] = (_pointwise_conditions(_as_complex(xp), groups) - _pointwise_conditions(_as_complex(xm), groups)) / (2 * h)
        try:
            x_new = x - np.linalg.solve(J, g)
        except np.linalg.LinAlgError:
            break
        zeros = from_symmetric(_as_complex(x_new), initial=state.zeros.as_array())
        if not np.all(np.isfinite(zeros)) or np.max(np.abs(zeros)) >= 1.0 - config.boundary_guard:
            break
        g_new = _pointwise_conditions(_as_complex(x_new), groups)
        if not np.linalg.norm(g_new) < np.linalg.norm(g):
            break
        x, g, moved = x_new, g_new, True
    if not moved:
        return state
    s = _as_complex(x)
    zeros = from_symmetric(s, initial=state.zeros.as_array())
    residual = float(np.linalg.norm(interior_symmetric(zeros) - estar))
    if residual > max(2.0 * state.residual, POLISH_TOL):
        return state
    return replace(state, coords=s, zeros=PointMultiset(tuple(complex(z) for z in zeros)),
                   residual=residual, max_zero_modulus=float(np.max(np.abs(zeros))))


def pseudo_hyperbolic(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.abs(z - w) / np.abs(1.0 - np.conj(w) * z)


def hyperbolic_distance(z, w):
    """Poincare distance ``2 artanh |(z - w)/(1 - conj(w) z)|``."""
    return 2.0 * np.arctanh(np.minimum(pseudo_hyperbolic(z, w), 1.0))


def hyperbolic_match_distance(p, q) -> float:
    """Minimal total hyperbolic distance over bijections between two multisets."""
    p = np.array(list(p), dtype=complex)
    q = np.array(list(q), dtype=complex)
    if len(p) != len(q):
        raise ValueError(f"size mismatch: {len(p)} vs {len(q)}")
    if len(p) == 0:
        return 0.0
    cost = hyperbolic_distance(p[:, None], q[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum())
