"""Pull-back of the Poincare metric through a Blaschke product.

``sigma_f(z) = 2 |f'(z)| / (1 - |f(z)|^2)`` is the density of the pulled-back
metric and ``R_f(z) = (1 - |z|^2) sigma_f(z) / 2`` compares it with the
Poincare density ``2 / (1 - |z|^2)``.

Any map object with ``__call__`` and ``derivative`` works here
(:class:`~critblaschke.disk.BlaschkeProduct`,
:class:`~critblaschke.disk.DiskAutomorphism`,
:class:`~critblaschke.disk.Composition`); if it also has ``one_minus_abs2``
that is used for ``1 - |f|^2``, which matters near the circle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .disk import BlaschkeProduct, Composition
from .errors import SlopeAmbiguous


@dataclass(frozen=True)
class MetricSample:
    z: complex
    sigma: float
    ratio: float


@dataclass(frozen=True)
class CurvatureReport:
    """``max_residual`` is ``|Lap_h log sigma - sigma^2| / max(1, sigma^2)``:
    the relative curvature defect where the density is large and the plain
    residual where it is small. ``max_abs_residual`` is never scaled."""

    grid_spacing: float
    max_residual: float
    points_checked: int
    excluded_radius: float
    max_abs_residual: float = float("nan")


def _one_minus_abs2(f, z):
    if hasattr(f, "one_minus_abs2"):
        return f.one_minus_abs2(z)
    return 1.0 - np.abs(f(z)) ** 2


def _scalar(out):
    return float(out) if np.ndim(out) == 0 else out


def sigma_eval(f, z):
    z = np.asarray(z, dtype=complex)
    return _scalar(2.0 * np.abs(f.derivative(z)) / _one_minus_abs2(f, z))


def distance_ratio(f, z):
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    return _scalar((1.0 - r) * (1.0 + r) * np.abs(f.derivative(z)) / _one_minus_abs2(f, z))


def composition_check(f, g, z) -> tuple[float, float]:
    """``(R_{f o g}(z), R_f(g(z)) R_g(z))``; the composite is never re-expanded."""
    return distance_ratio(Composition(f, g), z), distance_ratio(f, g(z)) * distance_ratio(g, z)


def log_slope(f, c: complex, radii: Sequence[float] = (1e-3, 1e-4, 1e-5), angles: int = 64) -> float:
    """Least-squares slope of ``log R_f`` against ``log r`` on circles about ``c``.

    ``log R_f`` is averaged over each circle (a geometric mean). By the mean
    value property of ``log |f'|`` the average is insensitive to where
    nearby critical points sit inside the circle.
    """
    theta = 2 * np.pi * (np.arange(angles) + 0.5) / angles
    logs = []
    for r in radii:
        vals = distance_ratio(f, c + r * np.exp(1j * theta))
        logs.append(np.mean(np.log(vals)))
    x = np.log(np.asarray(radii, dtype=float))
    return float(np.polyfit(x, np.asarray(logs), 1)[0])


def vanishing_order(f, c, radii: Sequence[float] = (1e-3, 1e-4, 1e-5), tol: float = 0.05) -> int:
    """Order to which ``R_f`` vanishes at the critical point ``c`` (local degree minus one)."""
    c = complex(c)
    if abs(f.derivative(c)) > 1e-9:
        raise ValueError(f"{c} is not a critical point: |f'(c)| = {abs(f.derivative(c)):.3e}")
    slope = log_slope(f, c, radii)
    order = int(round(slope))
    if abs(slope - order) > tol:
        raise SlopeAmbiguous(f"log-log slope {slope:.4f} is not within {tol} of an integer")
    return order


def _log_sigma(f, z):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(2.0) + np.log(np.abs(f.derivative(z))) - np.log(_one_minus_abs2(f, z))


def curvature_residual(
    f: BlaschkeProduct,
    spacing: float,
    radius: float = 0.9,
    exclusion: float | None = None,
    critical_points=None,
    chunk: int = 256,
) -> CurvatureReport:
    """Five-point Laplacian of ``log sigma_f`` against ``sigma_f^2`` on a lattice.

    The lattice is ``spacing * Z^2`` restricted to ``|z| <= radius``, so
    dyadic refinements are nested. Points closer than ``exclusion`` to a
    critical point are skipped. The stencil error of the harmonic part
    ``log |f'|`` grows like ``spacing^2 / dist^4`` near a critical point, so
    the exclusion has a fixed floor; a radius shrinking with the spacing
    would destroy second-order convergence of the maximum.
    """
    if not 1e-4 <= spacing <= 1e-2:
        raise ValueError("spacing must lie in [1e-4, 1e-2]")
    if exclusion is None:
        exclusion = default_exclusion(spacing)
    if critical_points is None:
        from .critical import forward_phi

        critical_points = forward_phi(f.zeros).critical_points if f.d else ()
    crit = np.array(list(critical_points), dtype=complex)

    n = int(np.floor(radius / spacing)) + 1
    ticks = spacing * np.arange(-n, n + 1)
    u = np.empty((len(ticks), len(ticks)))
    for start in range(0, len(ticks), chunk):
        rows = ticks[start : start + chunk]
        z = ticks[None, :] + 1j * rows[:, None]
        u[start : start + chunk] = _log_sigma(f, z)

    zc = ticks[None, 1:-1] + 1j * ticks[1:-1, None]
    mask = np.abs(zc) <= radius
    for c in crit:
        mask &= np.abs(zc - c) > exclusion
    with np.errstate(invalid="ignore"):
        lap = (u[2:, 1:-1] + u[:-2, 1:-1] + u[1:-1, 2:] + u[1:-1, :-2] - 4 * u[1:-1, 1:-1]) / spacing**2
    lap = lap[mask]
    sigma2 = np.exp(2 * u[1:-1, 1:-1][mask])
    absolute = np.abs(lap - sigma2)
    defect = absolute / np.maximum(1.0, sigma2)
    return CurvatureReport(
        spacing,
        float(defect.max(initial=0.0)),
        int(mask.sum()),
        float(exclusion),
        float(absolute.max(initial=0.0)),
    )


EXCLUSION_FLOOR = 0.1


def default_exclusion(spacing: float) -> float:
    return max(10.0 * spacing, EXCLUSION_FLOOR)


def boundary_limit_scan(f, radii: Sequence[float], angles: int = 256) -> list[float]:
    """``max_theta |R_f(r e^{i theta}) - 1|`` for each radius."""
    radii = list(radii)
    if any(r >= 1 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must increase and stay below 1")
    theta = 2 * np.pi * np.arange(angles) / angles
    return [float(np.max(np.abs(distance_ratio(f, r * np.exp(1j * theta)) - 1.0))) for r in radii]


def boundary_rate(f: BlaschkeProduct, theta) -> np.ndarray:
    """Second-order boundary coefficient ``K(theta)`` with ``1 - R_f ~ K (log r)^2``.

    With ``P = |f'|`` on the circle (the derivative of the boundary angle map
    ``phi``), ``K = (P^2 - 1)/6 + S(phi)/3`` where ``S`` is the Schwarzian
    ``P''/P - 1.5 (P'/P)^2``. For a single free zero ``a`` the maximum over
    ``theta`` is ``(1 + |a|) / (2 (1 - |a|))``, attained at ``theta = arg a``.
    """
    zeta = np.exp(1j * np.asarray(theta, dtype=float))
    P = np.ones(zeta.shape)
    dP = np.zeros(zeta.shape)
    d2P = np.zeros(zeta.shape)
    for a in f.zeros:
        w = 1.0 - abs(a) ** 2
        q = np.abs(zeta - a) ** 2
        dq = 2.0 * np.imag(np.conj(a) * zeta)
        d2q = 2.0 * np.real(np.conj(a) * zeta)
        P += w / q
        dP += -w * dq / q**2
        d2P += -w * d2q / q**2 + 2.0 * w * dq**2 / q**3
    return (P**2 - 1.0) / 6.0 + (d2P / P - 1.5 * (dP / P) ** 2) / 3.0


def single_zero_rate(a) -> float:
    """Closed-form ``max_theta K`` for the one-zero family ``z beta_a(z)``."""
    rho = abs(complex(a))
    return (1.0 + rho) / (2.0 * (1.0 - rho))


def metric_grid(f, grid: int, extent: float = 0.95) -> list[MetricSample]:
    """``sigma_f`` and ``R_f`` on a ``grid x grid`` lattice over ``[-extent, extent]^2``, disk points only."""
    if grid < 8:
        raise ValueError("grid must be at least 8")
    ticks = np.linspace(-extent, extent, grid)
    z = (ticks[None, :] + 1j * ticks[:, None]).ravel()
    z = z[np.abs(z) < 1.0]
    sig = np.atleast_1d(sigma_eval(f, z))
    rat = np.atleast_1d(distance_ratio(f, z))
    return [MetricSample(complex(a), float(b), float(c)) for a, b, c in zip(z, sig, rat)]
