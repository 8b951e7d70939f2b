"""The critical-set map: zero multiset of a normalized Blaschke product to its critical multiset.

With ``f = N / D``, ``N(z) = z prod (z - a_j)`` and ``D(z) = prod (1 - conj(a_j) z)``,
the critical points of ``f`` in the plane are the roots of ``C = N'D - ND'``.
Those roots come in pairs ``c, 1/conj(c)``; exactly ``d`` of them lie inside
the disk.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .disk import BlaschkeProduct, PointMultiset, canonical_order
from .errors import IndecisiveRoot
from .poly import (
    EPS,
    ComplexPolynomial,
    cluster_roots,
    find_roots,
    inclusion_radii,
    poly_derivative,
)

#: Roots with ``| |r| - 1 |`` below this cannot be classified as interior or exterior.
CLASSIFY_TOL = 1e-7


@dataclass(frozen=True)
class CriticalResult:
    critical_points: PointMultiset
    reflected_partners: tuple[complex, ...] = ()
    residuals: tuple[float, ...] = ()
    clusters: tuple[tuple[complex, int], ...] = field(default=(), compare=False)
    raw_interior: tuple[complex, ...] = field(default=(), compare=False)


def monic_coefficients(points) -> np.ndarray:
    """Ascending coefficients of ``prod (z - p)``."""
    c = np.ones(1, dtype=complex)
    for p in points:
        c = np.convolve(c, [-complex(p), 1.0])
    return c


def monic_from_symmetric(e) -> np.ndarray:
    """Ascending coefficients of the monic polynomial whose roots have elementary symmetric values ``e``."""
    e = np.asarray(e, dtype=complex)
    d = len(e)
    c = np.empty(d + 1, dtype=complex)
    c[d] = 1.0
    for k in range(1, d + 1):
        c[d - k] = (-1) ** k * e[k - 1]
    return c


def _critical_from_monic(pc: np.ndarray) -> ComplexPolynomial:
    num = np.concatenate([[0.0], pc])  # z * P(z)
    den = np.conj(pc[::-1])  # prod (1 - conj(a) z)
    dnum = num[1:] * np.arange(1, len(num))
    dden = den[1:] * np.arange(1, len(den))
    return ComplexPolynomial(np.convolve(dnum, den) - np.convolve(num, dden))


def critical_polynomial(zeros) -> ComplexPolynomial:
    """``N'D - ND'`` for the normalized product with the given zeros (scale is irrelevant)."""
    return _critical_from_monic(monic_coefficients(zeros))


def _newton_on_derivative(c: ComplexPolynomial, z0: complex, m: int, spread: float) -> complex:
    # a cluster of m roots collapses to a simple root of the (m-1)-th derivative
    q = c
    for _ in range(m - 1):
        q = poly_derivative(q)
    dq = poly_derivative(q)
    z = z0
    for _ in range(8):
        step = q(z) / dq(z)
        if not np.isfinite(step):
            return z0
        z = z - step
        if abs(step) <= 4e-16 * max(1.0, abs(z)):
            break
    return complex(z) if abs(z - z0) <= max(spread, CLASSIFY_TOL) else z0


def _polish_critical(zeros: np.ndarray, c: complex, steps: int = 3) -> complex:
    """Newton on ``f'`` using ``f''/f' = L + L'/L`` with ``L = f'/f`` from factor sums."""
    a = np.concatenate([[0.0], zeros])
    ac = a.conj()
    w = 1.0 - np.abs(a) ** 2

    def f(z):  # up to the unimodular constant, which does not affect |f'|
        return np.prod((z - a) / (1.0 - ac * z))

    with np.errstate(all="ignore"):
        best, best_val = c, None
        z = c
        for _ in range(steps):
            prod = (z - a) * (1.0 - ac * z)
            if np.any(prod == 0):
                break
            L = np.sum(w / prod)
            dL = -np.sum(w * (1.0 - 2.0 * ac * z + np.abs(a) ** 2) / prod**2)
            val = abs(f(z) * L)
            if best_val is None or val < best_val:
                best, best_val = z, val
            den = L * L + dL
            if den == 0 or not np.isfinite(den):
                break
            z = z - L / den
            if not np.isfinite(z):
                break
        prod = (z - a) * (1.0 - ac * z)
        if np.isfinite(z) and np.all(prod != 0) and abs(f(z) * np.sum(w / prod)) < (best_val if best_val is not None else np.inf):
            best = z
    return complex(best)


def _distinct_with_counts(zeros: PointMultiset) -> list[tuple[complex, int]]:
    """Distinct zeros of ``f`` (the origin always included) with multiplicities."""
    counts = {0j: 1}
    for a in zeros:
        counts[complex(a)] = counts.get(complex(a), 0) + 1
    return list(counts.items())


def _reduced_with_noise(zeros: PointMultiset):
    groups = _distinct_with_counts(zeros)
    quads = [
        np.array([0.0, 1.0], dtype=complex) if b == 0 else np.array([-b, 1.0 + abs(b) ** 2, -np.conj(b)])
        for b, _ in groups
    ]

    def assemble(qs):
        prefix = [np.ones(1, dtype=qs[0].dtype)]
        for q in qs:
            prefix.append(np.convolve(prefix[-1], q))
        suffix = [np.ones(1, dtype=qs[0].dtype)]
        for q in reversed(qs):
            suffix.append(np.convolve(suffix[-1], q))
        suffix = suffix[::-1]
        total = np.zeros(2 * len(qs), dtype=qs[0].dtype)
        for i, (a, k) in enumerate(groups):
            term = k * (1.0 - abs(a) ** 2) * np.convolve(prefix[i], suffix[i + 1])
            total[: len(term)] += term
        return total

    coeffs = assemble(quads)
    # same sums over absolute values bound the rounding error of each coefficient
    scale = assemble([np.abs(q) for q in quads])
    noise = 4 * (len(coeffs) + len(quads)) * EPS * scale
    repeated = [(a, k - 1) for a, k in groups if k >= 2]
    return ComplexPolynomial(coeffs), repeated, noise


def reduced_critical_polynomial(zeros) -> tuple[ComplexPolynomial, list[tuple[complex, int]]]:
    """``C`` with the exactly known factors of repeated zeros divided out.

    A zero ``a`` of multiplicity ``k`` makes ``(z - a)^(k-1) (1 - conj(a) z)^(k-1)``
    divide ``C``. What is left is
    ``sum_a k_a (1 - |a|^2) prod_{b != a} (z - b)(1 - conj(b) z)`` over the
    distinct zeros (origin included, where the factor is just ``z``).
    Returns that polynomial and the list of ``(a, k - 1)`` for ``k >= 2``.
    """
    zeros = zeros if isinstance(zeros, PointMultiset) else PointMultiset(tuple(zeros))
    poly, repeated, _ = _reduced_with_noise(zeros)
    return poly, repeated


def forward_phi(zeros) -> CriticalResult:
    """Critical multiset of the normalized product with zero multiset ``zeros``.

    A repeated zero of multiplicity ``k`` is itself a critical point of
    multiplicity ``k - 1`` and is reported exactly. The remaining critical
    points are roots of the reduced critical polynomial; interior roots that
    are numerically indistinguishable (overlapping inclusion disks or closer
    than 1e-7) are reported as one point repeated with its multiplicity.
    """
    zeros = zeros if isinstance(zeros, PointMultiset) else PointMultiset(tuple(zeros))
    d = len(zeros)
    if d == 0:
        return CriticalResult(PointMultiset())
    cpoly, repeated, coeff_noise = _reduced_with_noise(zeros)
    known = sum(m for _, m in repeated)
    roots = find_roots(cpoly) if cpoly.degree >= 1 else np.zeros(0, dtype=complex)
    mod = np.abs(roots)
    ambiguous = np.abs(mod - 1.0) <= CLASSIFY_TOL
    if ambiguous.any():
        raise IndecisiveRoot(
            f"critical root(s) {roots[ambiguous]} within {CLASSIFY_TOL} of the unit circle"
        )
    inner = mod < 1.0
    if inner.sum() + known != d:
        raise IndecisiveRoot(f"found {int(inner.sum()) + known} interior critical points, expected {d}")
    radii = inclusion_radii(cpoly, roots, coeff_noise)[inner] if len(roots) else np.zeros(0)
    interior = roots[inner]
    # reflections of tiny repeated zeros overflow; they belong with the points at infinity
    exterior = list(roots[~inner]) + [1.0 / np.conj(a) for a, m in repeated if abs(a) > 1e-300 for _ in range(m)]
    partners = tuple(canonical_order(exterior)) + (complex(np.inf, 0.0),) * (d - len(exterior))

    clusters = list(repeated)
    for centroid, m in cluster_roots(interior, radii=radii) if len(interior) else []:
        if m == 1:
            centroid = _polish_critical(zeros.as_array(), centroid)
        else:
            members = [r for r in interior if abs(r - centroid) <= max(CLASSIFY_TOL, 2 * radii.max())]
            spread = max((abs(r - centroid) for r in members), default=0.0)
            centroid = _newton_on_derivative(cpoly, centroid, m, 2 * spread)
        if abs(centroid) >= 1.0 - CLASSIFY_TOL:
            raise IndecisiveRoot(f"refined critical point {centroid} within {CLASSIFY_TOL} of the unit circle")
        clusters.append((centroid, m))
    clusters.sort(key=lambda cm: (cm[0].real, cm[0].imag))
    points = [c for c, m in clusters for _ in range(m)]
    crit = PointMultiset(tuple(points))
    f = BlaschkeProduct(zeros)
    residuals = tuple(float(abs(f.derivative(c))) for c in crit)
    raw = list(interior) + [a for a, m in repeated for _ in range(m)]
    return CriticalResult(
        crit,
        partners,
        residuals,
        clusters=tuple(clusters),
        raw_interior=tuple(canonical_order(raw)),
    )


def multiplicity_profile(zeros) -> list[tuple[complex, int]]:
    """Distinct critical points with multiplicities; local degree there is multiplicity + 1."""
    return list(forward_phi(zeros).clusters)


def _log_derivative_ratio(zeros: np.ndarray, z: np.ndarray) -> np.ndarray:
    """``z C'(z)/C(z)`` on a circle about 0, assembled from per-zero terms.

    ``C = D^2 f' / lambda``, so ``C'/C = L + L'/L + 2 D'/D`` with ``L = f'/f``.
    On the unit circle ``z L`` is a sum of positive terms, which avoids the
    cancellation of evaluating ``C`` from its coefficients.
    """
    a = zeros[:, None]
    ac = a.conj()
    w = 1.0 - np.abs(a) ** 2
    prod = (z - a) * (1.0 - ac * z)
    L = 1.0 / z + np.sum(w / prod, axis=0)
    dL = -1.0 / z**2 - np.sum(w * (1.0 - 2.0 * ac * z + np.abs(a) ** 2) / prod**2, axis=0)
    dD = -np.sum(ac / (1.0 - ac * z), axis=0)
    return z * L + z * dL / L + 2.0 * z * dD


#: Beyond this zero modulus the unit circle passes too close to the per-zero
#: poles of the factor sums, and the contour is moved off it.
NEAR_CIRCLE = 0.99


def _node_count(margin: float, d: int, max_nodes: int) -> int:
    # trapezoid error decays like exp(-n * margin)
    need = d + 40.0 / margin
    n = 256
    while n < need:
        n *= 2
    if n > max_nodes:
        raise IndecisiveRoot(f"critical point within {margin:.3e} (log-modulus) of the contour")
    return n


def quadrature_contour(zeros, d: int, max_nodes: int = 1 << 20) -> tuple[float, int]:
    """Radius and node count of the circle used for the interior power sums.

    The integrand is analytic in the annulus ``r < |z| < 1/r`` where ``r``
    is the largest interior critical modulus. Critical points lie in the
    hyperbolic convex hull of ``{0} U zeros``, so ``r <= max |a_j|`` and
    the unit circle with that bound is used when all zeros are moderate.
    Otherwise ``r`` is measured from the roots of the critical polynomial
    and the radius is picked inside the annulus as far as possible (in log
    scale) from the circles ``|z| = |a_j|`` and ``|z| = 1/|a_j|`` on which the
    individual terms of the factor sums blow up.
    """
    zeros = np.asarray(zeros, dtype=complex)
    rmax = float(np.max(np.abs(zeros), initial=0.0))
    if rmax <= NEAR_CIRCLE:
        return 1.0, _node_count(-np.log(max(rmax, 0.5)), d, max_nodes)
    mod = np.abs(find_roots(critical_polynomial(zeros)))
    inner = mod[mod < 1.0 - CLASSIFY_TOL]
    if len(inner) != d:
        raise IndecisiveRoot("critical roots too close to the unit circle to classify")
    delta = -np.log(max(float(inner.max(initial=0.0)), 0.5))
    poles = np.log(np.abs(zeros[np.abs(zeros) > 0]))
    poles = np.concatenate([poles, -poles])
    t = np.linspace(-0.5 * delta, 0.5 * delta, 65)
    score = np.min(np.abs(t[:, None] - poles[None, :]), axis=1, initial=np.inf)
    best = np.flatnonzero(score >= score.max() * (1 - 1e-12))
    t_best = t[best[np.argmin(np.abs(t[best]))]]
    return float(np.exp(t_best)), _node_count(delta - abs(t_best), d, max_nodes)


def quadrature_nodes(zeros, d: int, max_nodes: int = 1 << 20) -> int:
    return quadrature_contour(zeros, d, max_nodes)[1]


def interior_power_sums(zeros, kmax: int, n_nodes: int, radius: float = 1.0) -> np.ndarray:
    """``sum c^k`` over the interior critical points, k = 0..kmax.

    Trapezoid rule for ``(1/2 pi i) \\oint z^k C'/C dz`` on ``|z| = radius``;
    exterior roots contribute nothing and the k = 0 entry is the interior count.
    """
    zeros = np.asarray(zeros, dtype=complex)
    z = radius * np.exp(2j * np.pi * np.arange(n_nodes) / n_nodes)
    g = _log_derivative_ratio(zeros, z)
    out = np.empty(kmax + 1, dtype=complex)
    zk = np.ones(n_nodes, dtype=complex)
    for k in range(kmax + 1):
        out[k] = np.mean(zk * g)
        zk = zk * z
    return out


def power_sums_to_symmetric(ps: np.ndarray, d: int) -> np.ndarray:
    """Newton's identities: ``k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i``."""
    e = np.zeros(d + 1, dtype=complex)
    e[0] = 1.0
    for k in range(1, d + 1):
        acc = 0j
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * ps[i]
        e[k] = acc / k
    return e[1:]


def interior_symmetric(zeros) -> np.ndarray:
    """Elementary symmetric values ``e_1..e_d`` of the critical multiset.

    Equal to the symmetric values of ``forward_phi(zeros).critical_points``
    but computed without root finding, so it stays smooth (and accurate)
    where critical points collide. Raises :class:`IndecisiveRoot` if the
    winding count is not ``d``.
    """
    zeros = np.asarray(zeros, dtype=complex)
    d = len(zeros)
    if not np.any(zeros):
        # z^(d+1): every critical point sits at the origin
        return np.zeros(d, dtype=complex)
    radius, n = quadrature_contour(zeros, d)
    ps = interior_power_sums(zeros, d, n, radius)
    if not np.all(np.isfinite(ps)):
        raise IndecisiveRoot("critical point on the unit circle")
    if abs(ps[0] - d) > 1e-6:
        raise IndecisiveRoot(f"winding count {ps[0].real:.6f} differs from d = {d}")
    return power_sums_to_symmetric(ps, d)
