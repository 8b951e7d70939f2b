"""Dense complex polynomials and a simultaneous (Aberth-Ehrlich) root finder.

Coefficients are stored in ascending order: ``coeffs[k]`` multiplies ``z**k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS = np.finfo(float).eps
TRIM_TOL = 1e-14
CLUSTER_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class ComplexPolynomial:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        scale = np.max(np.abs(c))
        if scale > 0:
            nz = np.nonzero(np.abs(c) > TRIM_TOL * scale)[0]
            c = c[: nz[-1] + 1]
        else:
            c = c[:1]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out[()] if out.ndim == 0 else out

    def __mul__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        return poly_mul(self, other)

    def __sub__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        return ComplexPolynomial(a - b)

    def __repr__(self):
        return f"ComplexPolynomial({np.array2string(self.coeffs, precision=6)})"

    @classmethod
    def from_roots(cls, roots) -> "ComplexPolynomial":
        """Monic polynomial ``prod (z - r)`` by repeated convolution."""
        c = np.ones(1, dtype=complex)
        for r in roots:
            c = np.convolve(c, [-complex(r), 1.0])
        return cls(c)


def poly_mul(p: ComplexPolynomial, q: ComplexPolynomial) -> ComplexPolynomial:
    return ComplexPolynomial(np.convolve(p.coeffs, q.coeffs))


def poly_derivative(p: ComplexPolynomial) -> ComplexPolynomial:
    if p.degree == 0:
        return ComplexPolynomial([0.0])
    return ComplexPolynomial(p.coeffs[1:] * np.arange(1, len(p.coeffs)))


def _horner(c: np.ndarray, z: np.ndarray):
    """Value, derivative and rounding-error scale of ``c`` (ascending) at ``z``."""
    p = np.full(z.shape, c[-1], dtype=complex)
    dp = np.zeros_like(p)
    absz = np.abs(z)
    bound = np.full(z.shape, abs(c[-1]))
    for ck in c[-2::-1]:
        dp = dp * z + p
        p = p * z + ck
        bound = bound * absz + abs(ck)
    return p, dp, bound


def _initial_guesses(c: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    radius = abs(c[0] / c[-1]) ** (1.0 / n)
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return radius * np.exp(1j * angles)


def _aberth(c: np.ndarray, z: np.ndarray, max_iter: int):
    n = len(z)
    z = z.copy()
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        p, dp, bound = _horner(c, z)
        active &= np.abs(p) > 4 * n * EPS * bound
        if not active.any():
            return z, True
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
        bad = ~np.isfinite(w)
        if bad.any():
            # stationary point of p or coincident iterates: nudge off it
            w[bad] = -1e-3 * (1.0 + np.abs(z[bad])) * np.exp(1j * np.arange(bad.sum()))
        z[active] -= w[active]
    p, _, bound = _horner(c, z)
    # accept a slightly looser bound when the iteration cap is hit (clustered roots)
    return z, bool(np.all(np.abs(p) <= 64 * n * EPS * bound))


def _polish(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """One guarded Newton step per isolated root; kept only if the residual drops."""
    p, dp, _ = _horner(c, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        cand = z - p / dp
    pc, _, _ = _horner(c, np.where(np.isfinite(cand), cand, z))
    gaps = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(gaps, np.inf)
    isolated = gaps.min(axis=1) > CLUSTER_TOL
    keep = isolated & np.isfinite(cand) & (np.abs(pc) < np.abs(p))
    return np.where(keep, cand, z)


def find_roots(p: ComplexPolynomial, initial=None, max_iter: int = 500) -> np.ndarray:
    """All roots of ``p`` with multiplicity.

    Exact roots at the origin are split off first; the rest come from
    Aberth-Ehrlich iteration followed by a guarded Newton polish. ``initial``
    may supply warm-start guesses for the non-origin roots; if they fail to
    converge the iteration restarts from the default circle.
    """
    if not isinstance(p, ComplexPolynomial):
        p = ComplexPolynomial(p)
    if p.degree < 1:
        raise ValueError("find_roots requires degree >= 1")
    c = p.coeffs
    scale = np.max(np.abs(c))
    k = 0
    while k < len(c) - 1 and abs(c[k]) <= TRIM_TOL * scale:
        k += 1
    c = c[k:] / c[-1]
    origin = np.zeros(k, dtype=complex)
    n = len(c) - 1
    if n == 0:
        return origin
    if n == 1:
        return np.concatenate([origin, [-c[0]]])
    converged = False
    if initial is not None and len(initial) == n:
        z0 = np.asarray(initial, dtype=complex).copy()
        # separate coincident warm starts so the Aberth sum stays finite
        z0 += 1e-9 * (1.0 + np.abs(z0)) * np.exp(1j * (np.arange(n) + 0.5))
        z, converged = _aberth(c, z0, 60)
    if not converged:
        z, converged = _aberth(c, _initial_guesses(c), max_iter)
    z = _polish(c, z)
    return np.concatenate([origin, z])


def inclusion_radii(p: ComplexPolynomial, roots, coeff_noise=None) -> np.ndarray:
    """Radii ``n |p(z)| / |p'(z)|`` of disks each holding a true root.

    ``|p(z)|`` is floored at the Horner rounding-error bound, plus
    ``sum coeff_noise[k] |z|^k`` when the coefficients themselves carry
    known absolute errors, so numerically split copies of a multiple root
    get overlapping disks.
    """
    roots = np.asarray(roots, dtype=complex)
    n = p.degree
    val, der, bound = _horner(p.coeffs, roots)
    floor = 4 * n * EPS * bound
    if coeff_noise is not None:
        absz = np.abs(roots)
        floor = floor + sum(e * absz**k for k, e in enumerate(coeff_noise))
    noise = np.maximum(np.abs(val), floor)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = n * noise / np.abs(der)
    return np.where(noise == 0.0, 0.0, r)


def cluster_roots(roots, tol: float = CLUSTER_TOL, radii=None) -> list[tuple[complex, int]]:
    """Group roots into clusters by single linkage.

    Two roots join when they lie within ``tol`` of each other or, if
    ``radii`` is given, when their inclusion disks overlap. Returns
    ``(centroid, multiplicity)`` pairs in canonical order.
    """
    roots = [complex(r) for r in roots]
    n = len(roots)
    radii = np.zeros(n) if radii is None else np.asarray(radii, dtype=float)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= max(tol, radii[i] + radii[j]):
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    out = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    return sorted(out, key=lambda t: (t[0].real, t[0].imag))
