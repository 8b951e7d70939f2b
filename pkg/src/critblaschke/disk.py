"""Normalized finite Blaschke products and automorphisms of the unit disk.

A normalized Blaschke product of degree ``d + 1`` is

    f(z) = z * prod_j beta_{a_j}(z),
    beta_a(z) = ((1 - conj(a)) / (1 - a)) * (z - a) / (1 - conj(a) z),

so that ``f(0) = 0`` and ``f(1) = 1``. Everything here is evaluated factor by
factor; the product is never expanded into a ratio of polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: Points with modulus above ``1 - BOUNDARY_TOL`` are treated as boundary points.
BOUNDARY_TOL = 1e-14


def check_disk_point(z) -> complex:
    """Return ``z`` as a Python complex, rejecting points not strictly inside the disk."""
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"point {z!r} is not finite")
    if abs(z) > 1.0 - BOUNDARY_TOL:
        raise ValueError(f"point {z!r} is not strictly inside the unit disk")
    return z


def canonical_order(points: Iterable[complex]) -> tuple[complex, ...]:
    """Sort points lexicographically by (real, imag)."""
    return tuple(sorted((complex(p) for p in points), key=lambda w: (w.real, w.imag)))


@dataclass(frozen=True)
class PointMultiset:
    """An unordered d-tuple of disk points, stored in canonical order."""

    points: tuple[complex, ...] = ()

    def __post_init__(self):
        pts = canonical_order(check_disk_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "PointMultiset":
        return cls(tuple(complex(float(re), float(im)) for re, im in pairs))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)

    def to_pairs(self) -> list[list[float]]:
        return [[p.real, p.imag] for p in self.points]


def _one_minus_abs2(z):
    r = np.abs(z)
    return (1.0 - r) * (1.0 + r)


def beta_eval(a, z):
    """Evaluate the automorphism that sends ``a`` to 0 and fixes 1.

    Works elementwise on arrays of ``z``.
    """
    a = check_disk_point(a)
    z = np.asarray(z, dtype=complex)
    lam = (1.0 - a.conjugate()) / (1.0 - a)
    out = lam * (z - a) / (1.0 - a.conjugate() * z)
    return out[()] if out.ndim == 0 else out


def _beta_one_minus_abs2(a: complex, z):
    # 1 - |beta_a(z)|^2 = (1 - |a|^2)(1 - |z|^2) / |1 - conj(a) z|^2, free of cancellation
    return _one_minus_abs2(a) * _one_minus_abs2(z) / np.abs(1.0 - a.conjugate() * z) ** 2


@dataclass(frozen=True)
class BlaschkeProduct:
    """Normalized Blaschke product ``z * prod beta_{a_j}(z)``.

    ``zeros`` holds the ``d`` free zeros; the zero at the origin is implicit,
    so ``degree == d + 1``. Instances are callable and vectorized over ``z``.
    """

    zeros: PointMultiset = PointMultiset()

    def __post_init__(self):
        if not isinstance(self.zeros, PointMultiset):
            object.__setattr__(self, "zeros", PointMultiset(tuple(self.zeros)))

    @classmethod
    def from_zeros(cls, zeros: Iterable[complex]) -> "BlaschkeProduct":
        return cls(PointMultiset(tuple(zeros)))

    @property
    def d(self) -> int:
        return len(self.zeros)

    @property
    def degree(self) -> int:
        return len(self.zeros) + 1

    def _factors(self, z: np.ndarray):
        vals = [z]
        ders = [np.ones_like(z)]
        for a in self.zeros:
            lam = (1.0 - a.conjugate()) / (1.0 - a)
            den = 1.0 - a.conjugate() * z
            vals.append(lam * (z - a) / den)
            ders.append(lam * (1.0 - abs(a) ** 2) / den**2)
        return np.array(vals), np.array(ders)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        vals, _ = self._factors(z)
        out = np.prod(vals, axis=0)
        return out[()] if out.ndim == 0 else out

    def derivative(self, z):
        """Analytic f'(z) by the product rule over the ``d + 1`` factors."""
        z = np.asarray(z, dtype=complex)
        vals, ders = self._factors(z)
        n = len(vals)
        ones = np.ones((1,) + z.shape, dtype=complex)
        prefix = np.concatenate([ones, np.cumprod(vals, axis=0)[:-1]])
        suffix = np.concatenate([np.cumprod(vals[::-1], axis=0)[:-1][::-1], ones])
        out = np.sum(ders * prefix[:n] * suffix[:n], axis=0)
        return out[()] if out.ndim == 0 else out

    def one_minus_abs2(self, z):
        """``1 - |f(z)|^2`` to full relative precision, also near the circle."""
        z = np.asarray(z, dtype=complex)
        # each factor term is at most 1; rounding can push it just past at z = a
        with np.errstate(divide="ignore"):
            acc = np.log1p(-np.minimum(_one_minus_abs2(z), 1.0))
            for a in self.zeros:
                acc = acc + np.log1p(-np.minimum(_beta_one_minus_abs2(a, z), 1.0))
        out = -np.expm1(acc)
        return out[()] if out.ndim == 0 else out


def blaschke_eval(f: BlaschkeProduct, z):
    return f(z)


def blaschke_derivative(f: BlaschkeProduct, z):
    return f.derivative(z)


def log_derivative_on_circle(f: BlaschkeProduct, z, tol: float = 1e-12):
    """``z f'(z) / f(z)`` on the unit circle, as the positive sum

    ``sum_j (1 - |a_j|^2) / |z - a_j|^2`` over all ``d + 1`` zeros (origin included).
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(np.abs(z) - 1.0) > tol):
        raise ValueError("log_derivative_on_circle requires |z| = 1")
    out = np.ones(z.shape)  # the zero at the origin contributes 1
    for a in f.zeros:
        out = out + (1.0 - abs(a) ** 2) / np.abs(z - a) ** 2
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class DiskAutomorphism:
    """``tau(z) = exp(i theta) (z - a) / (1 - conj(a) z)``."""

    a: complex = 0j
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", check_disk_point(self.a))
        object.__setattr__(self, "theta", float(self.theta))

    @classmethod
    def normalized(cls, a) -> "DiskAutomorphism":
        """The automorphism sending ``a`` to 0 and fixing 1."""
        a = check_disk_point(a)
        return cls(a, float(np.angle((1.0 - a.conjugate()) / (1.0 - a))))

    @property
    def rotation(self) -> complex:
        return complex(np.exp(1j * self.theta))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.rotation * (z - self.a) / (1.0 - self.a.conjugate() * z)
        return out[()] if out.ndim == 0 else out

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        a = self.a
        out = self.rotation * (1.0 - abs(a) ** 2) / (1.0 - a.conjugate() * z) ** 2
        return out[()] if out.ndim == 0 else out

    def one_minus_abs2(self, z):
        out = _beta_one_minus_abs2(self.a, np.asarray(z, dtype=complex))
        return out[()] if np.ndim(out) == 0 else out

    def inverse(self) -> "DiskAutomorphism":
        # w = u (z - a)/(1 - conj(a) z) solves to z = conj(u) (w - b)/(1 - conj(b) w), b = -u a
        return DiskAutomorphism(-self.rotation * self.a, -self.theta)


def automorphism_eval(t: DiskAutomorphism, z):
    return t(z)


@dataclass(frozen=True)
class Composition:
    """``outer o inner``, evaluated as a composed map and never re-expanded."""

    outer: object
    inner: object

    def __call__(self, z):
        return self.outer(self.inner(z))

    def derivative(self, z):
        return self.outer.derivative(self.inner(z)) * self.inner.derivative(z)

    def one_minus_abs2(self, z):
        return self.outer.one_minus_abs2(self.inner(z))


def degeneration_limit(a_sequence: Sequence[complex], z) -> complex:
    """``beta_{a_n}(z)`` for the last element of a sequence tending to the circle."""
    if len(a_sequence) == 0:
        raise ValueError("empty sequence")
    return complex(beta_eval(a_sequence[-1], z))
