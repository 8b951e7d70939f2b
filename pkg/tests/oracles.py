"""Independent reference computations used only by the tests."""

import itertools

import mpmath as mp
import numpy as np

DPS = 50


def _mul(p, q):
    r = [mp.mpc(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            r[i + j] += x * y
    return r


def critical_points_mp(zeros):
    """Interior roots of N'D - ND' in 50-digit arithmetic (mpmath polyroots)."""
    with mp.workdps(DPS):
        a = [mp.mpc(complex(x)) for x in zeros]
        N, D = [mp.mpc(0), mp.mpc(1)], [mp.mpc(1)]
        for x in a:
            N = _mul(N, [-x, 1])
            D = _mul(D, [1, -mp.conj(x)])
        dN = [k * N[k] for k in range(1, len(N))]
        dD = [k * D[k] for k in range(1, len(D))]
        A, B = _mul(dN, D), _mul(N, dD)
        C = [A[i] - (B[i] if i < len(B) else 0) for i in range(len(A))]
        tiny = mp.mpf(10) ** -40
        while abs(C[-1]) < tiny:
            C.pop()
        lead = 0
        while abs(C[lead]) < tiny:
            lead += 1
        roots = [mp.mpc(0)] * lead
        if len(C) - lead > 1:
            roots += mp.polyroots(C[lead:][::-1], maxsteps=500, extraprec=200)
        return [complex(r) for r in roots if abs(r) < 1]


def symmetric_values(points):
    """e_1..e_n by direct expansion over subsets (small n only)."""
    pts = [complex(p) for p in points]
    out = []
    for k in range(1, len(pts) + 1):
        out.append(sum(np.prod(c) for c in itertools.combinations(pts, k)))
    return np.array(out, dtype=complex)


def blaschke_mp(zeros, z):
    # never lower the precision: mp.diff raises it while differencing
    with mp.workdps(max(mp.mp.dps, DPS)):
        z = z if isinstance(z, mp.mpc) else mp.mpc(complex(z))
        out = z
        for a in zeros:
            a = mp.mpc(complex(a))
            out *= (1 - mp.conj(a)) / (1 - a) * (z - a) / (1 - mp.conj(a) * z)
        return out


def ratio_mp(zeros, z):
    """R_f(z) = (1-|z|^2)|f'(z)|/(1-|f(z)|^2) with mpmath differentiation."""
    with mp.workdps(DPS):
        f = lambda w: blaschke_mp(zeros, w)
        zz = mp.mpc(complex(z))
        df = mp.diff(f, zz)
        return float((1 - abs(zz) ** 2) * abs(df) / (1 - abs(f(zz)) ** 2))


def brute_force_match(p, q):
    """Minimal total hyperbolic distance by enumerating all bijections."""
    p, q = list(p), list(q)
    best = np.inf
    for perm in itertools.permutations(range(len(q))):
        tot = 0.0
        for i, j in enumerate(perm):
            rho = abs(p[i] - q[j]) / abs(1 - np.conj(q[j]) * p[i])
            tot += 2 * np.arctanh(min(rho, 1.0))
        best = min(best, tot)
    return best
