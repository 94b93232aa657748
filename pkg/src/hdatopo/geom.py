"""Numeric maps between the cubical subdivision and the polyhedron.

``f_cube`` sends a point of a cube ``(tau, sigma)`` to barycentric coordinates
in R^N; ``g_point`` is its inverse.  Every function works on plain Python
numbers, so passing :class:`fractions.Fraction` gives exact arithmetic and
passing floats gives the fast path.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .simplicial import Simplex, SimplicialComplex, cube_pairs

CLAMP_TOL = 1e-12
SUM_TOL = 1e-9


class CubeCoords(NamedTuple):
    tau: Simplex
    sigma: Simplex
    t: tuple

    @property
    def degree(self) -> int:
        return len(self.sigma) - len(self.tau)


def sort_permutation(t: Sequence) -> tuple[int, ...]:
    """Indices (0-based) ordering ``t`` descending; ties keep the smaller index first."""
    return tuple(sorted(range(len(t)), key=lambda i: -t[i]))


def f_cube(cc: CubeCoords, n_vertices: int | None = None) -> tuple:
    """Image of ``cc.t`` under the piecewise-affine map of the cube ``(tau, sigma)``.

    On the simplex ``t_θ(1) >= ... >= t_θ(n)`` of the cube this is the convex
    combination of the barycenters of ``tau``, ``tau + w_θ(1)``, ...,
    ``sigma`` with weights ``1 - t_θ(1)``, ``t_θ(1) - t_θ(2)``, ..., ``t_θ(n)``.
    """
    tau, sigma, t = cc
    N = n_vertices if n_vertices is not None else max(sigma)
    w = sorted(set(sigma) - set(tau))
    if len(t) != len(w):
        raise ValueError(f"cube of degree {len(w)} needs {len(w)} coordinates, got {len(t)}")
    theta = sort_permutation(t)
    vals = [t[i] for i in theta]
    exact = all(isinstance(v, (int, Fraction)) for v in vals)
    one = Fraction(1) if exact else 1.0
    weights = [one - vals[0] if vals else one]
    weights += [vals[j] - vals[j + 1] for j in range(len(vals) - 1)]
    if vals:
        weights.append(vals[-1])
    x = [one * 0] * N
    support = list(tau)
    for j, c in enumerate(weights):
        if j:
            support.append(w[theta[j - 1]])
        share = c / len(support)
        for v in support:
            x[v - 1] += share
    return tuple(x)


def _normalize(K: SimplicialComplex, x: Sequence):
    exact = all(isinstance(v, (int, Fraction)) for v in x)
    if len(x) != K.n_vertices:
        raise ValueError(f"point has {len(x)} coordinates, complex has {K.n_vertices} vertices")
    if exact:
        x = [Fraction(v) for v in x]
        if any(v < 0 for v in x) or sum(x) != 1:
            raise ValueError("point is not in the standard simplex")
        return x
    x = [float(v) for v in x]
    if any(v < -CLAMP_TOL for v in x):
        raise ValueError("point has negative coordinates")
    x = [v if v > CLAMP_TOL else 0.0 for v in x]
    total = sum(x)
    if abs(total - 1.0) > SUM_TOL:
        raise ValueError(f"coordinates sum to {total}, not 1")
    return [v / total for v in x]


def g_point(K: SimplicialComplex, x: Sequence) -> CubeCoords:
    """Inverse of :func:`f_cube`: locate ``x ∈ |K|`` in the subdivision.

    Returns the unique representative with every ``t_i`` strictly inside
    ``(0, 1)``.
    """
    x = _normalize(K, x)
    u = tuple(i + 1 for i, v in enumerate(x) if v > 0)
    if u not in K:
        raise ValueError(f"support {u} of the point is not a simplex")
    s = [x[v - 1] for v in u]
    n = len(u)
    alpha = sort_permutation(s)
    m = max(i for i in range(n) if s[alpha[i]] == s[alpha[0]]) + 1
    tau = tuple(sorted(u[alpha[i]] for i in range(m)))
    rest = sorted(alpha[m:])  # positions in u of sigma - tau, in vertex order
    phi = {a: r for r, a in enumerate(rest)}
    t = [None] * (n - m)
    for i in range(1, n - m + 1):
        tail = sum((s[alpha[j]] for j in range(m + i, n)), s[0] * 0)
        t[phi[alpha[m + i - 1]]] = (m + i) * s[alpha[m + i - 1]] + tail
    return CubeCoords(tau, u, tuple(t))


def face_cube(tau: Simplex, sigma: Simplex, i: int, k: int) -> tuple[Simplex, Simplex]:
    """``d^k_i (tau, sigma)`` with 1-based ``i``."""
    w = sorted(set(sigma) - set(tau))[i - 1]
    if k == 0:
        return tau, tuple(v for v in sigma if v != w)
    return tuple(sorted(tau + (w,))), sigma


def insert_coord(u: Sequence, i: int, k) -> tuple:
    """The coordinate insertion ``δ^k_i``."""
    return tuple(u[: i - 1]) + (k,) + tuple(u[i - 1:])


def canonical(cc: CubeCoords) -> CubeCoords:
    """Push ``cc`` down through faces until every coordinate lies in ``(0, 1)``."""
    tau, sigma, t = cc.tau, cc.sigma, tuple(cc.t)
    while True:
        hit = next((i for i, v in enumerate(t) if v == 0 or v == 1), None)
        if hit is None:
            return CubeCoords(tau, sigma, t)
        k = 1 if t[hit] == 1 else 0
        tau, sigma = face_cube(tau, sigma, hit + 1, k)
        t = t[:hit] + t[hit + 1:]


# -- sampling checks -------------------------------------------------------------

def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed).spawn(stream + 1)[stream])


def _random_unit(rng, mode):
    if mode == "rational":
        den = int(rng.integers(1, 64))
        return Fraction(int(rng.integers(0, den + 1)), den)
    return float(rng.random())


def _random_barycentric(rng, n, mode):
    if mode == "rational":
        w = [int(v) for v in rng.integers(1, 100, size=n)]
        total = sum(w)
        return [Fraction(v, total) for v in w]
    w = rng.exponential(size=n)
    return list(w / w.sum())


def _dist(a, b) -> float:
    return float(max((abs(x - y) for x, y in zip(a, b)), default=0))


def delta_compat_check(cube: tuple[Simplex, Simplex], i: int, k: int, samples: int = 100,
                       seed: int = 0, mode: str = "rational", n_vertices: int | None = None) -> dict:
    """Compare the face cube's map with the cube's map composed with ``δ^k_i``."""
    tau, sigma = cube
    n = len(sigma) - len(tau)
    if n < 1:
        raise ValueError("face compatibility needs a cube of degree >= 1")
    N = n_vertices or max(sigma)
    ftau, fsigma = face_cube(tau, sigma, i, k)
    rng = _rng(seed, 1)
    kk = Fraction(k) if mode == "rational" else float(k)
    worst = 0.0
    for _ in range(samples):
        u = tuple(_random_unit(rng, mode) for _ in range(n - 1))
        lhs = f_cube(CubeCoords(ftau, fsigma, u), N)
        rhs = f_cube(CubeCoords(tau, sigma, insert_coord(u, i, kk)), N)
        worst = max(worst, _dist(lhs, rhs))
    return {"cube": [list(tau), list(sigma)], "i": i, "k": k, "max_error": worst,
            "samples": samples, "seed": seed, "mode": mode}


def roundtrip_check(K: SimplicialComplex, samples: int = 1000, seed: int = 0,
                    mode: str = "float") -> dict:
    """Sample ``f ∘ g`` on points of ``|K|`` and ``g ∘ f`` on points of cubes."""
    simplexes = sorted(K.simplexes)
    pairs = cube_pairs(K)
    rng = _rng(seed, 0)
    N = K.n_vertices
    worst = 0.0
    mismatches = 0
    worst_cube = 0.0
    for _ in range(samples):
        sigma = simplexes[int(rng.integers(len(simplexes)))]
        coords = _random_barycentric(rng, len(sigma), mode)
        zero = Fraction(0) if mode == "rational" else 0.0
        x = [zero] * N
        for v, c in zip(sigma, coords):
            x[v - 1] = c
        worst = max(worst, _dist(f_cube(g_point(K, x), N), x))

        tau, sig = pairs[int(rng.integers(len(pairs)))]
        t = tuple(_random_unit(rng, mode) for _ in range(len(sig) - len(tau)))
        cc = CubeCoords(tau, sig, t)
        back = g_point(K, f_cube(cc, N))
        want = canonical(cc)
        if (back.tau, back.sigma) != (want.tau, want.sigma):
            mismatches += 1
        else:
            worst_cube = max(worst_cube, _dist(back.t, want.t))
    return {"max_error": worst, "cube_mismatches": mismatches, "max_cube_error": worst_cube,
            "samples": samples, "seed": seed, "mode": mode}
