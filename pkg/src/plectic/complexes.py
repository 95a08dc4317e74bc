"""Finite complexes of observable simplices and their exact (co)homology.

The free chain complex on the face-closure of a seed family, with integer
boundary matrices, Smith normal form over Z, rational-coefficient
cohomology, and the top-degree action cochain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegreeError, DimensionError, InputError
from .hamilton import Plectic
from .quadrature import integrate
from .simplices import ObsSimplex, face_map


class ObsComplex:
    """Face-closed strata of canonical observable simplices.

    strata[k] lists the k-simplices; incidence[k][t] lists (i, index of
    face i of simplex t in stratum k-1) for every face index i.
    """

    __slots__ = ("plectic", "strata", "incidence")

    def __init__(self, plectic: Plectic, strata, incidence):
        object.__setattr__(self, "plectic", plectic)
        object.__setattr__(self, "strata", strata)
        object.__setattr__(self, "incidence", incidence)

    def __setattr__(self, *a):
        raise AttributeError("immutable value")

    @property
    def top_dim(self) -> int:
        return len(self.strata) - 1

    def stratum(self, k: int):
        if 0 <= k < len(self.strata):
            return self.strata[k]
        return ()

    def size(self, k: int) -> int:
        return len(self.stratum(k))


def build_complex(plectic: Plectic, seeds) -> ObsComplex:
    """Closure of the seeds under face maps with canonical deduplication."""
    seeds = list(seeds)
    for s in seeds:
        if s.plectic != plectic:
            raise DimensionError("seed on a different plectic chart")
        if s.dim > plectic.n:
            raise DimensionError(f"seed dimension {s.dim} exceeds n={plectic.n}")
    top = max((s.dim for s in seeds), default=-1)
    strata = [[] for _ in range(top + 1)]
    index = [{} for _ in range(top + 1)]
    queue = []
    for s in seeds:
        if s.key() not in index[s.dim]:
            index[s.dim][s.key()] = len(strata[s.dim])
            strata[s.dim].append(s)
            queue.append(s)
    incidence_map = {}
    while queue:
        x = queue.pop()
        if x.dim == 0:
            continue
        entries = []
        for i in range(x.dim + 1):
            face = face_map(x, i)[0]
            k = face.dim
            if face.key() not in index[k]:
                index[k][face.key()] = len(strata[k])
                strata[k].append(face)
                queue.append(face)
            entries.append((i, index[k][face.key()]))
        incidence_map[(x.dim, index[x.dim][x.key()])] = tuple(entries)
    incidence = [tuple(incidence_map.get((k, t), ())
                       for t in range(len(strata[k])))
                 for k in range(top + 1)]
    return ObsComplex(plectic, tuple(tuple(s) for s in strata), tuple(incidence))


def boundary(cx: ObsComplex, k: int):
    """Integer matrix of the alternating-sum boundary from stratum k."""
    if k < 1 or k > cx.top_dim:
        raise DimensionError(f"no boundary matrix in degree {k}")
    rows, cols = cx.size(k - 1), cx.size(k)
    mat = [[0] * cols for _ in range(rows)]
    for t in range(cols):
        for i, fidx in cx.incidence[k][t]:
            mat[fidx][t] += (-1) ** i
    return mat


def smith_normal_form(matrix):
    """Invariant factors and rank of an integer matrix (exact)."""
    mat = [list(map(int, row)) for row in matrix]
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    diag = []
    r = 0
    while r < min(rows, cols):
        # locate a smallest nonzero entry in the remaining block
        best = None
        for i in range(r, rows):
            for j in range(r, cols):
                if mat[i][j] != 0 and (best is None or abs(mat[i][j]) < abs(mat[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        mat[r], mat[i] = mat[i], mat[r]
        for row in mat:
            row[r], row[j] = row[j], row[r]
        stable = False
        while not stable:
            stable = True
            for i in range(r + 1, rows):
                if mat[i][r] % mat[r][r] != 0:
                    q = mat[i][r] // mat[r][r]
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[r])]
                    mat[r], mat[i] = mat[i], mat[r]
                    stable = False
            for j in range(r + 1, cols):
                if mat[r][j] % mat[r][r] != 0:
                    q = mat[r][j] // mat[r][r]
                    for row in mat:
                        row[j] -= q * row[r]
                    for row in mat:
                        row[r], row[j] = row[j], row[r]
                    stable = False
        for i in range(r + 1, rows):
            if mat[i][r]:
                q = mat[i][r] // mat[r][r]
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[r])]
        for j in range(r + 1, cols):
            if mat[r][j]:
                q = mat[r][j] // mat[r][r]
                for row in mat:
                    row[j] -= q * row[r]
        diag.append(abs(mat[r][r]))
        r += 1
    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for a in range(len(diag) - 1):
            if diag[a + 1] % diag[a] != 0:
                from math import gcd
                g = gcd(diag[a], diag[a + 1])
                diag[a], diag[a + 1] = g, diag[a] * diag[a + 1] // g
                changed = True
    return diag, len(diag)


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple
    torsion: tuple  # per degree, tuple of invariant factors > 1

    def __repr__(self):
        return f"HomologyResult(betti={self.betti}, torsion={self.torsion})"


def homology(cx: ObsComplex) -> HomologyResult:
    """Integer homology via Smith normal form: Betti numbers and torsion."""
    top = cx.top_dim
    ranks = {}
    factors = {}
    for k in range(1, top + 1):
        mat = boundary(cx, k)
        if not mat or not mat[0]:
            ranks[k], factors[k] = 0, []
            continue
        diag, r = smith_normal_form(mat)
        ranks[k], factors[k] = r, diag
    betti = []
    torsion = []
    for k in range(top + 1):
        rk = ranks.get(k, 0)
        rk1 = ranks.get(k + 1, 0)
        betti.append(cx.size(k) - rk - rk1)
        torsion.append(tuple(d for d in factors.get(k + 1, []) if d > 1))
    return HomologyResult(tuple(betti), tuple(torsion))


def cohomology(cx: ObsComplex, coefficients: str = "Q") -> HomologyResult:
    """Cohomology from the transposed boundaries; over Q only ranks."""
    if coefficients not in ("Q", "Z"):
        raise InputError("coefficients must be 'Q' or 'Z'")
    top = cx.top_dim
    ranks = {}
    factors = {}
    for k in range(top):
        mat = boundary(cx, k + 1)
        if not mat or not mat[0]:
            ranks[k], factors[k] = 0, []
            continue
        tr = [list(col) for col in zip(*mat)]
        diag, r = smith_normal_form(tr)
        ranks[k], factors[k] = r, diag  # rank of delta^k, factors for H^(k+1)
    betti = []
    torsion = []
    for k in range(top + 1):
        d_k = ranks.get(k, 0)
        d_km1 = ranks.get(k - 1, 0)
        betti.append(cx.size(k) - d_k - d_km1)
        if coefficients == "Z":
            torsion.append(tuple(d for d in factors.get(k - 1, []) if d > 1))
        else:
            torsion.append(())
    return HomologyResult(tuple(betti), tuple(torsion))


def coboundary_apply(cx: ObsComplex, k: int, values) -> list:
    """Alternating-sum coboundary of a rational cochain on stratum k."""
    values = list(values)
    if len(values) != cx.size(k):
        raise InputError(f"cochain covers {len(values)} of {cx.size(k)} simplices")
    if any(v is None for v in values):
        raise InputError("cochain has missing values")
    out = []
    for t in range(cx.size(k + 1)):
        total = Fraction(0)
        for i, fidx in cx.incidence[k + 1][t]:
            total += ((-1) ** i) * Fraction(values[fidx])
        out.append(total)
    return out


def adiabatic_cochain(cx: ObsComplex) -> list:
    """Exact action integrals of the canonical primitive over the top stratum.

    Value on sigma is the integral over the standard n-simplex of the
    pullback of theta with d(theta) = omega; orientation follows the
    vertex order.
    """
    n = cx.plectic.n
    if cx.size(n) == 0:
        raise DegreeError(f"complex has no stratum in degree {n}")
    theta = cx.plectic.theta()
    return [integrate(theta, x.simplex) for x in cx.stratum(n)]
