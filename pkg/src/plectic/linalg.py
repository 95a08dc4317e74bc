"""Small exact linear algebra helpers over Fraction (no external deps)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def rref(rows):
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    mat = [list(map(Fraction, r)) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def nullspace(rows):
    """Basis of the right nullspace of the matrix given by `rows`."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in zip(red, pivots):
            v[pc] = -r[fc]
        basis.append(v)
    return basis


def primitive_vector(vec):
    """Scale a nonzero rational vector by a positive rational to coprime ints.

    Direction is preserved (the scale factor is positive).
    """
    fracs = [Fraction(x) for x in vec]
    if all(x == 0 for x in fracs):
        raise ValueError("zero vector has no primitive form")
    denom_lcm = 1
    for x in fracs:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(Fraction(v, g) for v in ints)


def intersect_spans(basis_a, basis_b):
    """Basis of span(basis_a) ∩ span(basis_b); vectors are rows."""
    if not basis_a or not basis_b:
        return []
    m = len(basis_a[0])
    # Solve sum a_i A_i - sum b_j B_j = 0: columns are the A's then -B's.
    cols = [list(v) for v in basis_a] + [[-x for x in v] for v in basis_b]
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(m)]
    combos = nullspace(mat)
    vectors = []
    for combo in combos:
        v = [Fraction(0)] * m
        for coef, av in zip(combo[: len(basis_a)], basis_a):
            for i in range(m):
                v[i] += coef * av[i]
        if any(x != 0 for x in v):
            vectors.append(v)
    red, _ = rref(vectors)
    return [tuple(r) for r in red]


def in_span(vec, basis) -> bool:
    if all(x == 0 for x in vec):
        return True
    if not basis:
        return False
    return rank(list(basis)) == rank(list(basis) + [list(vec)])
