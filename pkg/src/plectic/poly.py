"""Multivariate polynomials with exact rational coefficients on a coordinate chart.

Exponent vectors are tuples of nonnegative ints, one slot per chart
coordinate; coefficients are `fractions.Fraction`.  Zero coefficients are
never stored, so the zero polynomial has an empty term map.  Values are
immutable by discipline: no method mutates `terms` after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ChartMismatch, DimensionError

Exponent = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class Chart:
    """A rational coordinate chart with coordinates x1..x_dim."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError(f"chart dimension must be >= 1, got {self.dim}")

    def coord_names(self):
        return tuple(f"x{i + 1}" for i in range(self.dim))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Poly:
    """Polynomial in `dim` variables over Q."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Exponent, Fraction] | None = None):
        if dim < 1:
            raise DimensionError("polynomial needs at least one variable")
        clean = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != dim:
                raise DimensionError(f"exponent {exp} has wrong length for dim {dim}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            coef = _as_fraction(coef)
            if coef != 0:
                clean[exp] = clean.get(exp, Fraction(0)) + coef
                if clean[exp] == 0:
                    del clean[exp]
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "Poly":
        return cls(dim, {})

    @classmethod
    def const(cls, dim: int, c) -> "Poly":
        return cls(dim, {tuple([0] * dim): _as_fraction(c)})

    @classmethod
    def variable(cls, dim: int, i: int) -> "Poly":
        """Coordinate function x_i, 1-based index."""
        if not 1 <= i <= dim:
            raise DimensionError(f"variable index {i} out of range 1..{dim}")
        exp = [0] * dim
        exp[i - 1] = 1
        return cls(dim, {tuple(exp): Fraction(1)})

    # predicates -------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Poly"):
        if self.dim != other.dim:
            raise ChartMismatch(f"polynomials on different charts: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.dim, other)
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, Fraction(0)) + c
            if s == 0:
                terms.pop(exp, None)
            else:
                terms[exp] = s
        return Poly(self.dim, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c == 0:
                return Poly.zero(self.dim)
            return Poly(self.dim, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Poly(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(self.dim, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.dim, other)
        return isinstance(other, Poly) and self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    # calculus ---------------------------------------------------------
    def diff(self, i0: int) -> "Poly":
        """Partial derivative with respect to coordinate i0 (0-based)."""
        out = {}
        for exp, c in self.terms.items():
            e = exp[i0]
            if e == 0:
                continue
            new = list(exp)
            new[i0] = e - 1
            key = tuple(new)
            s = out.get(key, Fraction(0)) + c * e
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return Poly(self.dim, out)

    def eval(self, point: Iterable) -> Fraction:
        pt = [_as_fraction(x) for x in point]
        if len(pt) != self.dim:
            raise DimensionError("point has wrong length")
        total = Fraction(0)
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(pt, exp):
                if e:
                    v *= x ** e
            total += v
        return total

    def compose_affine(self, matrix, offset) -> "Poly":
        """Substitute x_i = sum_j matrix[i][j] t_j + offset[i]; result in len(matrix[0]) variables."""
        m = len(matrix)
        if m != self.dim:
            raise DimensionError("affine map target dimension mismatch")
        d = len(matrix[0]) if m else 0
        if d < 1:
            raise DimensionError("affine map source must have at least one variable")
        subs = []
        for i in range(m):
            p = Poly.const(d, offset[i])
            for j in range(d):
                if matrix[i][j] != 0:
                    p = p + Poly.variable(d, j + 1) * matrix[i][j]
            subs.append(p)
        out = Poly.zero(d)
        for exp, c in self.terms.items():
            term = Poly.const(d, c)
            for i, e in enumerate(exp):
                if e:
                    term = term * (subs[i] ** e)
            out = out + term
        return out

    # display ----------------------------------------------------------
    def __repr__(self):
        if self.is_zero:
            return "0"
        bits = []
        for exp in sorted(self.terms):
            c = self.terms[exp]
            factors = [f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(exp) if e]
            mono = "*".join(factors)
            if mono:
                bits.append(f"{c}*{mono}" if c != 1 else mono)
            else:
                bits.append(str(c))
        return " + ".join(bits)
