"""Exact polynomial exterior calculus on a rational chart.

Forms and multivector fields are stored as maps from strictly increasing
coordinate-index tuples (0-based internally) to polynomial coefficients.
Conventions that everything downstream depends on:

  * interior product with a decomposable multivector applies the factors
    inductively, innermost first: contracting with v1^...^vq means
    contracting with v1 first, then v2, and so on;
  * Lie derivative along a multivector v is d i_v - (-1)^|v| i_v d;
  * the bracket of multivector fields extends the Lie bracket of vector
    fields by the decomposable double-sum formula with signs (-1)^(i+j),
    and acts on functions as a derivation (sign-extended by the graded
    Leibniz rule).

All operations are pure; no value is mutated after construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ChartMismatch, DegreeError, DimensionError, NotClosed
from .poly import Chart, Poly

# ---------------------------------------------------------------------------
# permutation combinatorics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n}; images[i] = sigma(i+1)."""

    images: tuple

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection of 1..{n}: {self.images}")

    @property
    def size(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))


def perm_sign(perm: Permutation) -> int:
    """Ordinary permutation sign (-1)^sigma."""
    seq = list(perm.images)
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


def koszul_sign(perm: Permutation, degrees: Sequence[int]) -> int:
    """Koszul sign eps(sigma) for x_1^...^x_n = eps * x_s(1)^...^x_s(n).

    Excludes the ordinary permutation sign: only swaps of two odd-degree
    elements contribute a -1.
    """
    n = perm.size
    if len(degrees) != n:
        raise DegreeError(f"{n}-element permutation with {len(degrees)} degrees")
    seq = list(perm.images)
    sign = 1
    for a in range(1, n):
        b = a
        while b > 0 and seq[b - 1] > seq[b]:
            if (degrees[seq[b - 1] - 1] * degrees[seq[b] - 1]) % 2:
                sign = -sign
            seq[b - 1], seq[b] = seq[b], seq[b - 1]
            b -= 1
    return sign


def unshuffles(p: int, q: int):
    """All (p,q)-unshuffles of S_{p+q}, lexicographic in the first block."""
    if p < 0 or q < 0:
        raise ValueError("block sizes must be nonnegative")
    out = []
    universe = range(1, p + q + 1)
    for first in itertools.combinations(universe, p):
        rest = tuple(i for i in universe if i not in first)
        out.append(Permutation(first + rest))
    return out


# ---------------------------------------------------------------------------
# graded alternating objects
# ---------------------------------------------------------------------------


def _merge_sign(left, right):
    """Sign to sort the concatenation of two increasing index tuples, or None on collision."""
    if set(left) & set(right):
        return None, ()
    merged = tuple(sorted(left + right))
    inversions = sum(1 for i in left for j in right if i > j)
    return (-1) ** inversions, merged


class Alternating:
    """Common storage for forms and multivector fields."""

    __slots__ = ("chart", "degree", "terms")
    kind = "alternating"

    def __init__(self, chart: Chart, degree: int, terms=None):
        if degree < 0:
            raise DegreeError(f"negative degree {degree}")
        clean = {}
        for idx, poly in (terms or {}).items():
            idx = tuple(int(i) for i in idx)
            if list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple must be strictly increasing: {idx}")
            if len(idx) != degree:
                raise DegreeError(f"index tuple {idx} has wrong length for degree {degree}")
            if idx and (idx[0] < 0 or idx[-1] >= chart.dim):
                raise DimensionError(f"index out of range for chart dim {chart.dim}: {idx}")
            if not isinstance(poly, Poly):
                poly = Poly.const(chart.dim, poly)
            if poly.dim != chart.dim:
                raise ChartMismatch("coefficient polynomial on wrong chart")
            if not poly.is_zero:
                acc = clean.get(idx)
                clean[idx] = poly if acc is None else acc + poly
                if clean[idx].is_zero:
                    del clean[idx]
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *args):
        raise AttributeError("immutable value")

    # --- constructors ---
    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls(chart, degree, {})

    # --- predicates ---
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.chart != other.chart:
            raise ChartMismatch("values on different charts")
        if type(self) is not type(other):
            raise TypeError(f"cannot mix {type(self).__name__} and {type(other).__name__}")

    # --- linear structure ---
    def __add__(self, other):
        self._check(other)
        if self.degree != other.degree:
            if self.is_zero:
                return other
            if other.is_zero:
                return self
            raise DegreeError(f"adding degrees {self.degree} and {other.degree}")
        terms = dict(self.terms)
        for idx, p in other.terms.items():
            acc = terms.get(idx)
            terms[idx] = p if acc is None else acc + p
            if terms[idx].is_zero:
                del terms[idx]
        return type(self)(self.chart, self.degree, terms)

    def __neg__(self):
        return type(self)(self.chart, self.degree, {i: -p for i, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, Poly):
            return type(self)(self.chart, self.degree, {i: p * c for i, p in self.terms.items()})
        c = Fraction(c)
        return type(self)(self.chart, self.degree, {i: p * c for i, p in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Alternating) or type(self) is not type(other):
            return NotImplemented
        if self.chart != other.chart:
            return False
        if self.is_zero and other.is_zero:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.chart, self.degree,
                     frozenset((i, hash(p)) for i, p in self.terms.items())))

    def __repr__(self):
        if self.is_zero:
            return f"0<{self.kind} deg {self.degree}>"
        sym = "dx" if isinstance(self, Form) else "e"
        bits = []
        for idx in sorted(self.terms):
            label = "^".join(f"{sym}{i + 1}" for i in idx) or "1"
            bits.append(f"({self.terms[idx]}) {label}")
        return " + ".join(bits)


class Form(Alternating):
    kind = "form"


class MultiVec(Alternating):
    kind = "multivector"

    @classmethod
    def from_vector(cls, chart: Chart, components) -> "MultiVec":
        """Degree-1 field with constant rational components."""
        comps = list(components)
        if len(comps) != chart.dim:
            raise DimensionError("component count must match chart dimension")
        return cls(chart, 1, {(i,): Poly.const(chart.dim, c)
                              for i, c in enumerate(comps) if Fraction(c) != 0})

    def constant_components(self):
        """Components of a degree-1 field with constant coefficients."""
        if self.degree != 1:
            raise DegreeError("constant_components needs a degree-1 field")
        out = [Fraction(0)] * self.chart.dim
        zero_exp = tuple([0] * self.chart.dim)
        for (i,), p in self.terms.items():
            if set(p.terms) - {zero_exp}:
                raise ValueError("field is not constant")
            out[i] = p.terms.get(zero_exp, Fraction(0))
        return tuple(out)


def wedge(a: Alternating, b: Alternating) -> Alternating:
    """Exterior product; both arguments must be the same kind on one chart."""
    a._check(b)
    out_terms = {}
    for ia, pa in a.terms.items():
        for ib, pb in b.terms.items():
            sign, merged = _merge_sign(ia, ib)
            if sign is None:
                continue
            contrib = pa * pb * sign
            acc = out_terms.get(merged)
            out_terms[merged] = contrib if acc is None else acc + contrib
            if out_terms[merged].is_zero:
                del out_terms[merged]
    return type(a)(a.chart, a.degree + b.degree, out_terms)


def wedge_all(values: Sequence[Alternating]) -> Alternating:
    out = values[0]
    for v in values[1:]:
        out = wedge(out, v)
    return out


def ext_d(a: Form) -> Form:
    """Exterior derivative."""
    chart = a.chart
    out = {}
    for idx, poly in a.terms.items():
        for i in range(chart.dim):
            dp = poly.diff(i)
            if dp.is_zero or i in idx:
                continue
            pos = sum(1 for j in idx if j < i)
            key = tuple(sorted(idx + (i,)))
            contrib = dp * ((-1) ** pos)
            acc = out.get(key)
            out[key] = contrib if acc is None else acc + contrib
            if out[key].is_zero:
                del out[key]
    return Form(chart, a.degree + 1, out)


def _contract_basis(i: int, form: Form) -> Form:
    """Single contraction with the coordinate field for index i (0-based)."""
    out = {}
    for idx, poly in form.terms.items():
        if i not in idx:
            continue
        pos = idx.index(i)
        key = idx[:pos] + idx[pos + 1:]
        contrib = poly * ((-1) ** pos)
        acc = out.get(key)
        out[key] = contrib if acc is None else acc + contrib
        if out[key].is_zero:
            del out[key]
    return Form(form.chart, form.degree - 1, out)


def interior(v: MultiVec, a: Form) -> Form:
    """Interior product i_v a, degree |a| - |v| (zero when that is negative).

    Basis multivectors contract factor by factor, lowest index first, so
    i_{e1^e2} = i_{e2} i_{e1}; coefficients multiply through.
    """
    if v.chart != a.chart:
        raise ChartMismatch("interior product across charts")
    if not isinstance(v, MultiVec) or not isinstance(a, Form):
        raise TypeError("interior(v: MultiVec, a: Form)")
    if v.degree > a.degree:
        return Form.zero(a.chart, 0)
    total = Form.zero(a.chart, a.degree - v.degree)
    for idx, coef in v.terms.items():
        partial = a
        for i in idx:
            partial = _contract_basis(i, partial)
        total = total + partial.scale(coef)
    return total


def lie_derivative(v: MultiVec, a: Form) -> Form:
    """Graded Cartan formula: d i_v a - (-1)^|v| i_v da."""
    first = ext_d(interior(v, a))
    second = interior(v, ext_d(a)).scale((-1) ** v.degree)
    return first - second


def lie_bracket(u: MultiVec, v: MultiVec) -> MultiVec:
    """Jacobi-Lie bracket of two vector fields (degree 1 each)."""
    if u.degree != 1 or v.degree != 1:
        raise DegreeError("lie_bracket needs two degree-1 fields")
    if u.chart != v.chart:
        raise ChartMismatch("bracket across charts")
    chart = u.chart
    out = {}
    for j in range(chart.dim):
        comp = Poly.zero(chart.dim)
        for i in range(chart.dim):
            ui = u.terms.get((i,))
            vi = v.terms.get((i,))
            vj = v.terms.get((j,))
            uj = u.terms.get((j,))
            if ui is not None and vj is not None:
                comp = comp + ui * vj.diff(i)
            if vi is not None and uj is not None:
                comp = comp - vi * uj.diff(i)
        if not comp.is_zero:
            out[(j,)] = comp
    return MultiVec(chart, 1, out)


def _simple_bracket(pa: Poly, ia: int, pb: Poly, ib: int, chart: Chart) -> MultiVec:
    """Lie bracket [pa*e_ia, pb*e_ib] of two simple vector fields."""
    out = {}
    first = pa * pb.diff(ia)
    if not first.is_zero:
        out[(ib,)] = first
    second = pb * pa.diff(ib)
    if not second.is_zero:
        acc = out.get((ia,))
        out[(ia,)] = -second if acc is None else acc - second
        if out[(ia,)].is_zero:
            del out[(ia,)]
    return MultiVec(chart, 1, out)


def _derivation_on_function(u: MultiVec, g: Poly) -> MultiVec:
    """[u, g] for a function g: iterated Leibniz reduction to X(g) terms.

    For a decomposable X_1^...^X_p this is sum_a (-1)^(p-a) X_a(g) *
    X_1^...(omit a)...^X_p.
    """
    chart = u.chart
    p = u.degree
    if p == 0:
        return MultiVec.zero(chart, 0)
    out = MultiVec.zero(chart, p - 1)
    for idx, coef in u.terms.items():
        factors = [(coef if t == 0 else Poly.const(chart.dim, 1), i) for t, i in enumerate(idx)]
        for a in range(p):
            pa, ia = factors[a]
            xg = pa * g.diff(ia)
            if xg.is_zero:
                continue
            rest = [MultiVec(chart, 1, {(i,): q}) for t, (q, i) in enumerate(factors) if t != a]
            piece = wedge_all(rest) if rest else MultiVec(chart, 0, {(): Poly.const(chart.dim, 1)})
            out = out + piece.scale(xg * ((-1) ** (p - 1 - a)))
    return out


def schouten(u: MultiVec, v: MultiVec) -> MultiVec:
    """Bracket of multivector fields, degree |u|+|v|-1.

    Decomposable inputs expand by the double sum with signs (-1)^(i+j)
    over pairwise Lie brackets of the factors; a degree-0 argument is
    handled by the derivation action and graded antisymmetry.
    """
    if u.chart != v.chart:
        raise ChartMismatch("bracket across charts")
    chart = u.chart
    p, q = u.degree, v.degree
    if p == 0 and q == 0:
        return MultiVec.zero(chart, 0)
    if q == 0:
        out = MultiVec.zero(chart, p - 1)
        for _idx, g in v.terms.items():
            out = out + _derivation_on_function(u, g)
        return out
    if p == 0:
        # graded antisymmetry: [u, v] = -(-1)^((|u|-1)(|v|-1)) [v, u]
        sign = -((-1) ** ((p - 1) * (q - 1)))
        return schouten(v, u).scale(sign)
    out = MultiVec.zero(chart, p + q - 1)
    one = Poly.const(chart.dim, 1)
    for iu, cu in u.terms.items():
        fu = [(cu if t == 0 else one, i) for t, i in enumerate(iu)]
        for iv, cv in v.terms.items():
            fv = [(cv if t == 0 else one, j) for t, j in enumerate(iv)]
            for a, (pa, ia) in enumerate(fu, start=1):
                for b, (pb, ib) in enumerate(fv, start=1):
                    br = _simple_bracket(pa, ia, pb, ib, chart)
                    if br.is_zero:
                        continue
                    rest = [MultiVec(chart, 1, {(i,): fp}) for t, (fp, i) in enumerate(fu, start=1) if t != a]
                    rest += [MultiVec(chart, 1, {(j,): fp}) for t, (fp, j) in enumerate(fv, start=1) if t != b]
                    piece = wedge_all([br] + rest) if rest else br
                    out = out + piece.scale((-1) ** (a + b))
    return out


# ---------------------------------------------------------------------------
# affine maps, pullback, radial homotopy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """x = matrix . t + offset, from a source chart of dim len(matrix[0])."""

    matrix: tuple  # rows, one per target coordinate
    offset: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.matrix)
        off = tuple(Fraction(x) for x in self.offset)
        if len(rows) != len(off):
            raise DimensionError("matrix and offset sizes differ")
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise DimensionError("ragged matrix")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "offset", off)

    @property
    def target_dim(self):
        return len(self.offset)

    @property
    def source_dim(self):
        return len(self.matrix[0]) if self.matrix else 0

    @classmethod
    def from_vertices(cls, vertices) -> "AffineMap":
        """Affine map of the simplex spanned by `vertices` (standard coords)."""
        v0 = vertices[0]
        cols = [tuple(Fraction(a) - Fraction(b) for a, b in zip(v, v0)) for v in vertices[1:]]
        m = len(v0)
        rows = tuple(tuple(col[i] for col in cols) for i in range(m))
        return cls(rows, tuple(Fraction(x) for x in v0))

    def push_vector(self, t_vec):
        """Differential applied to a source vector."""
        return tuple(sum(r[j] * Fraction(t_vec[j]) for j in range(self.source_dim))
                     for r in self.matrix)

    def apply(self, t_pt):
        return tuple(o + sum(r[j] * Fraction(t_pt[j]) for j in range(self.source_dim))
                     for r, o in zip(self.matrix, self.offset))


def pullback_affine(a: Form, amap: AffineMap) -> Form:
    """Functorial pullback of a polynomial form along an affine map."""
    if amap.target_dim != a.chart.dim:
        raise DimensionError("map target must match the form's chart")
    d = amap.source_dim
    if d < 1:
        raise DimensionError("pullback target chart needs dimension >= 1")
    source = Chart(d)
    if a.degree > d:
        return Form.zero(source, a.degree)
    pulled_dx = []
    for i in range(a.chart.dim):
        row = amap.matrix[i]
        pulled_dx.append(Form(source, 1, {(j,): Poly.const(d, row[j])
                                          for j in range(d) if row[j] != 0}))
    out = Form.zero(source, a.degree)
    for idx, poly in a.terms.items():
        coef = poly.compose_affine(amap.matrix, amap.offset)
        if coef.is_zero:
            continue
        if idx:
            block = wedge_all([pulled_dx[i] for i in idx])
        else:
            block = Form(source, 0, {(): Poly.const(d, 1)})
        out = out + block.scale(coef)
    return out


def euler_contraction(a: Form) -> Form:
    """Contraction with the radial field sum_i x_i e_i."""
    chart = a.chart
    out = Form.zero(chart, a.degree - 1 if a.degree else 0)
    for i in range(chart.dim):
        xi = Poly.variable(chart.dim, i + 1)
        out = out + _contract_basis(i, a).scale(xi)
    return out


def homotopy_primitive(a: Form, check: bool = True) -> Form:
    """Radial primitive H(a) with d(H(a)) = a for closed a of degree >= 1.

    Each monomial coefficient of polynomial degree s inside a p-form term
    is contracted with the radial field and scaled by 1/(s+p).  Linear and
    deterministic, so it doubles as the canonical choice of primitive.
    """
    p = a.degree
    if p == 0:
        raise DegreeError("0-forms have no primitive")
    if check:
        da = ext_d(a)
        if not da.is_zero:
            raise NotClosed("form is not closed", residual=da)
    chart = a.chart
    out = Form.zero(chart, p - 1)
    for idx, poly in a.terms.items():
        for exp, coef in poly.terms.items():
            s = sum(exp)
            mono = Form(chart, p, {idx: Poly(chart.dim, {exp: coef})})
            out = out + euler_contraction(mono).scale(Fraction(1, s + p))
    return out


# ---------------------------------------------------------------------------
# math-facing constructors (1-based coordinate labels)
# ---------------------------------------------------------------------------


def dx(chart: Chart, *indices) -> Form:
    """dx_{i1} ^ ... ^ dx_{ip} with 1-based indices (zero on a repeat)."""
    idx = tuple(i - 1 for i in indices)
    if len(set(idx)) != len(idx):
        return Form.zero(chart, len(idx))
    return Form(chart, len(idx), {tuple(sorted(idx)): Poly.const(chart.dim, perm_of_sort(idx))})


def ddx(chart: Chart, *indices) -> MultiVec:
    """Coordinate multivector e_{i1} ^ ... ^ e_{iq}, 1-based (zero on a repeat)."""
    idx = tuple(i - 1 for i in indices)
    if len(set(idx)) != len(idx):
        return MultiVec.zero(chart, len(idx))
    return MultiVec(chart, len(idx), {tuple(sorted(idx)): Poly.const(chart.dim, perm_of_sort(idx))})


def perm_of_sort(seq) -> int:
    """Sign of the permutation sorting `seq` (distinct entries)."""
    if len(set(seq)) != len(seq):
        raise ValueError(f"repeated index in {seq}")
    sign = 1
    items = list(seq)
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            if items[a] > items[b]:
                sign = -sign
    return sign


def var(chart: Chart, i: int) -> Poly:
    """Coordinate function x_i, 1-based."""
    return Poly.variable(chart.dim, i)
