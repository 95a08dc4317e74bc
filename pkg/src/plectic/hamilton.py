"""Hamiltonian pairs and the bigraded bracket algebra on an n-plectic chart.

A chart with a closed nondegenerate (n+1)-form omega carries Hamiltonian
pairs (alpha, v) with d(alpha) = -i_v(omega).  Dressing a pair of field
degree k with u^(k-1), where u is a formal variable of bidegree (-1, 1),
places it in the degree-(0, k-1) slot of a bigraded space; the k-ary
brackets below act on such elements and their verification reports.

Bidegree bookkeeping for a part (form, upow=j):
    deg1 = n - j - 1 - deg(form),   total degree = deg1 + j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (ChartMismatch, DegreeError, MissingHamiltonian,
                     NotClosed, NotHamiltonian, SignConvention)
from .exterior import (Form, MultiVec, Permutation, ext_d, interior,
                       koszul_sign, lie_bracket, perm_sign, schouten,
                       unshuffles, wedge, wedge_all, homotopy_primitive)
from .linalg import rank
from .poly import Chart, Poly


# ---------------------------------------------------------------------------
# plectic structure and Hamiltonian pairs
# ---------------------------------------------------------------------------


class Plectic:
    """A chart with a closed (n+1)-form, nondegenerate at sample points."""

    __slots__ = ("chart", "n", "omega", "sample_points")

    def __init__(self, chart: Chart, n: int, omega: Form, sample_points=None):
        if n < 1:
            raise DegreeError("plectic degree n must be >= 1")
        if omega.chart != chart:
            raise ChartMismatch("omega lives on a different chart")
        if omega.degree != n + 1:
            raise DegreeError(f"omega must have degree {n + 1}, got {omega.degree}")
        residual = ext_d(omega)
        if not residual.is_zero:
            raise NotClosed("omega is not closed", residual=residual)
        pts = tuple(tuple(Fraction(x) for x in p) for p in (sample_points or [tuple([0] * chart.dim)]))
        for p in pts:
            if not self._nondegenerate_at(chart, omega, p):
                raise DegreeError(f"omega degenerate at sample point {p}")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "sample_points", pts)

    def __setattr__(self, *a):
        raise AttributeError("immutable value")

    @staticmethod
    def _nondegenerate_at(chart, omega, point) -> bool:
        m = chart.dim
        col_index = {idx: k for k, idx in
                     enumerate(itertools.combinations(range(m), omega.degree - 1))}
        rows = []
        for i in range(m):
            row = [Fraction(0)] * len(col_index)
            contracted = interior(MultiVec(chart, 1, {(i,): Poly.const(m, 1)}), omega)
            for idx, poly in contracted.terms.items():
                row[col_index[idx]] = poly.eval(point)
            rows.append(row)
        return rank(rows) == m

    @classmethod
    def standard(cls, m: int) -> "Plectic":
        """Volume form on an m-dimensional chart: n = m - 1."""
        chart = Chart(m)
        omega = Form(chart, m, {tuple(range(m)): Poly.const(m, 1)})
        return cls(chart, m - 1, omega)

    def theta(self) -> Form:
        """Canonical global primitive of omega (radial homotopy)."""
        return homotopy_primitive(self.omega)

    def __eq__(self, other):
        return (isinstance(other, Plectic) and self.chart == other.chart
                and self.n == other.n and self.omega == other.omega)

    def __hash__(self):
        return hash((self.chart, self.n, self.omega))

    def __repr__(self):
        return f"Plectic(dim={self.chart.dim}, n={self.n})"


def hamiltonian_residual(plectic: Plectic, field: MultiVec) -> Form:
    """d i_v omega; the field preserves omega exactly when this vanishes."""
    return ext_d(interior(field, plectic.omega))


class HamPair:
    """A form together with a generating field, d(alpha) = -i_v(omega)."""

    __slots__ = ("plectic", "alpha", "field")

    def __init__(self, plectic: Plectic, alpha: Form, field: MultiVec, check: bool = True):
        if field.chart != plectic.chart or alpha.chart != plectic.chart:
            raise ChartMismatch("pair members on a different chart")
        k = field.degree
        if k > plectic.n:
            raise DegreeError(f"field degree {k} exceeds n={plectic.n}")
        if not alpha.is_zero and alpha.degree != plectic.n - k:
            raise DegreeError(f"form degree {alpha.degree} != n-k = {plectic.n - k}")
        if check:
            res = ext_d(alpha) + interior(field, plectic.omega)
            if not res.is_zero:
                raise NotHamiltonian("d(alpha) != -i_v(omega)", residual=res)
            inv = hamiltonian_residual(plectic, field)
            if not inv.is_zero:
                raise NotHamiltonian("field does not preserve omega", residual=inv)
        object.__setattr__(self, "plectic", plectic)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "field", field)

    def __setattr__(self, *a):
        raise AttributeError("immutable value")

    @property
    def total_degree(self) -> int:
        """Degree of the u-dressed element: field degree minus one."""
        return self.field.degree - 1

    def __eq__(self, other):
        return (isinstance(other, HamPair) and self.plectic == other.plectic
                and self.alpha == other.alpha and self.field == other.field)

    def __repr__(self):
        return f"HamPair(alpha={self.alpha!r}, field={self.field!r})"


def solve_hamiltonian(plectic: Plectic, field: MultiVec) -> HamPair:
    """Canonical pair for a field preserving omega: alpha = -H(i_v omega)."""
    if field.degree > plectic.n:
        raise DegreeError(f"field degree {field.degree} exceeds n={plectic.n}")
    contraction = interior(field, plectic.omega)
    res = ext_d(contraction)
    if not res.is_zero:
        raise NotHamiltonian("field does not preserve omega", residual=res)
    if contraction.is_zero:
        alpha = Form.zero(plectic.chart, plectic.n - field.degree)
    else:
        alpha = -homotopy_primitive(contraction, check=False)
    return HamPair(plectic, alpha, field)


# ---------------------------------------------------------------------------
# u-graded elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UPart:
    """One homogeneous piece: form * u^upow, with an optional generating field."""

    form: Form
    upow: int
    ham: MultiVec | None = None

    def deg1(self, n: int) -> int:
        return n - self.upow - 1 - self.form.degree

    def total(self, n: int) -> int:
        return self.deg1(n) + self.upow


class UElement:
    """Finite sum of u-dressed forms on one plectic chart."""

    __slots__ = ("plectic", "parts")

    def __init__(self, plectic: Plectic, parts=()):
        merged = {}
        for part in parts:
            if part.form.chart != plectic.chart:
                raise ChartMismatch("part on a different chart")
            if part.upow < 0:
                raise DegreeError("negative u power")
            if part.deg1(plectic.n) < 0 and not part.form.is_zero:
                raise DegreeError(f"part has negative first degree: upow={part.upow}, "
                                  f"form degree={part.form.degree}")
            key = (part.upow, part.form.degree)
            if key in merged:
                prev = merged[key]
                ham = None
                if prev.ham is not None and part.ham is not None:
                    ham = prev.ham + part.ham
                elif prev.ham is not None and part.form.is_zero:
                    ham = prev.ham
                elif part.ham is not None and prev.form.is_zero:
                    ham = part.ham
                merged[key] = UPart(prev.form + part.form, part.upow, ham)
            else:
                merged[key] = part
        object.__setattr__(self, "plectic", plectic)
        object.__setattr__(self, "parts", tuple(merged[k] for k in sorted(merged)))

    def __setattr__(self, *a):
        raise AttributeError("immutable value")

    @property
    def is_zero(self) -> bool:
        return all(p.form.is_zero for p in self.parts)

    def nonzero_parts(self):
        return tuple(p for p in self.parts if not p.form.is_zero)

    def total_degree(self):
        """Common total degree of the nonzero parts (None when zero)."""
        degs = {p.total(self.plectic.n) for p in self.nonzero_parts()}
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeError(f"inhomogeneous element, total degrees {sorted(degs)}")
        return degs.pop()

    def __add__(self, other):
        if self.plectic != other.plectic:
            raise ChartMismatch("elements on different plectic charts")
        return UElement(self.plectic, self.parts + other.parts)

    def scale(self, c):
        return UElement(self.plectic,
                        tuple(UPart(p.form.scale(c), p.upow,
                                    None if p.ham is None else p.ham.scale(c))
                              for p in self.parts))

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, UElement) or self.plectic != other.plectic:
            return NotImplemented
        mine = {(p.upow, p.form.degree): p.form for p in self.nonzero_parts()}
        theirs = {(p.upow, p.form.degree): p.form for p in other.nonzero_parts()}
        return mine == theirs

    def __repr__(self):
        if self.is_zero:
            return "UElement(0)"
        return "UElement(" + " + ".join(f"({p.form!r})u^{p.upow}" for p in self.nonzero_parts()) + ")"


def u_shift(pair: HamPair) -> UElement:
    """Dress a pair of field degree k with u^(k-1), landing in first degree 0."""
    k = pair.field.degree
    if k < 1:
        raise DegreeError("u_shift needs a field of degree >= 1")
    return UElement(pair.plectic, (UPart(pair.alpha, k - 1, pair.field),))


def extract_codim(x: UElement, k: int) -> Form:
    """Coefficient form at u^k (zero form when absent)."""
    total = Form.zero(x.plectic.chart, max(x.plectic.n - k - 1, 0))
    for p in x.parts:
        if p.upow == k and not p.form.is_zero:
            total = total + p.form
    return total


# ---------------------------------------------------------------------------
# brackets
# ---------------------------------------------------------------------------


def l1(x: UElement) -> UElement:
    """Differential: d on parts of first degree >= 1, zero on degree-0 parts.

    A differentiated part that lands in first degree 0 carries the zero
    field as its generator, so downstream brackets treat it correctly.
    """
    n = x.plectic.n
    out = []
    for p in x.parts:
        if p.deg1(n) >= 1:
            form = ext_d(p.form)
            ham = None
            if p.deg1(n) - 1 == 0:
                ham = MultiVec.zero(x.plectic.chart, p.upow + 1)
            out.append(UPart(form, p.upow, ham))
    return UElement(x.plectic, tuple(out))


def _part_bracket_ham(p1: UPart, p2: UPart) -> MultiVec:
    """Generating field of a binary bracket: (-1)^(|a||b|) [v_b, v_a]."""
    sign = (-1) ** (p1.upow * p2.upow)
    return schouten(p2.ham, p1.ham).scale(sign)


def ham_of_l2(a: HamPair, b: HamPair) -> MultiVec:
    """Generating field of the binary bracket of two pairs: the graded
    bracket of the fields in reversed order, cross-checked exactly against
    the derivative of the bracket form."""
    sign = (-1) ** (a.total_degree * b.total_degree)
    out = schouten(b.field, a.field).scale(sign)
    bracket = lk([u_shift(a), u_shift(b)])
    lhs = ext_d(extract_codim(bracket, a.total_degree + b.total_degree))
    rhs = -interior(out, a.plectic.omega)
    if lhs != rhs:
        raise SignConvention("d l2(a,b) != -i_(ham) omega")
    return out


def lk(args, k: int | None = None) -> UElement:
    """k-ary bracket of u-graded elements (k >= 2).

    Vanishes on any part of positive first degree; on first-degree-0 parts
    it contracts omega with the wedge of the generating fields, with sign
    (-1)^(sum (i-1)(|a_i|+1)), and u-powers add.  Binary results carry
    their generating field, checked against the derivative of the form.
    """
    args = list(args)
    if k is None:
        k = len(args)
    if k != len(args) or k < 2:
        raise DegreeError(f"lk needs k >= 2 matching the argument count, got {k}/{len(args)}")
    plectic = args[0].plectic
    for a in args:
        if a.plectic != plectic:
            raise ChartMismatch("bracket arguments on different plectic charts")
    n = plectic.n
    out_parts = []
    for combo in itertools.product(*[a.parts for a in args]):
        if any(p.form.is_zero and p.ham is None for p in combo):
            continue
        upow = sum(p.upow for p in combo)
        if any(p.deg1(n) > 0 for p in combo):
            # structural zero of the bracket; keep the bidegree slot
            deg = n - 1 - k - upow + 2  # = (n+1) - sum(deg v_i) at deg1=0 reference
            out_parts.append(UPart(Form.zero(plectic.chart, max(deg, 0)), upow, None))
            continue
        for p in combo:
            if p.ham is None:
                raise MissingHamiltonian("bracket argument part lacks a generating field")
        sign = (-1) ** sum(i * (p.upow + 1) for i, p in enumerate(combo))
        fields = [p.ham for p in combo]
        wedge_field = wedge_all(fields)
        form = interior(wedge_field, plectic.omega).scale(sign)
        if form.is_zero:
            form = Form.zero(plectic.chart,
                             max(plectic.omega.degree - sum(f.degree for f in fields), 0))
        # binary results stay bracket-composable; consistency of this field
        # with the form is ham_of_l2's contract, not re-checked here so that
        # corrupted inputs surface as a nonzero coherence residual
        ham = _part_bracket_ham(combo[0], combo[1]) if k == 2 else None
        out_parts.append(UPart(form, upow, ham))
    return UElement(plectic, tuple(out_parts))


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkewReport:
    k: int
    checked: int
    first_violation: tuple | None

    @property
    def passed(self) -> bool:
        return self.first_violation is None


def check_skew(args) -> SkewReport:
    """Exhaustive transposition check of graded skew-symmetry."""
    args = list(args)
    k = len(args)
    degrees = [a.total_degree() or 0 for a in args]
    base = lk(args)
    checked = 0
    for a, b in itertools.combinations(range(k), 2):
        images = list(range(1, k + 1))
        images[a], images[b] = images[b], images[a]
        tau = Permutation(tuple(images))
        permuted = [args[tau(i) - 1] for i in range(1, k + 1)]
        eps = koszul_sign(tau, degrees)
        lhs = lk(permuted)
        rhs = base.scale(-eps)  # (-1)^tau = -1 for a transposition
        checked += 1
        if lhs != rhs:
            return SkewReport(k, checked, ((a, b), eps))
    return SkewReport(k, checked, None)


@dataclass(frozen=True)
class JacobiTerm:
    i: int
    j: int
    sigma: tuple
    sign: int
    contribution: UElement


@dataclass(frozen=True)
class JacobiReport:
    m: int
    residual: UElement
    ledger: tuple

    @property
    def holds(self) -> bool:
        return self.residual.is_zero


def _structurally_zero(i: int, j: int, selected) -> bool:
    """Whether the (i, j) nesting cannot contribute for these arguments.

    Inner brackets of arity >= 3 land in positive first degree, so an
    outer bracket of arity >= 2 kills them; an inner differential either
    vanishes on degree-0 parts or produces a zero generating field.
    """
    if j == 1:
        return False
    if i >= 3:
        return True
    if i == 1:
        return True  # l1 image has zero field (or vanishes outright)
    return False


def check_jacobi(args, paranoid: bool = False) -> JacobiReport:
    """Evaluate the order-m coherence sum over unshuffles; zero iff it holds.

    In the default mode, nestings that vanish structurally are skipped;
    `paranoid` evaluates every term of the sum literally.
    """
    args = list(args)
    m = len(args)
    plectic = args[0].plectic
    degrees = [a.total_degree() or 0 for a in args]
    residual = UElement(plectic)
    ledger = []
    for i in range(1, m + 1):
        j = m + 1 - i
        for sigma in unshuffles(i, m - i):
            selected = [args[sigma(t) - 1] for t in range(1, m + 1)]
            if not paranoid and _structurally_zero(i, j, selected):
                continue
            inner = l1(selected[0]) if i == 1 else lk(selected[:i])
            outer = l1(inner) if j == 1 else lk([inner] + selected[i:])
            sign = perm_sign(sigma) * koszul_sign(sigma, degrees) * ((-1) ** (i * (j - 1)))
            contribution = outer.scale(sign)
            residual = residual + contribution
            ledger.append(JacobiTerm(i, j, sigma.images, sign, contribution))
    return JacobiReport(m, residual, tuple(ledger))


@dataclass(frozen=True)
class LemmaTerm:
    i: int
    j: int
    exponent: int


@dataclass(frozen=True)
class InvarianceReport:
    lhs: Form
    rhs: Form
    terms: tuple

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def verify_lemma31(plectic: Plectic, fields) -> InvarianceReport:
    """Compare d i_(v1^...^vm) omega with its pairwise-bracket expansion."""
    fields = list(fields)
    m = len(fields)
    if m < 2:
        raise DegreeError("need at least two fields")
    for t, v in enumerate(fields):
        res = hamiltonian_residual(plectic, v)
        if not res.is_zero:
            raise NotHamiltonian(f"field #{t} does not preserve omega", residual=res)
    lhs = ext_d(interior(wedge_all(fields), plectic.omega))
    degs = [v.degree for v in fields]
    rhs = Form.zero(plectic.chart, lhs.degree)
    terms = []
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            exponent = (sum(degs[j + a - 1] for a in range(1, m - j + 1))
                        + sum((degs[j - 1] - 1) * degs[a - 1] for a in range(1, j))
                        + sum(degs[i - 1] * degs[a - 1] for a in range(1, i)))
            rest = [fields[t] for t in range(m) if t not in (i - 1, j - 1)]
            bracket = schouten(fields[j - 1], fields[i - 1])
            wedge_field = wedge_all([bracket] + rest) if rest else bracket
            rhs = rhs + interior(wedge_field, plectic.omega).scale((-1) ** exponent)
            terms.append(LemmaTerm(i, j, exponent % 2))
    return InvarianceReport(lhs, rhs, tuple(terms))


@dataclass(frozen=True)
class HeisenbergReport:
    commuting: bool
    witness: tuple | None  # (i, j, bracket) of the first non-commuting pair
    closures: tuple        # ((k, subset), d-closed?) entries

    @property
    def passed(self) -> bool:
        return self.commuting and all(ok for _, ok in self.closures)


def heisenberg_check(plectic: Plectic, fields) -> HeisenbergReport:
    """Commuting-family check: pairwise brackets vanish and every
    contraction i_(v_i1 ^ ... ^ v_ik) omega is closed, 2 <= k <= n."""
    fields = list(fields)
    for t, v in enumerate(fields):
        if v.degree != 1:
            raise DegreeError(f"field #{t} must have degree 1")
        res = hamiltonian_residual(plectic, v)
        if not res.is_zero:
            raise NotHamiltonian(f"field #{t} does not preserve omega", residual=res)
    witness = None
    for a, b in itertools.combinations(range(len(fields)), 2):
        br = lie_bracket(fields[b], fields[a])
        if not br.is_zero:
            witness = (a, b, br)
            break
    closures = []
    for k in range(2, plectic.n + 1):
        for subset in itertools.combinations(range(len(fields)), k):
            contraction = interior(wedge_all([fields[t] for t in subset]), plectic.omega)
            closures.append(((k, subset), ext_d(contraction).is_zero))
    nested_ok = True
    if witness is None:
        for a, b in itertools.combinations(range(len(fields)), 2):
            if not schouten(fields[b], fields[a]).is_zero:
                nested_ok = False
                break
    closures = tuple(closures)
    return HeisenbergReport(witness is None and nested_ok, witness, closures)
