"""Exact circle phases, gerbe data, integrality checks, and inner products.

Angles are stored as  2*pi*r + s  with exact rationals r, s.  Since pi is
irrational, two such angles agree on the circle iff the r's differ by an
integer and the s parts coincide, so phase equality is decidable.  Sums
of phases stay symbolic (PhaseSum); they collapse to exact Gaussian
rationals when every phase has residual 0 and denominator dividing 4, and
to high-precision floats otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .complexes import ObsComplex
from .errors import DegreeError, DimensionError, InputError
from .exterior import Form, ext_d
from .hamilton import Plectic
from .quadrature import integrate
from .simplices import AffSimplex


@dataclass(frozen=True)
class Phase:
    """Point of U(1): angle 2*pi*r + residual, both exact rationals."""

    r: Fraction = Fraction(0)
    residual: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "residual", Fraction(self.residual))

    @classmethod
    def identity(cls) -> "Phase":
        return cls()

    def normalized(self):
        return (self.r % 1, self.residual)

    @property
    def is_identity(self) -> bool:
        return self.r.denominator == 1 and self.residual == 0

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.r + other.r, self.residual + other.residual)

    def conj(self) -> "Phase":
        return Phase(-self.r, -self.residual)

    inverse = conj

    def __pow__(self, k: int) -> "Phase":
        return Phase(self.r * k, self.residual * k)

    def __eq__(self, other):
        return isinstance(other, Phase) and self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def __repr__(self):
        if self.residual:
            return f"Phase(2pi*{self.r} + {self.residual})"
        return f"Phase(2pi*{self.r})"


@dataclass(frozen=True)
class Scale:
    """Multiplier for action integrals: angle = (2*pi*two_pi + plain) * I."""

    two_pi: Fraction = Fraction(0)
    plain: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "two_pi", Fraction(self.two_pi))
        object.__setattr__(self, "plain", Fraction(self.plain))

    @classmethod
    def parse(cls, text: str) -> "Scale":
        """Accepts '<q>x2pi', '<q>pi', or a plain rational '<q>'."""
        t = text.strip().replace(" ", "")
        m = re.fullmatch(r"(-?\d+(?:/\d+)?)x2pi", t)
        if m:
            return cls(two_pi=Fraction(m.group(1)))
        m = re.fullmatch(r"(-?\d+(?:/\d+)?)pi", t)
        if m:
            return cls(two_pi=Fraction(m.group(1)) / 2)
        m = re.fullmatch(r"(-?\d+(?:/\d+)?)", t)
        if m:
            return cls(plain=Fraction(m.group(1)))
        raise InputError(f"cannot parse scale {text!r}; use e.g. '3/2x2pi', '12pi' or '5/4'")

    def phase_of(self, integral: Fraction) -> Phase:
        integral = Fraction(integral)
        return Phase(self.two_pi * integral, self.plain * integral)

    def __repr__(self):
        return f"Scale(2pi*{self.two_pi} + {self.plain})"


class PhaseSum:
    """Finite formal sum of phases with rational weights (exact)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for phase, weight in (terms or {}).items():
            w = Fraction(weight)
            if w == 0:
                continue
            key = Phase(*phase.normalized())
            clean[key] = clean.get(key, Fraction(0)) + w
            if clean[key] == 0:
                del clean[key]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("immutable value")

    @classmethod
    def of(cls, phase: Phase, weight=1) -> "PhaseSum":
        return cls({phase: Fraction(weight)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PhaseSum") -> "PhaseSum":
        terms = dict(self.terms)
        for p, w in other.terms.items():
            terms[p] = terms.get(p, Fraction(0)) + w
        return PhaseSum(terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "PhaseSum":
        return PhaseSum({p: w * Fraction(c) for p, w in self.terms.items()})

    def rotate(self, phase: Phase) -> "PhaseSum":
        return PhaseSum({p * phase: w for p, w in self.terms.items()})

    def conj(self) -> "PhaseSum":
        return PhaseSum({p.conj(): w for p, w in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, PhaseSum) and self.terms == other.terms

    def exact_re_im(self):
        """(re, im) as exact rationals when all phases lie in {1, i, -1, -i}."""
        re = Fraction(0)
        im = Fraction(0)
        table = {Fraction(0): (1, 0), Fraction(1, 2): (-1, 0),
                 Fraction(1, 4): (0, 1), Fraction(3, 4): (0, -1)}
        for p, w in self.terms.items():
            if p.residual != 0 or (p.r % 1) not in table:
                return None
        for p, w in self.terms.items():
            cr, ci = table[p.r % 1]
            re += w * cr
            im += w * ci
        return re, im

    def approx(self, dps: int = 30):
        """High-precision complex value via mpmath."""
        import mpmath
        with mpmath.workdps(dps):
            total = mpmath.mpc(0)
            for p, w in self.terms.items():
                angle = 2 * mpmath.pi * mpmath.mpf(p.r.numerator) / p.r.denominator \
                    + mpmath.mpf(p.residual.numerator) / p.residual.denominator
                weight = mpmath.mpf(w.numerator) / w.denominator
                total += weight * mpmath.mpc(mpmath.cos(angle), mpmath.sin(angle))
            return total

    def __repr__(self):
        if self.is_zero:
            return "PhaseSum(0)"
        return "PhaseSum(" + " + ".join(f"{w}*e^i({p!r})" for p, w in sorted(
            self.terms.items(), key=lambda kv: kv[0].normalized())) + ")"


# ---------------------------------------------------------------------------
# gerbe data on simplices
# ---------------------------------------------------------------------------


def transition_phase(alpha: Form, edge: AffSimplex, scale: Scale) -> Phase:
    """Edge holonomy phase of a 1-form at the given action scale."""
    if alpha.degree != 1 or edge.dim != 1:
        raise DegreeError("transition_phase needs a 1-form on an edge")
    return scale.phase_of(integrate(alpha, edge))


def gerbe_cocycle(theta: Form, simplex: AffSimplex, scale: Scale) -> Phase:
    """Phase of the scaled integral of theta over a matching-dimension simplex."""
    if theta.degree != simplex.dim:
        raise DegreeError("form degree must match the simplex dimension")
    return scale.phase_of(integrate(theta, simplex))


@dataclass(frozen=True)
class CycleReport:
    closed: bool
    integral: Fraction
    phase: Phase

    @property
    def integral_ok(self) -> bool:
        return self.phase.is_identity


@dataclass(frozen=True)
class PrequantumReport:
    cycles: tuple

    @property
    def passed(self) -> bool:
        return all(c.integral_ok for c in self.cycles)


def _chain_boundary_closed(chain) -> bool:
    acc = {}
    for coef, simplex in chain:
        for i in range(simplex.dim + 1):
            face = simplex.face(i)
            order = sorted(range(len(face.vertices)), key=lambda t: face.vertices[t])
            parity = 1
            seen = list(order)
            for a in range(len(seen)):
                for b in range(a + 1, len(seen)):
                    if seen[a] > seen[b]:
                        parity = -parity
            key = tuple(face.vertices[t] for t in order)
            acc[key] = acc.get(key, 0) + coef * ((-1) ** i) * parity
    return all(v == 0 for v in acc.values())


def prequantum_check(plectic: Plectic, chains, scale: Scale,
                     require_closed: bool = False) -> PrequantumReport:
    """Integrality of the scaled omega-integral over each chain.

    A chain is a list of (integer coefficient, (n+1)-dimensional affine
    simplex) pairs.  Closedness of the formal boundary is always reported;
    with require_closed it becomes a hard precondition.  The check passes
    when the scaled integral is a multiple of 2*pi, reported exactly.
    """
    reports = []
    for ci, chain in enumerate(chains):
        chain = list(chain)
        for coef, simplex in chain:
            if simplex.dim != plectic.n + 1:
                raise DimensionError(
                    f"chain {ci}: simplex dimension {simplex.dim} != n+1 = {plectic.n + 1}")
        closed = _chain_boundary_closed(chain)
        if require_closed and not closed:
            raise InputError(f"chain {ci} is not closed")
        total = Fraction(0)
        for coef, simplex in chain:
            total += coef * integrate(plectic.omega, simplex)
        reports.append(CycleReport(closed, total, scale.phase_of(total)))
    return PrequantumReport(tuple(reports))


@dataclass(frozen=True)
class AssociativityReport:
    face_phases: tuple
    product: Phase
    direct: Phase

    @property
    def stokes_equal(self) -> bool:
        return self.product == self.direct

    @property
    def trivial(self) -> bool:
        return self.product.is_identity

    @property
    def defect(self) -> Fraction:
        return self.product.r % 1


def cocycle_associativity(plectic: Plectic, tetra: AffSimplex, scale: Scale,
                          theta: Form | None = None) -> AssociativityReport:
    """Alternating product of face phases of theta against the omega phase.

    The two agree identically (Stokes, exact rationals); the product is
    the identity precisely when the scaled omega-integral is integral.
    """
    if plectic.n != 2:
        raise DegreeError("associativity check is for 2-plectic charts")
    if tetra.dim != 3:
        raise DimensionError("need a 3-simplex")
    theta = theta if theta is not None else plectic.theta()
    if ext_d(theta) != plectic.omega:
        raise DegreeError("theta is not a primitive of omega")
    phases = []
    total = Phase.identity()
    for i in range(4):
        p = gerbe_cocycle(theta, tetra.face(i), scale)
        phases.append(p)
        total = total * (p ** ((-1) ** i))
    direct = scale.phase_of(integrate(plectic.omega, tetra))
    return AssociativityReport(tuple(phases), total, direct)


# ---------------------------------------------------------------------------
# state cochains, kernels, inner product
# ---------------------------------------------------------------------------


class StateCochain:
    """Total U(1)-valued cochain on one stratum of a complex."""

    __slots__ = ("level", "values")

    def __init__(self, level: int, values):
        values = dict(values)
        for idx, p in values.items():
            if not isinstance(p, Phase):
                raise InputError(f"state value at index {idx} is not a Phase")
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "values", values)

    def __setattr__(self, *a):
        raise AttributeError("immutable value")

    @classmethod
    def constant(cls, cx: ObsComplex, level: int, phase: Phase = Phase.identity()):
        return cls(level, {t: phase for t in range(cx.size(level))})

    def rotate(self, phase: Phase) -> "StateCochain":
        return StateCochain(self.level, {t: p * phase for t, p in self.values.items()})

    def require_total(self, cx: ObsComplex):
        missing = [t for t in range(cx.size(self.level)) if t not in self.values]
        if missing:
            raise InputError(f"state cochain missing values at indices {missing}")


class KernelCochain:
    """Action phases on stratum level; cocycle flag from the coboundary."""

    __slots__ = ("level", "values", "cocycle", "deltas")

    def __init__(self, level: int, values, cocycle: bool, deltas):
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "values", tuple(values))
        object.__setattr__(self, "cocycle", cocycle)
        object.__setattr__(self, "deltas", tuple(deltas))

    def __setattr__(self, *a):
        raise AttributeError("immutable value")


def kernel_from_theta(cx: ObsComplex, level: int, scale: Scale,
                      theta: Form | None = None) -> KernelCochain:
    """Kernel phases on stratum level+1 from action integrals.

    With a global form `theta` of degree level+1 the value on a simplex is
    the scaled integral of theta over it, and the coboundary telescopes by
    Stokes to the scaled integral of d(theta), so the cocycle flag tracks
    an exact integrality condition.  Without `theta` each simplex
    integrates its own canonical form (the per-simplex reading; no Stokes
    relation is implied).
    """
    k1 = level + 1
    if cx.size(k1) == 0:
        raise InputError(f"complex has no stratum in degree {k1}")
    if theta is not None and theta.degree != k1:
        raise DegreeError(f"theta must have degree {k1}")
    values = []
    for x in cx.stratum(k1):
        form = theta if theta is not None else x.alpha
        values.append(scale.phase_of(integrate(form, x.simplex)))
    deltas = []
    flag = True
    for t in range(cx.size(k1 + 1)):
        d = Phase.identity()
        for i, fidx in cx.incidence[k1 + 1][t]:
            d = d * (values[fidx] ** ((-1) ** i))
        deltas.append(d)
        flag = flag and d.is_identity
    return KernelCochain(k1, values, flag, deltas)


def inner_product(cx: ObsComplex, psi_f: StateCochain, psi_i: StateCochain,
                  kernel: KernelCochain) -> PhaseSum:
    """Pairing sum over the (k+1)-stratum.

    Convention: the final state reads the first face (d_0) and the initial
    state the last face (d_(k+1)) of every interpolating simplex:
        sum_tau  conj(psi_f(d_0 tau)) * e^(i K(tau)) * psi_i(d_(k+1) tau).
    """
    k = psi_f.level
    if psi_i.level != k or kernel.level != k + 1:
        raise InputError("levels must satisfy states at k, kernel at k+1")
    psi_f.require_total(cx)
    psi_i.require_total(cx)
    total = PhaseSum()
    for t in range(cx.size(k + 1)):
        faces = dict(cx.incidence[k + 1][t])
        first, last = faces[0], faces[k + 1]
        term = psi_f.values[first].conj() * kernel.values[t] * psi_i.values[last]
        total = total + PhaseSum.of(term)
    return total
