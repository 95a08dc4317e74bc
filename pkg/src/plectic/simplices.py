"""Affine observable simplices: canonical construction, faces, horn filling.

An observable k-simplex couples an affine simplex (ordered rational
vertices) with a constant decomposable multivector of degree n-k, the
wedge of its generator fields, and the canonical form alpha solving
d(alpha) = -i_W(omega) through the radial primitive.  Generators are
stored as a canonical basis of their span:

  * reduced-echelon basis scaled to primitive integer vectors,
  * listed lexicographically ascending (decreasing count of leading zeros),
  * orientation of the raw wedge folded into the sign of the last vector.

Equality of canonical simplices is therefore decidable exactly, and both
the face-face identity and horn verification reduce to structural
equality.  Face maps append the inward transverse normal (gradient-normal
pushforward orthogonalized against the face tangent; rational, and a
positive multiple of the unit normal), which keeps the two composite
routes through a pair of faces positively proportional.  Top simplices
(k = n) have no generators and carry alpha with d(alpha) = +omega;
internally their generator wedge is the scalar -1 so the face formula
d(eta) = -(-1)^i i_v d(alpha) has the uniform expression
W_face = -(-1)^i W ^ v.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (ChartMismatch, DegreeError, DimensionError, HornError,
                     NotClosed, PlecticError)
from .exterior import (AffineMap, Form, MultiVec, ext_d, homotopy_primitive,
                       interior, wedge, wedge_all)
from .hamilton import Plectic
from .linalg import in_span, intersect_spans, primitive_vector, rank, rref
from .poly import Poly


# ---------------------------------------------------------------------------
# affine simplices
# ---------------------------------------------------------------------------


class AffSimplex:
    """Ordered rational vertices; dimension = number of vertices - 1."""

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        verts = tuple(tuple(Fraction(x) for x in v) for v in vertices)
        if not verts:
            raise DimensionError("a simplex needs at least one vertex")
        if len({len(v) for v in verts}) != 1:
            raise DimensionError("vertices of mixed dimension")
        object.__setattr__(self, "vertices", verts)

    def __setattr__(self, *a):
        raise AttributeError("immutable value")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def is_nondegenerate(self) -> bool:
        if self.dim == 0:
            return True
        edges = [[a - b for a, b in zip(v, self.vertices[0])] for v in self.vertices[1:]]
        return rank(edges) == self.dim

    def affine_map(self) -> AffineMap:
        if self.dim == 0:
            raise DimensionError("a point has no parameter domain")
        return AffineMap.from_vertices(self.vertices)

    def face(self, i: int) -> "AffSimplex":
        if not 0 <= i <= self.dim:
            raise DimensionError(f"face index {i} out of range 0..{self.dim}")
        return AffSimplex(self.vertices[:i] + self.vertices[i + 1:])

    def __eq__(self, other):
        return isinstance(other, AffSimplex) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        pts = ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"AffSimplex[{pts}]"


def face_normal(k: int, i: int):
    """Inward barycentric-gradient normal of face i of the standard k-simplex.

    In the embedding {t in Q^k : t_j >= 0, sum t_j <= 1} this is e_i for
    i >= 1 and (-1,...,-1) for i = 0; always inward, rational, and a
    positive multiple of the Euclidean unit normal.
    """
    if k < 1 or not 0 <= i <= k:
        raise DimensionError(f"no face ({k}, {i})")
    if i == 0:
        return tuple(Fraction(-1) for _ in range(k))
    return tuple(Fraction(1 if j == i - 1 else 0) for j in range(k))


# ---------------------------------------------------------------------------
# canonical generator bases
# ---------------------------------------------------------------------------


def _constant_field(chart, vec) -> MultiVec:
    return MultiVec(chart, 1, {(i,): Poly.const(chart.dim, c)
                               for i, c in enumerate(vec) if Fraction(c) != 0})


def _perp_component(vec, tangent):
    """Component of `vec` orthogonal to span(tangent), exact over Q.

    Solves the normal equations of the projection; the result is a
    positive multiple of the Euclidean unit component, hence rational
    and direction-faithful.
    """
    basis = [list(map(Fraction, t)) for t in tangent]
    basis = [r for r in basis if any(x != 0 for x in r)]
    if not basis:
        return tuple(Fraction(x) for x in vec)
    k = len(basis)
    gram = [[sum(a * b for a, b in zip(basis[r], basis[c])) for c in range(k)]
            for r in range(k)]
    rhs = [sum(a * Fraction(b) for a, b in zip(basis[r], vec)) for r in range(k)]
    aug = [gram[r] + [rhs[r]] for r in range(k)]
    for col in range(k):
        piv = next(r for r in range(col, k) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    coeffs = [aug[r][k] for r in range(k)]
    out = [Fraction(x) for x in vec]
    for c, b in zip(coeffs, basis):
        for i in range(len(out)):
            out[i] -= c * b[i]
    return tuple(out)


def transverse_normal(simplex: AffSimplex, i: int):
    """Inward transverse normal of face i: the pushforward of the gradient
    normal with its face-tangent component removed.

    The tangent correction keeps composite faces route-independent; on
    right simplices (and all faces of dimension 0) it is the identity.
    """
    k = simplex.dim
    pushed = simplex.affine_map().push_vector(face_normal(k, i))
    face = simplex.face(i)
    if face.dim == 0:
        return pushed
    v0 = face.vertices[0]
    tangent = [[x - y for x, y in zip(v, v0)] for v in face.vertices[1:]]
    return _perp_component(pushed, tangent)


def _wedge_of_vectors(chart, vectors) -> MultiVec:
    if not vectors:
        return MultiVec(chart, 0, {(): Poly.const(chart.dim, 1)})
    return wedge_all([_constant_field(chart, v) for v in vectors])


def _multivec_ratio(a: MultiVec, b: MultiVec) -> Fraction:
    """Exact c with a = c*b for proportional constant multivectors."""
    zero_exp = tuple([0] * a.chart.dim)
    idx, poly = next(iter(b.terms.items()))
    c = a.terms.get(idx, Poly.zero(a.chart.dim)).terms.get(zero_exp, Fraction(0)) \
        / poly.terms[zero_exp]
    if a != b.scale(c):
        raise PlecticError("multivectors are not proportional")
    return c


def _leading_zeros(vec) -> int:
    for i, x in enumerate(vec):
        if x != 0:
            return i
    return len(vec)


def canonical_generator_basis(chart, raw_vectors, oriented_wedge: MultiVec):
    """Canonical oriented basis of the span of `raw_vectors`.

    Returns (generators, sign) where the generators are primitive integer
    vectors in lexicographically ascending order, their ordered wedge is a
    positive multiple of `oriented_wedge`, and sign records whether the
    final vector was negated relative to the pivot-positive echelon basis.
    """
    rows, _ = rref([list(v) for v in raw_vectors])
    basis = [primitive_vector(r) for r in rows]
    basis.sort(key=_leading_zeros, reverse=True)
    ratio = _multivec_ratio(oriented_wedge, _wedge_of_vectors(chart, basis))
    sign = 1
    if ratio < 0:
        sign = -1
        basis[-1] = tuple(-x for x in basis[-1])
    return tuple(basis), sign


# ---------------------------------------------------------------------------
# observable simplices
# ---------------------------------------------------------------------------


class ObsSimplex:
    """Canonical observable simplex; construct through make_obs/face_map."""

    __slots__ = ("plectic", "simplex", "generators", "sign", "alpha", "gen_wedge")

    def __init__(self, plectic, simplex, generators, sign, alpha, gen_wedge):
        object.__setattr__(self, "plectic", plectic)
        object.__setattr__(self, "simplex", simplex)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "gen_wedge", gen_wedge)

    def __setattr__(self, *a):
        raise AttributeError("immutable value")

    @property
    def dim(self) -> int:
        return self.simplex.dim

    def key(self):
        return (self.simplex.vertices, self.generators, self.gen_wedge.is_zero)

    def __eq__(self, other):
        return isinstance(other, ObsSimplex) and self.plectic == other.plectic \
            and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        gens = ", ".join("(" + ",".join(str(x) for x in g) + ")" for g in self.generators)
        return f"ObsSimplex(dim={self.dim}, generators=[{gens}], sign={self.sign})"


def _from_wedge(plectic, simplex, raw_vectors, oriented_wedge: MultiVec) -> ObsSimplex:
    """Canonicalize (simplex, oriented generator wedge) into an ObsSimplex."""
    chart = plectic.chart
    k = simplex.dim
    if oriented_wedge.degree == 0:
        # top case: wedge is the scalar -1, alpha solves d(alpha) = +omega
        alpha = homotopy_primitive(plectic.omega, check=False)
        return ObsSimplex(plectic, simplex, (), 1, alpha, oriented_wedge)
    if oriented_wedge.is_zero:
        gens = tuple(sorted((primitive_vector(v) for v in raw_vectors
                             if any(Fraction(x) != 0 for x in v))))
        alpha = Form.zero(chart, k)
        return ObsSimplex(plectic, simplex, gens, 1, alpha,
                          MultiVec.zero(chart, plectic.n - k))
    gens, sign = canonical_generator_basis(chart, raw_vectors, oriented_wedge)
    wedge_field = _wedge_of_vectors(chart, gens)
    contraction = interior(wedge_field, plectic.omega)
    alpha = Form.zero(chart, k) if contraction.is_zero \
        else -homotopy_primitive(contraction, check=False)
    return ObsSimplex(plectic, simplex, gens, sign, alpha, wedge_field)


def make_obs(plectic: Plectic, simplex: AffSimplex, raw_generators) -> ObsSimplex:
    """Canonical observable simplex from raw generator vectors.

    Inputs equal up to positive rescaling of the generators produce the
    identical object; reordering or negative rescaling flips the stored
    orientation.  A dependent generator family is legal and yields the
    trivial observable alpha = 0.
    """
    chart = plectic.chart
    if simplex.ambient_dim != chart.dim:
        raise ChartMismatch("simplex not in the plectic chart")
    if not simplex.is_nondegenerate:
        raise DimensionError("simplex vertices are affinely dependent")
    k = simplex.dim
    if k > plectic.n:
        raise DimensionError(f"simplex dimension {k} exceeds n={plectic.n}")
    raw = [tuple(Fraction(x) for x in g) for g in raw_generators]
    if len(raw) != plectic.n - k:
        raise DegreeError(f"need {plectic.n - k} generators for a {k}-simplex, got {len(raw)}")
    for g in raw:
        if len(g) != chart.dim:
            raise ChartMismatch("generator of wrong dimension")
        if all(x == 0 for x in g):
            raise DegreeError("zero vector is not a generator")
    if k == plectic.n:
        minus_one = MultiVec(chart, 0, {(): Poly.const(chart.dim, -1)})
        return _from_wedge(plectic, simplex, [], minus_one)
    return _from_wedge(plectic, simplex, raw, _wedge_of_vectors(chart, raw))


def face_map(x: ObsSimplex, i: int):
    """Face i of an observable simplex.

    Returns (canonical face, eta_raw).  The raw form solves
    d(eta_raw) = -(-1)^i i_v d(alpha) with v the inward transverse
    normal; the canonical face is recomputed from the twisted generator
    wedge -(-1)^i W ^ v, so its form may differ from eta_raw by a
    positive rational scale and a closed form.
    """
    k = x.dim
    if k < 1:
        raise DimensionError("a point has no faces")
    if not 0 <= i <= k:
        raise DimensionError(f"face index {i} out of range 0..{k}")
    normal = transverse_normal(x.simplex, i)
    face_simplex = x.simplex.face(i)
    chart = x.plectic.chart
    normal_field = _constant_field(chart, normal)
    d_alpha = ext_d(x.alpha)
    contracted = interior(normal_field, d_alpha)
    if not ext_d(contracted).is_zero:
        raise NotClosed("contracted derivative is not closed; generators are "
                        "not a commuting family", residual=ext_d(contracted))
    if contracted.is_zero:
        eta_raw = Form.zero(chart, k - 1)
    else:
        eta_raw = homotopy_primitive(contracted, check=False).scale(-((-1) ** i))
    twisted = wedge(x.gen_wedge, normal_field).scale(-((-1) ** i))
    raw_vectors = list(x.generators) + [normal]
    face = _from_wedge(x.plectic, face_simplex, raw_vectors, twisted)
    return face, eta_raw


@dataclass(frozen=True)
class FaceIdentityReport:
    i: int
    j: int
    composite_ij: ObsSimplex
    composite_ji: ObsSimplex
    lam: Fraction | None

    @property
    def holds(self) -> bool:
        return self.composite_ij == self.composite_ji


def check_face_identity(x: ObsSimplex, i: int, j: int) -> FaceIdentityReport:
    """Compare d_i d_j with d_(j-1) d_i as canonical simplices.

    `lam` is the positive scale of the d_i-first route's raw normal
    bivector against the negated d_j-first one; gradient normals are not
    unit normals, so lam = 1 only for special index pairs.
    """
    if not 0 <= i < j <= x.dim or x.dim < 2:
        raise DimensionError("need i < j on a simplex of dimension >= 2")
    via_j = face_map(x, j)[0]
    composite_ij = face_map(via_j, i)[0]
    via_i = face_map(x, i)[0]
    composite_ji = face_map(via_i, j - 1)[0]
    chart = x.plectic.chart
    v_j = transverse_normal(x.simplex, j)
    v_i = transverse_normal(x.simplex, i)
    vp_i = transverse_normal(via_j.simplex, i)
    vp_jm1 = transverse_normal(via_i.simplex, j - 1)
    biv_a = _wedge_of_vectors(chart, [vp_i, v_j])
    biv_b = _wedge_of_vectors(chart, [vp_jm1, v_i])
    lam = None
    if not biv_a.is_zero and not biv_b.is_zero:
        lam = -_multivec_ratio(biv_b, biv_a)
    return FaceIdentityReport(i, j, composite_ij, composite_ji, lam)


# ---------------------------------------------------------------------------
# horns and the constructive filler
# ---------------------------------------------------------------------------


class Horn:
    """Faces of an m-simplex with the r-th one missing."""

    __slots__ = ("m", "r", "faces")

    def __init__(self, m: int, r: int, faces):
        if not 0 <= r <= m or m < 1:
            raise DimensionError(f"no horn with m={m}, r={r}")
        faces = dict(faces)
        expected = set(range(m + 1)) - {r}
        if set(faces) != expected:
            raise HornError(f"horn needs faces {sorted(expected)}, got {sorted(faces)}")
        for i, f in faces.items():
            if f.dim != m - 1:
                raise DimensionError(f"face {i} has dimension {f.dim}, expected {m - 1}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "faces", faces)

    def __setattr__(self, *a):
        raise AttributeError("immutable value")


def _reconstruct_vertices(horn: Horn):
    """Vertex list of the would-be filler from two present faces."""
    present = sorted(horn.faces)
    a = present[0]
    base = list(horn.faces[a].simplex.vertices)
    b = next(t for t in present if t != a)
    inserted = horn.faces[b].simplex.vertices[a]
    full = base[:a] + [inserted] + base[a:]
    for t in present:
        expected = tuple(full[:t] + full[t + 1:])
        if horn.faces[t].simplex.vertices != expected:
            raise HornError("face vertex lists are not deletions of a common simplex",
                            witness=(a, t))
    return full


def horn_fill(horn: Horn) -> ObsSimplex:
    """Constructive filler: shared generators + reconstructed geometry.

    Checks, exactly: pairwise compatibility of the faces on common
    subfaces, that each face's generator span splits off the filler's
    inward normal over a common shared span, and that the orientations
    agree.  Raises HornError naming the offending face pair otherwise.
    """
    plectic = next(iter(horn.faces.values())).plectic
    m, n = horn.m, plectic.n
    if m > n:
        raise DimensionError(f"horn dimension {m} exceeds n={n}")
    chart = plectic.chart
    for f in horn.faces.values():
        if f.plectic != plectic:
            raise ChartMismatch("horn faces on different plectic charts")
        if f.gen_wedge.is_zero:
            raise HornError("trivial (degenerate-generator) faces cannot be filled")
    present = sorted(horn.faces)
    for a, b in itertools.combinations(present, 2):
        left = face_map(horn.faces[b], a)[0]
        right = face_map(horn.faces[a], b - 1)[0]
        if left != right:
            raise HornError("faces disagree on their common subface",
                            witness=(a, b))

    if m == 1:
        return _fill_edge_horn(horn, plectic)

    vertices = _reconstruct_vertices(horn)
    filler_simplex = AffSimplex(vertices)
    if not filler_simplex.is_nondegenerate:
        raise HornError("reconstructed filler vertices are affinely dependent")
    normals = {t: transverse_normal(filler_simplex, t) for t in present}

    spans = {t: [list(g) for g in horn.faces[t].generators] for t in present}
    shared = spans[present[0]]
    for t in present[1:]:
        shared = [list(v) for v in intersect_spans(shared, spans[t])]
    if len(shared) != n - m:
        raise HornError(f"cannot isolate {n - m} shared generators "
                        f"(intersection has dimension {len(shared)})")
    for t in present:
        if in_span(normals[t], shared):
            raise HornError("face normal lies inside the shared generator span",
                            witness=(t,))
        if rank(shared + [list(normals[t])]) != n - m + 1 or \
                rank(spans[t]) != rank(spans[t] + shared + [list(normals[t])]):
            raise HornError("face generator span does not split as shared "
                            "generators plus its own normal", witness=(t,))

    if n - m == 0:
        base = MultiVec(chart, 0, {(): Poly.const(chart.dim, -1)})
    else:
        base = _wedge_of_vectors(chart, [tuple(v) for v in shared])
    orientation = None
    for t in present:
        raw_t = wedge(base, _constant_field(chart, normals[t])).scale(-((-1) ** t))
        ratio = _multivec_ratio(horn.faces[t].gen_wedge, raw_t)
        s = 1 if ratio > 0 else -1
        if orientation is None:
            orientation = s
        elif orientation != s:
            raise HornError("face orientations are mutually incompatible",
                            witness=(present[0], t))
    if n - m == 0 and orientation != 1:
        raise HornError("horn orientation incompatible with the top convention "
                        "d(theta) = +omega")

    filler = _from_wedge(plectic, filler_simplex,
                         [tuple(v) for v in shared], base.scale(orientation))
    for t in present:
        if face_map(filler, t)[0] != horn.faces[t]:
            raise HornError("constructed filler does not restrict to the given face",
                            witness=(t,))
    return filler


def _fill_edge_horn(horn: Horn, plectic: Plectic) -> ObsSimplex:
    """Dimension-1 horns: the single face determines the filler up to the
    scale of the missing edge vector, which canonicalization discards."""
    chart = plectic.chart
    j = next(iter(horn.faces))
    face = horn.faces[j]
    gens = list(face.generators)
    if len(gens) < 1:
        raise HornError("edge-horn face carries no generator data")
    shared = gens[:-1]
    w = gens[-1]
    s = (-1) ** (j + 1)
    step = tuple(Fraction(s) * x for x in w)
    q = face.simplex.vertices[0]
    if j == 0:
        vertices = [tuple(a + b for a, b in zip(q, step)), q]
    else:
        vertices = [q, tuple(a + b for a, b in zip(q, step))]
    filler_simplex = AffSimplex(vertices)
    if plectic.n == 1:
        base = MultiVec(chart, 0, {(): Poly.const(chart.dim, -1)})
        filler = _from_wedge(plectic, filler_simplex, [], base)
    else:
        filler = _from_wedge(plectic, filler_simplex, shared,
                             _wedge_of_vectors(chart, shared))
    if face_map(filler, j)[0] != face:
        raise HornError("edge filler does not restrict to the given face",
                        witness=(j,))
    return filler


# ---------------------------------------------------------------------------
# path reading of a (k+1)-simplex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PathShiftRecord:
    initial: ObsSimplex          # face k+1, contains vertex 0
    final: ObsSimplex            # face 0
    eta_initial: Form
    eta_final: Form
    edge: tuple                  # direction from vertex 0 to vertex k+1
    alpha_path: Form             # primitive of -i_edge d(beta)
    initial_exact: bool          # d(eta_initial) == (-1)^k i_edge d(beta)
    final_factor: Fraction | None  # c with d(eta_final) = c * i_edge d(beta)


def path_shift(x: ObsSimplex) -> PathShiftRecord:
    """Read a (k+1)-simplex as a path of k-simplices between its end faces.

    The end faces are d_(k+1) (containing vertex 0) and d_0; the recorded
    edge direction is vertex_(k+1) - vertex_0.  For k = 0 both end forms
    satisfy the transport relation along the edge exactly; for k >= 1 the
    d_0 normal differs from the edge by face-tangent directions, so only
    a proportionality factor is reported when one exists.
    """
    kp1 = x.dim
    if kp1 < 1:
        raise DimensionError("path reading needs dimension >= 1")
    chart = x.plectic.chart
    initial, eta_initial = face_map(x, kp1)
    final, eta_final = face_map(x, 0)
    v0, vlast = x.simplex.vertices[0], x.simplex.vertices[-1]
    edge = tuple(b - a for a, b in zip(v0, vlast))
    d_beta = ext_d(x.alpha)
    transported = interior(_constant_field(chart, edge), d_beta)
    alpha_path = Form.zero(chart, kp1 - 1) if transported.is_zero \
        else -homotopy_primitive(transported, check=False)
    initial_exact = ext_d(eta_initial) == transported.scale((-1) ** (kp1 - 1))
    final_factor = None
    d_eta_final = ext_d(eta_final)
    if transported.is_zero:
        final_factor = Fraction(0) if d_eta_final.is_zero else None
    elif d_eta_final.is_zero:
        final_factor = Fraction(0)
    else:
        try:
            idx, poly = next(iter(transported.terms.items()))
            exp = next(iter(poly.terms))
            c = d_eta_final.terms.get(idx, Poly.zero(chart.dim)).terms.get(exp, Fraction(0)) \
                / poly.terms[exp]
            if d_eta_final == transported.scale(c):
                final_factor = c
        except StopIteration:
            final_factor = None
    return PathShiftRecord(initial, final, eta_initial, eta_final, edge,
                           alpha_path, initial_exact, final_factor)
