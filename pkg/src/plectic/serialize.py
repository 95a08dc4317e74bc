"""JSON schemas for workbench values, with JSON-pointer error reporting.

Rationals travel as "num/den" strings (plain integers also accepted on
input).  Coordinate indices are 1-based on the wire and 0-based in
memory.  Decoding walks the document with an explicit path cursor so
malformed input is reported with the exact pointer.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .exterior import Form, MultiVec
from .hamilton import HamPair, Plectic, UElement, UPart, solve_hamiltonian
from .poly import Chart, Poly
from .quantize import Phase, StateCochain
from .simplices import AffSimplex, ObsSimplex, make_obs


class Cursor:
    """A value inside a document, addressed by a JSON pointer."""

    __slots__ = ("value", "path")

    def __init__(self, value, path=""):
        self.value = value
        self.path = path

    def fail(self, message) -> InputError:
        return InputError(message, pointer=self.path or "/")

    def child(self, key) -> "Cursor":
        return Cursor(None, f"{self.path}/{key}")

    def expect(self, types, what: str):
        if not isinstance(self.value, types):
            raise self.fail(f"expected {what}, got {type(self.value).__name__}")
        return self.value

    def get(self, key, required: bool = True, default=None) -> "Cursor":
        obj = self.expect(dict, "an object")
        if key not in obj:
            if required:
                raise self.fail(f"missing key {key!r}")
            return Cursor(default, f"{self.path}/{key}")
        return Cursor(obj[key], f"{self.path}/{key}")

    def items(self):
        obj = self.expect(dict, "an object")
        return [(k, Cursor(v, f"{self.path}/{k}")) for k, v in obj.items()]

    def entries(self):
        arr = self.expect(list, "an array")
        return [Cursor(v, f"{self.path}/{i}") for i, v in enumerate(arr)]


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


def decode_rational(cur: Cursor) -> Fraction:
    v = cur.value
    if isinstance(v, bool):
        raise cur.fail("expected a rational, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise cur.fail(f"malformed rational {v!r}")
    raise cur.fail(f"expected a rational string, got {type(v).__name__}")


def encode_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decode_int(cur: Cursor) -> int:
    if isinstance(cur.value, bool) or not isinstance(cur.value, int):
        raise cur.fail("expected an integer")
    return cur.value


def decode_vector(cur: Cursor, dim: int | None = None):
    out = tuple(decode_rational(c) for c in cur.entries())
    if dim is not None and len(out) != dim:
        raise cur.fail(f"expected a vector of length {dim}, got {len(out)}")
    return out


def encode_vector(v):
    return [encode_rational(x) for x in v]


# ---------------------------------------------------------------------------
# polynomials, forms, multivectors
# ---------------------------------------------------------------------------


def decode_poly(cur: Cursor, dim: int) -> Poly:
    terms = {}
    for entry in cur.entries():
        exp = tuple(decode_int(c) for c in entry.get("exp").entries())
        if len(exp) != dim:
            raise entry.get("exp").fail(f"exponent length {len(exp)} != chart dim {dim}")
        if any(e < 0 for e in exp):
            raise entry.get("exp").fail("negative exponent")
        coef = decode_rational(entry.get("coef"))
        terms[exp] = terms.get(exp, Fraction(0)) + coef
    return Poly(dim, terms)


def encode_poly(p: Poly):
    return [{"exp": list(e), "coef": encode_rational(c)}
            for e, c in sorted(p.terms.items())]


def _decode_alternating(cur: Cursor, chart: Chart, cls):
    degree = decode_int(cur.get("degree"))
    if degree < 0:
        raise cur.get("degree").fail("negative degree")
    terms = {}
    for entry in cur.get("terms").entries():
        idx_cur = entry.get("idx")
        idx1 = tuple(decode_int(c) for c in idx_cur.entries())
        if len(idx1) != degree:
            raise idx_cur.fail(f"index tuple length {len(idx1)} != degree {degree}")
        if any(not 1 <= i <= chart.dim for i in idx1):
            raise idx_cur.fail(f"index out of range 1..{chart.dim}")
        idx = tuple(i - 1 for i in idx1)
        if list(idx) != sorted(set(idx)):
            raise idx_cur.fail("indices must be strictly increasing")
        poly = decode_poly(entry.get("poly"), chart.dim)
        terms[idx] = terms.get(idx, Poly.zero(chart.dim)) + poly
    return cls(chart, degree, terms)


def decode_form(cur: Cursor, chart: Chart) -> Form:
    return _decode_alternating(cur, chart, Form)


def decode_multivec(cur: Cursor, chart: Chart) -> MultiVec:
    return _decode_alternating(cur, chart, MultiVec)


def _encode_alternating(a):
    return {"degree": a.degree,
            "terms": [{"idx": [i + 1 for i in idx], "poly": encode_poly(p)}
                      for idx, p in sorted(a.terms.items())]}


encode_form = _encode_alternating
encode_multivec = _encode_alternating


# ---------------------------------------------------------------------------
# plectic structures and Hamiltonian data
# ---------------------------------------------------------------------------


def decode_plectic(cur: Cursor) -> Plectic:
    dim = decode_int(cur.get("dim"))
    n = decode_int(cur.get("n"))
    chart = Chart(dim)
    omega = decode_form(cur.get("omega"), chart)
    pts_cur = cur.get("sample_points", required=False)
    pts = None
    if pts_cur.value is not None:
        pts = [decode_vector(c, dim) for c in pts_cur.entries()]
    try:
        return Plectic(chart, n, omega, pts)
    except Exception as exc:
        raise cur.fail(f"invalid plectic structure: {exc}")


def encode_plectic(p: Plectic):
    return {"dim": p.chart.dim, "n": p.n, "omega": encode_form(p.omega),
            "sample_points": [encode_vector(pt) for pt in p.sample_points]}


def decode_hampair(cur: Cursor, plectic: Plectic) -> HamPair:
    field = decode_multivec(cur.get("field"), plectic.chart)
    check_cur = cur.get("check", required=False, default=True)
    check = bool(check_cur.value) if check_cur.value is not None else True
    alpha_cur = cur.get("alpha", required=False)
    if alpha_cur.value is None:
        try:
            return solve_hamiltonian(plectic, field)
        except Exception as exc:
            raise cur.fail(f"cannot solve for the canonical form: {exc}")
    alpha = decode_form(alpha_cur, plectic.chart)
    try:
        return HamPair(plectic, alpha, field, check=check)
    except Exception as exc:
        raise cur.fail(f"invalid Hamiltonian pair: {exc}")


def encode_hampair(pair: HamPair):
    return {"alpha": encode_form(pair.alpha), "field": encode_multivec(pair.field)}


def decode_uelement(cur: Cursor, plectic: Plectic) -> UElement:
    parts = []
    for entry in cur.get("parts").entries():
        form = decode_form(entry.get("form"), plectic.chart)
        upow = decode_int(entry.get("upow"))
        ham_cur = entry.get("ham", required=False)
        ham = None if ham_cur.value is None else decode_multivec(ham_cur, plectic.chart)
        parts.append(UPart(form, upow, ham))
    try:
        return UElement(plectic, tuple(parts))
    except Exception as exc:
        raise cur.fail(f"invalid u-graded element: {exc}")


def encode_uelement(x: UElement):
    parts = []
    for p in x.parts:
        entry = {"form": encode_form(p.form), "upow": p.upow}
        if p.ham is not None:
            entry["ham"] = encode_multivec(p.ham)
        parts.append(entry)
    return {"parts": parts}


# ---------------------------------------------------------------------------
# simplices, states
# ---------------------------------------------------------------------------


def decode_aff_simplex(cur: Cursor, dim: int) -> AffSimplex:
    verts = [decode_vector(c, dim) for c in cur.entries()]
    if not verts:
        raise cur.fail("simplex needs at least one vertex")
    return AffSimplex(verts)


def decode_obs_simplex(cur: Cursor, plectic: Plectic) -> ObsSimplex:
    simplex = decode_aff_simplex(cur.get("vertices"), plectic.chart.dim)
    gens = [decode_vector(c, plectic.chart.dim)
            for c in cur.get("generators").entries()]
    # alpha, when present, is informational; the canonical form is recomputed
    try:
        return make_obs(plectic, simplex, gens)
    except Exception as exc:
        raise cur.fail(f"invalid observable simplex: {exc}")


def encode_obs_simplex(x: ObsSimplex):
    return {"vertices": [encode_vector(v) for v in x.simplex.vertices],
            "generators": [encode_vector(g) for g in x.generators],
            "alpha": encode_form(x.alpha)}


def decode_state(cur: Cursor) -> StateCochain:
    level = decode_int(cur.get("level"))
    values = {}
    for entry in cur.get("phases").entries():
        idx = decode_int(entry.get("idx"))
        r = decode_rational(entry.get("r"))
        res_cur = entry.get("residual", required=False, default=0)
        residual = decode_rational(res_cur) if res_cur.value is not None else Fraction(0)
        values[idx] = Phase(r, residual)
    return StateCochain(level, values)


def encode_state(s: StateCochain):
    phases = []
    for idx in sorted(s.values):
        p = s.values[idx]
        entry = {"idx": idx, "r": encode_rational(p.r)}
        if p.residual:
            entry["residual"] = encode_rational(p.residual)
        phases.append(entry)
    return {"level": s.level, "phases": phases}


# ---------------------------------------------------------------------------
# problem files
# ---------------------------------------------------------------------------


class ProblemFile:
    """Named workbench values parsed from one JSON document."""

    def __init__(self, plectic, forms, fields, hampairs, uelements, simplices,
                 affine, complexes, states, params):
        self.plectic = plectic
        self.forms = forms
        self.fields = fields
        self.hampairs = hampairs
        self.uelements = uelements
        self.simplices = simplices
        self.affine = affine
        self.complexes = complexes
        self.states = states
        self.params = params


def decode_problem(doc) -> ProblemFile:
    root = Cursor(doc)
    schema = decode_int(root.get("schema"))
    if schema != 1:
        raise root.get("schema").fail(f"unsupported schema version {schema}")
    plectic = decode_plectic(root.get("plectic"))
    chart = plectic.chart

    forms = {name: decode_form(c, chart)
             for name, c in root.get("forms", required=False, default={}).items()}
    fields = {name: decode_multivec(c, chart)
              for name, c in root.get("fields", required=False, default={}).items()}
    hampairs = {name: decode_hampair(c, plectic)
                for name, c in root.get("hampairs", required=False, default={}).items()}
    uelements = {name: decode_uelement(c, plectic)
                 for name, c in root.get("uelements", required=False, default={}).items()}
    simplices = {name: decode_obs_simplex(c, plectic)
                 for name, c in root.get("simplices", required=False, default={}).items()}
    affine = {name: decode_aff_simplex(c, chart.dim)
              for name, c in root.get("affine_simplices", required=False, default={}).items()}
    complexes = {}
    for name, c in root.get("complexes", required=False, default={}).items():
        seeds = []
        for s in c.get("seeds").entries():
            label = s.expect(str, "a simplex name")
            if label not in simplices:
                raise s.fail(f"unknown simplex {label!r}")
            seeds.append(simplices[label])
        complexes[name] = seeds
    states = {name: decode_state(c)
              for name, c in root.get("states", required=False, default={}).items()}
    params = root.get("params", required=False, default={}).value or {}
    if not isinstance(params, dict):
        raise root.get("params").fail("params must be an object")
    return ProblemFile(plectic, forms, fields, hampairs, uelements, simplices,
                       affine, complexes, states, params)
