"""Command-line front end.

Reads a JSON problem file, dispatches to the core modules, and emits a
human-readable report plus an optional machine-readable JSON document.
Exit codes: 0 pass, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from importlib import resources

from .complexes import (adiabatic_cochain, boundary, build_complex,
                        coboundary_apply, cohomology, homology)
from .errors import InputError, PlecticError
from .exterior import ext_d, interior, lie_bracket, wedge
from .hamilton import (check_jacobi, check_skew, heisenberg_check,
                       solve_hamiltonian, u_shift, verify_lemma31)
from .quadrature import integrate, stokes_check
from .quantize import (Scale, cocycle_associativity, inner_product,
                       kernel_from_theta, prequantum_check)
from .sampling import Sampler
from .serialize import (decode_problem, encode_form, encode_hampair,
                        encode_multivec, encode_obs_simplex, encode_rational)
from .simplices import Horn, check_face_identity, face_map, horn_fill

DEFAULT_SEED = 0


def _frac(x) -> str:
    return encode_rational(Fraction(x))


def _load_problem(path):
    if path is None:
        with resources.files("plectic.fixtures").joinpath("q3_standard.json").open() as fh:
            doc = json.load(fh)
    else:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}")
        except json.JSONDecodeError as exc:
            raise InputError(f"not valid JSON: {exc}")
    return decode_problem(doc)


def _named(problem, section: str, names):
    table = getattr(problem, section)
    if names is None:
        return [table[k] for k in sorted(table)]
    out = []
    for name in names:
        if name not in table:
            raise InputError(f"unknown {section[:-1]} {name!r}", pointer=f"/{section}/{name}")
        out.append(table[name])
    return out


def _param(problem, command: str, key: str, default=None):
    return problem.params.get(command, {}).get(key, default)


def _complex_of(problem, name=None):
    if not problem.complexes:
        raise InputError("problem file defines no complexes")
    if name is None:
        name = sorted(problem.complexes)[0]
    if name not in problem.complexes:
        raise InputError(f"unknown complex {name!r}", pointer=f"/complexes/{name}")
    return build_complex(problem.plectic, problem.complexes[name])


def _affine_simplex(problem, name):
    """Plain affine simplex by name, falling back to an observable one."""
    if name in problem.affine:
        return problem.affine[name]
    if name in problem.simplices:
        return problem.simplices[name].simplex
    raise InputError(f"unknown simplex {name!r}", pointer=f"/affine_simplices/{name}")


# ---------------------------------------------------------------------------
# command implementations; each returns (report dict, exit code)
# ---------------------------------------------------------------------------


def cmd_jacobi(problem, args):
    names = _param(problem, "jacobi", "args")
    pairs = _named(problem, "hampairs", names)
    if len(pairs) < args.m:
        raise InputError(f"need {args.m} pairs, file provides {len(pairs)}")
    elements = [u_shift(p) for p in pairs[: args.m]]
    rep = check_jacobi(elements, paranoid=args.paranoid)
    report = {
        "command": "jacobi", "m": args.m, "pass": rep.holds,
        "residual_zero": rep.holds,
        "witness": None if rep.holds else {
            "residual": [{"upow": p.upow, "form": encode_form(p.form)}
                         for p in rep.residual.nonzero_parts()]},
        "ledger": [{"i": t.i, "j": t.j, "unshuffle": list(t.sigma), "sign": t.sign,
                    "zero": t.contribution.is_zero} for t in rep.ledger],
    }
    return report, 0 if rep.holds else 1


def cmd_skew(problem, args):
    names = _param(problem, "skew", "args")
    pairs = _named(problem, "hampairs", names)
    elements = [u_shift(p) for p in pairs]
    rep = check_skew(elements)
    report = {"command": "skew", "k": rep.k, "checked": rep.checked,
              "pass": rep.passed,
              "witness": None if rep.passed else {"transposition": list(rep.first_violation[0])}}
    return report, 0 if rep.passed else 1


def cmd_lemma31(problem, args):
    names = _param(problem, "lemma31", "fields")
    pairs = _named(problem, "hampairs", names)
    fields = [p.field for p in pairs[: args.m]]
    if len(fields) < args.m:
        raise InputError(f"need {args.m} fields, file provides {len(fields)}")
    rep = verify_lemma31(problem.plectic, fields)
    report = {"command": "lemma31", "m": args.m, "pass": rep.holds,
              "terms": [{"i": t.i, "j": t.j, "exponent_parity": t.exponent} for t in rep.terms],
              "witness": None if rep.holds else {
                  "lhs": encode_form(rep.lhs), "rhs": encode_form(rep.rhs)}}
    return report, 0 if rep.holds else 1


def cmd_heisenberg(problem, args):
    names = _param(problem, "heisenberg", "fields")
    if names is not None:
        fields = [problem.fields[n] if n in problem.fields else problem.hampairs[n].field
                  for n in names]
    else:
        fields = [p.field for p in _named(problem, "hampairs", None) if p.field.degree == 1]
    rep = heisenberg_check(problem.plectic, fields)
    witness = None
    if rep.witness is not None:
        i, j, br = rep.witness
        witness = {"pair": [i, j], "bracket": encode_multivec(br)}
    report = {"command": "heisenberg", "pass": rep.passed, "commuting": rep.commuting,
              "witness": witness,
              "closures": [{"k": k, "subset": list(sub), "closed": ok}
                           for (k, sub), ok in rep.closures]}
    return report, 0 if rep.passed else 1


def cmd_solve_ham(problem, args):
    name = _param(problem, "solve_ham", "field")
    if name is None:
        raise InputError("params/solve_ham/field names the input field")
    if name not in problem.fields:
        raise InputError(f"unknown field {name!r}", pointer=f"/fields/{name}")
    pair = solve_hamiltonian(problem.plectic, problem.fields[name])
    report = {"command": "solve-ham", "pass": True, "witness": None,
              "pair": encode_hampair(pair)}
    return report, 0


def cmd_face(problem, args):
    name = _param(problem, "face", "simplex")
    index = _param(problem, "face", "i")
    if name is None or index is None:
        raise InputError("params/face must name a simplex and a face index i")
    x = _named(problem, "simplices", [name])[0]
    face, eta_raw = face_map(x, int(index))
    report = {"command": "face", "pass": True, "witness": None,
              "face": encode_obs_simplex(face), "eta_raw": encode_form(eta_raw)}
    return report, 0


def cmd_faces_check(problem, args):
    names = _param(problem, "faces_check", "simplices")
    xs = _named(problem, "simplices", names)
    rows = []
    ok = True
    for idx, x in enumerate(xs):
        if x.dim < 2:
            continue
        for i, j in itertools.combinations(range(x.dim + 1), 2):
            rep = check_face_identity(x, i, j)
            ok = ok and rep.holds
            rows.append({"simplex": idx, "i": i, "j": j, "equal": rep.holds,
                         "lambda": None if rep.lam is None else _frac(rep.lam)})
    report = {"command": "faces-check", "pass": ok,
              "witness": None if ok else next(r for r in rows if not r["equal"]),
              "identities": rows}
    return report, 0 if ok else 1


def cmd_horn_fill(problem, args):
    spec = problem.params.get("horn")
    if not spec:
        raise InputError("params/horn describes the horn to fill")
    m = int(spec["m"])
    r = int(spec["missing"])
    faces = {int(i): _named(problem, "simplices", [nm])[0]
             for i, nm in spec["faces"].items()}
    filler = horn_fill(Horn(m, r, faces))
    checks = {str(i): face_map(filler, i)[0] == faces[i] for i in faces}
    report = {"command": "horn-fill", "pass": all(checks.values()),
              "witness": None,
              "filler": encode_obs_simplex(filler), "face_checks": checks}
    return report, 0 if all(checks.values()) else 1


def cmd_homology(problem, args):
    cx = _complex_of(problem, _param(problem, "homology", "complex"))
    hom = homology(cx)
    coh = cohomology(cx, "Q")
    report = {"command": "homology", "pass": True, "witness": None,
              "strata": [cx.size(k) for k in range(cx.top_dim + 1)],
              "betti": list(hom.betti),
              "torsion": [list(t) for t in hom.torsion],
              "cohomology_betti": list(coh.betti)}
    return report, 0


def cmd_adiabatic(problem, args):
    cx = _complex_of(problem, _param(problem, "adiabatic", "complex"))
    values = adiabatic_cochain(cx)
    report = {"command": "adiabatic", "pass": True, "witness": None,
              "values": [_frac(v) for v in values]}
    return report, 0


def cmd_integrate(problem, args):
    spec = problem.params.get("integrate")
    if not spec:
        raise InputError("params/integrate names a form and a simplex")
    form = problem.forms.get(spec.get("form"))
    if form is None:
        raise InputError(f"unknown form {spec.get('form')!r}")
    simplex = _affine_simplex(problem, spec["simplex"])
    value = integrate(form, simplex)
    report = {"command": "integrate", "pass": True, "witness": None,
              "value": _frac(value)}
    return report, 0


def cmd_stokes(problem, args):
    spec = problem.params.get("stokes")
    if not spec:
        raise InputError("params/stokes names a form and a simplex")
    form = problem.forms.get(spec.get("form"))
    if form is None:
        raise InputError(f"unknown form {spec.get('form')!r}")
    simplex = _affine_simplex(problem, spec["simplex"])
    rep = stokes_check(form, simplex)
    report = {"command": "stokes", "pass": rep.holds,
              "witness": None if rep.holds else {
                  "boundary_sum": _frac(rep.boundary_sum),
                  "interior_value": _frac(rep.interior_value)},
              "boundary_sum": _frac(rep.boundary_sum),
              "interior_value": _frac(rep.interior_value)}
    return report, 0 if rep.holds else 1


def cmd_prequantum(problem, args):
    scale = Scale.parse(args.scale)
    spec = problem.params.get("prequantum", {})
    chain_specs = spec.get("chains")
    if not chain_specs:
        raise InputError("params/prequantum/chains lists the integer chains")
    chains = []
    for chain in chain_specs:
        chains.append([(int(c), _affine_simplex(problem, nm)) for c, nm in chain])
    rep = prequantum_check(problem.plectic, chains, scale)
    rows = [{"closed": c.closed, "integral": _frac(c.integral),
             "multiple_of_2pi": _frac(c.phase.r), "pass": c.integral_ok}
            for c in rep.cycles]
    report = {"command": "prequantum", "scale": args.scale, "pass": rep.passed,
              "witness": None if rep.passed else next(
                  {"integral": r["integral"], "fractional_part": _frac(Fraction(r["multiple_of_2pi"]) % 1)}
                  for r in rows if not r["pass"]),
              "cycles": rows}
    return report, 0 if rep.passed else 1


def cmd_gerbe_assoc(problem, args):
    scale = Scale.parse(args.scale)
    spec = problem.params.get("gerbe_assoc", {})
    name = spec.get("tetra")
    if name is None:
        raise InputError("params/gerbe_assoc/tetra names a 3-simplex")
    tetra = _affine_simplex(problem, name)
    theta = problem.forms.get(spec["theta"]) if "theta" in spec else None
    rep = cocycle_associativity(problem.plectic, tetra, scale, theta)
    report = {"command": "gerbe-assoc", "scale": args.scale,
              "pass": rep.stokes_equal,
              "witness": None if rep.stokes_equal else {
                  "product_r": _frac(rep.product.r), "direct_r": _frac(rep.direct.r)},
              "product_equals_omega_phase": rep.stokes_equal,
              "trivial": rep.trivial, "defect": _frac(rep.defect)}
    return report, 0 if rep.stokes_equal else 1


def cmd_inner_product(problem, args):
    spec = problem.params.get("inner_product", {})
    cx = _complex_of(problem, spec.get("complex"))
    level = int(spec.get("level", 0))
    psi_f = problem.states[spec["final"]]
    psi_i = problem.states[spec["initial"]]
    theta = problem.forms.get(spec["theta"]) if "theta" in spec else None
    kernel = kernel_from_theta(cx, level, Scale.parse(args.kernel_scale), theta)
    value = inner_product(cx, psi_f, psi_i, kernel)
    exact = value.exact_re_im()
    report = {"command": "inner-product", "pass": True, "witness": None,
              "kernel_cocycle": kernel.cocycle,
              "terms": [{"r": _frac(p.r), "residual": _frac(p.residual),
                         "weight": _frac(w)}
                        for p, w in sorted(value.terms.items(),
                                           key=lambda kv: kv[0].normalized())],
              "exact": None if exact is None else [_frac(exact[0]), _frac(exact[1])],
              "approx": None if exact is not None else str(value.approx(30))}
    return report, 0


# ---------------------------------------------------------------------------
# selftest: seeded randomized property battery
# ---------------------------------------------------------------------------


def cmd_selftest(problem, args):
    sampler = Sampler(args.seed)
    plectic = problem.plectic
    chart = plectic.chart
    checks = []

    def record(name, ok, witness=None):
        checks.append({"check": name, "pass": bool(ok),
                       "witness": witness if not ok else None})

    for trial in range(args.trials):
        a = sampler.form(chart, sampler.rng.randint(0, chart.dim - 1))
        record("d_squared_zero", ext_d(ext_d(a)).is_zero, {"trial": trial})
        u = sampler.decomposable(chart, sampler.rng.randint(1, 2))
        v = sampler.decomposable(chart, sampler.rng.randint(1, 2))
        b = sampler.form(chart, sampler.rng.randint(max(1, v.degree), chart.dim))
        from .exterior import lie_derivative, schouten
        lhs = interior(schouten(u, v), b)
        rhs = lie_derivative(u, interior(v, b)).scale(
            (-1) ** ((u.degree - 1) * v.degree)) - interior(v, lie_derivative(u, b))
        record("contraction_bracket_identity", lhs == rhs, {"trial": trial})

    for trial in range(max(1, args.trials // 2)):
        for m in (2, 3):
            fields = [sampler.hamiltonian_field(plectic, sampler.rng.randint(1, plectic.n))
                      for _ in range(m)]
            rep = verify_lemma31(plectic, fields)
            record(f"invariance_expansion_m{m}", rep.holds, {"trial": trial})
            elements = [u_shift(solve_hamiltonian(plectic, f)) for f in fields]
            record(f"skew_m{m}", check_skew(elements).passed, {"trial": trial})
            rep = check_jacobi(elements, paranoid=args.paranoid)
            record(f"jacobi_m{m}", rep.holds, {"trial": trial})

    for trial in range(max(1, args.trials // 2)):
        for k in range(2, plectic.n + 1):
            x = sampler.obs_simplex(plectic, k)
            ok = all(check_face_identity(x, i, j).holds
                     for i, j in itertools.combinations(range(k + 1), 2))
            record(f"face_identities_dim{k}", ok, {"trial": trial})
            faces = {i: face_map(x, i)[0] for i in range(k + 1)}
            ok = True
            for r in range(k + 1):
                filler = horn_fill(Horn(k, r, {i: f for i, f in faces.items() if i != r}))
                ok = ok and filler == x
            record(f"kan_round_trip_dim{k}", ok, {"trial": trial})

    for trial in range(args.trials):
        p = sampler.rng.randint(0, chart.dim - 1)
        form = sampler.form(chart, p)
        simplex = sampler.simplex(chart, p + 1)
        record("stokes", stokes_check(form, simplex).holds, {"trial": trial})

    x = sampler.obs_simplex(plectic, plectic.n)
    cx = build_complex(plectic, [x])
    ok = True
    for k in range(2, cx.top_dim + 1):
        b1 = boundary(cx, k - 1) if k - 1 >= 1 else None
        b2 = boundary(cx, k)
        if b1:
            prod = [[sum(b1[r][t] * b2[t][c] for t in range(len(b2)))
                     for c in range(len(b2[0]))] for r in range(len(b1))]
            ok = ok and all(all(v == 0 for v in row) for row in prod)
    record("boundary_squared_zero", ok)

    passed = all(c["pass"] for c in checks)
    report = {"command": "selftest", "seed": args.seed, "trials": args.trials,
              "pass": passed,
              "witness": None if passed else next(c for c in checks if not c["pass"]),
              "checks": checks}
    return report, 0 if passed else 1


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

COMMANDS = {
    "jacobi": cmd_jacobi,
    "skew": cmd_skew,
    "lemma31": cmd_lemma31,
    "heisenberg": cmd_heisenberg,
    "solve-ham": cmd_solve_ham,
    "face": cmd_face,
    "faces-check": cmd_faces_check,
    "horn-fill": cmd_horn_fill,
    "homology": cmd_homology,
    "adiabatic": cmd_adiabatic,
    "integrate": cmd_integrate,
    "stokes": cmd_stokes,
    "prequantum": cmd_prequantum,
    "gerbe-assoc": cmd_gerbe_assoc,
    "inner-product": cmd_inner_product,
    "selftest": cmd_selftest,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plectic",
        description="Exact workbench for observable algebras on n-plectic charts")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", default=None, help="problem JSON (default: bundled instance)")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--verbose", action="store_true")
        p.add_argument("--json-out", default=None)
        p.add_argument("--paranoid", action="store_true",
                       help="evaluate every coherence term literally")
        if name in ("jacobi", "lemma31"):
            p.add_argument("--m", type=int, required=True)
        if name in ("prequantum", "gerbe-assoc"):
            p.add_argument("--scale", required=True,
                           help="action scale, e.g. '6x2pi', '12pi' or '5/4'")
        if name == "inner-product":
            p.add_argument("--kernel-scale", required=True, dest="kernel_scale")
        if name == "selftest":
            p.add_argument("--trials", type=int, default=8)
    return parser


def _render(report, verbose):
    lines = [f"{report['command']}: {'PASS' if report.get('pass') else 'FAIL'}"]
    for key, value in sorted(report.items()):
        if key in ("command", "pass", "ledger", "checks", "identities") and not verbose:
            continue
        if key in ("command",):
            continue
        lines.append(f"  {key}: {json.dumps(value, sort_keys=True)}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        problem = _load_problem(args.input)
        report, code = COMMANDS[args.command](problem, args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except PlecticError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    print(_render(report, args.verbose))
    if args.json_out:
        with open(args.json_out, "w") as fh:
            json.dump(report, fh, sort_keys=True, indent=1)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
