#!/usr/bin/env python3
"""Regenerate the bundled problem fixtures under src/plectic/fixtures/."""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from plectic import (AffSimplex, MultiVec, Plectic, ddx, dx, face_map,
                     make_obs, solve_hamiltonian, var, wedge)
from plectic.serialize import (encode_form, encode_hampair, encode_multivec,
                               encode_obs_simplex, encode_plectic,
                               encode_state)
from plectic.quantize import Phase, StateCochain

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "plectic" / "fixtures"


def vec_field(chart, coef_by_axis):
    total = MultiVec.zero(chart, 1)
    for axis, coef in coef_by_axis.items():
        total = total + ddx(chart, axis).scale(coef)
    return total


def q3_standard():
    P = Plectic.standard(3)
    c = P.chart
    fields = {
        "rot12": vec_field(c, {1: var(c, 2)}),          # x2 e1
        "rot23": vec_field(c, {2: var(c, 3)}),          # x3 e2
        "rot31": vec_field(c, {3: var(c, 1)}),          # x1 e3
        "e2": ddx(c, 2),
        "e3": ddx(c, 3),
        "shear": ddx(c, 1) + vec_field(c, {2: var(c, 1)}),  # e1 + x1 e2
        # divergence-free diagonal field; flipping one sign breaks invariance
        "hyper": vec_field(c, {1: var(c, 1)}) - vec_field(c, {2: var(c, 2)}),
    }
    pairs = {name: solve_hamiltonian(P, fields[name])
             for name in ("rot12", "rot23", "rot31", "e3", "hyper")}

    tri = AffSimplex([(0, 0, 0), (1, 0, 0), (0, 1, 0)])
    top = make_obs(P, tri, [])
    seg = make_obs(P, AffSimplex([(0, 0, 0), (1, 0, 0)]), [(0, 0, 2)])
    face1 = face_map(top, 1)[0]
    face2 = face_map(top, 2)[0]
    circle = {
        "loop_ab": make_obs(P, AffSimplex([(0, 0, 0), (1, 0, 0)]), [(0, -1, 0)]),
        "loop_bc": make_obs(P, AffSimplex([(1, 0, 0), (0, 1, 0)]), [(1, 0, 0)]),
        "loop_ac": make_obs(P, AffSimplex([(0, 0, 0), (0, 1, 0)]), [(1, 0, 0)]),
    }
    tetra = AffSimplex([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    theta = P.theta()

    doc = {
        "schema": 1,
        "plectic": encode_plectic(P),
        "forms": {"theta": encode_form(theta),
                  "area12": encode_form(wedge(dx(c, 1), dx(c, 2)))},
        "fields": {k: encode_multivec(v) for k, v in fields.items()},
        "hampairs": {k: encode_hampair(v) for k, v in pairs.items()},
        "simplices": {
            "triangle": encode_obs_simplex(top),
            "segment": encode_obs_simplex(seg),
            "tri_face1": encode_obs_simplex(face1),
            "tri_face2": encode_obs_simplex(face2),
            **{k: encode_obs_simplex(v) for k, v in circle.items()},
        },
        "affine_simplices": {
            "tetra": [[str(x) for x in v] for v in tetra.vertices],
        },
        "complexes": {
            "disk": {"seeds": ["triangle"]},
            "circle": {"seeds": ["loop_ab", "loop_bc", "loop_ac"]},
        },
        "states": {
            "ones": encode_state(StateCochain(0, {i: Phase() for i in range(3)})),
            "quarter": encode_state(StateCochain(0, {0: Phase("1/4"), 1: Phase(0), 2: Phase("1/2")})),
        },
        "params": {
            "jacobi": {"args": ["rot12", "rot23", "rot31", "e3"]},
            "skew": {"args": ["rot12", "rot23"]},
            "lemma31": {"fields": ["rot12", "rot23", "rot31", "e3"]},
            "heisenberg": {"fields": ["shear", "e2"]},
            "solve_ham": {"field": "rot12"},
            "face": {"simplex": "triangle", "i": 2},
            "faces_check": {"simplices": ["triangle"]},
            "horn": {"m": 2, "missing": 0, "faces": {"1": "tri_face1", "2": "tri_face2"}},
            "homology": {"complex": "disk"},
            "adiabatic": {"complex": "disk"},
            "integrate": {"form": "theta", "simplex": "triangle"},
            "stokes": {"form": "theta", "simplex": "tetra"},
            "prequantum": {"chains": [[[1, "tetra"]]]},
            "gerbe_assoc": {"tetra": "tetra"},
            "inner_product": {"complex": "disk", "level": 0,
                              "final": "ones", "initial": "ones"},
        },
    }
    return doc


def q3_sign_broken():
    """Negative control: one sign inside the 'hyper' field is flipped.

    x1 e1 - x2 e2 preserves the volume form; x1 e1 + x2 e2 does not, so
    the coherence sum acquires a nonzero residual.  check=false lets the
    corrupted pair load.
    """
    doc = q3_standard()
    broken = doc["hampairs"]["hyper"]
    for term in broken["field"]["terms"]:
        if term["idx"] == [2]:
            for mono in term["poly"]:
                mono["coef"] = flip(mono["coef"])
    broken["check"] = False
    doc["params"]["jacobi"] = {"args": ["hyper", "rot23", "rot31"]}
    doc["params"]["skew"] = {"args": ["rot12", "rot23"]}
    return doc


def flip(coef: str) -> str:
    return coef[1:] if coef.startswith("-") else "-" + coef


def q4_standard():
    P = Plectic.standard(4)
    c = P.chart
    fields = {
        "rot12": vec_field(c, {1: var(c, 2)}),
        "rot34": vec_field(c, {3: var(c, 4)}),
        "plane14": wedge(ddx(c, 1), ddx(c, 4)).scale(var(c, 2)),
        "e4": ddx(c, 4),
    }
    pairs = {k: solve_hamiltonian(P, v) for k, v in fields.items()}
    top = make_obs(P, AffSimplex([(0, 0, 0, 0), (1, 0, 0, 0),
                                  (0, 1, 0, 0), (0, 0, 1, 0)]), [])
    tri = make_obs(P, AffSimplex([(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0)]),
                   [(0, 0, 0, 1)])
    doc = {
        "schema": 1,
        "plectic": encode_plectic(P),
        "forms": {"theta": encode_form(P.theta())},
        "fields": {k: encode_multivec(v) for k, v in fields.items()},
        "hampairs": {k: encode_hampair(v) for k, v in pairs.items()},
        "simplices": {"top": encode_obs_simplex(top),
                      "triangle": encode_obs_simplex(tri)},
        "complexes": {"ball": {"seeds": ["top"]}},
        "params": {
            "jacobi": {"args": ["rot12", "rot34", "plane14", "e4"]},
            "skew": {"args": ["rot12", "rot34", "plane14"]},
            "lemma31": {"fields": ["rot12", "rot34", "plane14", "e4"]},
            "homology": {"complex": "ball"},
            "adiabatic": {"complex": "ball"},
            "faces_check": {"simplices": ["top", "triangle"]},
        },
    }
    return doc


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, doc in (("q3_standard.json", q3_standard()),
                      ("q3_jacobi_sign_broken.json", q3_sign_broken()),
                      ("q4_standard.json", q4_standard())):
        path = OUT / name
        path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
