"""Seeded random instances for the property and acceptance suites.

Hamiltonian fields on a volume-form chart are produced by inverting the
contraction against a random exact derivative, so the invariance
condition holds by construction.  PLECTIC_MAX_DEGREE caps the polynomial
degree of random coefficients.
"""

from __future__ import annotations

import itertools
import os
import random
from fractions import Fraction

from .errors import DegreeError
from .exterior import Form, MultiVec, ext_d, interior
from .hamilton import HamPair, Plectic, solve_hamiltonian
from .poly import Poly
from .simplices import AffSimplex, ObsSimplex, make_obs


def max_degree_cap(default: int = 3) -> int:
    raw = os.environ.get("PLECTIC_MAX_DEGREE")
    if raw is None:
        return default
    try:
        return max(0, int(raw))
    except ValueError:
        return default


class Sampler:
    """Deterministic random generator for workbench values."""

    def __init__(self, seed: int = 0, max_degree: int | None = None):
        self.rng = random.Random(seed)
        self.max_degree = max_degree_cap() if max_degree is None else max_degree

    def rational(self, lo: int = -3, hi: int = 3, denominators=(1, 1, 2)) -> Fraction:
        num = self.rng.randint(lo, hi)
        return Fraction(num, self.rng.choice(denominators))

    def poly(self, dim: int, max_terms: int = 2, max_degree: int | None = None) -> Poly:
        cap = self.max_degree if max_degree is None else max_degree
        terms = {}
        for _ in range(self.rng.randint(1, max_terms)):
            exp = [0] * dim
            for _ in range(self.rng.randint(0, cap)):
                exp[self.rng.randrange(dim)] += 1
            terms[tuple(exp)] = self.rng.randint(-3, 3)
        return Poly(dim, terms)

    def form(self, chart, degree: int, density: float = 0.7) -> Form:
        terms = {}
        for idx in itertools.combinations(range(chart.dim), degree):
            if self.rng.random() < density:
                terms[idx] = self.poly(chart.dim)
        return Form(chart, degree, terms)

    def multivec(self, chart, degree: int, density: float = 0.7) -> MultiVec:
        terms = {}
        for idx in itertools.combinations(range(chart.dim), degree):
            if self.rng.random() < density:
                terms[idx] = self.poly(chart.dim)
        return MultiVec(chart, degree, terms)

    def vector_field(self, chart) -> MultiVec:
        return self.multivec(chart, 1)

    def decomposable(self, chart, degree: int) -> MultiVec:
        from .exterior import wedge_all
        if degree == 0:
            return MultiVec(chart, 0, {(): self.poly(chart.dim)})
        return wedge_all([self.vector_field(chart) for _ in range(degree)])

    def closed_form(self, chart, degree: int) -> Form:
        if degree < 1:
            raise DegreeError("closed_form needs degree >= 1")
        return ext_d(self.form(chart, degree - 1))

    # -- Hamiltonian data on a volume-form chart --------------------------

    def hamiltonian_field(self, plectic: Plectic, degree: int) -> MultiVec:
        """Field with i_v(omega) an exact derivative; needs the volume form."""
        chart = plectic.chart
        m = chart.dim
        if plectic.omega.degree != m:
            raise DegreeError("hamiltonian_field requires the volume-form chart")
        beta = ext_d(self.form(chart, m - degree - 1))
        terms = {}
        for idx in itertools.combinations(range(m), degree):
            comp = tuple(i for i in range(m) if i not in idx)
            coef = beta.terms.get(comp)
            if coef is None:
                continue
            probe = interior(MultiVec(chart, degree, {idx: Poly.const(m, 1)}),
                             plectic.omega)
            unit = probe.terms[comp].terms[tuple([0] * m)]
            terms[idx] = coef * (Fraction(1) / unit)
        return MultiVec(chart, degree, terms)

    def hampair(self, plectic: Plectic, degree: int | None = None) -> HamPair:
        k = degree if degree is not None else self.rng.randint(1, plectic.n)
        return solve_hamiltonian(plectic, self.hamiltonian_field(plectic, k))

    # -- geometry ---------------------------------------------------------

    def point(self, dim: int, lo: int = -3, hi: int = 3):
        return tuple(Fraction(self.rng.randint(lo, hi)) for _ in range(dim))

    def simplex(self, chart, k: int) -> AffSimplex:
        while True:
            verts = [self.point(chart.dim) for _ in range(k + 1)]
            if len(set(verts)) != k + 1:
                continue
            s = AffSimplex(verts)
            if s.is_nondegenerate:
                return s

    def generator_vector(self, chart):
        while True:
            v = tuple(Fraction(self.rng.randint(-2, 2)) for _ in range(chart.dim))
            if any(x != 0 for x in v):
                return v

    def obs_simplex(self, plectic: Plectic, k: int) -> ObsSimplex:
        chart = plectic.chart
        simplex = self.simplex(chart, k)
        gens = [self.generator_vector(chart) for _ in range(plectic.n - k)]
        return make_obs(plectic, simplex, gens)
