"""Exact integration of polynomial forms over affine simplices.

The pullback of a p-form along the affine map of a p-simplex is a single
top term g(t) dt1^...^dtp; its integral over the standard simplex uses
the factorial formula  int_simplex t^a dt = (prod a_i!) / (p + sum a_i)!
Orientation comes from the vertex order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DegreeError
from .exterior import Form, ext_d, pullback_affine
from .poly import Poly
from .simplices import AffSimplex


def _simplex_monomial_integral(exp) -> Fraction:
    k = len(exp)
    num = 1
    for a in exp:
        num *= factorial(a)
    return Fraction(num, factorial(k + sum(exp)))


def integrate(form: Form, simplex: AffSimplex) -> Fraction:
    """Exact integral of a p-form over an affine p-simplex."""
    p = form.degree
    if p != simplex.dim:
        raise DegreeError(f"form degree {p} != simplex dimension {simplex.dim}")
    if form.chart.dim != simplex.ambient_dim:
        raise DegreeError("form and simplex in different ambient dimensions")
    if p == 0:
        return form.terms.get((), Poly.zero(form.chart.dim)).eval(simplex.vertices[0])
    pulled = pullback_affine(form, simplex.affine_map())
    top = pulled.terms.get(tuple(range(p)))
    if top is None:
        return Fraction(0)
    return sum((c * _simplex_monomial_integral(e) for e, c in top.terms.items()),
               Fraction(0))


@dataclass(frozen=True)
class StokesReport:
    boundary_sum: Fraction
    interior_value: Fraction

    @property
    def holds(self) -> bool:
        return self.boundary_sum == self.interior_value


def stokes_check(form: Form, simplex: AffSimplex) -> StokesReport:
    """Compare the alternating face-integral sum with the integral of d(form)."""
    if form.degree + 1 != simplex.dim:
        raise DegreeError("need a p-form on a (p+1)-simplex")
    boundary_sum = Fraction(0)
    for i in range(simplex.dim + 1):
        boundary_sum += ((-1) ** i) * integrate(form, simplex.face(i))
    interior_value = integrate(ext_d(form), simplex)
    return StokesReport(boundary_sum, interior_value)
