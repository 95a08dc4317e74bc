"""Exact-arithmetic workbench for observable algebras on n-plectic charts."""

from .poly import Chart, Poly
from .exterior import (AffineMap, Form, MultiVec, Permutation, ddx, dx, ext_d,
                       homotopy_primitive, interior, koszul_sign, lie_bracket,
                       lie_derivative, perm_sign, pullback_affine, schouten,
                       unshuffles, var, wedge, wedge_all)
from .hamilton import (HamPair, Plectic, UElement, UPart, check_jacobi,
                       check_skew, extract_codim, ham_of_l2, hamiltonian_residual,
                       heisenberg_check, l1, lk, solve_hamiltonian, u_shift,
                       verify_lemma31)
from .simplices import (AffSimplex, Horn, ObsSimplex, check_face_identity,
                        face_map, face_normal, horn_fill, make_obs, path_shift,
                        transverse_normal)
from .complexes import (ObsComplex, adiabatic_cochain, boundary, build_complex,
                        coboundary_apply, cohomology, homology,
                        smith_normal_form)
from .quadrature import integrate, stokes_check
from .quantize import (KernelCochain, Phase, PhaseSum, Scale, StateCochain,
                       cocycle_associativity, gerbe_cocycle, inner_product,
                       kernel_from_theta, prequantum_check, transition_phase)

__version__ = "0.1.0"
