"""Exact localized equivariant Hirzebruch classes of torus-invariant germs."""

from .coeffs import DFrac, DPoly, from_y_coeffs, y_polynomial_coeffs
from .hirzebruch import (ChartTerm, CuspComparison, FixedPointData,
                         IdentityWitness, assemble, chi_from_local,
                         chi_of_projective_class, cone_class,
                         cone_structure_sheaf_comparison, cusp_comparison,
                         full_line, hypersurface_numerator, log_line,
                         punctured_line, quadric_recursion,
                         smooth_local_class, snc_local_class,
                         snc_log_expansion_check, solve_singular_contribution,
                         structure_sheaf_cone_class, toric_local_class,
                         toric_y0_check)
from .laurent import Character, ClassFraction, LaurentPoly
from .lattice import (Cone, Face, LatticeBasis, box_points,
                      closed_generating_function, dual_cone, faces,
                      interior_generating_function, ray_sublattice_index)
from .series import Series, residue, residue_inverse_u_power
from .sform import (SForm, SPolynomial, SVariableSet, cohomology_expansion,
                    positivity_report, rewrite_in_s)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
