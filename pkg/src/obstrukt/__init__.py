"""Exact-arithmetic obstruction theory for associative and Lie algebra kernels."""

from .fields import (GF, QQ, Matrix, QuotientSpace, Subspace, kernel_basis,
                     quotient, rank, rref, solve, solve_many)
from .algebra import (AlgebraSC, BimoduleSC, LieAlgebraSC, direct_sum, lieify,
                      self_bimodule, validate_associative, validate_bimodule,
                      validate_jacobi, zero_bimodule)
from .bimult import (BiPair, MulAlgebra, OutAlgebra, compute_anni,
                     compute_inn, compute_mul_algebra, compute_out, epsilon,
                     is_bimultiplication, is_permutable, is_self_permutable,
                     mul_product)
from .connections import (Connection, Coupling, CurvatureNotInner,
                          TwistedCochain, coupling_from_connection, is_flat,
                          is_regular, twisted_delta)
from .hochschild import (HClass, HCochain, NotCocycle, Representation,
                         class_of, cohomology_dim, hdelta, is_coboundary,
                         is_cocycle)
from .obstruction import (Curvature, ExtensionSC, Hindrance, NotInner,
                          ObstructionNonzero, central_representation,
                          crossed_product, curvature, extension_coupling,
                          lift_hindrance, obstruction_class,
                          obstruction_cocycle, verify_independence)
from .kernel_construct import (KernelSpec, NucleusMismatch, TheoremKernel,
                               bimodule_ext_from_cocycle, build_kernel_thm3,
                               build_kernel_thm4, canonical_h_E, kernel_scale,
                               kernel_sum, kernels_equivalent_witness,
                               kernels_isomorphic, verify_obs_additivity)
from .pbw import DegreeOverflow, PBWAlgebra, WordCochain, pbw_truncate
from .lie_bridge import (CECochain, ChainElem, LieExtensionSC, LieKernelSpec,
                         LieRep, assoc_cocycle_from_lie, ce_cohomology_dim,
                         ce_delta, chain_d, cochain_transfer, gamma_chain,
                         homotopy_H, lie_extension_identities,
                         lie_transfer_theorem5, section_transfer,
                         trivial_lie_rep)

__version__ = "0.1.0"
