"""specfact: exact spectral factorization of rational matrix-valued
discrete-time spectral densities, with selectable pole/zero regions."""

from .scalars import INF, LPoly, Poly, Rat, RatFun, lpoly_star, split_at_point, valuation
from .matrices import (
    Matrix,
    DegreeProfile,
    degree_profile,
    hc_matrix,
    hr_matrix,
    is_L_unimodular,
    is_para_hermitian,
    is_para_unitary,
    is_spectrum,
    lc_matrix,
    lr_matrix,
)
from .canonical import (
    SmithForm,
    SmithMcMillanDecomposition,
    StructuralIndices,
    mcmillan_degree,
    smith_form,
    smith_mcmillan,
    structural_indices,
    unimodular_left_inverse,
    unimodular_right_inverse,
)
from .regions import (
    RegionPair,
    RegionSpec,
    Side,
    SplitDecomposition,
    membership,
    split_circle,
    split_diagonal,
)
from .reduction import ReductionTrace, assemble_P, assemble_Q, build_psi, ldl_and_sqrt, reduce_step, run_reduction
from .factorize import (
    FactorizationOptions,
    SpectralFactorization,
    VerificationReport,
    compose_parametrization,
    dual_factorize,
    factorize,
    factorize_youla,
    lpoly_specialization_check,
    orthogonal_relator,
    verify,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
