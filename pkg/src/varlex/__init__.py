"""varlex: desk-scale numerics for variable-exponent Lebesgue spaces,
maximal operators, singular-integral commutators, rearrangements, and
finite-dimensional Banach-lattice interpolation."""

from ._kernels import BACKEND, HAVE_NUMBA
from .core import (
    Box,
    CubeWindow,
    ExponentField,
    GridFunction,
    WeightedMultiset,
    cell_measure,
    conjugate,
    make_log_holder_exponent,
    r_const,
    restrict,
)
from .lattice import (
    AtomicSpace,
    FactorizationResult,
    LatticeNorm,
    calderon_interp_bound_check,
    calderon_product_norm,
    interpolation_check,
    kothe_dual_norm,
    lozanovskii_factorize,
    operator_norm,
)
from .maximal import (
    MaximalConfig,
    OscillationRecord,
    bmo_norm,
    hl_maximal,
    local_sharp,
    relation_check,
    sharp_delta,
)
from .rearrange import (
    StepFunction,
    double_star,
    lexp_norm,
    llogl_norm,
    rearrangement,
    zygmund_holder_check,
)
from .singular import (
    CommutatorInstance,
    Kernel,
    antisymmetry_defect,
    apply_pv,
    apply_truncated,
    commutator_apply,
    hilbert_kernel,
    maximal_truncated,
    riesz_kernel,
)
from .suites import (
    ExperimentConfig,
    cz_boundedness_suite,
    duality_transfer_check,
    estimate_commutator_norm,
    estimate_lerner_constant,
    estimate_perez_ratio,
    suite_pointwise,
)
from .varlp import (
    NormResult,
    holder_pairing,
    luxemburg_norm,
    modular,
    norm_equivalence_check,
    orlicz_norm,
)

__version__ = "0.1.0"
