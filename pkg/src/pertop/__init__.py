"""pertop: period and index of torsion degree-3 classes on finite
simplicial sets, computed by exact cochain-level cohomology operations."""

from .cohomology import (
    Cochain,
    CohomologyClass,
    CohomologyGroup,
    coboundary,
    cohomology_group,
    subgroup_quotient,
    torsion_class_order,
)
from .linalg import (
    AbelianGroupPresentation,
    SmithDecomposition,
    SparseIntMatrix,
    cokernel,
    element_order,
    smith_normal_form,
    solve_linear,
)
from .operations import (
    OperationContext,
    bockstein,
    cup,
    cup1,
    pontryagin_square,
    reduce_coeffs,
    square_class,
)
from .period_index import (
    PeriodIndexReport,
    all_lifts,
    epsilon,
    index_bound,
    lift_to_mod_n,
    period,
    reduced_obstruction,
    verify_lift_independence,
)
from .simplicial import (
    ChainComplex,
    SimplicialSet,
    circle,
    em_space_2,
    moore_polygon,
    normalized_chain_complex,
    point,
    product,
    skeleton,
    standard_simplex,
    suspension,
    torus,
    wbar_cyclic,
)

__version__ = "0.1.0"
