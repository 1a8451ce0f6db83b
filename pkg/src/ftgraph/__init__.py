"""Scale-invariant vertex couplings on star quantum graphs."""

from .coupling import (
    CouplingAB,
    CouplingST,
    ScatteringMatrix,
    delta_coupling,
    free_coupling,
    ft_scattering,
    is_k_independent,
    ks_scattering,
    parameter_count,
    st_to_ab,
    validate_ab,
    validate_st,
)
from .freelike import (
    Case,
    FreeLikeForm,
    build_freelike,
    classify_freelike,
    enumerate_time_reversal,
    is_freelike,
    realize_smatrix,
)
from .approx import ApproxGraph, Connector, build_approximation, reconstruction_residual
from .solver import (
    ConvergenceReport,
    connector_transfer,
    convergence_study,
    get_backend,
    set_backend,
    solve_scattering,
)

__version__ = "0.1.0"
