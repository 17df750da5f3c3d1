"""Phase-space evolution of a damped bosonic mode in a thermal bath.

Closed-form propagation of diagonal coherent-state weight functions and field
observables, cross-validated against a truncated number-basis master-equation
integrator and quasiprobability transforms.
"""

from .core import (
    BathParams,
    ScaledBathParams,
    check_amplitude,
    displace_amplitude,
    scale_bath,
    tricomi_u_half,
    u_series,
)
from .descriptors import (
    DeltaP,
    GaussianPolyP,
    GaussianUSeriesP,
    HermiteDeltaSeriesP,
    LaplacianDeltaP,
    SampledGridP,
    evaluate_p,
    fock_populations,
    integral_p,
    rescale_zero_temperature,
)
from .evolution import (
    EvolvedPFunction,
    convolve_p_numeric,
    evolve_p_closed_form,
    evolve_p_zero_temperature,
    evolved_moments,
    mandel_q,
)
from .fock import FockDensityMatrix
from .lindblad import (
    LindbladSettings,
    apply_liouvillian,
    husimi_q,
    husimi_q_grid,
    integrate,
    moments_from_rho,
)
from .quasiprob import (
    PhaseSpaceGrid,
    characteristic_function,
    p_to_q_grid,
    p_to_q_smoothing,
    wigner_from_characteristic,
)
from .states import (
    FAMILIES,
    MomentSet,
    StateSpec,
    default_cutoff,
    fock_density,
    initial_moments,
    initial_p_function,
    parse_state_spec,
)

__version__ = "0.1.0"
