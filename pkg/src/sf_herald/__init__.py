"""Squeezed Fock states heralded from two-mode entangled Gaussian states."""

from .design import (
    BsSetup,
    CzSetup,
    DesignResult,
    OptimalA,
    Regime,
    SetupKind,
    bs_forward,
    bs_transmission,
    cz_forward,
    design_bs_universal,
    design_bs_vacuum_channel,
    design_cz_universal,
    design_first_sf_general,
    max_probability,
    maximize_first_sf_probability,
    optimal_a,
)
from .errors import (
    ConvergenceError,
    DesignError,
    DomainError,
    ImpossibleOutcomeError,
    InvalidStateError,
    SfHeraldError,
    SingularParameterError,
)
from .heralding import (
    ExactSF,
    Generic,
    HeraldOutcome,
    RotatedSF,
    UniversalCheck,
    classify_outcome,
    conditional_exponent,
    first_sf_probability,
    first_sf_tmeg,
    herald,
    herald_probability,
    herald_probability_universal,
    heralded_wavefunction,
    rotated_parameters,
    rotated_sf_tmeg,
    squeezing_of,
    universal_check,
    universal_tmeg,
)
from .numerics import QuadratureGrid, db_from_r, hermite, hyp2f1_terminating, integrate_line, r_from_db
from .states import (
    RotatedSfSpec,
    SqueezedFockSpec,
    TmegParams,
    WaveSample,
    Wavefunction,
    fidelity,
    fock_state,
    norm,
    overlap,
    rotated_sf_state,
    sample,
    sf_state,
    tmeg_wavefunction,
    validate_tmeg,
)
from .tables import reproduce_tables

__version__ = "0.1.0"
