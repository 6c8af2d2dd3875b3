"""Nash inequalities, ultracontractivity and mixing-time bounds for
reversible quantum Markov semigroups at desk scale."""

from .exceptions import *  # noqa: F401,F403
from .lindblad import (
    LindbladGenerator,
    Superoperator,
    apply_heisenberg,
    apply_schrodinger,
    check_detailed_balance,
    dirichlet_form,
    stationary_state,
    symmetrize,
    tensor_power,
    to_superoperator,
)
from .lp_spaces import (
    FullRankState,
    expectation,
    gamma_map,
    random_observables,
    random_state,
    variance,
    weighted_inner,
    weighted_norm,
)
from .models import (
    DepolarizingSpec,
    QubitUnitalSpec,
    RingSpec,
    build_depolarizing,
    build_qubit_unital,
    build_ring,
    depolarizing_nash_certificate,
    qubit_nash_certificate,
    ring_nash_certificate,
    ring_norm_bound,
)
from .nash import (
    MixingBoundReport,
    NashCertificate,
    VerificationReport,
    converse_nash,
    counting_bound,
    eigenvalue_lower_bounds,
    fit_c,
    ls_lower_bound,
    mixing_time,
    nash_ratio_I,
    nash_ratio_II,
    sobolev_implies_nash_check,
    tensor_multiplicativity_check,
    ultracontractive_bound,
    verify_nash,
)
from .semigroup import (
    Semigroup,
    SpectralReport,
    evolve,
    norm_1to2,
    spectral_gap,
    spectral_report,
    xi_exact,
)

__version__ = "0.1.0"
