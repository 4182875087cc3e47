"""purecorr: numerics for total-correlation measures of small quantum states.

Entanglement of purification with certified brackets and exact-structure
certificates, the quantum advantage of dense coding, and audits of their
monogamy / polygamy / additivity inequalities.
"""

__version__ = "0.1.0"

from .errors import AncillaTooSmallError, ContractViolation, DimensionCapExceededError
from .tolerances import DEFAULT, Tolerances
from .tensor_core import (Dims, Operator, DensityMatrix, PureState, tensor,
                          partial_trace, permute_subsystems, hermitian_eigs,
                          random_density_matrix, haar_random_unitary)
from .state_zoo import (StateDescriptor, bell_state, ghz_generalized, w_state,
                        fig1_family, fig2_family, ghz_mixture, ghz_sign_mixture,
                        araki_lieb_state, ssa_equality_state, werner_2qubit,
                        flagged_block_state)
from .info_measures import (Partition, entropy, marginal_entropy, mutual_information,
                            conditional_entropy, interaction_information,
                            coherent_information, concurrence_2qubit, eof_2qubit,
                            binary_entropy, e_cq)
from .purification import (PurificationFrame, UnitaryParams, standard_purification,
                           params_to_unitary, objective_entropy)
from .ep_solver import (EpConfig, Bracket, ExactnessCertificate, EpResult,
                        ep_lower_bounds, ep_upper_bound_trivial, ep_optimize,
                        detect_exact_structure, ep_subadditivity_certified)
from .records import AuditRecord
from .dense_coding import (ChannelParams, DcResult, apply_channel, dc_advantage,
                           dc_monogamy_audit, dc_superadditivity_audit,
                           dc_vanishing_audit)
from .inequality_lab import (SweepGrid, SweepResult, WEAK_MONOGAMY_CONSTANT,
                             monogamy_score, thm1_polygamy_pure_audit, fig_sweep,
                             prop3_audit, prop4_audit, weak_monogamy_audit,
                             w_closed_form_check)

__all__ = [
    "__version__",
    "AncillaTooSmallError", "ContractViolation", "DimensionCapExceededError",
    "DEFAULT", "Tolerances",
    "Dims", "Operator", "DensityMatrix", "PureState", "tensor", "partial_trace",
    "permute_subsystems", "hermitian_eigs", "random_density_matrix",
    "haar_random_unitary",
    "StateDescriptor", "bell_state", "ghz_generalized", "w_state", "fig1_family",
    "fig2_family", "ghz_mixture", "ghz_sign_mixture", "araki_lieb_state",
    "ssa_equality_state", "werner_2qubit", "flagged_block_state",
    "Partition", "entropy", "marginal_entropy", "mutual_information",
    "conditional_entropy", "interaction_information", "coherent_information",
    "concurrence_2qubit", "eof_2qubit", "binary_entropy", "e_cq",
    "PurificationFrame", "UnitaryParams", "standard_purification",
    "params_to_unitary", "objective_entropy",
    "EpConfig", "Bracket", "ExactnessCertificate", "EpResult", "ep_lower_bounds",
    "ep_upper_bound_trivial", "ep_optimize", "detect_exact_structure",
    "ep_subadditivity_certified",
    "AuditRecord",
    "ChannelParams", "DcResult", "apply_channel", "dc_advantage",
    "dc_monogamy_audit", "dc_superadditivity_audit", "dc_vanishing_audit",
    "SweepGrid", "SweepResult", "WEAK_MONOGAMY_CONSTANT", "monogamy_score",
    "thm1_polygamy_pure_audit", "fig_sweep", "prop3_audit", "prop4_audit",
    "weak_monogamy_audit", "w_closed_form_check",
]
