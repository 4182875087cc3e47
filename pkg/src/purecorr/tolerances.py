"""Centralized numerical tolerances.

Every tolerance used by validators, detectors and audits lives here so tests
can pin them and callers can override a single instance instead of scattering
magic numbers.
"""

from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-10        # max-entry deviation from M = M^dag
    trace: float = 1e-10              # |Tr(rho) - 1|
    eigenvalue_floor: float = -1e-10  # most negative admissible eigenvalue
    spectral_clamp: float = 1e-10     # eigenvalues in (-clamp, 0) clamp to 0 before logs
    state_norm: float = 1e-12         # | <psi|psi> - 1 |
    entropy_cutoff: float = 1e-12     # eigenvalues below this are dropped from entropy sums
    reconstruction: float = 1e-9      # ||M - V L V^dag||_max for eigensystems
    hermitian_input: float = 1e-8     # eigensolver inputs must be Hermitian this well
    unitarity: float = 1e-10          # ||U^dag U - I||_max
    reduction: float = 1e-10          # purification must reproduce its base state this well
    analytic: float = 1e-9            # analytic identities and structure certificates
    bound_coincidence: float = 1e-9   # bracket width below which the bounds pin the value
    stacked: float = 5e-3             # audits that combine two independent optimizer runs

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = Tolerances()
