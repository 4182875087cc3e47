"""Audit records: one inequality check, with enough provenance to reproduce it."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .errors import ContractViolation
from .state_zoo import StateDescriptor

__all__ = ["AuditRecord", "decide_verdict", "HOLDS", "HOLDS_EQ", "VIOLATED", "INCONCLUSIVE"]

HOLDS = "holds"
HOLDS_EQ = "holds (equality)"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


def decide_verdict(lhs: float, rhs: float, relation: str, tol: float,
                   degenerate_inconclusive: bool = False) -> Tuple[str, float]:
    """Verdict and signed margin for the claim `lhs <relation> rhs`.

    The margin is positive when the claim holds strictly. Within `tol` of
    equality the verdict is "holds (equality)", except when both sides are
    themselves within `tol` of zero and `degenerate_inconclusive` is set, in
    which case the comparison carries no information.
    """
    if relation == "<=":
        margin = rhs - lhs
    elif relation == ">=":
        margin = lhs - rhs
    else:
        raise ContractViolation(f"relation must be '<=' or '>=', got {relation!r}")
    if margin > tol:
        return HOLDS, margin
    if margin >= -tol:
        if degenerate_inconclusive and abs(lhs) <= tol and abs(rhs) <= tol:
            return INCONCLUSIVE, margin
        return HOLDS_EQ, margin
    return VIOLATED, margin


@dataclass
class AuditRecord:
    """One inequality check: claim, state, both sides, verdict, provenance."""

    claim_id: str
    state: Optional[StateDescriptor]
    lhs: float
    rhs: float
    relation: str
    verdict: str
    certification: str               # "analytic" or "optimizer-assisted"
    tolerance: float
    seed: Optional[int] = None
    extras: Dict[str, object] = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return (self.rhs - self.lhs) if self.relation == "<=" else (self.lhs - self.rhs)

    @property
    def holds(self) -> bool:
        return self.verdict in (HOLDS, HOLDS_EQ)

    def to_json_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "state": self.state.to_json_dict() if self.state else None,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "margin": self.margin,
            "verdict": self.verdict,
            "certification": self.certification,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "extras": dict(self.extras),
        }
