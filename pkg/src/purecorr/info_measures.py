"""Entropic functionals in bits: von Neumann entropy, mutual information,
interaction information, coherent information, and the two-qubit
entanglement of formation via concurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from .errors import ContractViolation
from .tensor_core import DensityMatrix, _ptrace
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "Partition",
    "entropy",
    "marginal_entropy",
    "mutual_information",
    "conditional_entropy",
    "interaction_information",
    "coherent_information",
    "concurrence_2qubit",
    "eof_2qubit",
    "binary_entropy",
    "e_cq",
]


@dataclass(frozen=True)
class Partition:
    """Disjoint groups of subsystem indices defining a cut such as A:B or A:BC."""

    groups: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        groups = tuple(tuple(sorted(int(i) for i in g)) for g in self.groups)
        if any(len(g) == 0 for g in groups):
            raise ContractViolation("partition groups must be nonempty")
        flat = [i for g in groups for i in g]
        if len(set(flat)) != len(flat):
            raise ContractViolation(f"partition groups must be disjoint, got {groups}")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def of(cls, *groups) -> "Partition":
        return cls(tuple(tuple(g) if isinstance(g, Iterable) else (g,) for g in groups))

    def union(self) -> Tuple[int, ...]:
        return tuple(sorted(i for g in self.groups for i in g))

    def validate_for(self, rho: DensityMatrix) -> None:
        rho.dims.validate_indices(self.union())


def _entropy_from_matrix(m: np.ndarray, cutoff: float) -> float:
    ev = np.linalg.eigvalsh((m + m.conj().T) / 2)
    ev = ev[ev > cutoff]
    if ev.size == 0:
        return 0.0
    return float(-np.sum(ev * np.log2(ev)))


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ContractViolation(f"binary entropy argument must be in [0, 1], got {x}")
    total = 0.0
    for v in (x, 1.0 - x):
        if v > 0.0:
            total -= v * np.log2(v)
    return float(total)


def entropy(rho: DensityMatrix, *, tol: Tolerances = DEFAULT) -> float:
    """Von Neumann entropy -Tr(rho log2 rho) in bits; 0*log 0 counts as 0."""
    return _entropy_from_matrix(rho.entries, tol.entropy_cutoff)


def marginal_entropy(rho: DensityMatrix, group: Iterable[int], *, tol: Tolerances = DEFAULT) -> float:
    """Entropy of the reduced state on `group`."""
    idx = rho.dims.validate_indices(group)
    reduced = _ptrace(rho.entries, rho.dims.factors, sorted(idx))
    return _entropy_from_matrix(reduced, tol.entropy_cutoff)


def mutual_information(rho: DensityMatrix, cut: Partition, *, tol: Tolerances = DEFAULT) -> float:
    """I(G1:G2) = S(G1) + S(G2) - S(G1 G2) across a two-group cut."""
    if len(cut.groups) != 2:
        raise ContractViolation("mutual information needs exactly two groups")
    cut.validate_for(rho)
    g1, g2 = cut.groups
    return (marginal_entropy(rho, g1, tol=tol)
            + marginal_entropy(rho, g2, tol=tol)
            - marginal_entropy(rho, g1 + g2, tol=tol))


def conditional_entropy(rho: DensityMatrix, target: Iterable[int], given: Iterable[int],
                        *, tol: Tolerances = DEFAULT) -> float:
    """S(T|G) = S(TG) - S(G)."""
    t = tuple(target)
    g = tuple(given)
    Partition((t, g)).validate_for(rho)  # disjointness + range checks
    return marginal_entropy(rho, t + g, tol=tol) - marginal_entropy(rho, g, tol=tol)


def interaction_information(rho: DensityMatrix, cut: Optional[Partition] = None,
                            *, tol: Tolerances = DEFAULT) -> float:
    """S(AB)+S(BC)+S(AC)-S(A)-S(B)-S(C)-S(ABC) for a three-group cut.

    Positive or negative; its sign decides whether mutual information is
    monogamous on the state. Defaults to one group per party on tripartite
    states.
    """
    if cut is None:
        if rho.dims.n_parties != 3:
            raise ContractViolation("default cut needs a three-party state")
        cut = Partition(((0,), (1,), (2,)))
    if len(cut.groups) != 3:
        raise ContractViolation("interaction information needs exactly three groups")
    cut.validate_for(rho)
    a, b, c = cut.groups
    s = lambda g: marginal_entropy(rho, g, tol=tol)
    return (s(a + b) + s(b + c) + s(a + c)
            - s(a) - s(b) - s(c) - s(a + b + c))


def coherent_information(rho: DensityMatrix, sender: Iterable[int], receiver: Iterable[int],
                         *, tol: Tolerances = DEFAULT) -> float:
    """Coherent information I'(A>B) = S(B) - S(AB), sender A and receiver B."""
    a = tuple(sender)
    b = tuple(receiver)
    Partition((a, b)).validate_for(rho)
    return marginal_entropy(rho, b, tol=tol) - marginal_entropy(rho, a + b, tol=tol)


_SY_SY = None


def _spin_flip_kernel() -> np.ndarray:
    global _SY_SY
    if _SY_SY is None:
        sy = np.array([[0, -1j], [1j, 0]])
        _SY_SY = np.kron(sy, sy)
    return _SY_SY


def concurrence_2qubit(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state.

    C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of the
    eigenvalues of rho (sy x sy) rho* (sy x sy), clamped at zero.
    """
    if rho.dims.factors != (2, 2):
        raise ContractViolation(f"concurrence needs a 2x2 qubit pair, got dims {rho.dims.factors}")
    k = _spin_flip_kernel()
    m = rho.entries @ k @ rho.entries.conj() @ k
    ev = np.linalg.eigvals(m).real
    ev = np.sqrt(np.clip(ev, 0.0, None))
    ev.sort()
    return float(max(0.0, ev[-1] - ev[-2] - ev[-3] - ev[-4]))


def eof_2qubit(rho: DensityMatrix) -> float:
    """Entanglement of formation of a two-qubit state, h((1 + sqrt(1-C^2)) / 2)."""
    c = concurrence_2qubit(rho)
    return binary_entropy((1.0 + np.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


def e_cq(ep_value: float, ef_value: float) -> float:
    """Correlation of classical and quantum origin: total correlation minus formation."""
    ep_value = float(ep_value)
    ef_value = float(ef_value)
    if not (np.isfinite(ep_value) and np.isfinite(ef_value)):
        raise ContractViolation("e_cq needs finite inputs")
    return ep_value - ef_value
