"""Constructors for the named states and state families used throughout the library.

All multiqubit constructors use the row-major basis ordering of `tensor_core`
(leftmost qubit most significant).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ContractViolation
from .tensor_core import DensityMatrix, Dims, PureState, tensor

__all__ = [
    "StateDescriptor",
    "MAX_QUBITS",
    "bell_state",
    "ghz_generalized",
    "w_state",
    "fig1_family",
    "fig2_family",
    "ghz_mixture",
    "ghz_sign_mixture",
    "araki_lieb_state",
    "ssa_equality_state",
    "werner_2qubit",
    "flagged_block_state",
]

MAX_QUBITS = 10  # 2^n growth; desk scale


@dataclass(frozen=True)
class StateDescriptor:
    """Serializable identity of a constructed state: family name plus parameters."""

    family: str
    params: Tuple[float, ...]
    n_parties: int
    dims: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "params": list(self.params),
            "n_parties": self.n_parties,
        }


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ContractViolation(f"{name} must lie in [0, 1], got {value}")
    return value


def _check_sign(sign) -> int:
    s = int(np.sign(sign)) if sign != 0 else 0
    if s not in (-1, 1):
        raise ContractViolation(f"sign must be +1 or -1, got {sign}")
    return s


def _check_n(n: int) -> int:
    n = int(n)
    if n < 2:
        raise ContractViolation(f"need at least 2 parties, got {n}")
    if n > MAX_QUBITS:
        raise ContractViolation(f"n={n} exceeds the {MAX_QUBITS}-qubit cap")
    return n


def _qubit_dims(n: int) -> Dims:
    return Dims((2,) * n)


def _projector(psi: PureState) -> np.ndarray:
    return np.outer(psi.amplitudes, psi.amplitudes.conj())


def bell_state(kind: str = "phi+") -> PureState:
    """One of the four two-qubit Bell states: phi+/phi-/psi+/psi-."""
    v = np.zeros(4, dtype=complex)
    if kind in ("phi+", "phi-"):
        v[0], v[3] = 1.0, 1.0 if kind == "phi+" else -1.0
    elif kind in ("psi+", "psi-"):
        v[1], v[2] = 1.0, 1.0 if kind == "psi+" else -1.0
    else:
        raise ContractViolation(f"unknown Bell state {kind!r}")
    return PureState(v / np.sqrt(2), Dims((2, 2)))


def ghz_generalized(n: int, a: float, sign: int = +1) -> PureState:
    """Generalized GHZ state sqrt(a)|0...0> + sign*sqrt(1-a)|1...1> on n qubits."""
    n = _check_n(n)
    a = _check_prob("a", a)
    s = _check_sign(sign)
    v = np.zeros(2 ** n, dtype=complex)
    v[0] = np.sqrt(a)
    v[-1] = s * np.sqrt(1.0 - a)
    return PureState(v, _qubit_dims(n))


def w_state(n: int) -> PureState:
    """W state: equal amplitudes 1/sqrt(n) on the n weight-one basis strings."""
    n = _check_n(n)
    v = np.zeros(2 ** n, dtype=complex)
    for k in range(n):
        v[1 << (n - 1 - k)] = 1.0 / np.sqrt(n)
    return PureState(v, _qubit_dims(n))


def fig1_family(p: float, a: float) -> DensityMatrix:
    """Three-qubit mixture p W + (1-p)[a |000><000| + (1-a) |111><111|]."""
    p = _check_prob("p", p)
    a = _check_prob("a", a)
    rho = p * _projector(w_state(3))
    rho[0, 0] += (1.0 - p) * a
    rho[7, 7] += (1.0 - p) * (1.0 - a)
    return DensityMatrix(rho, _qubit_dims(3))


def fig2_family(p: float) -> DensityMatrix:
    """Three-qubit mixture p W + (1-p)/8 I."""
    p = _check_prob("p", p)
    rho = p * _projector(w_state(3)) + (1.0 - p) / 8.0 * np.eye(8)
    return DensityMatrix(rho, _qubit_dims(3))


def ghz_mixture(p: float, a: float, b: float, sign: int = +1, n: int = 3) -> DensityMatrix:
    """Mixture p |GHZ(a)><GHZ(a)| + (1-p)[b |0..0><0..0| + (1-b) |1..1><1..1|] on n qubits."""
    p = _check_prob("p", p)
    a = _check_prob("a", a)
    b = _check_prob("b", b)
    n = _check_n(n)
    rho = p * _projector(ghz_generalized(n, a, sign))
    rho[0, 0] += (1.0 - p) * b
    rho[-1, -1] += (1.0 - p) * (1.0 - b)
    return DensityMatrix(rho, _qubit_dims(n))


def ghz_sign_mixture(p: float, a: float, n: int = 3) -> DensityMatrix:
    """Mixture p |GHZ(a)+><...| + (1-p) |GHZ(a)-><...| of the two sign branches."""
    p = _check_prob("p", p)
    a = _check_prob("a", a)
    n = _check_n(n)
    rho = (p * _projector(ghz_generalized(n, a, +1))
           + (1.0 - p) * _projector(ghz_generalized(n, a, -1)))
    return DensityMatrix(rho, _qubit_dims(n))


def araki_lieb_state(rho_L: DensityMatrix, psi_RB: PureState) -> DensityMatrix:
    """Product rho_L (x) |Psi_RB><Psi_RB| with party A = L (x) R and party B the rest.

    The returned dims are [d_L, d_R, d_B]; the A:B cut is ({0,1}, {2}). By
    construction S(A) - S(B) = S(AB), the entropy-difference saturation whose
    bipartite total correlation equals the smaller marginal entropy.
    """
    if psi_RB.dims.n_parties != 2:
        raise ContractViolation("psi_RB must be bipartite (R and B factors)")
    if rho_L.dims.n_parties != 1:
        rho_L = DensityMatrix(rho_L.entries, Dims((rho_L.dim,)))
    return tensor(rho_L, psi_RB.to_density_matrix())


def ssa_equality_state(
    weights: Sequence[float],
    left_blocks: Sequence[DensityMatrix],
    right_blocks: Sequence[DensityMatrix],
) -> DensityMatrix:
    """Direct sum  sum_j q_j rho_{A bL_j} (x) rho_{bR_j C}  embedded in one A (x) B (x) C space.

    Each left block lives on A (x) bL_j and each right block on bR_j (x) C; the
    middle party is B = direct-sum of the bL_j (x) bR_j slots, realized
    block-diagonally with zero padding. The output saturates
    S(AB) + S(BC) = S(B) + S(ABC).
    """
    weights = [float(w) for w in weights]
    if len(weights) != len(left_blocks) or len(weights) != len(right_blocks):
        raise ContractViolation("weights and block lists must have equal length")
    if abs(sum(weights) - 1.0) > 1e-12 or any(w < 0 for w in weights):
        raise ContractViolation("weights must be nonnegative and sum to 1")
    if any(lb.dims.n_parties != 2 for lb in left_blocks):
        raise ContractViolation("each left block must be bipartite on A (x) bL_j")
    if any(rb.dims.n_parties != 2 for rb in right_blocks):
        raise ContractViolation("each right block must be bipartite on bR_j (x) C")
    d_a = left_blocks[0].dims[0]
    d_c = right_blocks[0].dims[1]
    if any(lb.dims[0] != d_a for lb in left_blocks):
        raise ContractViolation("all left blocks must share the same A dimension")
    if any(rb.dims[1] != d_c for rb in right_blocks):
        raise ContractViolation("all right blocks must share the same C dimension")
    slot_sizes = [lb.dims[1] * rb.dims[0] for lb, rb in zip(left_blocks, right_blocks)]
    d_b = sum(slot_sizes)
    out = np.zeros((d_a, d_b, d_c) * 2, dtype=complex)
    offset = 0
    for w, lb, rb, size in zip(weights, left_blocks, right_blocks, slot_sizes):
        blk = w * np.kron(lb.entries, rb.entries)  # ordering [A, bL, bR, C]
        blk = blk.reshape(d_a, size, d_c, d_a, size, d_c)
        out[:, offset:offset + size, :, :, offset:offset + size, :] += blk
        offset += size
    d = d_a * d_b * d_c
    return DensityMatrix(out.reshape(d, d), Dims((d_a, d_b, d_c)))


def werner_2qubit(p: float) -> DensityMatrix:
    """Werner state p |psi-><psi-| + (1-p) I/4 (singlet plus white noise)."""
    p = _check_prob("p", p)
    rho = p * _projector(bell_state("psi-")) + (1.0 - p) / 4.0 * np.eye(4)
    return DensityMatrix(rho, Dims((2, 2)))


def flagged_block_state(
    weights: Sequence[float],
    left_pures: Sequence[PureState],
    right_pures: Sequence[PureState],
) -> DensityMatrix:
    """Mixture of pure-product blocks with a classical flag party recording the block.

    Block j is |psi_j><psi_j| on A_j (x) bL_j times |phi_j><phi_j| on bR_j (x) C_j,
    embedded so that A = direct sum of the A_j, B = direct sum of the
    bL_j (x) bR_j, C = direct sum of the C_j, and the flag party D carries |j>.
    The A/B/C marginal then saturates S(B|A) + S(B|C) = 0, which pins the
    B:(AC) total correlation at S(B) and kills the dense-coding advantage
    toward B from any extension party.
    """
    weights = [float(w) for w in weights]
    k = len(weights)
    if k != len(left_pures) or k != len(right_pures):
        raise ContractViolation("weights and block lists must have equal length")
    if abs(sum(weights) - 1.0) > 1e-12 or any(w < 0 for w in weights):
        raise ContractViolation("weights must be nonnegative and sum to 1")
    if any(p.dims.n_parties != 2 for p in left_pures + list(right_pures)):
        raise ContractViolation("every block must be a bipartite pure state")
    d_a = sum(p.dims[0] for p in left_pures)
    d_c = sum(p.dims[1] for p in right_pures)
    d_b = sum(lp.dims[1] * rp.dims[0] for lp, rp in zip(left_pures, right_pures))
    out = np.zeros((d_a, d_b, d_c, k) * 2, dtype=complex)
    off_a = off_b = off_c = 0
    for j, (w, lp, rp) in enumerate(zip(weights, left_pures, right_pures)):
        da_j, dbl_j = lp.dims.factors
        dbr_j, dc_j = rp.dims.factors
        size_b = dbl_j * dbr_j
        vec = np.kron(lp.amplitudes, rp.amplitudes).reshape(da_j, size_b, dc_j)
        block = w * np.einsum("abc,xyz->abcxyz", vec, vec.conj())
        out[off_a:off_a + da_j, off_b:off_b + size_b, off_c:off_c + dc_j, j,
            off_a:off_a + da_j, off_b:off_b + size_b, off_c:off_c + dc_j, j] += block
        off_a += da_j
        off_b += size_b
        off_c += dc_j
    d = d_a * d_b * d_c * k
    return DensityMatrix(out.reshape(d, d), Dims((d_a, d_b, d_c, k)))
