"""Standard purifications with a configurable ancilla split, and the
objective that the total-correlation optimizer minimizes over ancilla
unitaries.

The purified vector lives on A (x) B (x) A' (x) B' in that order. Writing it
as a (d_A d_B) x (d_A' d_B') matrix M, acting with an ancilla unitary U gives
the rotated matrix M @ U^T, and the objective is the entropy of the reduced
state on A (x) A' (equal to the one on B (x) B' because the global state is
pure, and to half the mutual information across the AA':BB' cut).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import _unitary_opt as uo
from .errors import AncillaTooSmallError, ContractViolation
from .tensor_core import DensityMatrix, Dims, PureState
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "PurificationFrame",
    "UnitaryParams",
    "standard_purification",
    "params_to_unitary",
    "objective_entropy",
]


@dataclass(frozen=True)
class UnitaryParams:
    """Chart coordinates of an ancilla unitary: U = exp(i H(theta))."""

    theta: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float).reshape(-1)
        if not np.all(np.isfinite(theta)):
            raise ContractViolation("unitary parameters must be finite")
        object.__setattr__(self, "theta", theta)

    @classmethod
    def zeros(cls, dim: int) -> "UnitaryParams":
        return cls(np.zeros(dim * dim))


class PurificationFrame:
    """A mixed bipartite state together with its standard purification.

    The ancilla is split into A' and B' factors; the purifying vectors occupy
    the first `rank` joint ancilla basis states, which for d_B' >= rank is
    exactly the |0>_A' |i>_B' layout of the textbook construction.
    """

    __slots__ = ("base_state", "rank", "d_aprime", "d_bprime", "psi_s", "_psi_mat")

    def __init__(self, base_state: DensityMatrix, rank: int, d_aprime: int, d_bprime: int,
                 psi_s: PureState, *, tol: Tolerances = DEFAULT):
        if d_aprime * d_bprime < rank:
            raise AncillaTooSmallError(d_aprime * d_bprime, rank)
        if base_state.dims.n_parties != 2:
            raise ContractViolation("frame base state must be bipartite")
        d_a, d_b = base_state.dims.factors
        expect = (d_a, d_b, d_aprime, d_bprime)
        if psi_s.dims.factors != expect:
            raise ContractViolation(f"psi_s dims {psi_s.dims.factors} != expected {expect}")
        mat = psi_s.amplitudes.reshape(d_a * d_b, d_aprime * d_bprime)
        reduced = mat @ mat.conj().T
        err = float(np.max(np.abs(reduced - base_state.entries)))
        if err > tol.reduction:
            raise ContractViolation(
                f"purification does not reproduce its base state: max error {err:.3e}"
            )
        object.__setattr__(self, "base_state", base_state)
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "d_aprime", int(d_aprime))
        object.__setattr__(self, "d_bprime", int(d_bprime))
        object.__setattr__(self, "psi_s", psi_s)
        object.__setattr__(self, "_psi_mat", mat)

    @property
    def ancilla_dim(self) -> int:
        return self.d_aprime * self.d_bprime

    @property
    def total_dim(self) -> int:
        return self.base_state.dim * self.ancilla_dim

    def side_dims(self) -> Tuple[int, int, int, int]:
        d_a, d_b = self.base_state.dims.factors
        return d_a, d_b, self.d_aprime, self.d_bprime

    def rotated_matrix(self, u: np.ndarray) -> np.ndarray:
        """Purified vector after (I (x) U), as a (d_A d_B) x (d_A' d_B') matrix.

        `u` may be a full ancilla unitary or just its first `rank` columns
        (the isometry the objective actually depends on).
        """
        if u.shape[1] == self.ancilla_dim and u.shape[0] == self.ancilla_dim:
            return self._psi_mat @ u.T
        if u.shape == (self.ancilla_dim, self.rank):
            return self.support_matrix() @ u.T
        raise ContractViolation(f"unitary/isometry shape {u.shape} does not fit the frame")

    def support_matrix(self) -> np.ndarray:
        """The purification's nonzero ancilla columns, shape (d_A d_B, rank)."""
        return self._psi_mat[:, :self.rank]

    def __repr__(self):
        return (f"PurificationFrame(base={self.base_state.dims.factors}, rank={self.rank}, "
                f"ancilla={self.d_aprime}x{self.d_bprime})")


def standard_purification(rho: DensityMatrix, d_aprime: int, d_bprime: int,
                          *, tol: Tolerances = DEFAULT) -> PurificationFrame:
    """Spectral purification sum_i sqrt(l_i) |v_i>_AB (x) |i>_A'B' of a bipartite state.

    Eigenvectors with eigenvalue below ``tol.entropy_cutoff`` are dropped, so
    the ancilla only needs to hold the numerical rank; a too-small ancilla
    raises an error naming the required minimum.
    """
    if rho.dims.n_parties != 2:
        raise ContractViolation("standard_purification expects a bipartite state")
    if d_aprime < 1 or d_bprime < 1:
        raise ContractViolation("ancilla factors must be >= 1")
    ev, vec = np.linalg.eigh(rho.entries)
    order = np.argsort(ev)[::-1]
    ev, vec = ev[order], vec[:, order]
    keep = ev > tol.entropy_cutoff
    ev, vec = ev[keep], vec[:, keep]
    rank = int(ev.size)
    if d_aprime * d_bprime < rank:
        raise AncillaTooSmallError(d_aprime * d_bprime, rank)
    d_a, d_b = rho.dims.factors
    mat = np.zeros((d_a * d_b, d_aprime * d_bprime), dtype=complex)
    mat[:, :rank] = np.sqrt(ev) * vec
    psi = PureState(mat.reshape(-1), Dims((d_a, d_b, d_aprime, d_bprime)))
    return PurificationFrame(rho, rank, d_aprime, d_bprime, psi, tol=tol)


def params_to_unitary(p: UnitaryParams, dim: int, *, tol: Tolerances = DEFAULT) -> np.ndarray:
    """exp(i H(theta)) for the Hermitian H charted by theta (length dim^2)."""
    if p.theta.size != dim * dim:
        raise ContractViolation(f"theta must have length {dim * dim}, got {p.theta.size}")
    u = uo.chart_unitary(p.theta, dim)
    dev = float(np.max(np.abs(u.conj().T @ u - np.eye(dim))))
    if dev > tol.unitarity:
        raise ContractViolation(f"chart produced a non-unitary matrix, deviation {dev:.3e}")
    return u


def _entropy_of_rotated(frame: PurificationFrame, u: np.ndarray, side: str,
                        cutoff: float) -> float:
    d_a, d_b, d_ap, d_bp = frame.side_dims()
    phi = frame.rotated_matrix(u).reshape(d_a, d_b, d_ap, d_bp)
    if side == "AA'":
        sigma = np.einsum("abcd,ebfd->acef", phi, phi.conj())
        n = d_a * d_ap
    else:
        sigma = np.einsum("abcd,afch->bdfh", phi, phi.conj())
        n = d_b * d_bp
    ev = np.linalg.eigvalsh(sigma.reshape(n, n))
    ev = ev[ev > cutoff]
    return float(-np.sum(ev * np.log2(ev))) if ev.size else 0.0


def objective_entropy(frame: PurificationFrame, p: UnitaryParams,
                      *, tol: Tolerances = DEFAULT) -> float:
    """S(AA') of the purification rotated by the charted ancilla unitary, in ebits."""
    u = params_to_unitary(p, frame.ancilla_dim, tol=tol)
    return _entropy_of_rotated(frame, u, "AA'", tol.entropy_cutoff)


def _objective_and_grad_wrt_map(frame: PurificationFrame, anc_map: np.ndarray,
                                cutoff: float):
    """Objective S(AA') and its Wirtinger gradient against the ancilla map.

    Works for a full ancilla unitary or for the (ancilla_dim x rank) isometry
    it restricts to; the gradient is G = -conj(PhiL^dag Psi) with PhiL the
    rotated vector hit by log2(sigma_AA') lifted over B, B'.
    """
    d_a, d_b, d_ap, d_bp = frame.side_dims()
    base = frame._psi_mat if anc_map.shape[1] == frame.ancilla_dim \
        else frame.support_matrix()
    phi_mat = base @ anc_map.T
    phi = phi_mat.reshape(d_a, d_b, d_ap, d_bp)
    sigma = np.einsum("abcd,ebfd->acef", phi, phi.conj()).reshape(d_a * d_ap, d_a * d_ap)
    f, log_sigma = uo.entropy_and_log_gradient(sigma, cutoff)
    l4 = log_sigma.reshape(d_a, d_ap, d_a, d_ap)
    phi_l = np.einsum("acef,ebfd->abcd", l4, phi).reshape(d_a * d_b, frame.ancilla_dim)
    g = -(phi_l.conj().T @ base).conj()
    return f, g


def objective_and_grad_isometry(frame: PurificationFrame, t: np.ndarray,
                                cutoff: float = DEFAULT.entropy_cutoff):
    """Objective and df/dT* for an (ancilla_dim x rank) isometry T."""
    return _objective_and_grad_wrt_map(frame, t, cutoff)


def objective_value_and_gradient(frame: PurificationFrame, theta: np.ndarray,
                                 u0: Optional[np.ndarray] = None,
                                 cutoff: float = DEFAULT.entropy_cutoff):
    """Objective S(AA') and its exact theta-gradient for U = exp(iH(theta)) @ u0."""
    dim = frame.ancilla_dim
    h = uo.theta_to_hermitian(theta, dim)
    e, d_eigs, q = uo.expm_i_hermitian(h)
    u = e if u0 is None else e @ u0
    f, g_u = _objective_and_grad_wrt_map(frame, u, cutoff)
    grad = uo.grad_theta_from_grad_unitary(g_u, d_eigs, q, u0)
    return f, grad
