"""Dense complex linear algebra on multipartite Hilbert spaces.

Subsystem ordering is row-major: the leftmost factor of a `Dims` is the most
significant index of the flattened vector/matrix, matching `numpy.reshape`
with C order. All constructors and partial traces obey this convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import ContractViolation
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "Dims",
    "Operator",
    "DensityMatrix",
    "PureState",
    "tensor",
    "partial_trace",
    "permute_subsystems",
    "hermitian_eigs",
    "random_density_matrix",
    "haar_random_unitary",
]


@dataclass(frozen=True)
class Dims:
    """Ordered list of subsystem dimensions tagging a vector or matrix."""

    factors: Tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(d) for d in self.factors)
        if len(factors) == 0:
            raise ContractViolation("Dims needs at least one factor")
        if any(d < 1 for d in factors):
            raise ContractViolation(f"subsystem dimensions must be >= 1, got {factors}")
        object.__setattr__(self, "factors", factors)

    @property
    def total(self) -> int:
        return math.prod(self.factors)

    @property
    def n_parties(self) -> int:
        return len(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    def validate_indices(self, indices: Iterable[int]) -> Tuple[int, ...]:
        idx = tuple(int(i) for i in indices)
        for i in idx:
            if not 0 <= i < len(self.factors):
                raise ContractViolation(
                    f"subsystem index {i} out of range for {len(self.factors)} parties"
                )
        if len(set(idx)) != len(idx):
            raise ContractViolation(f"duplicate subsystem indices in {idx}")
        return idx


def _as_dims(dims) -> Dims:
    return dims if isinstance(dims, Dims) else Dims(tuple(dims))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Operator:
    """A complex square matrix tagged with its tensor factorization."""

    entries: np.ndarray
    dims: Dims

    def __post_init__(self):
        dims = _as_dims(self.dims)
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ContractViolation(f"operator must be square, got shape {entries.shape}")
        if entries.shape[0] != dims.total:
            raise ContractViolation(
                f"operator dimension {entries.shape[0]} does not match dims total {dims.total}"
            )
        object.__setattr__(self, "entries", _freeze(entries))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator.

    Invariants (checked on construction against the supplied tolerances):
    Hermiticity within ``tol.hermiticity``, eigenvalues >= ``tol.eigenvalue_floor``,
    trace within ``tol.trace`` of 1.
    """

    __slots__ = ("op",)

    def __init__(self, entries, dims, *, tol: Tolerances = DEFAULT):
        if isinstance(entries, Operator):
            op = entries
        else:
            op = Operator(entries, _as_dims(dims))
        m = op.entries
        herm_dev = float(np.max(np.abs(m - m.conj().T)))
        if herm_dev > tol.hermiticity:
            raise ContractViolation(
                f"density matrix not Hermitian: max deviation {herm_dev:.3e} > {tol.hermiticity:.0e}"
            )
        tr_dev = abs(np.trace(m).real - 1.0)
        if tr_dev > tol.trace:
            raise ContractViolation(
                f"density matrix trace off by {tr_dev:.3e} > {tol.trace:.0e}"
            )
        lo = float(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)))
        if lo < tol.eigenvalue_floor:
            raise ContractViolation(
                f"density matrix has eigenvalue {lo:.3e} below floor {tol.eigenvalue_floor:.0e}"
            )
        object.__setattr__(self, "op", op)

    @property
    def entries(self) -> np.ndarray:
        return self.op.entries

    @property
    def dims(self) -> Dims:
        return self.op.dims

    @property
    def dim(self) -> int:
        return self.op.dim

    def purity(self) -> float:
        m = self.entries
        return float(np.trace(m @ m).real)

    def rank(self, cutoff: float = DEFAULT.entropy_cutoff) -> int:
        """Number of eigenvalues above `cutoff`."""
        return int(np.sum(np.linalg.eigvalsh(self.entries) > cutoff))

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims.factors}, purity={self.purity():.6f})"


class PureState:
    """Unit-norm complex vector tagged with subsystem dimensions."""

    __slots__ = ("amplitudes", "dims")

    def __init__(self, amplitudes, dims, *, tol: Tolerances = DEFAULT):
        dims = _as_dims(dims)
        amp = np.array(amplitudes, dtype=complex).reshape(-1)
        if amp.shape[0] != dims.total:
            raise ContractViolation(
                f"state vector length {amp.shape[0]} does not match dims total {dims.total}"
            )
        norm_dev = abs(float(np.vdot(amp, amp).real) - 1.0)
        if norm_dev > tol.state_norm:
            raise ContractViolation(
                f"state vector squared norm off by {norm_dev:.3e} > {tol.state_norm:.0e}"
            )
        object.__setattr__(self, "amplitudes", _freeze(amp))
        object.__setattr__(self, "dims", dims)

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    def to_density_matrix(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)

    def __repr__(self):
        return f"PureState(dims={self.dims.factors})"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def tensor(a, b):
    """Kronecker product; the result's dims are the concatenated factor lists.

    Accepts `Operator` or `DensityMatrix` (two density matrices give a density
    matrix), and `PureState` pairs.
    """
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes),
                         Dims(a.dims.factors + b.dims.factors))
    both_density = isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix)
    ea = a.entries if isinstance(a, (Operator, DensityMatrix)) else np.asarray(a)
    eb = b.entries if isinstance(b, (Operator, DensityMatrix)) else np.asarray(b)
    dims = Dims(a.dims.factors + b.dims.factors)
    out = np.kron(ea, eb)
    if both_density:
        return DensityMatrix(out, dims)
    return Operator(out, dims)


def _ptrace(m: np.ndarray, factors: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace keeping the listed factors, in their original order."""
    n = len(factors)
    keep = list(keep)
    t = m.reshape(tuple(factors) * 2)
    traced = sorted((i for i in range(n) if i not in keep), reverse=True)
    for i in traced:
        half = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + half)
    d = math.prod(factors[i] for i in sorted(keep)) if keep else 1
    return t.reshape(d, d)


def partial_trace(rho: DensityMatrix, keep, *, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """Trace out every subsystem not in `keep`; kept factors stay in original order."""
    idx = rho.dims.validate_indices(keep)
    kept_sorted = tuple(sorted(idx))
    out = _ptrace(rho.entries, rho.dims.factors, kept_sorted)
    out = (out + out.conj().T) / 2  # remove float asymmetry from the contraction
    new_dims = Dims(tuple(rho.dims.factors[i] for i in kept_sorted)) if kept_sorted else Dims((1,))
    return DensityMatrix(out, new_dims, tol=tol)


def permute_subsystems(state, order):
    """Reorder the tensor factors of a state; `order[k]` is the old index of the new k-th factor."""
    if isinstance(state, PureState):
        dims = state.dims
        perm = dims.validate_indices(order)
        if len(perm) != dims.n_parties:
            raise ContractViolation("permutation must cover every subsystem")
        t = state.amplitudes.reshape(dims.factors).transpose(perm).reshape(-1)
        return PureState(t, Dims(tuple(dims.factors[i] for i in perm)))
    dims = state.dims
    perm = dims.validate_indices(order)
    if len(perm) != dims.n_parties:
        raise ContractViolation("permutation must cover every subsystem")
    n = dims.n_parties
    t = state.entries.reshape(dims.factors * 2)
    t = t.transpose(tuple(perm) + tuple(p + n for p in perm))
    new_dims = Dims(tuple(dims.factors[i] for i in perm))
    out = t.reshape(new_dims.total, new_dims.total)
    if isinstance(state, DensityMatrix):
        return DensityMatrix(out, new_dims)
    return Operator(out, new_dims)


def hermitian_eigs(m, *, tol: Tolerances = DEFAULT):
    """Eigenvalues (descending) and orthonormal eigenvector columns of a Hermitian operator.

    Raises `ContractViolation` if the input deviates from Hermiticity by more
    than ``tol.hermitian_input`` in any entry.
    """
    entries = m.entries if isinstance(m, (Operator, DensityMatrix)) else np.asarray(m, dtype=complex)
    dev = float(np.max(np.abs(entries - entries.conj().T)))
    if dev > tol.hermitian_input:
        raise ContractViolation(
            f"hermitian_eigs input deviates from Hermiticity by {dev:.3e} > {tol.hermitian_input:.0e}"
        )
    sym = (entries + entries.conj().T) / 2
    vals, vecs = np.linalg.eigh(sym)
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def _haar_from_rng(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix with phase fix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_random_unitary(dim: int, seed: int) -> Operator:
    """Seeded Haar-random unitary; deterministic per (dim, seed)."""
    if dim < 1:
        raise ContractViolation(f"unitary dimension must be >= 1, got {dim}")
    u = _haar_from_rng(dim, np.random.default_rng(seed))
    return Operator(u, Dims((dim,)))


def random_density_matrix(dims, rank: int, seed: int, *, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """Seeded random density matrix of the given rank.

    Sampled as G G^dag / Tr(G G^dag) with G a complex Gaussian matrix of width
    `rank` (the standard induced-measure construction); deterministic per seed.
    """
    dims = _as_dims(dims)
    if not 1 <= rank <= dims.total:
        raise ContractViolation(f"rank must be in [1, {dims.total}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dims.total, rank)) + 1j * rng.normal(size=(dims.total, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(rho, dims, tol=tol)
