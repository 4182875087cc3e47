"""Shared machinery for smooth minimization over unitary-group search spaces.

Two charts are provided:

* the exponential chart U(theta) = exp(i H(theta)), used by the public
  operations (H Hermitian; the first `dim` entries of theta are its diagonal,
  followed by the real and imaginary parts of the strict upper triangle,
  row-major);

* a polar chart over isometries, used inside the optimizers. Every objective
  here depends on an ancilla unitary only through its first `r` columns, an
  isometry T of shape (n, r), so the search runs over the Stiefel manifold
  via T(Z) = Z (Z^dag Z)^(-1/2) with Z an unconstrained complex matrix. All
  heavy linear algebra then happens at r x r instead of n x n.

Objectives supply Euclidean Wirtinger gradients G = df/dX* with the
convention df = 2 Re Tr(G^dag dX); chain rules for both charts are exact and
cost one small eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

LOG2_FLOOR = 1e-18  # eigenvalue floor inside log2 when differentiating entropies


# ---------------------------------------------------------------------------
# exponential chart (public operations)
# ---------------------------------------------------------------------------

def n_params(dim: int) -> int:
    return dim * dim


def theta_to_hermitian(theta: np.ndarray, dim: int) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (dim * dim,):
        raise ValueError(f"theta must have length dim^2 = {dim * dim}, got {theta.shape}")
    h = np.zeros((dim, dim), dtype=complex)
    h[np.arange(dim), np.arange(dim)] = theta[:dim]
    iu, ju = np.triu_indices(dim, k=1)
    m = iu.size
    x = theta[dim:dim + m]
    y = theta[dim + m:]
    h[iu, ju] = x + 1j * y
    h[ju, iu] = x - 1j * y
    return h


def expm_i_hermitian(h: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """exp(i h) for Hermitian h, plus the eigensystem used (for backprop)."""
    d, q = np.linalg.eigh(h)
    return (q * np.exp(1j * d)) @ q.conj().T, d, q


def chart_unitary(theta: np.ndarray, dim: int, u0: Optional[np.ndarray] = None) -> np.ndarray:
    e, _, _ = expm_i_hermitian(theta_to_hermitian(theta, dim))
    return e if u0 is None else e @ u0


def grad_theta_from_grad_unitary(
    g_u: np.ndarray, d: np.ndarray, q: np.ndarray, u0: Optional[np.ndarray]
) -> np.ndarray:
    """Pull df/dU* back through U = exp(iH) @ U0 to df/dtheta (divided differences)."""
    g_e = g_u if u0 is None else g_u @ u0.conj().T
    exp_d = np.exp(1j * d)
    dd = d[:, None] - d[None, :]
    near = np.abs(dd) < 1e-12
    lam = np.where(
        near,
        1j * np.exp(1j * 0.5 * (d[:, None] + d[None, :])),
        (exp_d[:, None] - exp_d[None, :]) / np.where(near, 1.0, dd),
    )
    gt = q.conj().T @ g_e.conj().T @ q
    xi = q @ (gt * lam.T) @ q.conj().T
    dim = d.size
    grad = np.empty(dim * dim)
    grad[:dim] = 2.0 * np.real(np.diag(xi))
    iu, ju = np.triu_indices(dim, k=1)
    m = iu.size
    grad[dim:dim + m] = 2.0 * np.real(xi[ju, iu] + xi[iu, ju])
    grad[dim + m:] = 2.0 * np.real(1j * (xi[ju, iu] - xi[iu, ju]))
    return grad


# ---------------------------------------------------------------------------
# polar isometry chart (optimizer internals)
# ---------------------------------------------------------------------------

def pack_complex(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real.ravel(), z.imag.ravel()])


def unpack_complex(x: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    half = x.size // 2
    return (x[:half] + 1j * x[half:]).reshape(shape)


def polar_isometry(z: np.ndarray, floor: float = 1e-12):
    """T = Z (Z^dag Z)^(-1/2) plus the pieces needed for backprop.

    The small Gram matrix is eigendecomposed; eigenvalues are floored so a
    rank-deficient step degrades gracefully instead of blowing up.
    """
    m = z.conj().T @ z
    d, v = np.linalg.eigh(m)
    d = np.clip(d, floor, None)
    inv_sqrt = (v * (1.0 / np.sqrt(d))) @ v.conj().T
    t = z @ inv_sqrt
    return t, d, v, inv_sqrt


def grad_z_from_grad_isometry(g_t: np.ndarray, z: np.ndarray, d: np.ndarray,
                              v: np.ndarray, inv_sqrt: np.ndarray) -> np.ndarray:
    """Pull df/dT* back through the polar chart to df/dZ*."""
    p = 1.0 / np.sqrt(d)
    dd = d[:, None] - d[None, :]
    near = np.abs(dd) < 1e-14
    k = np.where(near,
                 -0.5 * (p ** 3)[:, None] * np.ones_like(dd),
                 (p[:, None] - p[None, :]) / np.where(near, 1.0, dd))
    a = g_t.conj().T @ z                      # r x r
    b = v @ ((v.conj().T @ a @ v) * k) @ v.conj().T
    return g_t @ inv_sqrt + z @ (b + b.conj().T)


def entropy_and_log_gradient(sigma: np.ndarray, cutoff: float) -> Tuple[float, np.ndarray]:
    """S(sigma) in bits and log2(sigma) with floored eigenvalues.

    The entropy derivative under trace-preserving variations is
    dS = -Tr(log2(sigma) dsigma); the identity part drops because
    Tr(dsigma) = 0.
    """
    ev, vec = np.linalg.eigh(sigma)
    pos = ev[ev > cutoff]
    s = float(-np.sum(pos * np.log2(pos))) if pos.size else 0.0
    log_sigma = (vec * np.log2(np.clip(ev, LOG2_FLOOR, None))) @ vec.conj().T
    return s, log_sigma


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def haar_isometry(n: int, r: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(n, r)) + 1j * rng.normal(size=(n, r))
    q, rr = np.linalg.qr(z)
    diag = np.diagonal(rr)
    return q * (diag / np.abs(diag))


def complete_isometry(v: np.ndarray) -> np.ndarray:
    """Extend an isometry (orthonormal columns) to a full unitary, keeping the columns."""
    from scipy.linalg import null_space

    n, k = v.shape
    if k == n:
        return v
    extra = null_space(v.conj().T)
    if extra.shape[1] != n - k:
        raise ValueError("columns are not orthonormal enough to complete")
    return np.hstack([v, extra])


# ---------------------------------------------------------------------------
# multi-start driver
# ---------------------------------------------------------------------------

@dataclass
class Start:
    label: str
    t0: np.ndarray  # isometry, shape (n, r)


@dataclass
class RestartOutcome:
    label: str
    value: float
    iterations: int
    converged: bool
    trajectory: List[float] = field(default_factory=list)


@dataclass
class MultistartResult:
    best_value: float
    best_isometry: np.ndarray
    best_label: str
    outcomes: List[RestartOutcome]

    @property
    def values(self) -> List[float]:
        return [o.value for o in self.outcomes]

    @property
    def converged(self) -> bool:
        best = min(range(len(self.outcomes)), key=lambda i: self.outcomes[i].value)
        return self.outcomes[best].converged


def default_starts(n: int, r: int, n_random: int, seed: int,
                   fixed: Optional[Sequence[Start]] = None) -> List[Start]:
    """Fixed starts first (identity always included), then Haar-random isometries.

    Random start i draws from a generator seeded by (seed, i), which makes the
    stream a prefix: raising the restart count keeps every earlier start, so
    the running minimum can only improve.
    """
    starts: List[Start] = list(fixed) if fixed else []
    starts.insert(0, Start("identity", np.eye(n, r, dtype=complex)))
    for i in range(n_random):
        rng = np.random.default_rng([seed, i])
        starts.append(Start(f"haar-{i}", haar_isometry(n, r, rng)))
    return starts


def minimize_multistart(
    value_and_grad_t: Callable[[np.ndarray], Tuple[float, np.ndarray]],
    shape: Tuple[int, int],
    starts: Sequence[Start],
    max_iterations: int,
    objective_tolerance: float,
) -> MultistartResult:
    """Run L-BFGS through the polar chart from every start and keep the best.

    `value_and_grad_t(T)` must return the objective and its Wirtinger gradient
    df/dT* at an isometry-shaped matrix T. Line-searched descent makes the
    accepted iterates monotone nonincreasing within each restart.
    """
    outcomes: List[RestartOutcome] = []
    best_value = np.inf
    best_t = np.eye(*shape, dtype=complex)
    best_label = ""

    def fun(x):
        z = unpack_complex(x, shape)
        t, d, v, inv_sqrt = polar_isometry(z)
        f, g_t = value_and_grad_t(t)
        g_z = grad_z_from_grad_isometry(g_t, z, d, v, inv_sqrt)
        return f, pack_complex(g_z)

    for start in starts:
        traj: List[float] = []
        last: dict = {}

        def wrapped(x, _last=last):
            f, g = fun(x)
            _last["x"] = np.array(x, copy=True)
            _last["f"] = f
            return f, g

        def cb(xk, _last=last, _traj=traj):
            if "x" in _last and np.array_equal(xk, _last["x"]):
                _traj.append(_last["f"])
            else:
                _traj.append(fun(xk)[0])

        x0 = pack_complex(start.t0.astype(complex))
        traj.append(value_and_grad_t(start.t0.astype(complex))[0])
        res = minimize(
            wrapped,
            x0,
            jac=True,
            method="L-BFGS-B",
            callback=cb,
            options={
                "maxiter": max_iterations,
                "ftol": objective_tolerance,
                "gtol": max(1e-12, objective_tolerance * 0.1),
                "maxcor": 20,
            },
        )
        converged = bool(res.status == 0)
        outcomes.append(RestartOutcome(start.label, float(res.fun), int(res.nit),
                                       converged, traj))
        if res.fun < best_value:
            best_value = float(res.fun)
            best_t = polar_isometry(unpack_complex(res.x, shape))[0]
            best_label = start.label
    return MultistartResult(best_value, best_t, best_label, outcomes)
