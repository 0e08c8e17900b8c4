"""Eigenvalue machinery: algebraic connectivity and convergence-rate measure.

The algebraic connectivity is the second-smallest eigenvalue of the weighted
Laplacian; it is positive exactly when the graph is connected.

The convergence-rate measure comes from linearizing the coupled
gradient-tracking dynamics

    dx/dt = -Lap x - alpha * y
    dy/dt = -Lap y + d/dt grad f(x)

about the consensus equilibrium.  With per-node curvatures ``H_i`` frozen at
the linearization point, the Jacobian in (x, y) block order is

    [ -Lap          -alpha*I      ]
    [ -H Lap        -Lap - alpha*H ]

which is Hurwitz for connected graphs apart from one structural zero along
the consensus direction (x = ones, y = 0).  The reported rate is the negated
largest real part over the non-structural spectrum: positive means the
optimality gap decays exponentially, larger means faster.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .errors import (
    AllZeroError,
    ConvergenceError,
    DimensionMismatchError,
    InvalidParamsError,
    NotSymmetricError,
    SizeLimitError,
)
from .graphs import Graph, laplacian, laplacian_sparse

DENSE_LIMIT = 2000  # below this, dense solvers are mandatory
DEFAULT_SIZE_CAP = 20000


@dataclass(frozen=True)
class SpectralReport:
    """Connectivity and rate measure of one graph at one tracking rate."""

    lambda2_laplacian: float
    rate: float
    alpha: float
    n: int


@dataclass(frozen=True)
class JacobianSpec:
    """Inputs of the linearized dynamics: Laplacian, rate, curvatures."""

    laplacian: np.ndarray
    alpha: float
    hessian_diag: np.ndarray

    def __post_init__(self):
        lap = np.asarray(self.laplacian, dtype=np.float64)
        h = np.asarray(self.hessian_diag, dtype=np.float64).reshape(-1)
        if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
            raise DimensionMismatchError(f"laplacian must be square, got {lap.shape}")
        if h.shape[0] != lap.shape[0]:
            raise DimensionMismatchError(
                f"hessian_diag length {h.shape[0]} vs laplacian order {lap.shape[0]}")
        if not self.alpha > 0:
            raise InvalidParamsError(f"alpha must be > 0, got {self.alpha}")
        object.__setattr__(self, "laplacian", lap)
        object.__setattr__(self, "hessian_diag", h)


def eig_symmetric(m: np.ndarray, size_cap: int = DEFAULT_SIZE_CAP) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected square matrix, got {m.shape}")
    if m.shape[0] > size_cap:
        raise SizeLimitError(f"order {m.shape[0]} exceeds cap {size_cap}")
    scale = max(1.0, float(np.abs(m).max())) if m.size else 1.0
    if m.size and float(np.abs(m - m.T).max()) > 1e-12 * scale:
        raise NotSymmetricError("matrix is not symmetric within 1e-12")
    try:
        return np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def eig_general(m: np.ndarray, size_cap: int = DEFAULT_SIZE_CAP) -> np.ndarray:
    """All eigenvalues of a general square matrix (LAPACK Hessenberg + QR)."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected square matrix, got {m.shape}")
    if m.shape[0] > size_cap:
        raise SizeLimitError(f"order {m.shape[0]} exceeds cap {size_cap}")
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def lambda2_laplacian(g: Graph) -> float:
    """Algebraic connectivity of the weighted Laplacian.

    Dense solve up to order 2000; above that, shift-inverted Lanczos targets
    the two eigenvalues nearest zero.  Values indistinguishable from the
    structural zero are clamped to exactly 0.
    """
    if g.n <= 1:
        return 0.0
    if g.n <= DENSE_LIMIT:
        vals = eig_symmetric(laplacian(g))
        lam2 = float(vals[1])
        scale = float(vals[-1]) if vals[-1] > 0 else 1.0
    else:
        lap = laplacian_sparse(g).tocsc()
        sigma = -0.01 * (1.0 + 2.0 * g.edge_count / g.n)
        v0 = np.cos(np.arange(g.n, dtype=np.float64))  # deterministic start
        try:
            vals = spla.eigsh(lap, k=2, sigma=sigma, which="LM",
                              v0=v0, maxiter=20000,
                              return_eigenvectors=False)
        except spla.ArpackError as exc:
            raise ConvergenceError(f"Lanczos failed: {exc}") from exc
        vals = np.sort(vals)
        lam2 = float(vals[1])
        scale = float(np.abs(laplacian_sparse(g).diagonal()).max()) * 2.0
    if abs(lam2) <= 1e-12 * max(1.0, scale):
        return 0.0
    return lam2


def build_jacobian(spec: JacobianSpec) -> np.ndarray:
    """Dense 2n x 2n Jacobian of the linearized dynamics."""
    lap = spec.laplacian
    n = lap.shape[0]
    h = spec.hessian_diag
    jac = np.zeros((2 * n, 2 * n))
    jac[:n, :n] = -lap
    jac[:n, n:] = -spec.alpha * np.eye(n)
    jac[n:, :n] = -h[:, None] * lap
    jac[n:, n:] = -lap - spec.alpha * np.diag(h)
    return jac


def default_zero_tol(lap: np.ndarray) -> float:
    """Threshold separating structural zeros from slow modes."""
    norm_inf = float(np.abs(lap).sum(axis=1).max()) if lap.size else 0.0
    return 1e-9 * (1.0 + norm_inf)


def convergence_rate(spec: JacobianSpec, zero_tol: float | None = None) -> float:
    """Negated largest real part of the non-structural Jacobian spectrum.

    The consensus direction (ones, 0) is an exact null vector of the
    Jacobian for every curvature choice; it is deflated by a Householder
    similarity before the dense eigensolve so its numerical shadow cannot
    contaminate the slow modes.  Remaining eigenvalues with |Re| below
    ``zero_tol`` are discarded as structural.  With all curvatures zero the
    spectrum is that of the negated Laplacian doubled, so the symmetric
    solver is used directly and the rate equals the algebraic connectivity.
    """
    if zero_tol is None:
        zero_tol = default_zero_tol(spec.laplacian)
    if not zero_tol > 0:
        raise InvalidParamsError(f"zero_tol must be > 0, got {zero_tol}")

    if not spec.hessian_diag.any():
        vals = eig_symmetric(spec.laplacian)
        keep = vals[np.abs(vals) >= zero_tol]
        if keep.size == 0:
            raise AllZeroError("all Jacobian eigenvalues are structurally zero")
        return float(keep.min())

    jac = build_jacobian(spec)
    n2 = jac.shape[0]
    u = np.zeros(n2)
    u[: n2 // 2] = 1.0 / np.sqrt(n2 // 2)
    v = u.copy()
    v[0] -= 1.0  # reflector swapping the consensus direction with e0
    vnorm = np.linalg.norm(v)
    if vnorm > 0:  # n == 1 already has the null vector on e0
        v /= vnorm
        jac -= 2.0 * np.outer(v, v @ jac)
        jac -= 2.0 * np.outer(jac @ v, v)
    vals = eig_general(jac[1:, 1:])
    keep = vals[np.abs(vals.real) >= zero_tol]
    if keep.size == 0:
        raise AllZeroError("all Jacobian eigenvalues are structurally zero")
    return float(-keep.real.max())


def spectral_report(g: Graph, alpha: float,
                    hessian_diag: np.ndarray | None = None) -> SpectralReport:
    """Bundle algebraic connectivity and rate measure for one graph."""
    lam2 = lambda2_laplacian(g)
    h = (np.zeros(g.n) if hessian_diag is None
         else np.asarray(hessian_diag, dtype=np.float64))
    spec = JacobianSpec(laplacian=laplacian(g), alpha=alpha, hessian_diag=h)
    return SpectralReport(lambda2_laplacian=lam2,
                          rate=convergence_rate(spec),
                          alpha=alpha, n=g.n)
