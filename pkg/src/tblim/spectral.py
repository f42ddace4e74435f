"""Eigendecomposition backbone: a hand-rolled symmetric tridiagonal QL
solver, a dense Hermitian solver used as the brute-force oracle, the singular
value decomposition of the band-window product, and the joint spectrum of the
Heun and time-band operators.

The tridiagonal path is an implicit-shift QL iteration with accumulated
rotations; the dense path wraps LAPACK so the two routes stay algorithmically
independent and can cross-check each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_model import (
    DenseOperator,
    ModelParams,
    Parity,
    SignalVector,
    TridiagonalOperator,
    fourier_matrix,
    momentum_kind,
    position_kind,
)
from .errors import ConvergenceError, DegeneracyError, DomainError
from .operators import heun_tb, projector_time, tb_operator

__all__ = [
    "Spectrum",
    "SingularTriplets",
    "JointMode",
    "eig_sym_tridiag",
    "eig_sym_dense",
    "svd_E",
    "joint_spectrum",
    "top_block_dim",
]

_QL_MAX_SWEEPS = 50  # per eigenvalue; total is bounded by 50 * dim


@dataclass
class Spectrum:
    """Eigenpairs ordered ascending by eigenvalue.

    ``vectors[:, i]`` is the unit eigenvector of ``values[i]``;
    ``residuals[i]`` is the 2-norm defect ||M v - lambda v||.
    """

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    basis: object

    def __len__(self):
        return self.values.size

    def pairs(self):
        for i in range(len(self)):
            yield self.values[i], SignalVector(self.vectors[:, i], self.basis), self.residuals[i]


@dataclass
class SingularTriplets:
    """Singular triplets (sigma, left, right), descending sigma."""

    sigmas: np.ndarray
    lefts: np.ndarray
    rights: np.ndarray
    left_basis: object
    right_basis: object

    def __len__(self):
        return self.sigmas.size


@dataclass
class JointMode:
    """One simultaneous eigenvector of the Heun and time-band operators."""

    t: float
    q: float
    vector: SignalVector
    residual: float


def _ql_implicit(diag, off, rotate=None):
    """Implicit-shift QL sweep on a symmetric tridiagonal matrix.

    ``rotate(i, c, s)`` is called for every Givens rotation applied to the
    (i, i+1) plane, letting the caller accumulate eigenvectors.  Returns the
    eigenvalues unsorted on the mutated diagonal.
    """
    d = np.asarray(diag, dtype=float).copy()
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = off
    scale = max(np.max(np.abs(d)) if n else 0.0, np.max(np.abs(e)) if n else 0.0, 1.0)
    eps = np.finfo(float).eps
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                # split when zeroing e[m] is a backward perturbation at
                # machine level, relative to the local diagonal or the norm
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * (dd + scale):
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > _QL_MAX_SWEEPS:
                raise ConvergenceError(
                    f"QL iteration exceeded {_QL_MAX_SWEEPS} sweeps on block "
                    f"[{l}, {m}] of size {n}"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0 else -r))
            s = c = 1.0
            p_acc = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p_acc
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p_acc
                r = (d[i] - g) * s + 2.0 * c * b
                p_acc = s * r
                d[i + 1] = g + p_acc
                g = c * r - b
                if rotate is not None:
                    rotate(i, c, s)
            if underflow:
                continue
            d[l] -= p_acc
            e[l] = g
            e[m] = 0.0
    return d


def eig_sym_tridiag(t):
    """Full spectrum of a symmetric tridiagonal operator by implicit-shift QL.

    Eigenvalues come back ascending with orthonormal eigenvectors.  If the
    input is unreduced (every off-diagonal nonzero) its eigenvalues are
    mathematically simple; that simplicity is asserted and a degenerate
    numerical spectrum raises.
    """
    if not isinstance(t, TridiagonalOperator):
        raise DomainError("expected a TridiagonalOperator")
    n = t.dim
    if n == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0)), np.zeros(0), t.basis)
    z = np.eye(n)

    def rotate(i, c, s):
        zi = z[:, i].copy()
        z[:, i] = c * zi - s * z[:, i + 1]
        z[:, i + 1] = s * zi + c * z[:, i + 1]

    d = _ql_implicit(t.diag, t.offdiag, rotate)
    order = np.argsort(d, kind="stable")
    values = d[order]
    vectors = z[:, order]
    residuals = np.array(
        [float(np.linalg.norm(t.apply(vectors[:, i]) - values[i] * vectors[:, i])) for i in range(n)]
    )
    if n > 1 and np.all(np.abs(t.offdiag) > 0.0):
        scale = max(np.max(np.abs(values)), 1.0)
        gap = np.min(np.diff(values))
        if gap <= 1e-12 * scale:
            raise DegeneracyError(
                f"unreduced tridiagonal block produced eigenvalue gap {gap:.3e}"
            )
    return Spectrum(values, vectors, residuals, t.basis)


def eig_sym_dense(m):
    """Full spectrum of a Hermitian dense operator (LAPACK); the brute-force
    oracle for every other solver in the package."""
    if not isinstance(m, DenseOperator):
        raise DomainError("expected a DenseOperator")
    if not m.hermitian:
        raise DomainError("eig_sym_dense requires the hermitian flag")
    values, vectors = np.linalg.eigh(m.entries)
    residuals = np.array(
        [float(np.linalg.norm(m.entries @ vectors[:, i] - values[i] * vectors[:, i]))
         for i in range(m.dim)]
    )
    return Spectrum(values, vectors, residuals, m.basis)


def svd_E(p):
    """Singular value decomposition of the band-window product E.

    E maps position coordinates to momentum coordinates (band projector after
    window projector); the squared singular values coincide with the spectrum
    of the time-band operator.
    """
    f = fourier_matrix(p).entries
    band = np.array([1.0 if k <= p.K else 0.0 for k in p.indices])
    window = np.array([1.0 if j <= p.L else 0.0 for j in p.indices])
    e = band[:, None] * f * window[None, :]
    u, s, vh = np.linalg.svd(e)
    return SingularTriplets(
        sigmas=s,
        lefts=u,
        rights=vh.conj().T,
        left_basis=momentum_kind(p.parity),
        right_basis=position_kind(p.parity),
    )


def top_block_dim(p):
    """Dimension of the window-supported block of the Heun operator."""
    return p.time_rank


def joint_spectrum(p):
    """Simultaneous eigenpairs (t, q) on the window subspace.

    The Heun operator decouples exactly at the window edge; its leading block
    is diagonalized by the tridiagonal solver, eigenvectors are zero-padded,
    and the time-band eigenvalue is read off as a Rayleigh quotient (exact
    because the block spectrum is simple).  A residual check guards that
    assumption.  Modes come back sorted by descending q, ties broken by
    ascending t.
    """
    t_op = heun_tb(p)
    dim = top_block_dim(p)
    if dim == 0:
        return []
    spec = eig_sym_tridiag(t_op.block(dim))
    q_op = tb_operator(p).entries
    modes = []
    for i in range(len(spec)):
        v = np.zeros(p.dim, dtype=complex)
        v[:dim] = spec.vectors[:, i]
        q = float(np.real(np.vdot(v, q_op @ v)))
        residual = float(np.linalg.norm(q_op @ v - q * v))
        if residual > 1e-10:
            raise DegeneracyError(
                f"joint eigenvector residual {residual:.3e} exceeds 1e-10; "
                "the Heun block spectrum is not resolving the time-band operator"
            )
        modes.append(
            JointMode(t=float(spec.values[i]), q=q,
                      vector=SignalVector(v, position_kind(p.parity)),
                      residual=residual)
        )
    modes.sort(key=lambda m: (-m.q, m.t))
    return modes
