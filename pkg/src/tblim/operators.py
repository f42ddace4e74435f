"""Projectors, the time-band limiting operator, Leonard pairs, and the
commuting algebraic Heun operators.

Everything is materialized as an explicit matrix in the (n+1)- or
(n-1)-dimensional parity coordinates; sizes are tiny, and explicit matrices
keep every algebraic identity directly checkable.  Position-basis matrices
index rows by the subspace labels (0..n symmetric, 1..n-1 antisymmetric),
momentum-basis matrices likewise.
"""

from __future__ import annotations

import numpy as np

from .core_model import (
    BasisKind,
    DenseOperator,
    ModelParams,
    Parity,
    SignalVector,
    TridiagonalOperator,
    fourier_matrix,
    momentum_kind,
    position_kind,
    rho,
    trig_c,
    trig_s,
)
from .errors import DomainError

__all__ = [
    "DenseOperator",
    "TridiagonalOperator",
    "projector_time",
    "projector_band",
    "projector_band_momentum",
    "tb_operator",
    "leonard_pair",
    "heun_general",
    "heun_tb",
    "heun_tb_momentum",
    "heun_coefficients",
    "to_momentum_basis",
    "check_askey_wilson",
    "concentration_ratio",
    "commutator_norm",
]


def projector_time(p):
    """Time-window projector: diagonal 0/1 in the position basis, keeping
    labels j <= L."""
    d = np.array([1.0 if j <= p.L else 0.0 for j in p.indices], dtype=complex)
    return DenseOperator(np.diag(d), position_kind(p.parity), hermitian=True)


def projector_band_momentum(p):
    """Band projector in its own eigenbasis: diagonal 0/1 keeping k <= K."""
    d = np.array([1.0 if k <= p.K else 0.0 for k in p.indices], dtype=complex)
    return DenseOperator(np.diag(d), momentum_kind(p.parity), hermitian=True)


def projector_band(p):
    """Band projector expressed in the position basis."""
    f = fourier_matrix(p).entries
    d = np.array([1.0 if k <= p.K else 0.0 for k in p.indices])
    m = f.T @ (d[:, None] * f)
    return DenseOperator(m, position_kind(p.parity), hermitian=True)


def tb_operator(p):
    """Time-band limiting operator: window projector, band projector, window
    projector, multiplied in the position basis.

    Hermitian, positive semidefinite, spectrum inside [0, 1], supported on the
    range of the window projector.
    """
    p1 = projector_time(p).entries
    p2 = projector_band(p).entries
    return DenseOperator(p1 @ p2 @ p1, position_kind(p.parity), hermitian=True)


def leonard_pair(p):
    """The pair (A, A*): A hops between neighbouring positions, A* multiplies
    by 2 cos(pi*j/n).

    Both act tridiagonally in each other's eigenbasis.  On the symmetric
    subspace the hopping weights carry the boundary factors
    rho(j) * rho(j+1); on the antisymmetric one they are all 1 with absorbing
    zero boundaries.  Returned in the position basis, where A* is diagonal.
    """
    idx = p.indices
    diag_a = np.zeros(p.dim)
    if p.parity is Parity.PLUS:
        off_a = np.array([rho(p, j) * rho(p, j + 1) for j in idx[:-1]])
    else:
        off_a = np.ones(max(p.dim - 1, 0))
    a = TridiagonalOperator(diag_a, off_a, position_kind(p.parity))
    astar = TridiagonalOperator(
        np.array([2.0 * trig_c(p, 2 * j) for j in idx]),
        np.zeros(max(p.dim - 1, 0)),
        position_kind(p.parity),
    )
    return a, astar


def heun_general(a, astar, r1, r2, r3, r4, r5):
    """Most general bilinear combination of a Leonard pair:

        r1*{A, A*} + r2*[A, A*] + r3*A* + r4*A + r5

    Acts tridiagonally on the eigenbases of both members of the pair.
    """
    if a.basis is not astar.basis or a.dim != astar.dim:
        raise DomainError("operands must share basis and dimension")
    am = a.to_dense().entries
    sm = astar.to_dense().entries
    out = (
        r1 * (am @ sm + sm @ am)
        + r2 * (am @ sm - sm @ am)
        + r3 * sm
        + r4 * am
        + r5 * np.eye(a.dim)
    )
    return DenseOperator(out, a.basis)


def heun_coefficients(p, side="position"):
    """Tridiagonal action coefficients of the Heun operator, keyed by label.

    Returns functions (a, b, c) with a(j) the amplitude j -> j-1, b(j) the
    diagonal, c(j) the amplitude j -> j+1; a(j+1) == c(j).  ``side`` selects
    the position-basis coefficients (band limit K in the diagonal) or their
    momentum mirrors (roles of K and L exchanged).
    """
    if side == "position":
        kk, ll = p.K, p.L
    elif side == "momentum":
        kk, ll = p.L, p.K
    else:
        raise DomainError(f"side must be 'position' or 'momentum', got {side!r}")

    weight = (lambda j: rho(p, j)) if p.parity is Parity.PLUS else (lambda j: 1.0)

    def a(j):
        return weight(j - 1) * weight(j) * (trig_c(p, 2 * j - 1) - trig_c(p, 2 * ll + 1))

    def b(j):
        return -2.0 * trig_c(p, 2 * kk + 1) * trig_c(p, 2 * j)

    def c(j):
        return weight(j) * weight(j + 1) * (trig_c(p, 2 * j + 1) - trig_c(p, 2 * ll + 1))

    return a, b, c


def _heun_tridiagonal(p, side):
    a_fn, b_fn, c_fn = heun_coefficients(p, side)
    idx = p.indices
    diag = np.array([b_fn(j) for j in idx])
    off = np.array([c_fn(j) for j in idx[:-1]])
    kind = position_kind(p.parity) if side == "position" else momentum_kind(p.parity)
    return TridiagonalOperator(diag, off, kind)


def heun_tb(p):
    """The Heun operator commuting with both projectors, in the position
    basis:

        {A, A*} / (4 cos(pi/2n)) - cos(pi(2K+1)/2n) A* - cos(pi(2L+1)/2n) A

    The off-diagonal coupling between labels L and L+1 is identically zero
    (the defining cancellation), so the matrix decouples exactly at the window
    edge.
    """
    return _heun_tridiagonal(p, "position")


def heun_tb_momentum(p):
    """Momentum-basis form of the Heun operator: same construction with the
    roles of the band and window limits exchanged.  Equals the Fourier
    conjugate of the position form."""
    return _heun_tridiagonal(p, "momentum")


def to_momentum_basis(op, p):
    """Conjugate a position-basis dense operator into momentum coordinates."""
    f = fourier_matrix(p).entries
    if op.basis is not position_kind(p.parity):
        raise DomainError("expected a position-basis operator")
    return DenseOperator(f @ op.entries @ f.T, momentum_kind(p.parity), hermitian=op.hermitian)


def check_askey_wilson(p):
    """Max-norm residuals of the two Askey-Wilson relations satisfied by the
    Leonard pair:

        A^2 A*  - 2 cos(pi/n) A A* A   + A* A^2  = 4 sin(pi/n)^2 A*
        A*^2 A  - 2 cos(pi/n) A* A A*  + A A*^2  = 4 sin(pi/n)^2 A
    """
    a, astar = leonard_pair(p)
    am = a.to_dense().entries.real
    sm = astar.to_dense().entries.real
    c2 = 2.0 * trig_c(p, 2)
    s2 = 4.0 * trig_s(p, 2) ** 2
    r1 = am @ am @ sm - c2 * (am @ sm @ am) + sm @ am @ am - s2 * sm
    r2 = sm @ sm @ am - c2 * (sm @ am @ sm) + am @ sm @ sm - s2 * am
    mx = lambda m: float(np.max(np.abs(m))) if m.size else 0.0
    return mx(r1), mx(r2)


def concentration_ratio(f, p):
    """Fraction of a window-supported signal's energy inside the band.

    The ratio ||band_projector f|| / ||f|| lies in [0, 1] and is maximized
    over the window subspace by the top eigenvector of the time-band
    operator, with maximum sqrt(largest eigenvalue).
    """
    if not isinstance(f, SignalVector) or f.basis is not position_kind(p.parity):
        raise DomainError("expected a position-basis signal of matching parity")
    nrm = f.norm()
    if nrm == 0.0:
        raise DomainError("concentration ratio undefined for the zero signal")
    p1 = projector_time(p).entries
    if np.linalg.norm(p1 @ f.coeffs - f.coeffs) > 1e-10 * nrm:
        raise DomainError("signal is not supported on the time window")
    p2 = projector_band(p).entries
    return float(np.linalg.norm(p2 @ f.coeffs) / nrm)


def commutator_norm(x, y):
    """Max-norm of the commutator of two same-basis dense operators."""
    if x.basis is not y.basis:
        raise DomainError("commutator requires matching bases")
    m = x.entries @ y.entries - y.entries @ x.entries
    return float(np.max(np.abs(m))) if m.size else 0.0
