"""Problem parameters, trigonometric kernels, and the orthonormal
position/momentum bases of the parity subspaces.

The ambient space is the set of complex functions on {0, ..., 2n-1} with the
plain sesquilinear scalar product.  Reflection j -> 2n-j splits it into a
symmetric part of dimension n+1 and an antisymmetric part of dimension n-1;
every computation in this package happens inside one of those two subspaces.

All trigonometric arguments are kept in *grid units*: ``trig_s(p, x)`` is
sin(pi*x/(2n)), so the formulas of the model can be transcribed verbatim.
Both kernels are 4n-periodic in grid units and accept complex arguments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BasisMismatchError, DomainError

HERMITICITY_TOL = 1e-13


class Parity(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


class BasisKind(enum.Enum):
    POSITION_PLUS = "position_plus"
    POSITION_MINUS = "position_minus"
    MOMENTUM_PLUS = "momentum_plus"
    MOMENTUM_MINUS = "momentum_minus"

    @property
    def parity(self):
        return Parity.PLUS if self.value.endswith("plus") else Parity.MINUS

    @property
    def is_position(self):
        return self.value.startswith("position")


def position_kind(parity):
    return BasisKind.POSITION_PLUS if parity is Parity.PLUS else BasisKind.POSITION_MINUS


def momentum_kind(parity):
    return BasisKind.MOMENTUM_PLUS if parity is Parity.PLUS else BasisKind.MOMENTUM_MINUS


@dataclass(frozen=True)
class ModelParams:
    """Problem instance: half-dimension n, band limit K, time limit L, parity.

    The symmetric subspace has dimension n+1 (indices 0..n), the antisymmetric
    one n-1 (indices 1..n-1).  Both limits are inclusive: the time window keeps
    positions j <= L, the band keeps momenta k <= K.
    """

    n: int
    K: int
    L: int
    parity: Parity

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not (0 <= self.K <= self.n):
            raise DomainError(f"K must satisfy 0 <= K <= n, got K={self.K}, n={self.n}")
        if not (0 <= self.L <= self.n):
            raise DomainError(f"L must satisfy 0 <= L <= n, got L={self.L}, n={self.n}")
        if self.parity is Parity.MINUS and self.n < 2:
            raise DomainError("antisymmetric subspace is zero-dimensional for n < 2")

    @property
    def dim(self):
        """Dimension of the chosen parity subspace."""
        return self.n + 1 if self.parity is Parity.PLUS else self.n - 1

    @property
    def indices(self):
        """Position/momentum labels of the subspace, in matrix-row order."""
        if self.parity is Parity.PLUS:
            return tuple(range(0, self.n + 1))
        return tuple(range(1, self.n))

    @property
    def time_rank(self):
        """Rank of the time-window projector."""
        return sum(1 for j in self.indices if j <= self.L)

    @property
    def band_rank(self):
        """Rank of the band projector."""
        return sum(1 for k in self.indices if k <= self.K)

    def row_of(self, j):
        """Matrix row of position/momentum label ``j``."""
        off = 0 if self.parity is Parity.PLUS else 1
        if j - off not in range(self.dim):
            raise DomainError(f"label {j} outside subspace indices {self.indices!r}")
        return j - off


def trig_s(p, x):
    """sin(pi*x/(2n)) for grid-unit argument x (real, complex, or array)."""
    return np.sin(np.pi * np.asarray(x) / (2 * p.n))[()]


def trig_c(p, x):
    """cos(pi*x/(2n)) for grid-unit argument x (real, complex, or array)."""
    return np.cos(np.pi * np.asarray(x) / (2 * p.n))[()]


def rho(p, j):
    """Boundary weight: sqrt(2) at j in {0, n}, 1 inside, 0 at j in {-1, n+1}."""
    if j in (0, p.n):
        return math.sqrt(2.0)
    if 1 <= j <= p.n - 1:
        return 1.0
    if j in (-1, p.n + 1):
        return 0.0
    raise DomainError(f"rho undefined for j={j} (n={p.n})")


@dataclass
class SignalVector:
    """Coefficient vector in one tagged basis of a parity subspace."""

    coeffs: np.ndarray
    basis: BasisKind

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.ndim != 1:
            raise DomainError("SignalVector coefficients must be one-dimensional")

    @property
    def dim(self):
        return self.coeffs.size

    def norm(self):
        return float(np.linalg.norm(self.coeffs))


@dataclass
class DenseOperator:
    """Square complex matrix acting on one tagged basis.

    With ``hermitian=True`` the entries are checked against the adjoint at
    tolerance 1e-13 and then symmetrized, so downstream eigensolves never see
    accumulated asymmetry.
    """

    entries: np.ndarray
    basis: BasisKind
    hermitian: bool = False

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise DomainError("DenseOperator entries must be a square matrix")
        if self.hermitian:
            drift = np.max(np.abs(self.entries - self.entries.conj().T)) if self.entries.size else 0.0
            if drift > HERMITICITY_TOL:
                raise DomainError(f"hermitian flag set but ||M - M^dag||_max = {drift:.3e}")
            self.entries = 0.5 * (self.entries + self.entries.conj().T)

    @property
    def dim(self):
        return self.entries.shape[0]

    def _check(self, other):
        if self.basis is not other.basis:
            raise BasisMismatchError(f"{self.basis.value} vs {other.basis.value}")

    def __matmul__(self, other):
        if isinstance(other, DenseOperator):
            self._check(other)
            return DenseOperator(self.entries @ other.entries, self.basis)
        if isinstance(other, SignalVector):
            if self.basis is not other.basis:
                raise BasisMismatchError(f"{self.basis.value} vs {other.basis.value}")
            return SignalVector(self.entries @ other.coeffs, self.basis)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, DenseOperator):
            self._check(other)
            return DenseOperator(self.entries + other.entries, self.basis,
                                 hermitian=self.hermitian and other.hermitian)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, DenseOperator):
            self._check(other)
            return DenseOperator(self.entries - other.entries, self.basis,
                                 hermitian=self.hermitian and other.hermitian)
        return NotImplemented

    def __rmul__(self, scalar):
        return DenseOperator(scalar * self.entries, self.basis,
                             hermitian=self.hermitian and float(np.imag(scalar)) == 0.0)

    def adjoint(self):
        return DenseOperator(self.entries.conj().T, self.basis, hermitian=self.hermitian)


@dataclass
class TridiagonalOperator:
    """Real symmetric tridiagonal operator in one tagged basis.

    The subdiagonal equals the superdiagonal by construction, so only one
    off-diagonal vector is stored.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    basis: BasisKind

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=float)
        self.offdiag = np.asarray(self.offdiag, dtype=float)
        if self.offdiag.size != max(self.diag.size - 1, 0):
            raise DomainError("offdiag must have length dim - 1")

    @property
    def dim(self):
        return self.diag.size

    def to_dense(self):
        m = np.diag(self.diag.astype(complex))
        if self.dim > 1:
            m += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return DenseOperator(m, self.basis, hermitian=True)

    def apply(self, v):
        v = np.asarray(v)
        out = self.diag * v
        if self.dim > 1:
            out[:-1] = out[:-1] + self.offdiag * v[1:]
            out[1:] = out[1:] + self.offdiag * v[:-1]
        return out

    def block(self, size):
        """Leading principal block as a new operator."""
        return TridiagonalOperator(self.diag[:size], self.offdiag[: max(size - 1, 0)], self.basis)


def _ambient_grid(p):
    return np.arange(2 * p.n)


def position_basis(p):
    """Rows = ambient values of the position basis vectors, in index order.

    Each row r is the function (delta_j +/- delta_{2n-j}) normalized to unit
    norm, for j = indices[r]; parity symmetry f(j) = +/- f(2n-j) holds
    entrywise.
    """
    rows = np.zeros((p.dim, 2 * p.n))
    for r, j in enumerate(p.indices):
        if p.parity is Parity.PLUS:
            rows[r, j % (2 * p.n)] += 1.0 / (rho(p, j) * math.sqrt(2.0))
            rows[r, (2 * p.n - j) % (2 * p.n)] += 1.0 / (rho(p, j) * math.sqrt(2.0))
        else:
            rows[r, j] += 1.0 / math.sqrt(2.0)
            rows[r, 2 * p.n - j] -= 1.0 / math.sqrt(2.0)
    return rows


def momentum_basis(p):
    """Rows = ambient values of the momentum basis vectors, in index order.

    The antisymmetric k = 0 and k = n vectors are identically zero and are
    excluded, so the returned family is genuinely orthonormal.
    """
    x = _ambient_grid(p)
    rows = np.zeros((p.dim, 2 * p.n))
    for r, k in enumerate(p.indices):
        if p.parity is Parity.PLUS:
            rows[r] = np.cos(np.pi * k * x / p.n) / (rho(p, k) * math.sqrt(p.n))
        else:
            rows[r] = np.sin(np.pi * k * x / p.n) / math.sqrt(p.n)
    return rows


def fourier_matrix(p):
    """Unitary change of basis from position to momentum coordinates.

    Entry (k, j) is the overlap of momentum vector k with position vector j:
    sqrt(2/n) * cos(pi*k*j/n) / (rho(k)*rho(j)) on the symmetric subspace and
    sqrt(2/n) * sin(pi*k*j/n) on the antisymmetric one.  The matrix is real,
    symmetric, and involutive.  Rows are tagged momentum, columns position;
    the operator is returned in the position tag of its columns.
    """
    ks = np.array(p.indices, dtype=float)
    js = ks[:, None].T
    if p.parity is Parity.PLUS:
        weights = np.array([rho(p, int(k)) for k in ks])
        f = np.sqrt(2.0 / p.n) * np.cos(np.pi * ks[:, None] * js / p.n)
        f /= weights[:, None] * weights[None, :]
    else:
        f = np.sqrt(2.0 / p.n) * np.sin(np.pi * ks[:, None] * js / p.n)
    return DenseOperator(f, position_kind(p.parity), hermitian=True)


def grid_values(sv, p):
    """Expand a tagged coefficient vector to ambient values on {0..2n-1}."""
    rows = position_basis(p) if sv.basis.is_position else momentum_basis(p)
    if sv.basis.parity is not p.parity:
        raise BasisMismatchError("signal parity does not match params parity")
    return sv.coeffs @ rows


def coefficients_of(values, p, kind):
    """Project ambient values onto a tagged basis (adjoint of grid_values)."""
    rows = position_basis(p) if kind.is_position else momentum_basis(p)
    if kind.parity is not p.parity:
        raise BasisMismatchError("basis parity does not match params parity")
    return SignalVector(rows @ np.asarray(values, dtype=complex), kind)
