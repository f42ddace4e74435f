"""Bethe-ansatz diagonalization of the Heun operator.

Dynamical operators built from the Leonard pair obey exchange relations that
turn ordered products of creation-like factors into candidate eigenvectors
("Bethe states") of the Heun operator.  Three ansatz variants are
implemented:

* ``MINUS_FIRST``   - antisymmetric subspace, homogeneous equations,
                      L-1 roots for the L window modes;
* ``MINUS_SECOND``  - antisymmetric subspace, inhomogeneous equations,
                      L-1 roots;
* ``PLUS``          - symmetric subspace, inhomogeneous equations,
                      L roots for the L+1 window modes.

Roots live in grid units.  The equations are solved numerically: residuals
are evaluated in cleared-denominator form (normalized by the magnitude of the
cleared sides so the defect stays meaningful for roots with large imaginary
part), and a damped Newton iteration is run from eigenvector-guided seeds
first, then from random and homotopy-continued starts.  A candidate root set
is accepted only if its eigenvalue formula is independent of the spectral
parameter and matches a still-unmatched window eigenvalue.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core_model import (
    DenseOperator,
    ModelParams,
    Parity,
    SignalVector,
    position_kind,
    trig_c,
    trig_s,
)
from .errors import DomainError, PoleError
from .operators import leonard_pair, projector_time
from .spectral import joint_spectrum, top_block_dim

__all__ = [
    "AnsatzVariant",
    "SolverConfig",
    "BetheRootSet",
    "BetheSolveResult",
    "delta_fn",
    "f_fn",
    "g_fn",
    "dyn_D",
    "dyn_B",
    "check_dynamical_relations",
    "check_T_decomposition",
    "check_vacuum_action",
    "check_offshell_action",
    "check_reduction_formula",
    "bethe_state",
    "bethe_slots",
    "bethe_residuals",
    "bethe_eigenvalue",
    "solve_bethe",
    "canonicalize_roots",
]

_POLE_TOL = 1e-12
_EXCLUSION = 1e-6


class AnsatzVariant(enum.Enum):
    MINUS_FIRST = "first"
    MINUS_SECOND = "second"
    PLUS = "plus"

    @property
    def parity(self):
        return Parity.PLUS if self is AnsatzVariant.PLUS else Parity.MINUS

    def root_count(self, L):
        return L if self is AnsatzVariant.PLUS else L - 1


@dataclass(frozen=True)
class SolverConfig:
    """Tuning knobs of the numerical Bethe solver.

    ``max_starts=None`` means 64 times the window-block dimension.
    """

    max_starts: int | None = None
    newton_max_iter: int = 200
    residual_tol: float = 1e-9
    match_tol: float = 1e-6
    rng_seed: int = 0
    homotopy_steps: int = 8


@dataclass
class BetheRootSet:
    """An accepted solution: canonical roots, diagnostics, and the window
    eigenvalue it reproduces."""

    variant: AnsatzVariant
    roots: np.ndarray
    residual: float
    eigenvalue: complex
    level: int
    t_spectral: float
    u_spread: float


@dataclass
class BetheSolveResult:
    """Outcome of a solve: one root set per matched window level, plus an
    explicit list of unmatched levels (never a silent partial success) and a
    count of distinct extra solutions that re-hit already matched levels."""

    variant: AnsatzVariant
    root_sets: list
    missing_levels: list
    extra_matches: int
    starts_used: int

    @property
    def complete(self):
        return not self.missing_levels


# ---------------------------------------------------------------------------
# scalar building blocks


def delta_fn(p, u):
    """cos-product prefactor tying the spectral parameter to both limits:
    c(u + L - K - 1/2) * c(u + L + K + 1/2) in grid units."""
    return trig_c(p, u + p.L - p.K - 0.5) * trig_c(p, u + p.L + p.K + 0.5)


def _require(p, value, name):
    if abs(value) < _POLE_TOL:
        raise PoleError(name, value)
    return value


def f_fn(p, u, v):
    """Exchange amplitude s(u+v-1) s(u-v-1) / (s(u+v) s(u-v)); even in v,
    vanishing at v = u - 1."""
    den1 = _require(p, trig_s(p, u + v), f"s(u+v) at u={u}, v={v}")
    den2 = _require(p, trig_s(p, u - v), f"s(u-v) at u={u}, v={v}")
    return trig_s(p, u + v - 1) * trig_s(p, u - v - 1) / (den1 * den2)


def g_fn(p, u, v, m):
    """Off-diagonal exchange amplitude
    s(1) s(2v-1) s(2m+v-u) / (s(2m) s(2u) s(u-v))."""
    den1 = _require(p, trig_s(p, 2 * m), f"s(2m) at m={m}")
    den2 = _require(p, trig_s(p, 2 * u), f"s(2u) at u={u}")
    den3 = _require(p, trig_s(p, u - v), f"s(u-v) at u={u}, v={v}")
    return trig_s(p, 1) * trig_s(p, 2 * v - 1) * trig_s(p, 2 * m + v - u) / (den1 * den2 * den3)


# ---------------------------------------------------------------------------
# dynamical operators


def _pair_matrices(p):
    a, astar = leonard_pair(p)
    am = a.to_dense().entries
    sm = astar.to_dense().entries
    return am, sm, am @ sm + sm @ am, am @ sm - sm @ am


def dyn_D(p, u, m):
    """Diagonal-type dynamical operator at spectral parameter u and integer
    dynamical parameter m; undefined when s(2u) or s(2m) vanishes (in
    particular m = 0 is rejected)."""
    den_u = _require(p, trig_s(p, 2 * u), f"s(2u) at u={u}")
    den_m = _require(p, trig_s(p, 2 * m), f"s(2m) at m={m}")
    am, sm, anti, _ = _pair_matrices(p)
    eye = np.eye(p.dim)
    mat = (
        trig_c(p, 2 * m + 1) * am
        - trig_c(p, 2 * u - 2 * m) * sm
        - anti / (4 * trig_c(p, 1))
        + 2 * trig_c(p, 2 * u) * eye
    ) / (den_u * den_m)
    return DenseOperator(mat, position_kind(p.parity))


def _dyn_B_scaled(p, u, m):
    """s(2m) * B(u, m): entire in m, used where a dynamical slot degenerates.

    Rescaling a creation factor only rescales the Bethe state, so this form
    is interchangeable with dyn_B wherever only the state's direction
    matters.
    """
    am, sm, anti, comm = _pair_matrices(p)
    eye = np.eye(p.dim)
    return (
        trig_c(p, 1) * am
        - trig_c(p, 2 * u) * sm
        + trig_s(p, 2 * m) * comm / (4 * trig_s(p, 1))
        - trig_c(p, 2 * m) * anti / (4 * trig_c(p, 1))
        + 2 * trig_c(p, 2 * u) * trig_c(p, 2 * m) * eye
    )


def dyn_B(p, u, m):
    """Creation-type dynamical operator; tridiagonal in the position basis.
    Undefined when s(2m) vanishes."""
    den_m = _require(p, trig_s(p, 2 * m), f"s(2m) at m={m}")
    return DenseOperator(_dyn_B_scaled(p, u, m) / den_m, position_kind(p.parity))


def check_dynamical_relations(p, u, v, m):
    """Max-norm residuals of the two exchange relations:

        B(u,m) B(v,m-1) = B(v,m) B(u,m-1)
        D(u,m) B(v,m)   = f(u,v) B(v,m) D(u,m-1)
                          + B(u,m) [g(u,v,m) D(v,m-1) + g(u,-v,m) D(-v,m-1)]
    """
    b = lambda uu, mm: dyn_B(p, uu, mm).entries
    d = lambda uu, mm: dyn_D(p, uu, mm).entries
    r_bb = b(u, m) @ b(v, m - 1) - b(v, m) @ b(u, m - 1)
    r_db = (
        d(u, m) @ b(v, m)
        - f_fn(p, u, v) * b(v, m) @ d(u, m - 1)
        - b(u, m) @ (g_fn(p, u, v, m) * d(v, m - 1) + g_fn(p, u, -v, m) * d(-v, m - 1))
    )
    mx = lambda x: float(np.max(np.abs(x))) if x.size else 0.0
    return mx(r_bb), mx(r_db)


def check_T_decomposition(p, u):
    """Max-norm residuals of the two dynamical decompositions of the Heun
    operator, at dynamical parameters L and -L-1:

        T = 2 c(2u) + Delta(u)   D(u, L)    + Delta(-u)  D(-u, L)
        T = 2 c(2u) + Delta(1-u) D(u, -L-1) + Delta(1+u) D(-u, -L-1)
    """
    from .operators import heun_tb

    t = heun_tb(p).to_dense().entries
    eye = np.eye(p.dim)
    d = lambda uu, mm: dyn_D(p, uu, mm).entries
    r1 = t - (2 * trig_c(p, 2 * u) * eye
              + delta_fn(p, u) * d(u, p.L) + delta_fn(p, -u) * d(-u, p.L))
    r2 = t - (2 * trig_c(p, 2 * u) * eye
              + delta_fn(p, 1 - u) * d(u, -p.L - 1) + delta_fn(p, 1 + u) * d(-u, -p.L - 1))
    mx = lambda x: float(np.max(np.abs(x))) if x.size else 0.0
    return mx(r1), mx(r2)


def _vacuum(p):
    v = np.zeros(p.dim, dtype=complex)
    v[0] = 1.0  # position 0 (symmetric) or position 1 (antisymmetric)
    return v


def check_vacuum_action(p, u, m):
    """2-norm residual of the known action of D(u, m) on the vacuum vector:

        symmetric:      D(u,m)|0> = -2|0> - B(u,m)|0> / s(2u)
        antisymmetric:  D(u,m)|1> = 2 s(2-2u)/s(2u) |1>
                                    - s(m-1)/(s(m+1) s(2u)) B(u,m)|1>
    """
    vac = _vacuum(p)
    dv = dyn_D(p, u, m).entries @ vac
    bv = dyn_B(p, u, m).entries @ vac
    s2u = _require(p, trig_s(p, 2 * u), f"s(2u) at u={u}")
    if p.parity is Parity.PLUS:
        rhs = -2.0 * vac - bv / s2u
    else:
        smp1 = _require(p, trig_s(p, m + 1), f"s(m+1) at m={m}")
        rhs = 2.0 * trig_s(p, 2 - 2 * u) / s2u * vac - trig_s(p, m - 1) / (smp1 * s2u) * bv
    return float(np.linalg.norm(dv - rhs))


# ---------------------------------------------------------------------------
# Bethe states


def bethe_slots(variant, L):
    """Dynamical parameters of the ordered creation product, first factor
    first."""
    if variant is AnsatzVariant.MINUS_FIRST:
        return [L - i for i in range(L - 1)]            # L, L-1, ..., 2
    if variant is AnsatzVariant.MINUS_SECOND:
        return [-L - 1 - i for i in range(L - 1)]       # -L-1, ..., -2L+1
    return [-L - 1 - i for i in range(L)]               # -L-1, ..., -2L


def _check_roots(variant, L, roots):
    roots = np.asarray(roots, dtype=complex).ravel()
    want = variant.root_count(L)
    if roots.size != want:
        raise DomainError(
            f"{variant.value} ansatz at L={L} takes {want} roots, got {roots.size}"
        )
    return roots


def bethe_state(p, variant, roots):
    """Ordered product of creation factors applied to the vacuum.

    The result lies in the window subspace.  Any factor whose dynamical slot
    or argument hits a pole raises; the solver falls back to a uniformly
    rescaled product in that case, which spans the same direction.
    """
    if variant.parity is not p.parity:
        raise DomainError(f"{variant.value} ansatz requires parity {variant.parity.value}")
    roots = _check_roots(variant, p.L, roots)
    v = _vacuum(p)
    slots = bethe_slots(variant, p.L)
    for x, m in zip(roots[::-1], slots[::-1]):
        v = dyn_B(p, x, m).entries @ v
    return SignalVector(v, position_kind(p.parity))


def _bethe_state_scaled(p, variant, roots):
    """Same direction as bethe_state but with every factor multiplied by its
    s(2m); well-defined at degenerate slots."""
    roots = _check_roots(variant, p.L, roots)
    v = _vacuum(p)
    for x, m in zip(roots[::-1], bethe_slots(variant, p.L)[::-1]):
        v = _dyn_B_scaled(p, x, m) @ v
    return v


def check_offshell_action(p, u, roots):
    """Residual of the explicit off-shell expansion of D(u, L) acting on a
    first-ansatz Bethe state (valid for arbitrary roots, not only
    solutions)."""
    if p.parity is not Parity.MINUS:
        raise DomainError("off-shell expansion applies to the antisymmetric ansatz")
    roots = _check_roots(AnsatzVariant.MINUS_FIRST, p.L, roots)
    vstate = bethe_state(p, AnsatzVariant.MINUS_FIRST, roots).coeffs
    lhs = dyn_D(p, u, p.L).entries @ vstate
    s = lambda x: trig_s(p, x)
    rhs = 2 * s(2 - 2 * u) / s(2 * u) * np.prod([f_fn(p, u, x) for x in roots]) * vstate
    for j in range(roots.size):
        for eps in (1.0, -1.0):
            xj = eps * roots[j]
            coef = (
                2 * s(2 - 2 * xj) / s(2 * xj)
                * g_fn(p, u, xj, p.L)
                * np.prod([f_fn(p, xj, roots[i]) for i in range(roots.size) if i != j])
            )
            swapped = roots.copy()
            swapped[j] = u
            rhs = rhs + coef * bethe_state(p, AnsatzVariant.MINUS_FIRST, swapped).coeffs
    return float(np.linalg.norm(lhs - rhs))


def check_reduction_formula(p, ybar, u_slot_last=True):
    """Relative residual of the length-L reduction identity on the
    antisymmetric subspace.

    The product of L creation factors at slots -L-1 .. -2L collapses to an
    explicit combination of the L omit-one states.  With ``u_slot_last`` the
    last entry of ``ybar`` occupies the final (-2L) slot; otherwise the first
    entry is rotated there, exercising the exchange symmetry.  When s(4L)
    vanishes (n divides 2L) both sides carry the same singular prefactor and
    the comparison is made in cleared form.
    """
    if p.parity is not Parity.MINUS:
        raise DomainError("the reduction formula lives on the antisymmetric subspace")
    ys = np.asarray(ybar, dtype=complex).ravel()
    if ys.size != p.L:
        raise DomainError(f"expected {p.L} entries, got {ys.size}")
    for i in range(ys.size):
        for j in range(i + 1, ys.size):
            for sgn, nm in ((1, "s(y_i + y_j)"), (-1, "s(y_i - y_j)")):
                _require(p, trig_s(p, ys[i] + sgn * ys[j]), nm)
    order = ys if u_slot_last else np.concatenate([ys[1:], ys[:1]])
    s = lambda x: trig_s(p, x)
    s4l = s(4 * p.L)
    cleared = abs(s4l) < _POLE_TOL

    slots = [-p.L - 1 - i for i in range(p.L)]
    v = _vacuum(p)
    last = _dyn_B_scaled(p, order[-1], slots[-1]) if cleared else dyn_B(p, order[-1], slots[-1]).entries
    v = last @ v
    for x, m in zip(order[:-1][::-1], slots[:-1][::-1]):
        v = dyn_B(p, x, m).entries @ v

    total = np.zeros_like(v)
    for j in range(p.L):
        coef = s(2 * ys[j] * (p.L + 1)) / _require(p, s(2 * ys[j]), "s(2 y_j)")
        for i in range(p.L):
            if i != j:
                coef = coef / (4 * s(ys[i] + ys[j]) * s(ys[i] - ys[j]))
        rest = np.array([ys[i] for i in range(p.L) if i != j])
        total = total + coef * bethe_state(p, AnsatzVariant.MINUS_SECOND, rest).coeffs
    pref = 2 * s(2 * p.L - 1) * s(2 * p.L + 1)
    rhs = (-pref if cleared else pref / s4l) * total
    return float(np.linalg.norm(v - rhs) / max(1.0, np.linalg.norm(v)))


# ---------------------------------------------------------------------------
# Bethe equations and eigenvalue formulas


def bethe_residuals(p, variant, roots, inhomog_scale=1.0):
    """Cleared-denominator defects of the Bethe equations, one per root.

    Every displayed denominator is multiplied through, so no pole is
    amplified; each component is then normalized by the magnitude of the
    cleared sides, keeping the defect comparable across root scales.  The
    zero vector is returned exactly when the roots solve the system.
    ``inhomog_scale`` multiplies the inhomogeneous term (used for homotopy
    continuation; 1 is the true system).
    """
    roots = _check_roots(variant, p.L, roots)
    s = lambda x: trig_s(p, x)
    c = lambda x: trig_c(p, x)
    dl = lambda x: delta_fn(p, x)
    m = roots.size
    out = np.zeros(m, dtype=complex)
    for j in range(m):
        x = roots[j]
        others = np.delete(roots, j)
        if variant is AnsatzVariant.MINUS_FIRST:
            lhs = dl(x) * s(2 - 2 * x) * s(1 - 2 * x) \
                * np.prod([s(x - xi - 1) * s(x + xi - 1) for xi in others])
            rhs = dl(-x) * s(2 + 2 * x) * s(1 + 2 * x) \
                * np.prod([s(x - xi + 1) * s(x + xi + 1) for xi in others])
        elif variant is AnsatzVariant.MINUS_SECOND:
            g1 = dl(1 - x) * s(2 - 2 * x) * s(1 - 2 * x)
            g2 = dl(1 + x) * s(2 + 2 * x) * s(1 + 2 * x)
            num = np.prod([s(x - yi + 1) * s(x + yi + 1) for yi in others])
            den = np.prod([s(x - yi - 1) * s(x + yi - 1) for yi in others])
            inh = s(2 * p.L + 1) ** 2 * s(2 * x * (p.L + 1)) * s(2 * x - 1)
            ipr = np.prod([4 * s(yi - x + 1) * s(yi + x - 1) for yi in roots])
            lhs = g1 * den * ipr + inhomog_scale * inh * den
            rhs = num * g2 * ipr
        else:
            g1 = dl(1 - x) * s(2 * x - 1)
            g2 = dl(1 + x) * s(2 * x + 1)
            num = np.prod([s(x - zi + 1) * s(x + zi + 1) for zi in others])
            den = np.prod([s(x - zi - 1) * s(x + zi - 1) for zi in others])
            inh = s(4 * p.L + 2) * s(2 * p.L + 1) * c(2 * x * (p.L + 1)) * s(2 * x - 1)
            ipr = np.prod([4 * s(zi - x + 1) * s(zi + x - 1) for zi in roots])
            lhs = c(2 * p.L + 1) * g1 * den * ipr + inhomog_scale * inh * den
            rhs = c(2 * p.L + 1) * num * g2 * ipr
        out[j] = (lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
    return out


def bethe_eigenvalue(p, variant, roots, u):
    """Candidate Heun eigenvalue produced by a root set, evaluated at
    spectral parameter u; constant in u exactly on solutions of the Bethe
    equations."""
    roots = _check_roots(variant, p.L, roots)
    s = lambda x: trig_s(p, x)
    c = lambda x: trig_c(p, x)
    dl = lambda x: delta_fn(p, x)
    s2u = _require(p, s(2 * u), f"s(2u) at u={u}")
    for x in roots:
        _require(p, s(u + x), "s(u + x_i)")
        _require(p, s(u - x), "s(u - x_i)")
    if variant is AnsatzVariant.MINUS_FIRST:
        return (
            2 * c(2 * u)
            + 2 * dl(u) * s(2 - 2 * u) / s2u * np.prod([f_fn(p, u, x) for x in roots])
            - 2 * dl(-u) * s(2 + 2 * u) / s2u * np.prod([f_fn(p, -u, x) for x in roots])
        )
    if variant is AnsatzVariant.MINUS_SECOND:
        return (
            2 * c(2 * u)
            + 2 * dl(1 - u) * s(2 - 2 * u) / s2u * np.prod([f_fn(p, u, y) for y in roots])
            - 2 * dl(1 + u) * s(2 + 2 * u) / s2u * np.prod([f_fn(p, -u, y) for y in roots])
            - 2 * s(2 * p.L + 1) ** 2 * s(2 * u * (p.L + 1)) / s2u
            * np.prod([1.0 / (4 * s(y + u) * s(y - u)) for y in roots])
        )
    return (
        2 * c(2 * u)
        - 2 * dl(1 - u) * np.prod([f_fn(p, u, z) for z in roots])
        - 2 * dl(1 + u) * np.prod([f_fn(p, -u, z) for z in roots])
        - 2 * s(4 * p.L + 2) * s(2 * p.L + 1) * c(2 * u * (p.L + 1)) / c(2 * p.L + 1)
        * np.prod([1.0 / (4 * s(z + u) * s(z - u)) for z in roots])
    )


# ---------------------------------------------------------------------------
# numerical solution


def canonicalize_roots(p, roots):
    """Reduce roots to canonical representatives and sort them.

    The equations and states depend on a root only through cos(pi*x/n), so x
    is defined modulo 2n and up to sign.  The real part is folded into
    (-n, n], the sign is fixed to make it nonnegative, and on the boundary
    lines Re = 0 and Re = n the imaginary part is made nonnegative.  Roots
    are then sorted lexicographically by (Re, Im).
    """
    out = []
    for x in np.asarray(roots, dtype=complex).ravel():
        re = float(np.real(x)) % (2 * p.n)
        if re > p.n + 1e-12:
            re -= 2 * p.n
        x = re + 1j * float(np.imag(x))
        if re < -1e-12:
            x = -x
        elif abs(re) <= 1e-9 or abs(re - p.n) <= 1e-9:
            x = complex(abs(re) if abs(re) <= 1e-9 else re, abs(x.imag))
        out.append(x)
    out.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return np.array(out, dtype=complex)


def _roots_admissible(p, roots):
    """Exclusion zone: no root at a pole of the equations, no coincident
    pair (coincidence makes the system degenerate)."""
    for x in roots:
        if abs(trig_s(p, 2 * x)) < _EXCLUSION:
            return False
    for i in range(roots.size):
        for j in range(i + 1, roots.size):
            if abs(roots[i] - roots[j]) < _EXCLUSION:
                return False
            if abs(trig_s(p, roots[i] + roots[j])) < _EXCLUSION \
                    or abs(trig_s(p, roots[i] - roots[j])) < _EXCLUSION:
                return False
    return True


def _newton(fun, x0, max_iter, tol=1e-13, fd_step=1e-6):
    """Damped Newton for a square holomorphic system, finite-difference
    Jacobian."""
    x = np.asarray(x0, dtype=complex).copy()
    m = x.size
    for _ in range(max_iter):
        try:
            fx = fun(x)
        except (PoleError, FloatingPointError):
            return x, False
        n0 = float(np.linalg.norm(fx))
        if not np.isfinite(n0):
            return x, False
        if n0 < tol:
            return x, True
        jac = np.zeros((m, m), dtype=complex)
        try:
            for k in range(m):
                xp = x.copy()
                xm = x.copy()
                xp[k] += fd_step
                xm[k] -= fd_step
                jac[:, k] = (fun(xp) - fun(xm)) / (2 * fd_step)
            step = np.linalg.solve(jac, -fx)
        except (np.linalg.LinAlgError, PoleError, FloatingPointError):
            return x, False
        lam = 1.0
        moved = False
        for _ in range(30):
            xn = x + lam * step
            try:
                fn = float(np.linalg.norm(fun(xn)))
            except (PoleError, FloatingPointError):
                fn = np.inf
            if fn < (1.0 - 0.25 * lam) * n0 or fn < tol:
                moved = True
                break
            lam *= 0.5
        if not moved:
            return x, n0 < tol
        x = xn
    try:
        return x, float(np.linalg.norm(fun(x))) < tol
    except (PoleError, FloatingPointError):
        return x, False


_U_PROBES = np.array(
    [0.3137 + 0.2718j, 0.8771 - 0.1543j, 1.4142 + 0.3333j, 0.2712 - 0.4141j,
     1.7321 + 0.1013j, 0.5774 + 0.5051j, 2.2361 - 0.2871j]
)


def _u_samples(p, roots, count=7):
    """Generic spectral-parameter samples, nudged off any pole of the
    eigenvalue formula for these roots."""
    out = []
    shift = 0.0
    for u0 in _U_PROBES[:count]:
        u = u0 + shift
        for _ in range(12):
            bad = abs(trig_s(p, 2 * u)) < 1e-4 or any(
                abs(trig_s(p, u + x)) < 1e-4 or abs(trig_s(p, u - x)) < 1e-4 for x in roots
            )
            if not bad:
                break
            u += 0.0731 + 0.0179j
        out.append(u)
    return out


def _eigenvalue_profile(p, variant, roots):
    """(mean eigenvalue, u-spread incl. imaginary size) over generic u."""
    ts = np.array([bethe_eigenvalue(p, variant, roots, u) for u in _u_samples(p, roots)])
    spread = float(np.ptp(ts.real) + np.max(np.abs(ts.imag)))
    return float(np.mean(ts.real)), spread


def _B_linear_parts(p, variant, L):
    """Per-slot matrices (M0, M1) with s(2m) B(u, m) = M0 + cos(pi*u/n) M1;
    the product state is multilinear in the cosines of the roots."""
    am, sm, anti, comm = _pair_matrices(p)
    eye = np.eye(p.dim)
    parts = []
    for m in bethe_slots(variant, L):
        m0 = trig_c(p, 1) * am + trig_s(p, 2 * m) * comm / (4 * trig_s(p, 1)) \
            - trig_c(p, 2 * m) * anti / (4 * trig_c(p, 1))
        m1 = -sm + 2 * trig_c(p, 2 * m) * eye
        parts.append((m0, m1))
    return parts


def _guided_seed(p, variant, target_vec, rng, newton_max_iter, tries=40):
    """Invert a window eigenvector into candidate roots.

    The scaled Bethe state is multilinear in w_i = cos(pi*x_i/n); solving the
    proportionality conditions against the target eigenvector by Newton in w
    and taking arccos yields root seeds aimed at one specific level.
    """
    m = variant.root_count(p.L)
    dim = m + 1
    parts = _B_linear_parts(p, variant, p.L)
    vac = _vacuum(p)
    vt = target_vec[:dim]
    i0 = int(np.argmax(np.abs(vt)))
    rows = [i for i in range(dim) if i != i0]

    def state(ws):
        v = vac
        for w, (m0, m1) in zip(ws[::-1], parts[::-1]):
            v = (m0 + w * m1) @ v
        return v[:dim]

    def fun(ws):
        sv = state(ws)
        return np.array([sv[i] * vt[i0] - sv[i0] * vt[i] for i in rows])

    for _ in range(tries):
        w0 = rng.normal(0.0, 1.2, m) + 1j * rng.normal(0.0, 0.8, m)
        ws, ok = _newton(fun, w0, newton_max_iter)
        if ok:
            return p.n / np.pi * np.arccos(ws.astype(complex))
    return None


def _random_seed(p, m, rng, kind):
    if kind == 0:      # perturbed real grid points
        return rng.uniform(0.1, p.n - 0.1, m) + 1j * rng.normal(0.0, 0.02, m)
    if kind == 1:      # complex box
        return rng.uniform(0.05, p.n - 0.05, m) + 1j * rng.uniform(-1.0, 1.0, m)
    # axis strings: purely imaginary or shifted to the Re = n line
    re = rng.choice([0.0, float(p.n)], m)
    return re + 1j * rng.uniform(0.2, 2.0 * p.n / 3.0, m)


def solve_bethe(p, variant, config=None):
    """Solve the Bethe equations and match every window eigenvalue.

    Seeding runs eigenvector-guided inversions per level first, then random
    starts (perturbed grid, complex box, axis strings) and, for the
    inhomogeneous variants, homotopy continuation in the inhomogeneous term.
    A candidate is accepted when its cleared residual is below
    ``residual_tol``, its eigenvalue is u-independent, and it matches an
    unmatched window eigenvalue within ``match_tol``.  Unmatched levels are
    reported explicitly in the result.
    """
    config = config or SolverConfig()
    if variant.parity is not p.parity:
        raise DomainError(f"{variant.value} ansatz requires parity {variant.parity.value}")
    if variant is not AnsatzVariant.PLUS and p.L < 1:
        raise DomainError("antisymmetric ansaetze need L >= 1")
    modes = joint_spectrum(p)
    dim = len(modes)
    m = variant.root_count(p.L)
    max_starts = config.max_starts if config.max_starts is not None else 64 * max(dim, 1)
    rng = np.random.default_rng(config.rng_seed)
    matched = {}
    extra = 0
    starts = 0

    t_targets = np.array([mode.t for mode in modes])

    def consider(roots):
        nonlocal extra
        roots = canonicalize_roots(p, roots)
        if not _roots_admissible(p, roots):
            return
        res = float(np.max(np.abs(bethe_residuals(p, variant, roots)))) if m else 0.0
        if res > config.residual_tol:
            return
        try:
            t_mean, spread = _eigenvalue_profile(p, variant, roots)
        except PoleError:
            return
        if spread > 1e-8:
            return
        if not dim:
            return
        k = int(np.argmin(np.abs(t_targets - t_mean)))
        if abs(t_targets[k] - t_mean) > config.match_tol:
            return
        if k in matched:
            if np.max(np.abs(matched[k].roots - roots)) > 1e-6:
                extra += 1
            return
        matched[k] = BetheRootSet(
            variant=variant, roots=roots, residual=res,
            eigenvalue=complex(t_mean), level=k,
            t_spectral=float(t_targets[k]), u_spread=spread,
        )

    if m == 0:
        if dim:
            consider(np.zeros(0, dtype=complex))
        missing = [k for k in range(dim) if k not in matched]
        return BetheSolveResult(variant, [matched[k] for k in sorted(matched)], missing, extra, 0)

    system = lambda x: bethe_residuals(p, variant, x)

    # strategy 1: eigenvector-guided, one pass per window level
    for k in range(dim):
        if len(matched) == dim or starts >= max_starts:
            break
        if k in matched:
            continue
        seed = _guided_seed(p, variant, modes[k].vector.coeffs, rng, config.newton_max_iter)
        starts += 1
        if seed is None:
            continue
        roots, ok = _newton(system, seed, config.newton_max_iter)
        if ok:
            consider(roots)

    # strategy 2: random multi-start with homotopy every fourth start
    inhomogeneous = variant is not AnsatzVariant.MINUS_FIRST
    kind = 0
    while len(matched) < dim and starts < max_starts:
        starts += 1
        x0 = _random_seed(p, m, rng, kind % 3)
        kind += 1
        if inhomogeneous and kind % 4 == 0:
            x, ok = _newton(lambda z: bethe_residuals(p, variant, z, inhomog_scale=0.0),
                            x0, config.newton_max_iter)
            if not ok:
                continue
            for step in range(1, config.homotopy_steps + 1):
                scale = step / config.homotopy_steps
                x, ok = _newton(lambda z, s=scale: bethe_residuals(p, variant, z, inhomog_scale=s),
                                x, config.newton_max_iter)
                if not ok:
                    break
            if not ok:
                continue
            roots = x
        else:
            roots, ok = _newton(system, x0, config.newton_max_iter)
            if not ok:
                continue
        consider(roots)

    missing = [k for k in range(dim) if k not in matched]
    return BetheSolveResult(
        variant,
        [matched[k] for k in sorted(matched)],
        missing,
        extra,
        starts,
    )
