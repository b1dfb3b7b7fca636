"""Master-equation generators, evolution, and steady-state extraction.

All generators are Schroedinger-picture superoperators in physical time on
column-vectorized density matrices (vec(A rho B) = (B^T kron A) vec(rho),
Fortran/column stacking). Kinds: Davies (GKSL, secular), Bloch-Redfield
(asymptotic or frozen at a time t, generally not GKSL), its secular and
real-coefficient variants, and the ultrastrong-coupling Pauli generator.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import bath as bathmod
from .eigenops import decompose
from .mfstatics import PointerSplit
from .opcore import dag, require_density_matrix, require_hermitian

DAVIES = "davies"
BRME_ASYMPTOTIC = "brme_asymptotic"
BRME_AT_TIME = "brme_at_time"
SECULAR_FULL = "secular_full"
SECULAR_PARTIAL = "secular_partial"
BRME_REAL_ONLY = "brme_real_only"
PAULI_ULTRASTRONG = "pauli_ultrastrong"

TRACE_DRIFT_ABORT = 1e-7


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).flatten(order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(v.size)))
    return np.asarray(v, dtype=complex).reshape((d, d), order="F")


def _left(a):
    return np.kron(np.eye(a.shape[0]), a)


def _right(a):
    return np.kron(a.T, np.eye(a.shape[0]))


def _sandwich(a, b):
    """Superoperator of rho -> a rho b."""
    return np.kron(b.T, a)


def _commutator_super(h):
    return -1j * (_left(h) - _right(h))


def _dissipator(a, b):
    """rho -> a rho b^dag - (1/2){b^dag a, rho}."""
    bd_a = dag(b) @ a
    return (_sandwich(a, dag(b))
            - 0.5 * (_left(bd_a) + _right(bd_a)))


@dataclass(frozen=True)
class Liouvillian:
    kind: str
    dim: int
    matrix: np.ndarray
    lam: float
    picture: str = "schrodinger"

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho))


@dataclass(frozen=True)
class SteadyStateReport:
    states: list
    residual: float
    spectral_gap: float
    unique: bool


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: list
    trace_deviation: np.ndarray
    hermiticity_deviation: np.ndarray
    min_eigenvalue: np.ndarray


class _BrmeIngredients:
    """Eigenoperators and Gamma coefficients shared by the BRME variants."""

    def __init__(self, H_S, X, bath: bathmod.BathParams, time, degeneracy_tol=None):
        self.H_S = require_hermitian(H_S)
        self.bath = bath
        self.dec = decompose(H_S, X, degeneracy_tol)
        self.time = time
        self.gammas = [
            bathmod.gamma_m(bath.J, bath.beta, w, time) for w in self.dec.frequencies
        ]

    def assemble(self, kind, *, secular_cutoff=np.inf, keep_perp=True,
                 real_only=False):
        """Build the generator, optionally filtering cross terms (m != n)."""
        lam = self.bath.lam
        modes = self.dec.modes
        gammas = [complex(g.real, 0.0) if real_only else g for g in self.gammas]
        d = self.H_S.shape[0]

        h_par = np.zeros((d, d), dtype=complex)
        h_perp = np.zeros((d, d), dtype=complex)
        diss = np.zeros((d * d, d * d), dtype=complex)
        for (w_m, x_m), g_m in zip(modes, gammas):
            h_par += g_m.imag * dag(x_m) @ x_m
            for (w_n, x_n), g_n in zip(modes, gammas):
                if w_m != w_n and abs(w_m - w_n) > secular_cutoff:
                    continue
                if w_m != w_n:
                    # (Gamma_m - Gamma_n^*)/(2i): the m = n case of the same
                    # grouping is Im Gamma_m, matching the parallel shift
                    h_perp += (g_m - np.conj(g_n)) / 2j * dag(x_n) @ x_m
                gamma_mn = g_m + np.conj(g_n)
                diss += gamma_mn * _dissipator(x_m, x_n)
        if not keep_perp:
            h_perp[:] = 0.0
        h_eff = self.H_S + lam**2 * (h_par + h_perp)
        mat = _commutator_super(h_eff) + lam**2 * diss
        return Liouvillian(kind=kind, dim=d, matrix=mat, lam=lam)


def davies_generator(H_S, X, bath: bathmod.BathParams,
                     degeneracy_tol=None) -> Liouvillian:
    """Secular (GKSL) generator with asymptotic rates gamma_m = 2 Re Gamma_m.

    -i[H_S + lam^2 dH_par, .] + lam^2 sum_m gamma_m D[X_m]; steady state is
    the system Gibbs state by detailed balance.
    """
    ing = _BrmeIngredients(H_S, X, bath, bathmod.ASYMPTOTIC, degeneracy_tol)
    return ing.assemble(DAVIES, secular_cutoff=-1.0, keep_perp=False)


def brme_generator(H_S, X, bath: bathmod.BathParams, time=bathmod.ASYMPTOTIC,
                   degeneracy_tol=None) -> Liouvillian:
    """Bloch-Redfield generator with Gamma_m(t) (or the asymptotic values)."""
    ing = _BrmeIngredients(H_S, X, bath, time, degeneracy_tol)
    kind = BRME_ASYMPTOTIC if time == bathmod.ASYMPTOTIC else BRME_AT_TIME
    return ing.assemble(kind)


def secular_filter(H_S, X, bath: bathmod.BathParams, cutoff,
                   degeneracy_tol=None) -> Liouvillian:
    """Partial-secular BRME: drop cross terms with |omega_m - omega_n| > cutoff.

    cutoff = 0 (or "full") removes every m != n pair and the non-commuting
    shift, recovering the Davies/fully-secular generator.
    """
    ing = _BrmeIngredients(H_S, X, bath, bathmod.ASYMPTOTIC, degeneracy_tol)
    if cutoff == "full" or cutoff == 0:
        return ing.assemble(SECULAR_FULL, secular_cutoff=-1.0, keep_perp=False)
    return ing.assemble(SECULAR_PARTIAL, secular_cutoff=float(cutoff))


def brme_real_only(H_S, X, bath: bathmod.BathParams,
                   degeneracy_tol=None) -> Liouvillian:
    """BRME with Im Gamma_m forced to zero; steady state is the Gibbs state."""
    ing = _BrmeIngredients(H_S, X, bath, bathmod.ASYMPTOTIC, degeneracy_tol)
    return ing.assemble(BRME_REAL_ONLY, real_only=True)


def default_rate_model(beta: float, nu0: float = 1.0):
    """Bounded KMS-symmetric rate profile f(E) = nu0 e^(beta E/2)/(2 cosh(beta E/2))."""

    def f(E):
        return nu0 / (1.0 + np.exp(-beta * np.asarray(E, dtype=float)))

    return f


def pauli_ultrastrong(split: PointerSplit, bath: bathmod.BathParams,
                      rate_model=None) -> Liouvillian:
    """Ultrastrong-coupling generator in the pointer basis of X.

    Populations follow the Pauli equation with hopping rates
    k_mn = |Delta_mn|^2 f(eps_n - eps_m) (rate into m, detailed-balanced for
    KMS-symmetric f); pointer coherences decay at least as fast as the
    fastest population rate. Operates in the pointer basis directly.
    """
    beta = bath.beta
    if rate_model is None:
        rate_model = default_rate_model(beta)
    eps = np.diag(split.H_eps).real
    d = len(eps)
    # the rate profile must satisfy f(-E) = e^(-beta E) f(E), f >= 0
    probe = np.linspace(-3.0, 3.0, 13) * max(np.abs(eps).max(), 1.0)
    fvals, fneg = np.asarray(rate_model(probe)), np.asarray(rate_model(-probe))
    if np.any(fvals < 0) or not np.allclose(
            fneg, np.exp(-beta * probe) * fvals,
            rtol=1e-9, atol=1e-12 * max(1.0, np.abs(fvals).max())):
        raise ValueError("rate model violates the KMS symmetry f(-E) = e^(-bE) f(E)")

    k = np.zeros((d, d))
    for m in range(d):
        for n in range(d):
            if m == n:
                continue
            k[m, n] = abs(split.Delta_mn[m, n]) ** 2 * float(
                rate_model(eps[n] - eps[m])
            )
    mat = np.zeros((d * d, d * d), dtype=complex)
    pop_rates = k.sum(axis=0)  # total escape rate from each pointer state

    def idx(i, j):
        return i + d * j  # column-stacking index of |i><j|

    for m in range(d):
        for n in range(d):
            if m == n:
                continue
            mat[idx(m, m), idx(n, n)] += k[m, n]
            mat[idx(n, n), idx(n, n)] -= k[m, n]
    deco = max(pop_rates.max(), np.abs(k).max(), 1e-12)
    for i in range(d):
        for j in range(d):
            if i != j:
                # strong-decoherence limit: coherences die no slower than
                # the fastest population transfer
                mat[idx(i, j), idx(i, j)] = -(deco + 0.5 * (pop_rates[i] + pop_rates[j]))
    return Liouvillian(kind=PAULI_ULTRASTRONG, dim=d, matrix=mat, lam=float("inf"))


def evolve(L: Liouvillian, rho0: np.ndarray, t_grid, rtol: float = 1e-8,
           atol: float = 1e-10) -> Trajectory:
    """Integrate d rho/dt = L rho with an adaptive RK 5(4) scheme."""
    rho0 = require_density_matrix(rho0)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or np.any(np.diff(t_grid) <= 0) or t_grid[0] < 0:
        raise ValueError("t_grid must be ascending and start at t >= 0")
    mat = L.matrix

    sol = solve_ivp(
        lambda t, y: mat @ y, (t_grid[0], t_grid[-1]), vec(rho0),
        t_eval=t_grid, method="RK45", rtol=rtol, atol=atol,
    )
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")
    states, tr_dev, herm_dev, min_eig = [], [], [], []
    for col in sol.y.T:
        rho = unvec(col)
        drift = abs(np.trace(rho).real - 1.0)
        if drift > TRACE_DRIFT_ABORT:
            raise RuntimeError(f"trace drift {drift:.3e} exceeds the abort threshold")
        states.append(rho)
        tr_dev.append(drift)
        herm_dev.append(float(np.abs(rho - dag(rho)).max()))
        min_eig.append(float(np.linalg.eigvalsh((rho + dag(rho)) / 2).min()))
    return Trajectory(
        times=t_grid, states=states,
        trace_deviation=np.array(tr_dev),
        hermiticity_deviation=np.array(herm_dev),
        min_eigenvalue=np.array(min_eig),
    )


def steady_state(L: Liouvillian) -> SteadyStateReport:
    """Null space of the generator via full eigendecomposition.

    Null vectors are Hermitized, positivity-projected, and trace-normalized.
    The tolerance ladder 1e-10 -> 1e-8 (relative to ||L||) guards against an
    empty numerical null space.
    """
    mat = L.matrix
    norm = max(np.linalg.norm(mat, 2), 1e-300)
    evals, evecs = np.linalg.eig(mat)

    states = []
    null_idx = []
    for tol in (1e-10, 1e-9, 1e-8):
        null_idx = np.flatnonzero(np.abs(evals) < tol * norm)
        if null_idx.size:
            break
    if not null_idx.size:
        raise RuntimeError(
            f"no numerical null space (min |eigenvalue| = {np.abs(evals).min():.3e})"
        )
    for i in null_idx:
        m = unvec(evecs[:, i])
        m = (m + dag(m)) / 2
        w, v = np.linalg.eigh(m)
        if abs(w.min()) > abs(w.max()):
            w = -w
        w = np.clip(w, 0.0, None)
        if w.sum() <= 0:
            continue
        rho = (v * w) @ dag(v)
        states.append(rho / np.trace(rho).real)
    if not states:
        raise RuntimeError("null space contained no positive-trace direction")

    residual = max(
        float(np.linalg.norm(mat @ vec(rho))) for rho in states
    )
    nonzero = np.abs(evals) >= (np.abs(evals[null_idx]).max() + 1e-12 * norm)
    live = evals[np.abs(evals) > 1e-10 * norm]
    gap = float(-live.real.max()) if live.size else 0.0
    return SteadyStateReport(
        states=states, residual=residual, spectral_gap=gap,
        unique=(len(states) == 1),
    )
