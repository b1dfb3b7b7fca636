"""Bohr-frequency eigenoperator decomposition of a coupling operator.

A Hermitian coupling X splits against a system Hamiltonian H_S as
X = sum_m X_m with [H_S, X_m] = omega_m X_m, i.e. X_m raises the system
energy by the Bohr frequency omega_m (omega_m > 0 for absorption).
Near-degenerate Bohr frequencies are merged by single-linkage clustering
so downstream code never divides by an accidental near-zero gap.
"""

from dataclasses import dataclass

import numpy as np

from .opcore import commutator, dag, require_hermitian

RECONSTRUCTION_TOL = 1e-12


@dataclass(frozen=True)
class BohrDecomposition:
    """Modes (omega_m, X_m) sorted by omega_m ascending; omega = 0 appears once."""

    modes: tuple[tuple[float, np.ndarray], ...]
    degeneracy_tol: float

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([w for w, _ in self.modes])

    @property
    def operators(self) -> list[np.ndarray]:
        return [x for _, x in self.modes]

    def reconstruct(self) -> np.ndarray:
        return sum(x for _, x in self.modes)


def _cluster(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Single-linkage clusters of sorted scalars: split at gaps > tol."""
    order = np.argsort(values)
    groups, current = [], [order[0]]
    for i in order[1:]:
        if values[i] - values[current[-1]] > tol:
            groups.append(np.array(current))
            current = [i]
        else:
            current.append(i)
    groups.append(np.array(current))
    return groups


def decompose(H_S: np.ndarray, X: np.ndarray,
              degeneracy_tol: float | None = None) -> BohrDecomposition:
    """Split X into eigenoperators X_m of H_S with [H_S, X_m] = omega_m X_m.

    X_m collects P_a X P_b over eigenprojector pairs whose energy gap
    E_a - E_b falls in the cluster labelled omega_m. Zero-norm modes are
    dropped. Default tol is 1e-9 * ||H_S||.
    """
    H_S = require_hermitian(H_S)
    X = require_hermitian(X)
    if H_S.shape != X.shape:
        raise ValueError(f"dimension mismatch: {H_S.shape} vs {X.shape}")
    norm = np.linalg.norm(H_S, 2)
    if degeneracy_tol is None:
        degeneracy_tol = 1e-9 * max(norm, 1.0)
    if degeneracy_tol <= 0:
        raise ValueError("degeneracy_tol must be positive")

    energies, v = np.linalg.eigh(H_S)
    x_eig = dag(v) @ X @ v  # X in the H_S eigenbasis

    d = len(energies)
    gaps = energies[:, None] - energies[None, :]  # gap[a, b] = E_a - E_b
    flat = gaps.ravel()
    modes = []
    for group in _cluster(flat, degeneracy_tol):
        block = np.zeros((d, d), dtype=complex)
        for idx in group:
            a, b = divmod(int(idx), d)
            block[a, b] = x_eig[a, b]
        if np.linalg.norm(block) == 0.0:
            continue
        omega = float(np.mean(flat[group]))
        if abs(omega) < degeneracy_tol:
            omega = 0.0
        modes.append((omega, v @ block @ dag(v)))
    modes.sort(key=lambda m: m[0])
    dec = BohrDecomposition(modes=tuple(modes), degeneracy_tol=float(degeneracy_tol))

    defect = np.abs(dec.reconstruct() - X).max()
    if defect > RECONSTRUCTION_TOL * max(np.abs(X).max(), 1.0):
        raise RuntimeError(f"eigenoperator reconstruction defect {defect:.3e}")
    for omega, x_m in dec.modes:
        res = np.linalg.norm(commutator(H_S, x_m) - omega * x_m)
        if res > 10 * degeneracy_tol * max(norm, 1.0) * np.linalg.norm(x_m):
            raise RuntimeError(
                f"mode at omega={omega} violates the commutator relation ({res:.3e})"
            )
    return dec
