"""Density matrices, state fidelities, and the named noisy states.

States are numpy complex128 matrices (trace one, PSD); pure states are
unit vectors.  The named-state factory covers the noise families used
throughout the package: depolarized/dephased and amplitude-damped
maximally coherent qubits, noisy magic states, Gibbs states, and the
rank-deficient four-dimensional state whose free component vanishes.
"""

from __future__ import annotations

import numpy as np

from freecomp import linalg

STATE_TOL = 1e-9
RANK_CUTOFF = 1e-10  # eigenvalues below this count as zero


def density_matrix(mat: np.ndarray, tol: float = STATE_TOL) -> np.ndarray:
    """Validate and return a density matrix (Hermitian, PSD, trace one)."""
    mat = linalg.hermitize(mat)
    tr = float(np.trace(mat).real)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"trace {tr} is not 1 within {tol}")
    if not linalg.is_psd(mat, tol=tol):
        raise ValueError("matrix is not positive semidefinite")
    return mat


def pure_state(vec: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Validate and return a pure-state vector (unit norm)."""
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > tol:
        raise ValueError(f"norm {norm} is not 1 within {tol}")
    return vec


def ket(coeffs) -> np.ndarray:
    """Normalize a coefficient vector into a pure state."""
    vec = np.asarray(coeffs, dtype=complex).reshape(-1)
    return vec / np.linalg.norm(vec)


def projector(vec: np.ndarray) -> np.ndarray:
    """Rank-one density matrix |v><v|."""
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(vec, vec.conj())


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    vals, vecs = linalg.eig_hermitian(mat)
    vals = np.sqrt(np.maximum(vals, 0.0))  # clamp roundoff negatives
    return (vecs * vals) @ vecs.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1^2."""
    rho = linalg.hermitize(rho)
    sigma = linalg.hermitize(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch {rho.shape} vs {sigma.shape}")
    root = _psd_sqrt(rho)
    inner = root @ sigma @ root
    vals, _ = linalg.eig_hermitian(linalg.hermitize(inner, tol=1e-6))
    val = float(np.sum(np.sqrt(np.maximum(vals, 0.0))) ** 2)
    return min(val, 1.0)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of rho - sigma."""
    vals, _ = linalg.eig_hermitian(linalg.hermitize(rho - sigma))
    return 0.5 * float(np.sum(np.abs(vals)))


def pure_overlap(psi: np.ndarray, sigma: np.ndarray) -> float:
    """Overlap <psi|sigma|psi> of a pure state with a density matrix."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if sigma.shape[0] != psi.size:
        raise ValueError(f"dimension mismatch {psi.size} vs {sigma.shape}")
    return float(np.real(psi.conj() @ sigma @ psi))


def min_nonzero_eigenvalue(rho: np.ndarray, cutoff: float = RANK_CUTOFF) -> float:
    """Smallest eigenvalue above the rank cutoff."""
    vals, _ = linalg.eig_hermitian(linalg.hermitize(rho))
    keep = vals[vals > cutoff]
    if keep.size == 0:
        raise ValueError("matrix is zero to within the rank cutoff")
    return float(keep[-1])


# ----------------------------------------------------------------------
# named states
# ----------------------------------------------------------------------

PLUS_KET = ket([1.0, 1.0])
T_KET = ket([1.0, np.exp(1j * np.pi / 4)])

_KETS = {
    "zero": ket([1.0, 0.0]),
    "one": ket([0.0, 1.0]),
    "plus": PLUS_KET,
    "minus": ket([1.0, -1.0]),
    "plus_i": ket([1.0, 1.0j]),
    "minus_i": ket([1.0, -1.0j]),
    "t": T_KET,
    "t_state": T_KET,
}


def named_ket(name: str) -> np.ndarray:
    """Look up a named single-qubit pure state."""
    try:
        return _KETS[name].copy()
    except KeyError:
        raise ValueError(f"unknown pure state {name!r}") from None


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


def gibbs_state(hamiltonian: np.ndarray, beta: float) -> np.ndarray:
    """Thermal state exp(-beta H) / tr exp(-beta H)."""
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    h = linalg.hermitize(hamiltonian)
    vals, vecs = linalg.eig_hermitian(h)
    w = np.exp(-beta * (vals - vals.min()))  # shift for stability
    w /= w.sum()
    return (vecs * w) @ vecs.conj().T


def make_named_state(name: str, *params) -> np.ndarray:
    """Build one of the named density matrices.

    Supported: plus, t_state, noisy_t(zeta), depolarized_plus(mu),
    dephased_plus(mu), amp_damped_plus(nu), gibbs(H, beta),
    coherence_gamma_zero_example.
    """
    name = name.replace("-", "_")
    if name == "plus":
        return projector(PLUS_KET)
    if name == "t_state":
        return projector(T_KET)
    if name == "noisy_t":
        (zeta,) = params
        zeta = _check_unit("zeta", zeta)
        return (1 - zeta) * projector(T_KET) + zeta * np.eye(2) / 2
    if name in ("depolarized_plus", "dephased_plus"):
        (mu,) = params
        mu = _check_unit("mu", mu)
        return np.array([[0.5, (1 - mu) / 2], [(1 - mu) / 2, 0.5]], dtype=complex)
    if name == "amp_damped_plus":
        (nu,) = params
        nu = _check_unit("nu", nu)
        c = np.sqrt(1 - nu) / 2
        return np.array([[(1 + nu) / 2, c], [c, (1 - nu) / 2]], dtype=complex)
    if name == "gibbs":
        hamiltonian, beta = params
        return gibbs_state(hamiltonian, float(beta))
    if name == "coherence_gamma_zero_example":
        psi1 = ket([1.0, 1.0, 0.0, 0.0])
        psi2 = ket([0.0, 0.0, 1.0, 1.0])
        return (projector(psi1) + projector(psi2)) / 2
    raise ValueError(f"unknown state name {name!r}")
