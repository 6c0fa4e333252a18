"""Dense complex linear algebra primitives.

All operators are carried as numpy complex128 arrays.  The Hermitian
eigensolver is a cyclic Jacobi iteration (compiled kernel with a
pure-Python fallback, see freecomp._kernels); everything downstream of a
positivity or spectral question funnels through it.
"""

from __future__ import annotations

import json
from typing import NamedTuple

import numpy as np

from freecomp._kernels import jacobi_cycle

# Convergence of the Jacobi sweep: off-diagonal Frobenius mass relative
# to the full Frobenius norm.  Matrices here are tiny (dim <= 64), so a
# hard sweep cap is enough to flag pathology.
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100

HERMITICITY_TOL = 1e-8


class LinalgError(Exception):
    """Numeric failure in a linear algebra primitive."""


class HermiticityError(ValueError):
    """Input matrix is too far from Hermitian."""


class Spectrum(NamedTuple):
    """Full eigensystem of a Hermitian matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # unitary, columns match eigenvalues


def hermitize(mat: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Return the symmetrized copy (M + M^dag)/2 of a square matrix.

    Asymmetry beyond ``tol`` (relative to the largest entry, floored at
    scale 1) raises HermiticityError: it catches caller bugs without
    rejecting honest roundoff.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    scale = max(1.0, float(np.max(np.abs(mat))) if mat.size else 0.0)
    asym = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if asym > tol * scale:
        raise HermiticityError(f"asymmetry {asym:.3e} exceeds {tol:.0e} * {scale:g}")
    return (mat + mat.conj().T) / 2.0


def eig_hermitian(mat: np.ndarray) -> Spectrum:
    """Spectral decomposition of a Hermitian matrix via cyclic Jacobi.

    Eigenvalues are returned in descending order with matching
    eigenvector columns.  Deterministic for a fixed input.  Raises
    LinalgError if the sweep cap is hit (never expected at dim <= 64).
    """
    a = np.array(mat, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128, order="C")
    sweeps = jacobi_cycle(a, v, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise LinalgError(f"Jacobi sweep cap ({JACOBI_MAX_SWEEPS}) exceeded at dim {n}")
    vals = np.real(np.diag(a)).copy()
    order = np.argsort(-vals, kind="stable")
    return Spectrum(vals[order], v[:, order])


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _as_blocks(mat: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    da, db = dims
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (da * db, da * db):
        raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
    return mat.reshape(da, db, da, db)


def partial_trace(mat: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Trace out one tensor factor of a bipartite operator.

    ``dims = (dA, dB)`` with the matrix living on A (x) B; ``keep`` is
    "A" or "B".  The total trace is preserved.
    """
    t = _as_blocks(mat, dims)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(mat: np.ndarray, dims: tuple[int, int], on: str) -> np.ndarray:
    """Partial transpose on one tensor factor; an involution, trace kept."""
    t = _as_blocks(mat, dims)
    if on == "A":
        out = np.einsum("ikjl->jkil", t)
    elif on == "B":
        out = np.einsum("ikjl->iljk", t)
    else:
        raise ValueError(f"on must be 'A' or 'B', got {on!r}")
    da, db = dims
    return np.ascontiguousarray(out).reshape(da * db, da * db)


def min_eigenvalue(mat: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(eig_hermitian(mat).eigenvalues[-1])


def is_psd(mat: np.ndarray, tol: float = 1e-9) -> bool:
    """Positive semidefiniteness test: min eigenvalue >= -tol."""
    return min_eigenvalue(mat) >= -tol


def matrix_to_json(mat: np.ndarray) -> dict:
    """Encode a square complex matrix as {"dim", "re", "im"}."""
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    return {
        "dim": int(mat.shape[0]),
        "re": mat.real.tolist(),
        "im": mat.imag.tolist(),
    }


def matrix_from_json(data: dict, hermitian: bool = True) -> np.ndarray:
    """Decode the {"dim", "re", "im"} matrix format.

    With ``hermitian=True`` (the default) the result is validated and
    symmetrized via :func:`hermitize`.
    """
    dim = int(data["dim"])
    re = np.asarray(data["re"], dtype=float)
    im = np.asarray(data.get("im", np.zeros((dim, dim))), dtype=float)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(f"re/im shapes {re.shape}/{im.shape} do not match dim {dim}")
    mat = re + 1j * im
    return hermitize(mat) if hermitian else mat


def save_matrix(path, mat: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(mat), fh, indent=1)
        fh.write("\n")


def load_matrix(path, hermitian: bool = True) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh), hermitian=hermitian)
