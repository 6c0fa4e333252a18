"""Quantum channels as state-normalized Choi matrices.

A channel from a d_in system to a d_out system is carried by its Choi
state: the channel applied to half of a maximally entangled pair,
ordered (output x reference) and normalized to trace one.  With this
normalization the free component of a channel literally equals the free
component of its Choi state.

Four channel distance measures are provided: diamond-norm distance (via
SDP), worst-case fidelity (seeded local search, an upper bound on the
infimum), Choi fidelity, and average-case fidelity against a unitary
(exact affine transform of the Choi fidelity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from freecomp import linalg, sdp, states

CHANNEL_TOL = 1e-9


@dataclass(frozen=True)
class Channel:
    """Choi-state channel representation, ordered (out x reference)."""

    dim_in: int
    dim_out: int
    choi: np.ndarray

    @property
    def choi_tensor(self) -> np.ndarray:
        d_i, d_o = self.dim_in, self.dim_out
        return self.choi.reshape(d_o, d_i, d_o, d_i)


def channel(choi: np.ndarray, dim_in: int, dim_out: int, tol: float = CHANNEL_TOL) -> Channel:
    """Validate a Choi state and wrap it as a Channel.

    Checks PSD-ness, unit trace, and the trace-preservation condition
    that the reference marginal equals I/dim_in.
    """
    choi = states.density_matrix(choi, tol=tol)
    if choi.shape[0] != dim_in * dim_out:
        raise ValueError(f"Choi dim {choi.shape[0]} != dim_in*dim_out = {dim_in * dim_out}")
    marginal = linalg.partial_trace(choi, (dim_out, dim_in), keep="B")
    if np.max(np.abs(marginal - np.eye(dim_in) / dim_in)) > tol:
        raise ValueError("reference marginal is not I/dim_in: map is not trace preserving")
    return Channel(dim_in=dim_in, dim_out=dim_out, choi=choi)


def from_kraus(kraus, dim_in: int, dim_out: int) -> Channel:
    """Channel from a list of Kraus operators (must sum to identity)."""
    ks = np.stack([np.asarray(k, dtype=complex) for k in kraus])
    if ks.shape[1:] != (dim_out, dim_in):
        raise ValueError(f"Kraus shape {ks.shape[1:]} != ({dim_out}, {dim_in})")
    full = np.einsum("kai,kbj->aibj", ks, ks.conj()).reshape(
        dim_out * dim_in, dim_out * dim_in
    )
    return channel(full / dim_in, dim_in, dim_out)


def apply(ch: Channel, rho: np.ndarray) -> np.ndarray:
    """Channel output state for input rho."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise ValueError(f"input shape {rho.shape} != ({ch.dim_in}, {ch.dim_in})")
    out = ch.dim_in * np.einsum("aibj,ij->ab", ch.choi_tensor, rho)
    return linalg.hermitize(out, tol=1e-6)


def apply_with_reference(ch: Channel, rho_ar: np.ndarray, dim_ref: int) -> np.ndarray:
    """Apply the channel to the first factor of a bipartite input."""
    d_i, d_o = ch.dim_in, ch.dim_out
    x = np.asarray(rho_ar, dtype=complex).reshape(d_i, dim_ref, d_i, dim_ref)
    j = d_i * ch.choi_tensor  # j[a,i,b,j] = <a| N(|i><j|) |b>
    out = np.einsum("aibj,irjs->arbs", j, x).reshape(d_o * dim_ref, d_o * dim_ref)
    return linalg.hermitize(out, tol=1e-6)


def compose(second: Channel, first: Channel) -> Channel:
    """Sequential composition: run ``first``, then ``second``."""
    if first.dim_out != second.dim_in:
        raise ValueError(f"cannot compose: {first.dim_out} -> {second.dim_in}")
    j2 = second.dim_in * second.choi_tensor
    j1 = first.dim_in * first.choi_tensor
    j = np.einsum("cbCB,baBA->caCA", j2, j1)
    d = first.dim_in * second.dim_out
    return channel(j.reshape(d, d) / first.dim_in, first.dim_in, second.dim_out)


def tensor(a: Channel, b: Channel) -> Channel:
    """Parallel composition a (x) b."""
    ja = a.dim_in * a.choi_tensor
    jb = b.dim_in * b.choi_tensor
    j = np.einsum("aceg,bdfh->abcdefgh", ja, jb)
    d_i, d_o = a.dim_in * b.dim_in, a.dim_out * b.dim_out
    return channel(j.reshape(d_o * d_i, d_o * d_i) / d_i, d_i, d_o)


def _check_same_dims(a: Channel, b: Channel) -> None:
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise ValueError("channels act on different systems")


def choi_fidelity(a: Channel, b: Channel) -> float:
    """Fidelity between the Choi states of two channels."""
    _check_same_dims(a, b)
    return states.fidelity(a.choi, b.choi)


def is_unitary_channel(ch: Channel, tol: float = 1e-7) -> bool:
    """True when the Choi state is pure and dimensions match."""
    if ch.dim_in != ch.dim_out:
        return False
    purity = float(np.real(np.trace(ch.choi @ ch.choi)))
    return abs(purity - 1.0) <= tol


def pure_choi_ket(ch: Channel, tol: float = 1e-7) -> np.ndarray:
    """The Choi state as a ket, for channels with rank-one Choi."""
    vals, vecs = linalg.eig_hermitian(ch.choi)
    if abs(vals[0] - 1.0) > tol:
        raise ValueError("Choi state is not pure")
    return vecs[:, 0]


def average_fidelity_to_unitary(ch: Channel, target: Channel) -> float:
    """Average-case fidelity against a unitary target.

    Exact affine transform of the Choi fidelity:
    F_ave = (F_cho * d + 1) / (d + 1) with d the input dimension.
    """
    _check_same_dims(ch, target)
    if not is_unitary_channel(target):
        raise ValueError("target is not a unitary channel")
    d = ch.dim_in
    return (choi_fidelity(ch, target) * d + 1.0) / (d + 1.0)


def _worst_case_seeds(d: int) -> list[np.ndarray]:
    seeds = []
    for i in range(d):
        vec = np.zeros(d, dtype=complex)
        vec[i] = 1.0
        seeds.append(vec)
    for i in range(d):
        for j in range(i + 1, d):
            for amp in (1.0, -1.0, 1.0j, -1.0j):
                vec = np.zeros(d, dtype=complex)
                vec[i] = 1.0
                vec[j] = amp
                seeds.append(vec / np.sqrt(2))
    return seeds


def worst_case_fidelity_to_unitary(ch: Channel, target: Channel) -> float:
    """Worst-case (entanglement) fidelity against a unitary target.

    Minimizes the output fidelity over pure inputs on system (x)
    reference (reference dimension equal to the input dimension), by a
    deterministic seed set (stabilizer-like product inputs plus the
    maximally entangled state) followed by Nelder-Mead refinement.  The
    result is an upper bound on the true infimum (approximate): the
    search is local, but it always sits at or below the Choi fidelity
    since the maximally entangled input is evaluated.
    """
    _check_same_dims(ch, target)
    if not is_unitary_channel(target):
        raise ValueError("target is not a unitary channel")
    d = ch.dim_in
    u_mat = np.sqrt(d) * pure_choi_ket(target).reshape(d, d)
    j_mat = d * ch.choi  # [(a,i),(b,j)] = <a| N(|i><j|) |b>

    def output_fidelity(psi: np.ndarray) -> float:
        # <psi_U| (N x id)(psi psi^dag) |psi_U> with the pure target
        # output |psi_U> = (U x I)|psi>, contracted against the Choi
        psi_mat = psi.reshape(d, d)
        overlap = (u_mat @ psi_mat).conj() @ psi_mat.T
        c = overlap.reshape(-1)
        val = float(np.real(c @ (j_mat @ c.conj())))
        return min(max(val, 0.0), 1.0)

    best_val, best_psi = np.inf, None
    ref0 = np.zeros(d, dtype=complex)
    ref0[0] = 1.0
    candidates = [np.kron(s, ref0) for s in _worst_case_seeds(d)]
    candidates.append(np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d))
    for psi in candidates:
        val = output_fidelity(psi)
        if val < best_val:
            best_val, best_psi = val, psi

    def objective(x: np.ndarray) -> float:
        vec = x[: d * d] + 1j * x[d * d:]
        norm = np.linalg.norm(vec)
        if norm < 1e-9:
            return 1.0
        return output_fidelity(vec / norm)

    x0 = np.concatenate([best_psi.real, best_psi.imag])
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-6, "fatol": 1e-9, "maxiter": 4000},
    )
    return min(best_val, float(res.fun))


def diamond_distance(a: Channel, b: Channel, gap_tol: float = 1e-9) -> float:
    """Diamond-norm distance (1/2)||a - b||_diamond via SDP.

    maximize <K, W> over 0 <= W <= I_out (x) sigma with sigma a density
    matrix on the reference, where K is the unnormalized Choi matrix of
    the difference map.
    """
    _check_same_dims(a, b)
    d_i, d_o = a.dim_in, a.dim_out
    big = d_o * d_i
    k_mat = d_i * (a.choi - b.choi)

    w_basis = sdp.hermitian_basis(big)
    s_basis = sdp.hermitian_basis(d_i)
    n_w, n_s = len(w_basis), len(s_basis)
    zeros_big = np.zeros((big, big), dtype=complex)
    zeros_ref = np.zeros((d_i, d_i), dtype=complex)
    eye_out = np.eye(d_o, dtype=complex)

    objective = [float(np.real(np.trace(h @ k_mat))) for h in w_basis] + [0.0] * n_s
    blk_w = (zeros_big, [-h for h in w_basis] + [zeros_big] * n_s)
    blk_cap = (zeros_big, [h for h in w_basis] + [-np.kron(eye_out, h) for h in s_basis])
    blk_s = (zeros_ref, [np.zeros((d_i, d_i), dtype=complex)] * n_w + [-h for h in s_basis])
    trace_row = [0.0] * n_w + [1.0] * d_i + [0.0] * (n_s - d_i)

    prob = sdp.make_problem(
        objective,
        [blk_w, blk_cap, blk_s],
        equalities=[(trace_row, 1.0)],
    )
    sol = sdp.solve(prob, gap_tol=gap_tol)
    if sol.status != sdp.OPTIMAL:
        raise sdp.SdpError(f"diamond-norm SDP terminated with status {sol.status}")
    return min(max(sol.primal_value, 0.0), 1.0)


# ----------------------------------------------------------------------
# named channels
# ----------------------------------------------------------------------

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

UNITARY_GATES = {
    "I": np.eye(2, dtype=complex),
    "X": _PAULI_X,
    "Y": _PAULI_Y,
    "Z": _PAULI_Z,
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1.0, 1.0j]),
    "T": np.diag([1.0, np.exp(1j * np.pi / 4)]),
    "CZ": np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex),
    "CCZ": np.diag([1.0] * 7 + [-1.0]).astype(complex),
}


def identity_channel(d: int = 2) -> Channel:
    return unitary_channel(np.eye(d, dtype=complex))


def unitary_channel(u) -> Channel:
    if isinstance(u, str):
        try:
            u = UNITARY_GATES[u.upper()]
        except KeyError:
            raise ValueError(f"unknown gate {u!r}") from None
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if np.max(np.abs(u.conj().T @ u - np.eye(d))) > 1e-9:
        raise ValueError("matrix is not unitary")
    return from_kraus([u], d, d)


def replacer_channel(sigma: np.ndarray, dim_in: int | None = None) -> Channel:
    """Constant channel that replaces any input with sigma."""
    sigma = states.density_matrix(sigma)
    d_i = dim_in if dim_in is not None else sigma.shape[0]
    choi = np.kron(sigma, np.eye(d_i) / d_i)
    return channel(choi, d_i, sigma.shape[0])


def stochastic_mix(noise: Channel, mu: float) -> Channel:
    """Stochastic noise (1 - mu) * identity + mu * noise."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    if noise.dim_in != noise.dim_out:
        raise ValueError("stochastic mix needs equal input/output dimensions")
    ident = identity_channel(noise.dim_in)
    return channel((1 - mu) * ident.choi + mu * noise.choi, noise.dim_in, noise.dim_out)


def depolarizing_channel(mu: float, d: int = 2) -> Channel:
    return stochastic_mix(replacer_channel(np.eye(d, dtype=complex) / d), mu)


def dephasing_channel(mu: float, d: int = 2) -> Channel:
    projs = [np.diag([1.0 + 0j if k == i else 0.0 for k in range(d)]) for i in range(d)]
    return stochastic_mix(from_kraus(projs, d, d), mu)


def amplitude_damping_channel(nu: float) -> Channel:
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    k1 = np.array([[1.0, 0.0], [0.0, np.sqrt(1 - nu)]], dtype=complex)
    k2 = np.array([[0.0, np.sqrt(nu)], [0.0, 0.0]], dtype=complex)
    return from_kraus([k1, k2], 2, 2)


def erasure_channel(mu: float, d: int = 2) -> Channel:
    """Erasure to an orthogonal flag state; output dimension d + 1."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    keep = np.zeros((d + 1, d), dtype=complex)
    keep[:d, :] = np.eye(d)
    kraus = [np.sqrt(1 - mu) * keep]
    for i in range(d):
        k = np.zeros((d + 1, d), dtype=complex)
        k[d, i] = np.sqrt(mu)
        kraus.append(k)
    return from_kraus(kraus, d, d + 1)


def pauli_channel(mu_x: float, mu_y: float, mu_z: float) -> Channel:
    mus = (mu_x, mu_y, mu_z)
    if any(m < 0 for m in mus) or sum(mus) > 1.0 + 1e-12:
        raise ValueError(f"Pauli weights must be nonnegative and sum to at most 1, got {mus}")
    kraus = [np.sqrt(max(1.0 - sum(mus), 0.0)) * np.eye(2, dtype=complex)]
    for m, p in zip(mus, (_PAULI_X, _PAULI_Y, _PAULI_Z)):
        kraus.append(np.sqrt(m) * p)
    return from_kraus(kraus, 2, 2)


def make_named_channel(name: str, *params) -> Channel:
    """Build one of the named channels.

    Supported: identity(d), unitary(gate), depolarizing(mu, d),
    dephasing(mu, d), amplitude_damping(nu), erasure(mu, d),
    pauli(mu_x, mu_y, mu_z), replacer(sigma), noisy_t_gate(mu) for the
    T gate followed by depolarizing noise.
    """
    name = name.replace("-", "_")
    if name == "identity":
        return identity_channel(int(params[0]) if params else 2)
    if name == "unitary":
        return unitary_channel(params[0])
    if name == "depolarizing":
        mu = float(params[0])
        d = int(params[1]) if len(params) > 1 else 2
        return depolarizing_channel(mu, d)
    if name == "dephasing":
        mu = float(params[0])
        d = int(params[1]) if len(params) > 1 else 2
        return dephasing_channel(mu, d)
    if name == "amplitude_damping":
        return amplitude_damping_channel(float(params[0]))
    if name == "erasure":
        mu = float(params[0])
        d = int(params[1]) if len(params) > 1 else 2
        return erasure_channel(mu, d)
    if name == "pauli":
        return pauli_channel(*(float(p) for p in params))
    if name == "replacer":
        return replacer_channel(params[0])
    if name == "noisy_t_gate":
        mu = float(params[0])
        return compose(depolarizing_channel(mu), unitary_channel("T"))
    raise ValueError(f"unknown channel name {name!r}")


def channel_to_json(ch: Channel) -> dict:
    return {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "choi": linalg.matrix_to_json(ch.choi),
    }


def channel_from_json(data: dict) -> Channel:
    choi = linalg.matrix_from_json(data["choi"])
    return channel(choi, int(data["dim_in"]), int(data["dim_out"]))
