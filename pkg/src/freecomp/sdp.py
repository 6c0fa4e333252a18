"""Self-contained semidefinite programming for small dense problems.

Problems are stated in linear-matrix-inequality form:

    maximize    b . y
    subject to  F0[k] - sum_i y[i] * F[k][i]  is PSD   for each block k,
                y[i] >= 0 for variables flagged nonnegative,
                A_eq y = c_eq.

Hermitian blocks are embedded into real symmetric ones, equality
constraints are eliminated onto a free parametrization of their solution
set, nonnegative scalars become 1x1 blocks, and the resulting cone
program is solved by a primal-dual path-following interior-point method
with Nesterov-Todd scaling on the (simplified) homogeneous self-dual
embedding.  Everything is deterministic: fixed identity start, no
randomization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from freecomp import linalg

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITER_LIMIT = "iter_limit"

DEFAULT_GAP_TOL = 1e-8
DEFAULT_FEAS_TOL = 1e-7
MAX_ITERATIONS = 200
STEP_FRACTION = 0.98


class SdpError(Exception):
    """Problem assembly or solver failure."""


class InconsistentEqualitiesError(SdpError):
    """Equality constraints admit no solution."""


@dataclass(frozen=True)
class LmiBlock:
    """One constraint block: f0 - sum_i y_i coeffs[i] must stay PSD."""

    f0: np.ndarray
    coeffs: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.f0.shape[0]


@dataclass(frozen=True)
class SdpProblem:
    """Conic program over scalar variables with Hermitian LMI blocks."""

    objective: np.ndarray  # maximize objective . y
    blocks: tuple[LmiBlock, ...]
    nonneg: tuple[bool, ...] = ()
    equalities: tuple[tuple[np.ndarray, float], ...] = ()
    obj_offset: float = 0.0

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def validate(self) -> None:
        m = self.num_vars
        if self.nonneg and len(self.nonneg) != m:
            raise SdpError("nonneg flags do not match variable count")
        for k, blk in enumerate(self.blocks):
            if len(blk.coeffs) != m:
                raise SdpError(f"block {k} has {len(blk.coeffs)} coefficient matrices, expected {m}")
            n = blk.dim
            for f in blk.coeffs:
                if f.shape != (n, n):
                    raise SdpError(f"block {k} mixes matrix dimensions")
        for a, _ in self.equalities:
            if len(a) != m:
                raise SdpError("equality row length does not match variable count")


@dataclass
class SdpSolution:
    y: np.ndarray
    primal_value: float
    dual_value: float
    gap: float
    status: str
    certificate: tuple[float, ...]
    iterations: int
    history: list[dict] = field(default_factory=list)


def make_problem(objective, blocks, nonneg=None, equalities=None, obj_offset=0.0) -> SdpProblem:
    """Assemble and validate an SdpProblem from plain sequences."""
    objective = np.asarray(objective, dtype=float)
    blks = tuple(
        LmiBlock(np.asarray(f0, dtype=complex), tuple(np.asarray(f, dtype=complex) for f in fs))
        for f0, fs in blocks
    )
    prob = SdpProblem(
        objective=objective,
        blocks=blks,
        nonneg=tuple(bool(x) for x in nonneg) if nonneg is not None else (False,) * len(objective),
        equalities=tuple((np.asarray(a, dtype=float), float(c)) for a, c in (equalities or ())),
        obj_offset=float(obj_offset),
    )
    prob.validate()
    return prob


def real_embed(h: np.ndarray) -> np.ndarray:
    """Embed a Hermitian matrix as [[Re, -Im], [Im, Re]].

    The embedding is real symmetric, PSD exactly when the input is, and
    carries each eigenvalue with doubled multiplicity.
    """
    h = np.asarray(h, dtype=complex)
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def hermitian_basis(dim: int) -> list[np.ndarray]:
    """Real-coefficient basis of Hermitian dim x dim matrices.

    Ordering: diagonal units E_ii, then for i < j the symmetric pair
    E_ij + E_ji followed by i(E_ij - E_ji).
    """
    basis = []
    for i in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(dim):
        for j in range(i + 1, dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = 1.0
            e[j, i] = 1.0
            basis.append(e)
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = 1.0j
            e[j, i] = -1.0j
            basis.append(e)
    return basis


# ----------------------------------------------------------------------
# equality elimination
# ----------------------------------------------------------------------

def _eliminate(problem: SdpProblem):
    """Reduce A_eq y = c_eq onto free parameters.

    Returns (reduced problem, y0, basis) with y = y0 + basis @ z.  Row
    reduction with partial pivoting; raises InconsistentEqualitiesError
    when the system has no solution.
    """
    m = problem.num_vars
    if not problem.equalities:
        return problem, np.zeros(m), np.eye(m)

    rows = np.array([a for a, _ in problem.equalities], dtype=float)
    rhs = np.array([c for _, c in problem.equalities], dtype=float)
    aug = np.hstack([rows, rhs[:, None]])
    n_rows = aug.shape[0]
    scale = max(1.0, float(np.max(np.abs(aug))))
    tol = 1e-10 * scale

    pivots = []
    r = 0
    for col in range(m):
        if r >= n_rows:
            break
        p = r + int(np.argmax(np.abs(aug[r:, col])))
        if abs(aug[p, col]) <= tol:
            continue
        aug[[r, p]] = aug[[p, r]]
        aug[r] = aug[r] / aug[r, col]
        for i in range(n_rows):
            if i != r and abs(aug[i, col]) > 0:
                aug[i] = aug[i] - aug[i, col] * aug[r]
        pivots.append(col)
        r += 1
    for i in range(r, n_rows):
        if abs(aug[i, -1]) > tol:
            raise InconsistentEqualitiesError("equality constraints are inconsistent")

    free = [c for c in range(m) if c not in pivots]
    y0 = np.zeros(m)
    for i, col in enumerate(pivots):
        y0[col] = aug[i, -1]
    basis = np.zeros((m, len(free)))
    for jf, col in enumerate(free):
        basis[col, jf] = 1.0
        for i, pcol in enumerate(pivots):
            basis[pcol, jf] = -aug[i, col]

    new_blocks = []
    for blk in problem.blocks:
        shift = blk.f0 - sum(y0[i] * blk.coeffs[i] for i in range(m))
        coeffs = []
        for jf in range(len(free)):
            coeffs.append(sum(basis[i, jf] * blk.coeffs[i] for i in range(m)))
        new_blocks.append(LmiBlock(shift, tuple(coeffs)))

    # nonnegativity of an eliminated variable becomes a 1x1 block on z
    for i, flag in enumerate(problem.nonneg):
        if flag:
            f0 = np.array([[y0[i]]], dtype=complex)
            coeffs = tuple(np.array([[-basis[i, jf]]], dtype=complex) for jf in range(len(free)))
            new_blocks.append(LmiBlock(f0, coeffs))

    reduced = SdpProblem(
        objective=basis.T @ problem.objective,
        blocks=tuple(new_blocks),
        nonneg=(False,) * len(free),
        equalities=(),
        obj_offset=problem.obj_offset + float(problem.objective @ y0),
    )
    return reduced, y0, basis


def eliminate_equalities(problem: SdpProblem) -> SdpProblem:
    """Equivalent problem over a free parametrization of the equalities."""
    problem.validate()
    return _eliminate(problem)[0]


# ----------------------------------------------------------------------
# interior-point core
# ----------------------------------------------------------------------

def _sym_eig(mat: np.ndarray):
    """Eigensystem of a real symmetric matrix through the Jacobi kernel."""
    spec = linalg.eig_hermitian(mat.astype(complex))
    return spec.eigenvalues, spec.eigenvectors.real


def _sym_power(vals, vecs, p):
    # relative floor keeps the scaling bounded when an iterate drifts
    # slightly indefinite through roundoff
    floor = max(float(np.max(vals)) * 1e-16, 1e-300)
    w = np.maximum(vals, floor) ** p
    return (vecs * w) @ vecs.T


def _min_gen_eig(ref_invhalf: np.ndarray, delta: np.ndarray) -> float:
    """Smallest eigenvalue of ref^{-1/2} delta ref^{-1/2}."""
    m = ref_invhalf @ delta @ ref_invhalf
    vals, _ = _sym_eig((m + m.T) / 2.0)
    return float(vals[-1])


def _prepare_cone(problem: SdpProblem):
    """Real-symmetric cone data: list of (c_k, Fk stack), objective."""
    m = problem.num_vars
    blocks = []
    for blk in problem.blocks:
        mats = [blk.f0, *blk.coeffs]
        if any(np.max(np.abs(mat.imag)) > 0.0 for mat in mats):
            mats = [real_embed(mat) for mat in mats]
        c_k = np.ascontiguousarray(mats[0].real, dtype=float)
        c_k = (c_k + c_k.T) / 2.0
        fs = np.stack([(f.real + f.real.T) / 2.0 for f in mats[1:]]) if m else np.zeros((0, *c_k.shape))
        blocks.append((c_k, np.ascontiguousarray(fs, dtype=float)))
    for i, flag in enumerate(problem.nonneg):
        if flag:
            c_k = np.zeros((1, 1))
            fs = np.zeros((m, 1, 1))
            fs[i, 0, 0] = -1.0
            blocks.append((c_k, fs))
    return blocks


def _solve_reduced(b, blocks, gap_tol, feas_tol, max_iterations):
    """Homogeneous self-dual NT interior point on prepared real blocks."""
    m = len(b)
    nu = sum(c.shape[0] for c, _ in blocks)
    xs = [np.eye(c.shape[0]) for c, _ in blocks]
    ss = [np.eye(c.shape[0]) for c, _ in blocks]
    y = np.zeros(m)
    tau, kappa = 1.0, 1.0
    c_scale = max(1.0, *(float(np.max(np.abs(c))) for c, _ in blocks)) if blocks else 1.0
    b_scale = max(1.0, float(np.max(np.abs(b))) if m else 0.0)
    history = []

    def residuals():
        rp = -b * tau
        for (c_k, fs), x in zip(blocks, xs):
            if m:
                rp = rp + np.einsum("iab,ab->i", fs, x)
        rd = []
        for (c_k, fs), s in zip(blocks, ss):
            ay = np.einsum("i,iab->ab", y, fs) if m else np.zeros_like(c_k)
            rd.append(ay + s - c_k * tau)
        cx = sum(float(np.tensordot(c_k, x)) for (c_k, _), x in zip(blocks, xs))
        by = float(b @ y)
        rg = by - cx - kappa
        return rp, rd, cx, by, rg

    status = ITER_LIMIT
    iters_done = max_iterations
    best = None  # (score, y, tau, pobj, dobj, relgap)
    for it in range(1, max_iterations + 1):
        rp, rd, cx, by, rg = residuals()
        mu = (sum(float(np.tensordot(x, s)) for x, s in zip(xs, ss)) + tau * kappa) / (nu + 1)

        pobj = by / tau
        dobj = cx / tau
        relgap = abs(pobj - dobj) / max(1.0, abs(pobj), abs(dobj))
        err_p = float(np.max(np.abs(rp))) / tau / b_scale if m else 0.0
        err_d = max(float(np.max(np.abs(r))) for r in rd) / tau / c_scale
        score = max(relgap, err_p, err_d)
        if np.isfinite(score) and (best is None or score < best[0]):
            best = (score, y / tau, tau, pobj, dobj, relgap)
        history.append(
            {
                "iteration": it,
                "mu": mu,
                "primal": pobj,
                "dual": dobj,
                "relgap": relgap,
                "err_primal": err_p,
                "err_dual": err_d,
                "tau": tau,
                "kappa": kappa,
                "cone_inner": mu * (nu + 1),
            }
        )
        if relgap <= gap_tol and err_p <= feas_tol and err_d <= feas_tol:
            status = OPTIMAL
            iters_done = it - 1
            break
        if tau <= 1e-10 * max(1.0, kappa) and mu <= 1e-10:
            # homogeneous certificate: classify and stop
            if cx < -1e-8:
                status = INFEASIBLE
            elif by > 1e-8:
                status = UNBOUNDED
            else:
                status = ITER_LIMIT
            iters_done = it - 1
            break

        # Nesterov-Todd scaling per block
        ws, s_invhalf, s_inv, x_invhalf = [], [], [], []
        for x, s in zip(xs, ss):
            sv, sw = _sym_eig(s)
            sh = _sym_power(sv, sw, 0.5)
            smh = _sym_power(sv, sw, -0.5)
            t_mat = sh @ x @ sh
            tv, tw = _sym_eig((t_mat + t_mat.T) / 2.0)
            th = _sym_power(tv, tw, 0.5)
            w = smh @ th @ smh
            ws.append((w + w.T) / 2.0)
            s_invhalf.append(smh)
            s_inv.append(_sym_power(sv, sw, -1.0))
            xv, xw = _sym_eig(x)
            x_invhalf.append(_sym_power(xv, xw, -0.5))

        # Schur complement pieces (shared by predictor and corrector)
        m_mat = np.zeros((m, m))
        u_vec = np.zeros(m)
        wcc = 0.0
        wrd = []  # W rd W per block
        wcw = []  # W c W per block
        for (c_k, fs), w, r in zip(blocks, ws, rd):
            if m:
                g = w @ (fs @ w)  # broadcast: G_i = W F_i W
                m_mat += np.einsum("iab,jab->ij", fs, g)
            wc = w @ c_k @ w
            wcw.append(wc)
            if m:
                u_vec += np.einsum("iab,ab->i", fs, wc)
            wcc += float(np.tensordot(c_k, wc))
            wrd.append(w @ r @ w)

        lhs = np.zeros((m + 1, m + 1))
        lhs[:m, :m] = m_mat
        lhs[:m, m] = -(u_vec + b)
        lhs[m, :m] = b - u_vec
        lhs[m, m] = wcc + kappa / tau

        def newton(gamma, corr):
            sigma = 1.0 - gamma
            rhs = np.zeros(m + 1)
            v_blocks = []
            for (c_k, fs), x, sinv, w, r in zip(blocks, xs, s_inv, ws, rd):
                v_k = gamma * mu * sinv - x
                v_blocks.append(v_k)
                if m:
                    rhs[:m] -= np.einsum("iab,ab->i", fs, v_k)
            if m:
                rhs[:m] -= sigma * rp
                for (c_k, fs), wr in zip(blocks, wrd):
                    rhs[:m] -= sigma * np.einsum("iab,ab->i", fs, wr)
            cv = sum(float(np.tensordot(c_k, v_k)) for (c_k, _), v_k in zip(blocks, v_blocks))
            cwrd = sum(float(np.tensordot(c_k, wr)) for (c_k, _), wr in zip(blocks, wrd))
            rhs[m] = -sigma * rg + cv + sigma * cwrd + (gamma * mu - tau * kappa - corr) / tau
            try:
                sol = np.linalg.solve(lhs, rhs)
            except np.linalg.LinAlgError:
                sol = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
            dy, dtau = sol[:m], sol[m]
            dss, dxs = [], []
            for (c_k, fs), w, r, v_k in zip(blocks, ws, rd, v_blocks):
                ady = np.einsum("i,iab->ab", dy, fs) if m else np.zeros_like(c_k)
                d_s = -sigma * r - ady + c_k * dtau
                d_s = (d_s + d_s.T) / 2.0
                d_x = v_k - w @ d_s @ w
                dss.append(d_s)
                dxs.append((d_x + d_x.T) / 2.0)
            dkappa = (gamma * mu - tau * kappa - corr) / tau - (kappa / tau) * dtau
            return dy, dtau, dkappa, dxs, dss

        def max_step(dxs, dss, dtau, dkappa):
            alpha = 1.0 / STEP_FRACTION
            for x_ih, dx in zip(x_invhalf, dxs):
                lam = _min_gen_eig(x_ih, dx)
                if lam < 0:
                    alpha = min(alpha, -1.0 / lam)
            for s_ih, d_s in zip(s_invhalf, dss):
                lam = _min_gen_eig(s_ih, d_s)
                if lam < 0:
                    alpha = min(alpha, -1.0 / lam)
            if dtau < 0:
                alpha = min(alpha, -tau / dtau)
            if dkappa < 0:
                alpha = min(alpha, -kappa / dkappa)
            return alpha

        if not all(np.all(np.isfinite(w)) for w in ws):
            iters_done = it
            break
        dy_a, dtau_a, dkappa_a, dxs_a, dss_a = newton(0.0, 0.0)
        if not (np.all(np.isfinite(dy_a)) and np.isfinite(dtau_a) and np.isfinite(dkappa_a)):
            iters_done = it
            break
        alpha_a = min(1.0, max_step(dxs_a, dss_a, dtau_a, dkappa_a))
        inner = sum(
            float(np.tensordot(x + alpha_a * dx, s + alpha_a * ds))
            for x, s, dx, ds in zip(xs, ss, dxs_a, dss_a)
        ) + (tau + alpha_a * dtau_a) * (kappa + alpha_a * dkappa_a)
        gamma = float(np.clip((max(inner, 0.0) / (mu * (nu + 1))) ** 3, 1e-6, 0.99))

        dy, dtau, dkappa, dxs, dss = newton(gamma, dtau_a * dkappa_a)
        alpha = min(1.0, STEP_FRACTION * max_step(dxs, dss, dtau, dkappa))

        y = y + alpha * dy
        tau += alpha * dtau
        kappa += alpha * dkappa
        xs = [x + alpha * dx for x, dx in zip(xs, dxs)]
        ss = [s + alpha * ds for s, ds in zip(ss, dss)]

    if status in (OPTIMAL, ITER_LIMIT) and best is not None:
        _, y_best, _, pobj, dobj, relgap = best
        return {
            "status": status,
            "y": y_best,
            "primal": pobj,
            "dual": dobj,
            "relgap": relgap,
            "iterations": iters_done,
            "history": history,
        }
    return {
        "status": status,
        "y": y / tau if tau > 0 else y,
        "primal": float("nan"),
        "dual": float("nan"),
        "relgap": float("inf"),
        "iterations": iters_done,
        "history": history,
    }


def solve(
    problem: SdpProblem,
    gap_tol: float = DEFAULT_GAP_TOL,
    feas_tol: float = DEFAULT_FEAS_TOL,
    max_iterations: int = MAX_ITERATIONS,
) -> SdpSolution:
    """Solve an LMI-form maximization problem.

    On OPTIMAL status the returned y is primal feasible to feas_tol, the
    relative primal-dual gap is below gap_tol, and the certificate holds
    the min eigenvalue of every block slack at y.  Infeasibility and
    unboundedness are detected through the homogeneous embedding.
    """
    problem.validate()
    try:
        reduced, y0, basis = _eliminate(problem)
    except InconsistentEqualitiesError:
        return SdpSolution(
            y=np.full(problem.num_vars, np.nan),
            primal_value=float("nan"),
            dual_value=float("nan"),
            gap=float("inf"),
            status=INFEASIBLE,
            certificate=(),
            iterations=0,
        )

    blocks = _prepare_cone(reduced)
    if reduced.num_vars == 0:
        feasible = all(linalg.min_eigenvalue(blk.f0) >= -feas_tol for blk in reduced.blocks)
        y = y0
        value = float(problem.objective @ y) + problem.obj_offset
        cert = tuple(_slack_eigs(problem, y))
        return SdpSolution(
            y=y,
            primal_value=value if feasible else float("nan"),
            dual_value=value if feasible else float("nan"),
            gap=0.0 if feasible else float("inf"),
            status=OPTIMAL if feasible else INFEASIBLE,
            certificate=cert if feasible else (),
            iterations=0,
        )

    res = _solve_reduced(reduced.objective, blocks, gap_tol, feas_tol, max_iterations)
    y = y0 + basis @ res["y"]
    cert = tuple(_slack_eigs(problem, y)) if res["status"] == OPTIMAL else ()
    return SdpSolution(
        y=y,
        primal_value=float(problem.objective @ y) + problem.obj_offset,
        dual_value=res["dual"] + reduced.obj_offset,
        gap=res["relgap"],
        status=res["status"],
        certificate=cert,
        iterations=res["iterations"],
        history=res["history"],
    )


def _slack_eigs(problem: SdpProblem, y: np.ndarray):
    for blk in problem.blocks:
        slack = blk.f0 - sum(y[i] * blk.coeffs[i] for i in range(problem.num_vars))
        yield linalg.min_eigenvalue(linalg.hermitize(slack, tol=1e-6))
