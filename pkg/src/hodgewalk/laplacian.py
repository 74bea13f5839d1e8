"""The normalized Hodge 1-Laplacian and its lifted random walk.

The central object is :class:`NormalizedL1`, a factored operator

    L1 = D2 B1^T D1^{-1} B1 + B2 D3 B2^T D2^{-1}

whose matvec touches O(n0 + n1 + n2) entries, together with its symmetric
similarity transform L1s = D2^{-1/2} L1 D2^{1/2}.  The lifted transition
matrix ``P_hat`` is column stochastic and satisfies -L1 V^T / 2 = V^T P_hat,
which :func:`verify_stochastic_lifting` checks numerically, and the spectral
checks validate the eigenstructure relations between L1s, its node/triangle
companions G1/G2, and P_hat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .boundary import DegreeMatrices, Lifting, build_b1, build_b2, build_degree_matrices, build_lifting
from .complex import SimplicialComplex
from .errors import ConvergenceError, DimensionError

__all__ = [
    "KERNEL_TOL",
    "NormalizedL1",
    "LiftedTransition",
    "SpectralDecomposition",
    "build_lifted_transition",
    "verify_stochastic_lifting",
    "LiftingReport",
    "spectrum",
    "g1_g2_lift_check",
    "spectral_containment_check",
]

# Relative threshold under which an eigenvalue counts as numerically zero.
KERNEL_TOL = 1e-8


@dataclass(frozen=True)
class LiftedTransition:
    """Column-stochastic random walk pieces on the 2*n1 oriented edges."""

    p_lower: sp.csr_matrix
    p_upper: sp.csr_matrix
    p_hat: sp.csr_matrix


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of L1s, ascending, with the numerical kernel split off."""

    eigenvalues: np.ndarray      # ascending
    eigenvectors: np.ndarray     # n1 x k, orthonormal
    kernel_dim: int
    harmonic: np.ndarray         # n1 x kernel_dim, orthonormal, sign-fixed
    lambda_max: float


def _start_vector(n: int) -> np.ndarray:
    # Deterministic Lanczos start so iterative spectra are reproducible.
    return np.random.default_rng(0).normal(size=n)


def _sign_fix(basis: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude coordinate is positive."""
    out = basis.copy()
    for col in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, col])))
        if out[idx, col] < 0:
            out[:, col] = -out[:, col]
    return out


class NormalizedL1:
    """Factored normalized Hodge 1-Laplacian over a simplicial complex.

    Component operators are composed lazily; dense materialization is only
    permitted for n1 <= ``dense_cap`` (default 2000).  Matvecs never mutate
    numerical state, so concurrent solves over one operator are safe; the
    lazily-built caches are idempotent and the matvec counters are
    best-effort under concurrency.
    """

    def __init__(self, sc: SimplicialComplex, dense_cap: int = 2000):
        self.complex = sc
        self.dense_cap = dense_cap
        self.b1 = build_b1(sc)
        self.b2 = build_b2(sc)
        self.degrees: DegreeMatrices = build_degree_matrices(sc, self.b1, self.b2)
        d = self.degrees
        self._d1_inv = np.divide(1.0, d.d1, out=np.zeros_like(d.d1), where=d.d1 > 0)
        self._d2_inv = 1.0 / d.d2
        self._d2_sqrt = np.sqrt(d.d2)
        self._d2_inv_sqrt = 1.0 / self._d2_sqrt
        self.matvec_count = 0
        self.touched_entries = 0
        self._lifting: Lifting | None = None
        self._transition: LiftedTransition | None = None
        self._full_spectrum: SpectralDecomposition | None = None
        self._harmonic: np.ndarray | None = None

    # -- basic shapes -----------------------------------------------------
    @property
    def n0(self) -> int:
        return self.complex.n0

    @property
    def n1(self) -> int:
        return self.complex.n1

    @property
    def n2(self) -> int:
        return self.complex.n2

    @property
    def lifting(self) -> Lifting:
        if self._lifting is None:
            self._lifting = build_lifting(self.b1, self.b2)
        return self._lifting

    def _check_flow(self, flow) -> np.ndarray:
        x = np.asarray(flow, dtype=float).ravel()
        if x.shape[0] != self.n1:
            raise DimensionError(f"flow has length {x.shape[0]}, expected n1={self.n1}")
        return x

    # -- matvecs -----------------------------------------------------------
    def apply(self, flow) -> np.ndarray:
        """L1 @ flow via the factored sparse pieces; no dense intermediate."""
        x = self._check_flow(flow)
        lower = self.degrees.d2 * (self.b1.T @ (self._d1_inv * (self.b1 @ x)))
        upper = self.b2 @ (self.degrees.d3 * (self.b2.T @ (self._d2_inv * x)))
        self.matvec_count += 1
        # Entries touched: both incidence matrices twice plus the four
        # diagonal scalings.
        self.touched_entries += 2 * self.b1.nnz + 2 * self.b2.nnz + 2 * self.n1 + self.n2 + self.n0
        return lower + upper

    def apply_sym(self, x) -> np.ndarray:
        """L1s @ x with L1s = D2^{-1/2} L1 D2^{1/2}."""
        x = self._check_flow(x)
        return self._d2_inv_sqrt * self.apply(self._d2_sqrt * x)

    def sym_operator(self) -> LinearOperator:
        return LinearOperator((self.n1, self.n1), matvec=self.apply_sym, dtype=float)

    # -- dense materializations (capped) ------------------------------------
    def _require_dense(self) -> None:
        if self.n1 > self.dense_cap:
            raise DimensionError(
                f"dense materialization needs n1 <= {self.dense_cap}, got {self.n1}"
            )

    def dense(self) -> np.ndarray:
        self._require_dense()
        return np.asarray(self.sparse().todense())

    def dense_sym(self) -> np.ndarray:
        self._require_dense()
        l1 = self.dense()
        sym = (self._d2_inv_sqrt[:, None] * l1) * self._d2_sqrt[None, :]
        return 0.5 * (sym + sym.T)

    def sparse(self) -> sp.csr_matrix:
        """L1 assembled as one sparse matrix (used by the identity checks)."""
        lower = sp.diags(self.degrees.d2) @ self.b1.T @ sp.diags(self._d1_inv) @ self.b1
        upper = self.degrees.d3 * (self.b2 @ self.b2.T @ sp.diags(self._d2_inv))
        return (lower + upper).tocsr()

    # -- lifted transition ---------------------------------------------------
    def lifted_transition(self) -> LiftedTransition:
        if self._transition is None:
            self._transition = build_lifted_transition(self)
        return self._transition

    # -- spectra ---------------------------------------------------------------
    def lambda_max(self) -> float:
        if self.n1 == 0:
            return 0.0
        if self.n1 <= self.dense_cap:
            return float(np.linalg.eigvalsh(self.dense_sym())[-1])
        vals = eigsh(self.sym_operator(), k=1, which="LA",
                     v0=_start_vector(self.n1), return_eigenvectors=False)
        return float(vals[0])

    def spectrum(self, k: int | None = None, which: str = "smallest") -> SpectralDecomposition:
        return spectrum(self, k=k, which=which)

    def harmonic_basis(self) -> np.ndarray:
        """Orthonormal basis of the numerical kernel of L1s (n1 x beta1)."""
        if self._harmonic is None:
            if self.n1 == 0:
                self._harmonic = np.zeros((0, 0))
            elif self.n1 <= self.dense_cap:
                self._harmonic = self.spectrum(which="full").harmonic
            else:
                k = 4
                while True:
                    dec = self.spectrum(k=min(k, self.n1 - 1), which="smallest")
                    if dec.kernel_dim < dec.eigenvalues.size or k >= self.n1 - 1:
                        self._harmonic = dec.harmonic
                        break
                    k *= 2
        return self._harmonic


def build_lifted_transition(l1: NormalizedL1) -> LiftedTransition:
    """Assemble P_lower, P_upper and P_hat for the lifted edge walk.

    The lower walk splits into a forward and a backward component, each
    column-normalized so the probability of a target edge is proportional to
    its adjusted degree.  The upper walk moves uniformly across shared
    triangles; an edge with no triangle stays put or flips orientation with
    probability 1/2 each.
    """
    n1 = l1.n1
    if n1 == 0:
        empty = sp.csr_matrix((0, 0))
        return LiftedTransition(empty, empty, empty)
    lift = l1.lifting
    d2_hat = sp.diags(np.tile(l1.degrees.d2, 2))
    m_f = (d2_hat @ lift.b1_hat_neg.T @ lift.b1_hat_pos).tocsr()
    m_b = (d2_hat @ lift.b1_hat_pos.T @ lift.b1_hat_neg).tocsr()
    q_f = np.asarray(m_f.sum(axis=0)).ravel()
    q_b = np.asarray(m_b.sum(axis=0)).ravel()
    # Every oriented edge reaches at least its own reversal, so the
    # normalizers are strictly positive.
    assert np.all(q_f > 0) and np.all(q_b > 0)
    p_forward = (m_f @ sp.diags(1.0 / q_f)).tocsr()
    p_backward = (m_b @ sp.diags(1.0 / q_b)).tocsr()
    p_lower = (0.5 * (p_forward + p_backward)).tocsr()

    stay_flip = _stay_or_flip(l1.degrees.d5_hat, n1)
    p_upper = (lift.a_upper @ sp.diags(_safe_inv(l1.degrees.d4_hat)) + stay_flip).tocsr()
    p_hat = (0.5 * p_lower + 0.5 * p_upper).tocsr()
    return LiftedTransition(p_lower=p_lower, p_upper=p_upper, p_hat=p_hat)


def _safe_inv(x: np.ndarray) -> np.ndarray:
    return np.divide(1.0, x, out=np.zeros_like(x), where=x > 0)


def _stay_or_flip(d5_hat: np.ndarray, n1: int) -> sp.csr_matrix:
    """(1/2) [[I, I], [I, I]] D5_hat: mass 1/2 on self and reversal."""
    cols = np.where(d5_hat == 1.0)[0]
    base = cols % n1
    rows = np.concatenate([base, base + n1])
    all_cols = np.concatenate([cols, cols])
    vals = np.full(rows.shape, 0.5)
    return sp.csr_matrix((vals, (rows, all_cols)), shape=(2 * n1, 2 * n1))


@dataclass(frozen=True)
class LiftingReport:
    """Max-abs errors of the stochastic-lifting identities."""

    theorem_error: float       # -L1 V^T / 2 - V^T P_hat
    projection_error: float    # Z - V^dagger P_hat V
    lift_error: float          # V Z - P_hat V

    @property
    def max_error(self) -> float:
        return max(self.theorem_error, self.projection_error, self.lift_error)


def verify_stochastic_lifting(l1: NormalizedL1) -> LiftingReport:
    """Numerically check -L1 V^T / 2 = V^T P_hat and its two corollaries."""
    if l1.n1 == 0:
        return LiftingReport(0.0, 0.0, 0.0)
    v = l1.lifting.v
    p_hat = l1.lifted_transition().p_hat
    l1_sparse = l1.sparse()
    z = -0.5 * l1_sparse

    def max_abs(m: sp.spmatrix) -> float:
        m = sp.coo_matrix(m)
        return float(np.max(np.abs(m.data))) if m.nnz else 0.0

    theorem = max_abs(z @ v.T - v.T @ p_hat)
    projection = max_abs(z - 0.5 * (v.T @ p_hat @ v))
    lifted = max_abs(v @ z - p_hat @ v)
    return LiftingReport(theorem, projection, lifted)


def spectrum(l1: NormalizedL1, k: int | None = None, which: str = "smallest") -> SpectralDecomposition:
    """Eigenpairs of L1s, either the k smallest or the full dense spectrum.

    The iterative path uses a Lanczos-type solver that only needs matvecs;
    the dense path requires n1 <= dense_cap.  Raises
    :class:`ConvergenceError` if the iterative solver stalls.
    """
    n1 = l1.n1
    if which not in ("smallest", "full"):
        raise ValueError(f"which must be 'smallest' or 'full', got {which!r}")
    if n1 == 0:
        empty = np.zeros((0, 0))
        return SpectralDecomposition(np.zeros(0), empty, 0, empty, 0.0)
    if which == "full":
        k = n1
    if k is None or k > n1:
        raise DimensionError(f"k must be given and <= n1={n1}")

    if which == "full" or n1 <= l1.dense_cap:
        if which == "full" and l1._full_spectrum is not None:
            return l1._full_spectrum
        vals, vecs = np.linalg.eigh(l1.dense_sym())
        lam_max = float(vals[-1])
        vals, vecs = vals[:k], vecs[:, :k]
    else:
        if k >= n1:
            raise DimensionError("iterative path needs k < n1; raise dense_cap instead")
        try:
            vals, vecs = eigsh(l1.sym_operator(), k=k, which="SA", v0=_start_vector(n1))
        except ArpackNoConvergence as exc:
            res = [float(np.linalg.norm(l1.apply_sym(v) - w * v))
                   for w, v in zip(exc.eigenvalues, exc.eigenvectors.T)]
            raise ConvergenceError("eigensolver did not converge", residuals=res) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        lam_max = l1.lambda_max()

    tol = KERNEL_TOL * max(1.0, lam_max)
    residuals = np.array([np.linalg.norm(l1.apply_sym(vecs[:, i]) - vals[i] * vecs[:, i])
                          for i in range(vals.size)])
    if np.any(residuals > tol):
        raise ConvergenceError("eigenpair residuals above tolerance", residuals=residuals.tolist())

    kernel_dim = int(np.count_nonzero(vals < tol))
    harmonic = vecs[:, :kernel_dim]
    if kernel_dim:
        # Degenerate kernel vectors are only defined up to rotation; we
        # re-orthonormalize and fix signs so outputs are reproducible.
        harmonic, _ = np.linalg.qr(harmonic)
        harmonic = _sign_fix(harmonic)
    dec = SpectralDecomposition(
        eigenvalues=np.clip(vals, 0.0, None),
        eigenvectors=vecs,
        kernel_dim=kernel_dim,
        harmonic=harmonic,
        lambda_max=lam_max,
    )
    if which == "full":
        l1._full_spectrum = dec
    return dec


@dataclass(frozen=True)
class EigenLiftReport:
    """Outcome of lifting node/triangle eigenvectors into edge space."""

    checked_g1: int
    skipped_g1: int
    checked_g2: int
    skipped_g2: int
    max_residual: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tol


def g1_g2_lift_check(l1: NormalizedL1) -> EigenLiftReport:
    """Verify that eigenpairs of G1 and G2 map into eigenpairs of L1s.

    G1 = D1^{-1/2} B1 D2 B1^T D1^{-1/2} lives on nodes and G2 =
    D3^{1/2} B2^T D2^{-1} B2 D3^{1/2} on triangles; an eigenvector u of
    either lifts through the co-boundary (resp. boundary) map to an
    eigenvector of L1s with the same eigenvalue, unless the mapped vector
    vanishes, in which case the pair is skipped.
    """
    l1._require_dense()
    d = l1.degrees
    b1 = np.asarray(l1.b1.todense())
    b2 = np.asarray(l1.b2.todense())
    d1_inv_sqrt = np.divide(1.0, np.sqrt(d.d1), out=np.zeros_like(d.d1), where=d.d1 > 0)
    d2_sqrt = np.sqrt(d.d2)
    d2_inv = 1.0 / d.d2

    g1 = (d1_inv_sqrt[:, None] * b1) @ (d.d2[:, None] * b1.T) * d1_inv_sqrt[None, :]
    g2 = d.d3 * (b2.T @ (d2_inv[:, None] * b2))

    l1s = l1.dense_sym()
    lam_max = float(np.linalg.eigvalsh(l1s)[-1]) if l1.n1 else 0.0
    tol = 1e-10 * max(lam_max, 1.0)

    def check(gram: np.ndarray, lift_map) -> tuple[int, int, float]:
        if gram.size == 0:
            return 0, 0, 0.0
        vals, vecs = np.linalg.eigh(gram)
        checked = skipped = 0
        worst = 0.0
        for lam, u in zip(vals, vecs.T):
            v = lift_map(u)
            norm = np.linalg.norm(v)
            if norm < 1e-12:
                skipped += 1
                continue
            v = v / norm
            worst = max(worst, float(np.linalg.norm(l1s @ v - lam * v)))
            checked += 1
        return checked, skipped, worst

    c1, s1, r1 = check(g1, lambda u: d2_sqrt * (b1.T @ (d1_inv_sqrt * u)))
    c2, s2, r2 = check(g2, lambda u: (1.0 / d2_sqrt) * (b2 @ (math.sqrt(d.d3) * u)))
    return EigenLiftReport(
        checked_g1=c1,
        skipped_g1=s1,
        checked_g2=c2,
        skipped_g2=s2,
        max_residual=max(r1, r2),
        tol=tol,
    )


@dataclass(frozen=True)
class ContainmentReport:
    """Spectrum-containment check of Z = -L1/2 inside the lifted walk."""

    max_eigenvalue_gap: float
    max_eigvec_residual: float

    def ok(self, tol: float = 1e-8) -> bool:
        return self.max_eigenvalue_gap < tol and self.max_eigvec_residual < tol


def spectral_containment_check(l1: NormalizedL1) -> ContainmentReport:
    """Check every eigenvalue of Z = -L1/2 appears in the spectrum of P_hat
    and that x -> Vx maps eigenvectors of Z to eigenvectors of P_hat."""
    l1._require_dense()
    if l1.n1 == 0:
        return ContainmentReport(0.0, 0.0)
    vals, vecs = np.linalg.eigh(l1.dense_sym())
    z_vals = -0.5 * vals
    # Right eigenvectors of L1 (hence of Z) via the similarity transform.
    x = l1._d2_sqrt[:, None] * vecs
    p_hat = np.asarray(l1.lifted_transition().p_hat.todense())
    p_vals = np.linalg.eigvals(p_hat)

    gap = 0.0
    for lam in z_vals:
        gap = max(gap, float(np.min(np.abs(p_vals - lam))))

    v = np.asarray(l1.lifting.v.todense())
    y = v @ x
    resid = 0.0
    for i, lam in enumerate(z_vals):
        yi = y[:, i]
        norm = np.linalg.norm(yi)
        if norm == 0.0:
            continue
        resid = max(resid, float(np.linalg.norm(p_hat @ yi - lam * yi) / norm))
    return ContainmentReport(max_eigenvalue_gap=gap, max_eigvec_residual=resid)
