"""Spectral embedding of the similarity graph.

Follows the normalized-affinity construction: eigenvectors of
D^{-1/2} W D^{-1/2} belonging to the algebraically largest eigenvalues are
stacked as columns and each nonzero row is scaled to unit length. The row of
an isolated vertex (zero degree) is left all-zero and such vertices are
placed later by the capacity-filling assignment.

Two solver paths are provided: a dense LAPACK decomposition for small
graphs, and Lanczos iteration with full reorthogonalization (restarting on
breakdown) for large ones. Only ``n_components`` eigenvectors are computed,
which keeps the eigensolve tractable when the batch count is large; 8
components is the recommended truncation.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .exceptions import EigenConvergenceError
from .graph import SimilarityGraph

DENSE_CUTOFF = 512
DEFAULT_TOL = 1e-8


@dataclass
class SpectralEmbedding:
    """Row-normalized eigenvector features, one row per sample."""

    points: np.ndarray  # (n, n_components)
    eigenvalues: np.ndarray  # descending, within [-1, 1]
    n_components: int
    max_residual: float
    converged: bool

    @property
    def n(self) -> int:
        return self.points.shape[0]


def normalized_affinity(graph: SimilarityGraph) -> sp.csr_matrix:
    """D^{-1/2} W D^{-1/2} with the convention d^{-1/2} = 0 for zero degree."""
    d = graph.degrees.astype(np.float64)
    with np.errstate(divide="ignore"):
        inv_sqrt = np.where(d > 0, 1.0 / np.sqrt(d), 0.0)
    scaled = graph.matrix.astype(np.float64)
    diag = sp.diags(inv_sqrt)
    return (diag @ scaled @ diag).tocsr()


def _canonical_tie_basis(vectors: np.ndarray) -> np.ndarray:
    """Replace an arbitrary orthonormal basis of a degenerate eigenspace with
    the one obtained by Gram-Schmidt over coordinate-vector projections taken
    in ascending vertex order. Deterministic regardless of how the solver
    rotated the eigenspace."""
    n, g = vectors.shape
    basis = np.zeros((n, g))
    count = 0
    for idx in range(n):
        cand = vectors @ vectors[idx, :]  # projection of e_idx onto the eigenspace
        cand -= basis[:, :count] @ (basis[:, :count].T @ cand)
        cand -= basis[:, :count] @ (basis[:, :count].T @ cand)
        norm = np.linalg.norm(cand)
        if norm > 1e-8:
            basis[:, count] = cand / norm
            count += 1
            if count == g:
                break
    if count < g:  # numerically defective group; keep what the solver gave us
        return vectors
    return basis


def _canonicalize(values: np.ndarray, vectors: np.ndarray, tie_tol: float = 1e-10):
    """Sort descending, canonicalize degenerate groups, and fix signs so the
    largest-magnitude entry of every eigenvector is positive."""
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]

    start = 0
    k = values.size
    while start < k:
        end = start + 1
        while end < k and abs(values[end] - values[start]) <= tie_tol:
            end += 1
        if end - start > 1:
            vectors[:, start:end] = _canonical_tie_basis(vectors[:, start:end])
        start = end

    for j in range(k):
        col = vectors[:, j]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0:
            vectors[:, j] = -col
    return values, vectors


def _dense_eigenpairs(operator, k: int):
    dense = operator.toarray() if sp.issparse(operator) else np.asarray(operator, dtype=np.float64)
    values, vectors = scipy.linalg.eigh(dense)
    return values[-k:], vectors[:, -k:]


def _lanczos_eigenpairs(operator, k: int, seed: int, max_steps: int):
    """Lanczos with full reorthogonalization.

    Rounding destroys the orthogonality of the Lanczos vectors, so the new
    direction is re-projected against the whole accumulated basis (twice) at
    every step. A vanishing residual means an invariant subspace has been
    exhausted; the iteration then restarts with a fresh random direction
    orthogonal to everything found so far, leaving a zero coupling in the
    tridiagonal matrix.
    """
    n = operator.shape[0]
    matvec = operator.dot
    cap = min(max_steps, n)
    rng = np.random.default_rng(seed)

    Q = np.zeros((n, cap))
    alphas = np.zeros(cap)
    betas = np.zeros(max(cap - 1, 0))

    q = rng.standard_normal(n)
    q /= np.linalg.norm(q)
    linked = False
    beta_prev = 0.0
    m = 0
    while m < cap:
        Q[:, m] = q
        u = matvec(q)
        alpha = float(q @ u)
        alphas[m] = alpha
        r = u - alpha * q
        if linked:
            r -= beta_prev * Q[:, m - 1]
        r -= Q[:, : m + 1] @ (Q[:, : m + 1].T @ r)
        r -= Q[:, : m + 1] @ (Q[:, : m + 1].T @ r)
        beta = float(np.linalg.norm(r))
        m += 1
        if m == cap:
            break
        breakdown = 1e-10 * max(1.0, float(np.max(np.abs(alphas[:m]))))
        if beta <= breakdown:
            v = rng.standard_normal(n)
            v -= Q[:, :m] @ (Q[:, :m].T @ v)
            v -= Q[:, :m] @ (Q[:, :m].T @ v)
            nv = float(np.linalg.norm(v))
            if nv <= 1e-10:  # full space spanned
                cap = m
                break
            q = v / nv
            betas[m - 1] = 0.0
            linked = False
            beta_prev = 0.0
        else:
            q = r / beta
            betas[m - 1] = beta
            linked = True
            beta_prev = beta

    # The restart zeros in the off-diagonal make LAPACK's stemr driver
    # unreliable; a dense solve of the small tridiagonal is cheap and robust.
    T = np.diag(alphas[:m])
    if m > 1:
        off = betas[: m - 1]
        T += np.diag(off, 1) + np.diag(off, -1)
    theta, S = np.linalg.eigh(T)
    top = np.argsort(theta)[-k:]
    vectors = Q[:, :m] @ S[:, top]
    return theta[top], vectors


def top_eigenpairs(
    operator,
    k: int,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    max_iter: int | None = None,
    method: str = "auto",
    dense_cutoff: int = DENSE_CUTOFF,
    on_nonconverged: str = "raise",
):
    """Return the k algebraically largest eigenpairs of a symmetric operator.

    Eigenvalues come back descending with orthonormal eigenvectors in
    matching columns. Each pair is verified against ``tol`` on the residual
    norm ||A v - lambda v||; if the iterative path stalls above the tolerance
    the failure is raised (default) or downgraded to a warning and the
    best-effort pairs returned.
    """
    n = operator.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    if method not in ("auto", "dense", "lanczos"):
        raise ValueError(f"unknown method {method!r}")
    if on_nonconverged not in ("raise", "warn"):
        raise ValueError(f"unknown on_nonconverged {on_nonconverged!r}")
    if method == "auto":
        method = "dense" if n <= dense_cutoff else "lanczos"

    if method == "dense":
        values, vectors = _dense_eigenpairs(operator, k)
        steps = n
    else:
        cap = max_iter if max_iter is not None else 10 * k + 100
        values, vectors = _lanczos_eigenpairs(operator, k, seed, cap)
        steps = cap

    values, vectors = _canonicalize(values, vectors)
    residual = operator.dot(vectors) - vectors * values
    max_res = float(np.linalg.norm(residual, axis=0).max()) if k else 0.0
    if max_res > tol:
        msg = (
            f"eigensolver reached residual {max_res:.3e} (tolerance {tol:.1e}) "
            f"after {steps} steps"
        )
        if on_nonconverged == "raise":
            raise EigenConvergenceError(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return values, vectors


def embed(
    graph: SimilarityGraph,
    n_components: int = 8,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
    method: str = "auto",
    dense_cutoff: int = DENSE_CUTOFF,
    on_nonconverged: str = "raise",
) -> SpectralEmbedding:
    """Compute the n x n_components clustering features for a graph."""
    if n_components < 1:
        raise ValueError("n_components must be >= 1")
    n = graph.n
    if n_components > n:
        warnings.warn(
            f"n_components={n_components} clamped to n={n}", RuntimeWarning, stacklevel=2
        )
        n_components = n

    affinity = normalized_affinity(graph)
    values, vectors = top_eigenpairs(
        affinity,
        n_components,
        tol=tol,
        seed=seed,
        max_iter=max_iter,
        method=method,
        dense_cutoff=dense_cutoff,
        on_nonconverged=on_nonconverged,
    )
    residual = affinity.dot(vectors) - vectors * values
    max_res = float(np.linalg.norm(residual, axis=0).max())
    converged = max_res <= tol

    points = vectors.copy()
    points[graph.degrees == 0, :] = 0.0
    norms = np.linalg.norm(points, axis=1)
    nonzero = norms > 1e-12
    points[nonzero] /= norms[nonzero, None]
    points[~nonzero] = 0.0

    return SpectralEmbedding(
        points=points,
        eigenvalues=np.clip(values, -1.0, 1.0),
        n_components=n_components,
        max_residual=max_res,
        converged=converged,
    )


def write_embedding_csv(embedding: SpectralEmbedding, path) -> None:
    """Dump the embedding as CSV, one row per sample."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        for row in embedding.points:
            writer.writerow([f"{v:.17g}" for v in row])
