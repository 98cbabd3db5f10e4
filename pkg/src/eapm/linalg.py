"""Dense complex linear algebra for small Hilbert spaces (dims <= 64).

Everything in this module is a pure function of its inputs; arrays are
never mutated.  Eigen- and singular-value decompositions are delegated to
LAPACK via numpy, wrapped so that contracts (hermiticity, full rank) are
checked against the central tolerance table below.
"""

from __future__ import annotations

import numpy as np

# --------------------------------------------------------------------------
# Central tolerance table.  Every numeric comparison in the package uses one
# of these constants.
# --------------------------------------------------------------------------
EQ_TOL = 1e-9            # default equality between scalars / matrices
HERM_TOL = 1e-10         # hermiticity required by eig/operator-norm contracts
PSD_TOL = 1e-10          # eigenvalue floor when checking positivity
UNIT_TOL = 1e-12         # unit-norm vectors, unitarity of constructed gates
ISOMETRY_TOL = 1e-10     # V^dag V = I for isometries / polar factors
POLAR_RANK_TOL = 1e-12   # relative singular-value floor for polar factors
BEHAVIOR_NEG_TOL = 1e-12  # probabilities may undershoot zero by this much
BEHAVIOR_SUM_TOL = 1e-9  # normalization of probability tables
GRAM_EDGE_TOL = 1e-8     # |G_xy| below this is treated as a missing edge
GRAM_REAL_TOL = 1e-8     # max allowed imaginary part after dephasing
GRAM_RANK_TOL = 1e-7     # relative eigenvalue cutoff for Gram factorization
CERT_TOL = 1e-7          # slack in POVM-step optimality certificates
MONOTONE_TOL = 1e-12     # allowed per-sweep decrease in see-saw objectives


class NonHermitianError(ValueError):
    """Input violated a hermiticity contract."""


class DegeneratePolarError(RuntimeError):
    """Polar factor undefined: input is (numerically) rank deficient."""


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose, batched over leading axes."""
    return np.swapaxes(a, -1, -2).conj()


def hermitize(a: np.ndarray) -> np.ndarray:
    """Hermitian part (A + A^dag)/2, batched."""
    return 0.5 * (a + dagger(a))


def is_hermitian(a: np.ndarray, tol: float = HERM_TOL) -> bool:
    """True if max|A - A^dag| <= tol * max(1, max|A|)."""
    scale = max(1.0, float(np.abs(a).max())) if a.size else 1.0
    return float(np.abs(a - dagger(a)).max()) <= tol * scale


def _require_hermitian(a: np.ndarray, who: str) -> None:
    if a.shape[-1] != a.shape[-2]:
        raise NonHermitianError(f"{who}: matrix is not square: {a.shape}")
    if not is_hermitian(a):
        raise NonHermitianError(f"{who}: input is not Hermitian within {HERM_TOL}")


def hermitian_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (w, V) with eigenvalues w sorted descending and the matching
    orthonormal eigenvectors as columns of V.  Raises NonHermitianError if
    the input violates the hermiticity contract.
    """
    _require_hermitian(a, "hermitian_eig")
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; index convention (i,j) -> i*dim(b)+j."""
    return np.kron(a, b)


def partial_trace(a: np.ndarray, dims, trace_out) -> np.ndarray:
    """Trace out the subsystems listed in `trace_out`.

    `dims` gives the tensor factorization of the square matrix `a`; the
    result lives on the remaining factors in their original order.
    """
    dims = list(dims)
    trace_out = set(trace_out)
    k = len(dims)
    if a.shape != (int(np.prod(dims)), int(np.prod(dims))):
        raise ValueError(f"partial_trace: shape {a.shape} does not factor as {dims}")
    if not trace_out <= set(range(k)):
        raise ValueError(f"partial_trace: bad subsystem indices {trace_out}")
    t = a.reshape(dims + dims)
    keep = [i for i in range(k) if i not in trace_out]
    row = list(range(k))
    col = [i + k if i in keep else i for i in range(k)]
    out = [i for i in keep] + [i + k for i in keep]
    r = np.einsum(t, row + col, out)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return r.reshape(d_keep, d_keep)


def trace_norm(a: np.ndarray) -> float:
    """Trace norm ||A||_1 = sum of singular values."""
    if a.shape[-1] != a.shape[-2]:
        raise ValueError("trace_norm: matrix must be square")
    return float(np.linalg.svd(a, compute_uv=False).sum())


def operator_norm(a: np.ndarray) -> float:
    """Operator norm of a Hermitian matrix: max |eigenvalue|."""
    _require_hermitian(a, "operator_norm")
    w = np.linalg.eigvalsh(a)
    return float(np.abs(w).max())


def _polar_factor(a: np.ndarray, who: str) -> np.ndarray:
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if s[-1] <= POLAR_RANK_TOL * max(s[0], 1e-300):
        raise DegeneratePolarError(f"{who}: input is numerically rank deficient")
    return u @ vh


def nearest_unitary(a: np.ndarray) -> np.ndarray:
    """Unitary polar factor: the W minimizing ||A - W||_F over unitaries."""
    if a.shape[0] != a.shape[1]:
        raise ValueError("nearest_unitary: matrix must be square")
    return _polar_factor(a, "nearest_unitary")


def nearest_isometry(a: np.ndarray) -> np.ndarray:
    """Isometry polar factor for a tall (rows >= cols) full-rank matrix."""
    if a.shape[0] < a.shape[1]:
        raise ValueError("nearest_isometry: matrix must be tall")
    return _polar_factor(a, "nearest_isometry")


def vec(a: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization: vec(A)[j*rows + i] = A[i, j].

    Satisfies (A (x) B) vec(C) = vec(B C A^T).
    """
    return a.T.reshape(-1)


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of `vec`."""
    if v.size != rows * cols:
        raise ValueError(f"unvec: {v.size} entries cannot fill {rows}x{cols}")
    return v.reshape(cols, rows).T


def sign_projectors(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Projectors (P+, P-) onto the nonnegative / negative eigenspaces of a
    Hermitian matrix, batched over leading axes.  Zero eigenvalues land in
    P+ (ties break toward the first outcome)."""
    w, v = np.linalg.eigh(a)
    pos = (w >= 0).astype(a.real.dtype)
    p_plus = np.einsum("...ik,...k,...jk->...ij", v, pos, v.conj())
    eye = np.eye(a.shape[-1], dtype=a.dtype)
    return p_plus, eye - p_plus


# --------------------------------------------------------------------------
# Random objects (see-saw restarts, tests).
# --------------------------------------------------------------------------

def random_pure_state(rng: np.random.Generator, dim: int, real: bool = False) -> np.ndarray:
    """Haar-random unit vector (real sphere when real=True)."""
    v = rng.normal(size=dim)
    if not real:
        v = v + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def haar_isometry(rng: np.random.Generator, rows: int, cols: int,
                  real: bool = False) -> np.ndarray:
    """Haar-random isometry via QR of a Gaussian matrix."""
    g = rng.normal(size=(rows, cols))
    if not real:
        g = g + 1j * rng.normal(size=(rows, cols))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_unitary(rng: np.random.Generator, dim: int, real: bool = False) -> np.ndarray:
    """Haar-random unitary (orthogonal when real=True)."""
    return haar_isometry(rng, dim, dim, real)


def random_hermitian(rng: np.random.Generator, dim: int, real: bool = False) -> np.ndarray:
    """GUE/GOE-style random Hermitian matrix."""
    g = rng.normal(size=(dim, dim))
    if not real:
        g = g + 1j * rng.normal(size=(dim, dim))
    return hermitize(g)


def random_povm(rng: np.random.Generator, dim: int, n_outcomes: int,
                real: bool = False) -> np.ndarray:
    """Random POVM from Wishart effects normalized by S^(-1/2) . S^(-1/2)."""
    gs = []
    for _ in range(n_outcomes):
        g = rng.normal(size=(dim, dim))
        if not real:
            g = g + 1j * rng.normal(size=(dim, dim))
        gs.append(g @ g.conj().T)
    s = sum(gs)
    w, v = np.linalg.eigh(s)
    s_inv_half = (v / np.sqrt(w)) @ v.conj().T
    return np.stack([s_inv_half @ g @ s_inv_half for g in gs])
