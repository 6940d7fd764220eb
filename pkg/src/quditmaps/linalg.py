"""Dense complex linear algebra primitives.

Conventions fixed project-wide:

* Matrices are dense ``complex128`` numpy arrays; everything here targets
  dimensions d <= 16, so the largest object is 256 x 256.
* ``vec`` uses column stacking: ``vec(X)[c*d + r] = X[r, c]``.  With this
  convention the transfer matrix of ``X -> A X B`` is ``kron(B.T, A)``.
* Bipartite d^2 x d^2 matrices index the first tensor factor by the block
  (row block i, column block j) and the second factor inside the block.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput

# All objects handled here are at most 256 x 256; the dense code paths rely on it.
DIM_CAP = 16

# Default PSD tolerance, relative to (1 + Frobenius norm).
PSD_TOL = 1e-9

_HERM_TOL = 1e-12


def check_dimension(d: int) -> int:
    """Validate a qudit dimension: integer with 2 <= d <= DIM_CAP."""
    d = int(d)
    if d < 2:
        raise DimensionMismatch(f"dimension must be >= 2, got {d}")
    if d > DIM_CAP:
        raise DimensionMismatch(f"dimension {d} exceeds the dense cap {DIM_CAP}")
    return d


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a square complex128 array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def frobenius(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def hermiticity_defect(a) -> float:
    """max_ij |A_ij - conj(A_ji)|."""
    m = np.asarray(a)
    return float(np.abs(m - m.conj().T).max()) if m.size else 0.0


def is_hermitian(a, tol: float = _HERM_TOL) -> bool:
    m = as_complex_matrix(a)
    return hermiticity_defect(m) <= tol * (1.0 + frobenius(m))


def _require_hermitian(a) -> np.ndarray:
    m = as_complex_matrix(a)
    if not is_hermitian(m):
        raise NonHermitianInput(
            f"matrix is not Hermitian (defect {hermiticity_defect(m):.3e})"
        )
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def eig_hermitian(a):
    """Eigenvalues (ascending, real) and eigenvectors of a Hermitian matrix.

    Returns ``(w, v)`` with ``a @ v == v @ diag(w)`` up to numerical residual.
    Raises NonHermitianInput when the Hermiticity check fails.
    """
    m = _require_hermitian(a)
    w, v = np.linalg.eigh(m)
    return w, v


def min_eig(a) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    m = _require_hermitian(a)
    return float(np.linalg.eigvalsh(m)[0])


def is_psd(a, tol: float | None = None) -> bool:
    """Positive semidefinite test: min eigenvalue >= -tol.

    With ``tol=None`` the tolerance is PSD_TOL * (1 + ||A||_F).  Boundary
    objects sit exactly at eigenvalue zero, so callers that care about the
    sign of the margin should use ``min_eig`` directly.
    """
    m = _require_hermitian(a)
    if tol is None:
        tol = PSD_TOL * (1.0 + frobenius(m))
    return min_eig(m) >= -tol


def vec(a) -> np.ndarray:
    """Column-stacking vectorization."""
    return as_complex_matrix(a).reshape(-1, order="F")

def unvec(v, d: int) -> np.ndarray:
    """Inverse of ``vec`` for a d x d matrix."""
    w = np.asarray(v, dtype=complex).reshape(-1)
    if w.size != d * d:
        raise DimensionMismatch(f"vector of length {w.size} is not d^2 for d={d}")
    return w.reshape((d, d), order="F")


def partial_transpose(m, d: int, subsystem: int = 2) -> np.ndarray:
    """Transpose one tensor factor of a d^2 x d^2 bipartite matrix.

    ``subsystem`` selects the factor (1 or 2).  The operation is an
    involution and preserves trace and Hermiticity.
    """
    mat = as_complex_matrix(m)
    if mat.shape != (d * d, d * d):
        raise DimensionMismatch(
            f"expected a {d*d} x {d*d} matrix for d={d}, got {mat.shape}"
        )
    if subsystem not in (1, 2):
        raise DimensionMismatch(f"subsystem must be 1 or 2, got {subsystem}")
    m4 = mat.reshape(d, d, d, d)  # [i, a, j, b]
    if subsystem == 2:
        out = m4.transpose(0, 3, 2, 1)
    else:
        out = m4.transpose(2, 1, 0, 3)
    return np.ascontiguousarray(out).reshape(d * d, d * d)


def basis_matrix(i: int, j: int, d: int) -> np.ndarray:
    """Matrix unit |i><j| (0-indexed)."""
    e = np.zeros((d, d), dtype=complex)
    e[i, j] = 1.0
    return e


def maximally_entangled_vector(d: int) -> np.ndarray:
    """(1/sqrt(d)) sum_i |ii>."""
    d = check_dimension(d)
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * d + np.arange(d)] = 1.0
    return v / np.sqrt(d)


def maximally_entangled_projector(d: int) -> np.ndarray:
    """Rank-1, trace-1 projector onto the maximally entangled vector."""
    v = maximally_entangled_vector(d)
    return np.outer(v, v.conj())


def swap_matrix(d: int) -> np.ndarray:
    """The d^2 x d^2 operator exchanging the two tensor factors."""
    d = check_dimension(d)
    s = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1.0
    return s


# ---------------------------------------------------------------------------
# seeded random ensembles (batched; used by samplers and tests)
# ---------------------------------------------------------------------------

def ginibre(d: int, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
    """Complex Ginibre matrices; shape (d, d) or (n, d, d) when n is given."""
    shape = (d, d) if n is None else (n, d, d)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(d: int, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
    g = ginibre(d, rng, n)
    return (g + np.conj(np.swapaxes(g, -1, -2))) / 2.0


def random_traceless(d: int, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
    """Ginibre draws with the trace removed and unit Frobenius norm."""
    g = ginibre(d, rng, n)
    tr = np.trace(g, axis1=-2, axis2=-1)
    eye = np.eye(d)
    g = g - (tr / d)[..., None, None] * eye
    nrm = np.linalg.norm(g, axis=(-2, -1), keepdims=True)
    nrm = np.where(nrm == 0, 1.0, nrm)
    return g / nrm


def haar_orthonormal_pair(d: int, rng: np.random.Generator, n: int | None = None):
    """Haar-random orthonormal pairs (x, y) in C^d, batched when n is given."""
    g = ginibre(d, rng, n)[..., :, :2] if n is not None else ginibre(d, rng)[:, :2]
    q, r = np.linalg.qr(g)
    # fix the phase so the distribution is Haar
    ph = np.diagonal(r, axis1=-2, axis2=-1).copy()
    ph = np.where(np.abs(ph) == 0, 1.0, ph / np.abs(ph))
    q = q * ph[..., None, :].conj()
    return q[..., :, 0], q[..., :, 1]


def match_multisets(a, b, tol: float) -> bool:
    """Greedy nearest-neighbour matching of two complex multisets."""
    xs = list(np.asarray(a, dtype=complex))
    ys = list(np.asarray(b, dtype=complex))
    if len(xs) != len(ys):
        return False
    for x in xs:
        dist = [abs(x - y) for y in ys]
        k = int(np.argmin(dist))
        if dist[k] > tol:
            return False
        ys.pop(k)
    return True
