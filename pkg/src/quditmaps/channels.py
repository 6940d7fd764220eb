"""The two-parameter map family, named maps, Choi matrices, and map algebra.

Every map handled by the package acts on d x d matrices and is stored as a
d^2 x d^2 transfer matrix (column-stacking convention, see ``linalg``).  The
central object is the interpolation family

    Phi_{alpha,beta} = (1 - alpha - beta) * id + alpha * tau0 + beta * Delta,

where ``tau0`` sends every input to the maximally mixed multiple of the
identity and ``Delta`` is the diagonal pinching.  The family is unital,
trace-preserving and self-adjoint for all real (alpha, beta).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BadWeights, DimensionMismatch, UnknownName
from .linalg import (
    as_complex_matrix,
    check_dimension,
    frobenius,
    unvec,
    vec,
)


@dataclass(frozen=True)
class MapParams:
    """A point (d, alpha, beta) of the interpolation family."""

    d: int
    alpha: float
    beta: float

    def __post_init__(self):
        check_dimension(self.d)
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise DimensionMismatch("alpha and beta must be finite")


class SuperMap:
    """A linear map on d x d matrices held as a d^2 x d^2 transfer matrix."""

    def __init__(self, d: int, transfer: np.ndarray):
        self.d = check_dimension(d)
        t = np.asarray(transfer, dtype=complex)
        if t.shape != (d * d, d * d):
            raise DimensionMismatch(
                f"transfer must be {d*d} x {d*d} for d={d}, got {t.shape}"
            )
        self.transfer = t
        self.transfer.flags.writeable = False
        self._choi = None

    @property
    def choi(self) -> np.ndarray:
        """Unnormalized Choi matrix sum_ij E_ij (x) m(E_ij); cached."""
        if self._choi is None:
            c = choi_from_transfer(self.transfer, self.d)
            c.flags.writeable = False
            self._choi = c
        return self._choi

    @classmethod
    def from_choi(cls, d: int, choi: np.ndarray) -> "SuperMap":
        return cls(d, transfer_from_choi(choi, d))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """Apply the map to a d x d matrix."""
        return unvec(self.transfer @ vec(x), self.d)

    def is_trace_preserving(self, tol: float = 1e-10) -> bool:
        ptr = partial_trace_output(self.choi, self.d)
        return float(np.abs(ptr - np.eye(self.d)).max()) <= tol

    def is_unital(self, tol: float = 1e-10) -> bool:
        vi = vec(np.eye(self.d))
        return float(np.abs(self.transfer @ vi - vi).max()) <= tol

    def __repr__(self):
        return f"SuperMap(d={self.d})"


@dataclass
class QuantumState:
    """A d x d density matrix; validation lives in ``validate_state``."""

    d: int
    rho: np.ndarray

    def __post_init__(self):
        check_dimension(self.d)
        self.rho = as_complex_matrix(self.rho)
        if self.rho.shape != (self.d, self.d):
            raise DimensionMismatch(
                f"state must be {self.d} x {self.d}, got {self.rho.shape}"
            )


def validate_state(state: QuantumState, tol: float = 1e-10) -> bool:
    """Hermitian, unit trace, and no eigenvalue below -tol."""
    rho = state.rho
    if np.abs(rho - rho.conj().T).max() > tol * (1.0 + frobenius(rho)):
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    return float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0]) >= -tol


# ---------------------------------------------------------------------------
# transfer <-> Choi reshuffling
# ---------------------------------------------------------------------------

def choi_from_transfer(transfer: np.ndarray, d: int) -> np.ndarray:
    """Reshuffle a transfer matrix into the (unnormalized) Choi matrix.

    The same index permutation inverts itself, so it also serves as
    ``transfer_from_choi``.
    """
    t = np.asarray(transfer, dtype=complex)
    if t.shape != (d * d, d * d):
        raise DimensionMismatch(f"expected {d*d} x {d*d}, got {t.shape}")
    t4 = t.reshape(d, d, d, d)  # [col_out, row_out, col_in, row_in]
    return np.ascontiguousarray(t4.transpose(3, 1, 2, 0)).reshape(d * d, d * d)


def transfer_from_choi(choi: np.ndarray, d: int) -> np.ndarray:
    return choi_from_transfer(choi, d)


def partial_trace_output(choi: np.ndarray, d: int) -> np.ndarray:
    """Trace the output factor of a Choi matrix; equals I_d iff trace-preserving."""
    c4 = np.asarray(choi, dtype=complex).reshape(d, d, d, d)
    return np.einsum("iaja->ij", c4)


def choi_of(m: SuperMap) -> np.ndarray:
    """Unnormalized Choi matrix of a map; PSD iff the map is completely positive."""
    return m.choi


# ---------------------------------------------------------------------------
# the interpolation family and the named maps
# ---------------------------------------------------------------------------

def dephase(x: np.ndarray) -> np.ndarray:
    """Diagonal pinching Delta(X): keep the diagonal, kill the rest."""
    m = as_complex_matrix(x)
    return np.diag(np.diag(m))


@lru_cache(maxsize=None)
def family_transfer_parts(d: int):
    """Transfer matrices of (id, tau0, Delta); read-only and cached per d."""
    d = check_dimension(d)
    t_id = np.eye(d * d, dtype=complex)
    vi = vec(np.eye(d))
    t_tau0 = np.outer(vi, vi.conj()) / d
    t_delta = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d):
        t_delta[k * d + k, k * d + k] = 1.0
    for t in (t_id, t_tau0, t_delta):
        t.flags.writeable = False
    return t_id, t_tau0, t_delta


def build_phi_family(params: MapParams) -> SuperMap:
    """The map (1 - alpha - beta) id + alpha tau0 + beta Delta as a SuperMap."""
    t_id, t_tau0, t_delta = family_transfer_parts(params.d)
    transfer = (
        (1.0 - params.alpha - params.beta) * t_id
        + params.alpha * t_tau0
        + params.beta * t_delta
    )
    return SuperMap(params.d, transfer)


def named_map_coordinates(name: str, d: int) -> MapParams:
    """(alpha, beta) coordinates of the named maps."""
    d = check_dimension(d)
    h = d / (d - 1)
    table = {
        "Reduction": (h, 0.0),
        "Pinch2": (h, -2.0 / (d - 1)),
        "PhiCP": (0.0, h),
        "E1": (0.0, 1.0),
        "E2": (d / (2.0 * (d - 1)), 0.5),
        "E3": (h, -1.0 / (d - 1)),
        "E4": (1.0, -1.0 / d),
    }
    if name not in table:
        raise UnknownName(f"unknown map name {name!r}; choose from {sorted(table)}")
    alpha, beta = table[name]
    return MapParams(d, alpha, beta)


def named_map(name: str, d: int):
    """A named map together with its family coordinates.

    The transfer matrix is built directly from the map's defining action
    (not from the coordinates), so agreement with ``build_phi_family`` at
    the returned coordinates is a genuine consistency check.

    Names: Reduction, Pinch2, PhiCP, E1, E2, E3, E4.
    """
    params = named_map_coordinates(name, d)
    t_id, t_tau0, t_delta = family_transfer_parts(d)
    t_tr = d * t_tau0  # transfer of X -> I Tr X
    c = d - 1
    actions = {
        "Reduction": (t_tr - t_id) / c,
        "Pinch2": (t_tr + t_id - 2.0 * t_delta) / c,
        "PhiCP": (d * t_delta - t_id) / c,
        "E1": t_delta,
        "E2": (t_tr / c + t_delta - t_id / c) / 2.0,
        "E3": (t_tr - t_delta) / c,
        "E4": (t_id + t_tr - t_delta) / d,
    }
    return SuperMap(d, actions[name]), params


NAMED_MAPS = ("Reduction", "Pinch2", "PhiCP", "E1", "E2", "E3", "E4")


def family_fit(m: SuperMap):
    """Least-squares (alpha, beta) coordinates of an arbitrary map.

    Returns ``(alpha, beta, residual)`` where residual is the Frobenius
    mismatch between the map and the fitted family member.  Residual ~ 0
    certifies membership in the family.
    """
    t_id, t_tau0, t_delta = family_transfer_parts(m.d)
    cols = np.column_stack([(t_tau0 - t_id).ravel(), (t_delta - t_id).ravel()])
    rhs = (m.transfer - t_id).ravel()
    coef, *_ = np.linalg.lstsq(cols, rhs, rcond=None)
    resid = float(np.linalg.norm(cols @ coef - rhs))
    return float(coef[0].real), float(coef[1].real), resid


# ---------------------------------------------------------------------------
# map algebra
# ---------------------------------------------------------------------------

def hs_adjoint(m: SuperMap) -> SuperMap:
    """Hilbert-Schmidt adjoint; transfer matrix is the conjugate transpose."""
    return SuperMap(m.d, m.transfer.conj().T)


def compose(m1: SuperMap, m2: SuperMap) -> SuperMap:
    """The composition m1 o m2 (m2 acts first)."""
    if m1.d != m2.d:
        raise DimensionMismatch(f"cannot compose maps with d={m1.d} and d={m2.d}")
    return SuperMap(m1.d, m1.transfer @ m2.transfer)


def mix(weights, maps) -> SuperMap:
    """Convex combination of maps with nonnegative weights summing to one."""
    w = np.asarray(weights, dtype=float)
    if len(maps) != w.size or w.size == 0:
        raise BadWeights("need as many weights as maps")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise BadWeights(f"weights must be nonnegative and sum to 1, got {w}")
    d = maps[0].d
    if any(m.d != d for m in maps):
        raise DimensionMismatch("all mixed maps must share the same dimension")
    transfer = sum(wi * m.transfer for wi, m in zip(w, maps))
    return SuperMap(d, transfer)


def apply(m: SuperMap, state: QuantumState) -> QuantumState:
    """Apply a map to a state.  No renormalization is performed."""
    if m.d != state.d:
        raise DimensionMismatch(f"map d={m.d} does not match state d={state.d}")
    return QuantumState(state.d, m(state.rho))


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def _matrix_to_pairs(mat: np.ndarray):
    flat = np.asarray(mat, dtype=complex).reshape(-1)  # row-major
    return [[float(z.real), float(z.imag)] for z in flat]


def _pairs_to_matrix(pairs, rows: int, cols: int) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.shape != (rows * cols, 2):
        raise DimensionMismatch(
            f"expected {rows*cols} [re, im] pairs, got shape {arr.shape}"
        )
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(rows, cols)


def supermap_to_json(m: SuperMap) -> dict:
    """{"d": d, "transfer": [[re, im], ...]} with row-major entries."""
    return {"d": m.d, "transfer": _matrix_to_pairs(m.transfer)}


def supermap_from_json(obj) -> SuperMap:
    if isinstance(obj, str):
        obj = json.loads(obj)
    d = int(obj["d"])
    return SuperMap(d, _pairs_to_matrix(obj["transfer"], d * d, d * d))


def state_to_json(state: QuantumState) -> dict:
    return {"d": state.d, "rho": _matrix_to_pairs(state.rho)}


def state_from_json(obj) -> QuantumState:
    if isinstance(obj, str):
        obj = json.loads(obj)
    d = int(obj["d"])
    return QuantumState(d, _pairs_to_matrix(obj["rho"], d, d))


def identity_map(d: int) -> SuperMap:
    return SuperMap(d, np.eye(d * d, dtype=complex))


def unitary_conjugation(u: np.ndarray) -> SuperMap:
    """The map X -> U X U^dagger."""
    u = as_complex_matrix(u)
    d = u.shape[0]
    return SuperMap(d, np.kron(u.conj(), u))


def transposition_map(d: int) -> SuperMap:
    """X -> X^T; the canonical positive unital map that is not Schwarz."""
    d = check_dimension(d)
    t = np.zeros((d * d, d * d), dtype=complex)
    for r in range(d):
        for c in range(d):
            t[r * d + c, c * d + r] = 1.0  # vec index col*d+row: (c,r) <- (r,c)
    return SuperMap(d, t)
