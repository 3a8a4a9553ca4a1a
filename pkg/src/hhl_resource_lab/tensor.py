"""Dense complex linear algebra for multi-register pure and mixed states.

Everything here operates on plain numpy arrays: state vectors are 1-D complex
arrays of length ``prod(dims)``, density matrices are square complex arrays.
``dims`` is the ordered tuple of local dimensions of the registers; register
indices are 0-based throughout.  All functions are pure.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import HermiticityViolation, InvalidCut, ShapeError

HERMITICITY_ATOL = 1e-12
STATE_NORM_ATOL = 1e-12
DENSITY_TRACE_ATOL = 1e-12
DENSITY_EIG_FLOOR = -1e-10


def as_state(v, *, atol: float = STATE_NORM_ATOL) -> np.ndarray:
    """Return ``v`` as a 1-D complex array, checking unit Euclidean norm."""
    arr = np.asarray(v, dtype=complex).ravel()
    nrm = np.linalg.norm(arr)
    if abs(nrm - 1.0) > atol:
        raise ShapeError(f"state norm {nrm!r} deviates from 1 beyond {atol}")
    return arr


def require_hermitian(m, *, atol: float = HERMITICITY_ATOL) -> np.ndarray:
    """Return ``m`` as a square complex array, checking M = M^dagger."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {arr.shape}")
    dev = np.max(np.abs(arr - arr.conj().T)) if arr.size else 0.0
    if dev > atol:
        raise HermiticityViolation(
            f"max |M_ij - conj(M_ji)| = {dev:.3e} exceeds {atol:.0e}"
        )
    return arr


def require_density(rho, *, atol: float = DENSITY_TRACE_ATOL) -> np.ndarray:
    """Return ``rho`` as a Hermitian array with unit trace and spectrum >= -1e-10."""
    arr = require_hermitian(rho)
    tr = np.trace(arr).real
    if abs(tr - 1.0) > atol:
        raise ShapeError(f"density trace {tr!r} deviates from 1 beyond {atol}")
    w = np.linalg.eigvalsh(arr)
    if w.min() < DENSITY_EIG_FLOOR:
        raise ShapeError(f"density has eigenvalue {w.min():.3e} < {DENSITY_EIG_FLOOR}")
    return arr


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real positive.

    Ties on magnitude go to the lowest index, which makes the output
    deterministic for any input up to roundoff.
    """
    idx = int(np.argmax(np.abs(v)))
    pivot = v[idx]
    if pivot == 0:
        return v
    return v * (pivot.conjugate() / abs(pivot))


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix with a fixed phase convention.

    Returns ``(w, v)`` with ``w`` real ascending and ``v[:, i]`` the
    orthonormal eigenvector for ``w[i]``, its largest-magnitude component
    made real positive.  Raises ``HermiticityViolation`` on non-Hermitian
    input.
    """
    arr = require_hermitian(m)
    w, v = np.linalg.eigh(arr)
    v = v.astype(complex, copy=True)
    for i in range(v.shape[1]):
        v[:, i] = _fix_phase(v[:, i])
    return w, v


def _validate_parties(dims: Sequence[int], subset: Iterable[int]) -> tuple[int, ...]:
    parties = tuple(sorted(set(int(p) for p in subset)))
    if any(p < 0 or p >= len(dims) for p in parties):
        raise InvalidCut(f"party indices {parties} out of range for {len(dims)} parties")
    return parties


def _split_state(psi, dims: Sequence[int], block: Sequence[int]) -> np.ndarray:
    """Reshape a pure state into a matrix (block registers) x (the rest)."""
    dims = tuple(int(d) for d in dims)
    arr = np.asarray(psi, dtype=complex).ravel()
    if arr.size != int(np.prod(dims)):
        raise ShapeError(f"state of length {arr.size} does not match dims {dims}")
    rest = [p for p in range(len(dims)) if p not in block]
    tens = arr.reshape(dims)
    tens = np.transpose(tens, list(block) + rest)
    d_block = int(np.prod([dims[p] for p in block])) if block else 1
    return tens.reshape(d_block, -1)


def schmidt_squared(psi, dims: Sequence[int], cut: Iterable[int]) -> np.ndarray:
    """Squared Schmidt coefficients of a pure state across ``cut`` vs the rest.

    The returned array is descending and sums to 1; the values are the
    squared singular values of the state reshaped across the bipartition.
    Raises ``InvalidCut`` if ``cut`` is empty or contains every register.
    """
    parties = _validate_parties(dims, cut)
    if not parties or len(parties) == len(dims):
        raise InvalidCut(f"cut {parties} must be a nonempty proper subset of parties")
    mat = _split_state(psi, dims, parties)
    sv = np.linalg.svd(mat, compute_uv=False)
    return np.sort(sv**2)[::-1]


def partial_trace(state, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix over the ``keep`` registers.

    Accepts either a pure state (1-D) or a density matrix (2-D).  Kept
    registers stay in their original order.
    """
    dims = tuple(int(d) for d in dims)
    kept = _validate_parties(dims, keep)
    if not kept or len(kept) == len(dims):
        raise InvalidCut(f"keep {kept} must be a nonempty proper subset of parties")
    arr = np.asarray(state, dtype=complex)
    total = int(np.prod(dims))
    if arr.ndim == 1:
        mat = _split_state(arr, dims, kept)
        return mat @ mat.conj().T
    if arr.shape != (total, total):
        raise ShapeError(f"density of shape {arr.shape} does not match dims {dims}")
    n = len(dims)
    tens = arr.reshape(dims + dims)
    traced = [p for p in range(n) if p not in kept]
    for off, p in enumerate(traced):
        tens = np.trace(tens, axis1=p - off, axis2=p - off + n - off)
    d_keep = int(np.prod([dims[p] for p in kept]))
    return tens.reshape(d_keep, d_keep)


def partial_transpose(rho, dims: Sequence[int], party: int) -> np.ndarray:
    """Partial transpose of a two-register density matrix.

    ``dims`` is ``(d1, d2)`` and ``party`` selects which factor (1 or 2) is
    transposed.  Applying the map twice is the identity.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise ShapeError(f"partial_transpose needs exactly two registers, got {dims}")
    if party not in (1, 2):
        raise ShapeError(f"party must be 1 or 2, got {party}")
    d1, d2 = dims
    arr = np.asarray(rho, dtype=complex)
    if arr.shape != (d1 * d2, d1 * d2):
        raise ShapeError(f"density of shape {arr.shape} does not match dims {dims}")
    tens = arr.reshape(d1, d2, d1, d2)
    axes = (2, 1, 0, 3) if party == 1 else (0, 3, 2, 1)
    return np.transpose(tens, axes).reshape(d1 * d2, d1 * d2)


def purity(rho) -> float:
    """Tr(rho^2) of a density matrix."""
    arr = np.asarray(rho, dtype=complex)
    return float(np.trace(arr @ arr).real)
