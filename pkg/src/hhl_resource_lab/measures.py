"""Quantumness meters: multipartite geometric entanglement, negativity, coherence.

The geometric measure of a pure multi-register state is
``1 - max over bipartitions of the largest squared Schmidt coefficient``;
it is positive exactly when no bipartition is a product.  Bipartite
entanglement of a two-register density matrix is the logarithmic negativity
``log2(2 N + 1)`` with ``N`` the absolute sum of negative eigenvalues of the
partial transpose.  Coherence is the l1 norm of off-diagonal magnitudes in
the computational basis, scaled by ``D - 1`` so the maximally coherent state
scores 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .engine import SpectralData, TripartiteState, build_state, condition_number, solution
from .errors import DegeneracyWarning, EigenvalueScalingError, InvalidCut, SizeError
from .tensor import partial_trace, partial_transpose, purity, schmidt_squared

#: eigenvalues of a partial transpose above this are numerical noise, not negativity
NEGATIVITY_EIG_TOL = -1e-12

_MICRO_MAX_QUBITS = 12


def _bipartitions(n_parties: int):
    """All unordered bipartitions, as the halves containing register 0."""
    rest = range(1, n_parties)
    for size in range(n_parties - 1):
        for tail in combinations(rest, size):
            yield (0, *tail)


def ggm_from_amplitudes(amplitudes, dims) -> float:
    """Geometric entanglement of a pure state over the given registers."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2:
        raise InvalidCut("geometric measure needs at least two registers")
    top = 0.0
    for cut in _bipartitions(len(dims)):
        top = max(top, float(schmidt_squared(amplitudes, dims, cut)[0]))
    return max(0.0, 1.0 - top)


def ggm(state: TripartiteState) -> float:
    """Geometric entanglement of a staged state across all register cuts."""
    return ggm_from_amplitudes(state.amplitudes, state.dims)


def _micro_bits(spec: SpectralData) -> np.ndarray:
    """Integer bit patterns (MSB first) of the scaled eigenvalues."""
    scaled = spec.scaled_lambdas
    ints = np.round(scaled).astype(int)
    if np.max(np.abs(scaled - ints)) > 1e-9:
        raise EigenvalueScalingError(
            f"scaled eigenvalues {scaled.tolist()} are not integers; "
            "the bit-string encoding is undefined"
        )
    if spec.n > _MICRO_MAX_QUBITS:
        raise SizeError(
            f"register width n={spec.n} exceeds {_MICRO_MAX_QUBITS}; "
            "the bipartition scan is exponential in n"
        )
    return np.array([[(val >> (spec.n - 1 - q)) & 1 for q in range(spec.n)] for val in ints])


def micro_state(spec: SpectralData) -> tuple[np.ndarray, tuple[int, ...]]:
    """Post-rotation state with the eigenvalue register expanded into qubits."""
    bits = _micro_bits(spec)
    nb = spec.vectors.shape[0]
    dims = (2,) * spec.n + (nb, 2)
    cos, sin = spec.rotation_amplitudes()
    amps = np.zeros(dims, dtype=complex)
    for i in range(spec.size):
        idx = tuple(bits[i])
        branch = spec.betas[i] * spec.vectors[:, i]
        amps[idx + (slice(None), 0)] += branch * cos[i]
        amps[idx + (slice(None), 1)] += branch * sin[i]
    return amps.ravel(), dims


def micro_ggm(spec: SpectralData) -> float:
    """Geometric entanglement with every eigenvalue-register qubit its own party."""
    amps, dims = micro_state(spec)
    return ggm_from_amplitudes(amps, dims)


def shared_eigenvalue_bits(spec: SpectralData) -> list[tuple[int, int]]:
    """Bit positions (and their value) common to all eigenvalue encodings.

    A shared bit factors the corresponding qubit out of the state, which is
    the witness for a vanishing micro-level geometric measure.  Bit 0 is the
    least significant.
    """
    bits = _micro_bits(spec)
    shared = []
    for q in range(spec.n):
        col = bits[:, q]
        if np.all(col == col[0]):
            shared.append((spec.n - 1 - q, int(col[0])))
    return shared


def negativity(rho, dims) -> float:
    """Absolute sum of negative partial-transpose eigenvalues.

    Computed for both choices of transposed register; the two must agree
    (they are transposes of one another), which doubles as a sanity check.
    """
    vals = []
    for party in (1, 2):
        w = np.linalg.eigvalsh(partial_transpose(rho, dims, party))
        vals.append(float(-np.sum(w[w < NEGATIVITY_EIG_TOL])))
    if abs(vals[0] - vals[1]) > 1e-10:
        raise ArithmeticError(
            f"negativity disagrees between transposed registers: {vals}"
        )
    return vals[0]


def log_negativity(rho, dims) -> float:
    """log2(2 N + 1) of a two-register density matrix."""
    return float(np.log2(2.0 * negativity(rho, dims) + 1.0))


def _require_closed_form(spec: SpectralData):
    if spec.merged:
        raise DegeneracyWarning(
            "spectrum was degenerate; closed forms assume distinct eigenvalues "
            "- use the numeric route instead"
        )


def negativity_closed_form(spec: SpectralData) -> float:
    """Negativity of the eigenvalue/solution-register marginal after rotation.

    Evaluates ``sum_{i<j} |beta_i beta_j| (cos_i cos_j + sin_i sin_j)`` with
    ``cos_i = sqrt(1 - C^2/l_i^2)`` and ``sin_i = C/l_i``; strictly positive
    as soon as two overlaps are nonzero.
    """
    _require_closed_form(spec)
    cos, sin = spec.rotation_amplitudes()
    mags = np.abs(spec.betas)
    total = 0.0
    for i in range(spec.size):
        for j in range(i + 1, spec.size):
            total += mags[i] * mags[j] * (cos[i] * cos[j] + sin[i] * sin[j])
    return float(total)


def log_negativity_closed_form(spec: SpectralData) -> float:
    return float(np.log2(2.0 * negativity_closed_form(spec) + 1.0))


def l1_coherence(rho) -> float:
    """Normalized l1 coherence: sum of off-diagonal magnitudes over D - 1."""
    arr = np.asarray(rho, dtype=complex)
    d = arr.shape[0]
    if d <= 1:
        return 0.0
    off = float(np.sum(np.abs(arr)) - np.sum(np.abs(np.diag(arr))))
    return off / (d - 1)


def rho_r_closed_form(spec: SpectralData) -> np.ndarray:
    """Read-out qubit marginal after rotation: [[1 - sum a, sum b], [sum b, sum a]].

    ``a_i = |beta_i|^2 C^2/l_i^2`` and ``b_i = |beta_i|^2 cos_i sin_i``.
    """
    cos, sin = spec.rotation_amplitudes()
    w = np.abs(spec.betas) ** 2
    a = float(np.sum(w * sin**2))
    b = float(np.sum(w * cos * sin))
    return np.array([[1.0 - a, b], [b, a]], dtype=complex)


def coherence_r_closed_form(spec: SpectralData) -> float:
    """l1 coherence of the read-out marginal: 2 sum_i |beta_i|^2 cos_i sin_i."""
    cos, sin = spec.rotation_amplitudes()
    w = np.abs(spec.betas) ** 2
    return float(2.0 * np.sum(w * cos * sin))


#: keys of the log-negativity map: pure-state cuts, then two-register marginals
LN_KEYS = ("L_UR", "U_LR", "R_LU", "LU", "UR", "LR")


@dataclass(frozen=True)
class ResourceReport:
    """Per-stage bundle of every meter plus the run-level indicators."""

    stage: str
    ggm: float
    ln: dict[str, float]
    coherence_global: float
    coherence_r: float
    coherence_u: float
    purities: dict[str, float]
    sp: float
    kappa: float


def _pure_cut_log_negativity(state: TripartiteState, head: int) -> float:
    """Log negativity of the pure state across register ``head`` vs the rest."""
    rest = [p for p in range(len(state.dims)) if p != head]
    tens = state.amplitudes.reshape(state.dims)
    psi = np.transpose(tens, [head, *rest]).ravel()
    d_head = state.dims[head]
    d_rest = psi.size // d_head
    rho = np.outer(psi, psi.conj())
    return log_negativity(rho, (d_head, d_rest))


def report(spec: SpectralData, stage: str) -> ResourceReport:
    """Evaluate every meter on the state after ``stage``."""
    state = build_state(spec, stage)
    dl, du, dr = state.dims
    amps, dims = state.amplitudes, state.dims

    ln = {
        "L_UR": _pure_cut_log_negativity(state, 0),
        "U_LR": _pure_cut_log_negativity(state, 1),
        "R_LU": _pure_cut_log_negativity(state, 2),
        "LU": log_negativity(partial_trace(amps, dims, (0, 1)), (dl, du)),
        "UR": log_negativity(partial_trace(amps, dims, (1, 2)), (du, dr)),
        "LR": log_negativity(partial_trace(amps, dims, (0, 2)), (dl, dr)),
    }

    rho_l = partial_trace(amps, dims, (0,))
    rho_u = partial_trace(amps, dims, (1,))
    rho_r = partial_trace(amps, dims, (2,))

    sol = solution(spec)
    return ResourceReport(
        stage=stage,
        ggm=ggm(state),
        ln=ln,
        coherence_global=l1_coherence(state.density()),
        coherence_r=l1_coherence(rho_r),
        coherence_u=l1_coherence(rho_u),
        purities={"L": purity(rho_l), "U": purity(rho_u), "R": purity(rho_r)},
        sp=sol.sp,
        kappa=condition_number(spec),
    )
