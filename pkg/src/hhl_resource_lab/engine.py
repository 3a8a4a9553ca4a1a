"""Exact stage-by-stage construction of the quantum linear-system solver.

Given a Hermitian positive-definite ``A`` and a unit vector ``b``, the solver
walks through five states over three registers: an eigenvalue register L, a
solution register U holding ``b`` in the eigenbasis of ``A``, and a single
read-out qubit R.

    psi_in = |0>|0>|0>
    psi_0  = |0> |b> |0>
    psi_1  = sum_i beta_i |l_i>|u_i>|0>
    psi_2  = sum_i beta_i |l_i>|u_i>( sqrt(1 - C^2/l_i^2)|0> + (C/l_i)|1> )
    psi_3  = |0> sum_i beta_i |u_i>( sqrt(1 - C^2/l_i^2)|0> + (C/l_i)|1> )

with ``beta_i = <u_i|b>``.  Post-selecting R = |1> on psi_3 yields the
normalized solution direction with success probability
``SP = sum_i |beta_i|^2 C^2 / l_i^2``.

The eigenvalue register is modelled analytically: ``|l_i>`` is the i-th
computational basis vector of a dimension-M register (M = number of distinct
eigenvalues).  The bit-string ("micro") encoding over individual qubits lives
in :mod:`hhl_resource_lab.measures`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CircuitConstantError,
    DegeneracyWarning,
    EigenvalueScalingError,
    RangeError,
    ShapeError,
    SpectrumError,
    StageError,
)
from .tensor import as_state, hermitian_eig, require_hermitian

STAGES = ("psi_in", "psi_0", "psi_1", "psi_2", "psi_3")

#: default rotation constant as a fraction of the smallest eigenvalue
DEFAULT_C_SCALE = 0.736

_DEGENERACY_TOL = 1e-8
_INTEGER_TOL = 1e-9


@dataclass(frozen=True)
class LinearSystem:
    """Problem instance: Hermitian matrix ``a`` and unit-norm vector ``b``."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = require_hermitian(self.a)
        b = as_state(self.b)
        if a.shape[0] != b.size:
            raise ShapeError(f"matrix {a.shape} incompatible with vector of length {b.size}")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def size(self) -> int:
        return self.b.size


@dataclass(frozen=True)
class SpectralData:
    """Spectral picture of a problem instance.

    ``lambdas`` are the distinct positive eigenvalues (ascending), ``vectors``
    holds the matching orthonormal eigenvectors as columns, and ``betas`` the
    overlaps ``<u_i|b>``.  ``n`` is the eigenvalue-register width in qubits,
    ``t`` the evolution time chosen so the scaled eigenvalues
    ``2^n * lambda * t / (2 pi)`` reproduce ``lambdas``, and ``c`` the rotation
    constant.  ``merged`` flags that degenerate eigenspaces were collapsed
    into single branches (closed forms are then withheld).
    """

    lambdas: np.ndarray
    vectors: np.ndarray
    betas: np.ndarray
    n: int
    t: float
    c: float
    merged: bool = False
    system: LinearSystem | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for name in ("lambdas", "vectors", "betas"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def size(self) -> int:
        """Number of distinct eigenvalue branches."""
        return self.lambdas.size

    @property
    def scaled_lambdas(self) -> np.ndarray:
        return (2**self.n) * self.lambdas * self.t / (2 * np.pi)

    @property
    def integer_spectrum(self) -> bool:
        lt = self.scaled_lambdas
        return bool(np.all(np.abs(lt - np.round(lt)) <= _INTEGER_TOL))

    def rotation_amplitudes(self) -> tuple[np.ndarray, np.ndarray]:
        """(cos, sin) halves of the conditioned rotation, per branch."""
        sin = self.c / self.lambdas
        cos = np.sqrt(np.maximum(0.0, 1.0 - sin**2))
        return cos, sin


@dataclass(frozen=True)
class TripartiteState:
    """Pure state over the ordered registers with explicit local dimensions."""

    stage: str
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = as_state(self.amplitudes)
        dims = tuple(int(d) for d in self.dims)
        if amps.size != int(np.prod(dims)):
            raise ShapeError(f"amplitudes of length {amps.size} do not match dims {dims}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class Solution:
    """Read-out of the algorithm plus the classical reference."""

    x_state: np.ndarray
    sp: float
    x_classical: np.ndarray


def hermitize(ap) -> np.ndarray:
    """Embed an arbitrary matrix A' into the Hermitian block form [[0, A'], [A'^+, 0]]."""
    arr = np.atleast_2d(np.asarray(ap, dtype=complex))
    r, c = arr.shape
    out = np.zeros((r + c, r + c), dtype=complex)
    out[:r, r:] = arr
    out[r:, :r] = arr.conj().T
    return out


def _merge_degenerate(
    lambdas: np.ndarray, vectors: np.ndarray, betas: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
    """Collapse degenerate eigenspaces into single branches.

    Within an eigenspace the labels |l_i> coincide, so the branch carries the
    normalized in-space component of ``b`` with weight sqrt(sum |beta_k|^2).
    """
    groups: list[list[int]] = [[0]]
    for i in range(1, lambdas.size):
        if lambdas[i] - lambdas[groups[-1][0]] < _DEGENERACY_TOL * max(1.0, lambdas[i]):
            groups[-1].append(i)
        else:
            groups.append([i])
    if all(len(g) == 1 for g in groups):
        return lambdas, vectors, betas, False

    warnings.warn(
        "degenerate eigenvalues merged into eigenspace branches; "
        "closed-form expressions are withheld",
        DegeneracyWarning,
        stacklevel=3,
    )
    m_lams = np.empty(len(groups))
    m_vecs = np.zeros((vectors.shape[0], len(groups)), dtype=complex)
    m_betas = np.zeros(len(groups), dtype=complex)
    for j, g in enumerate(groups):
        m_lams[j] = lambdas[g].mean()
        w = vectors[:, g] @ betas[g]
        nrm = np.linalg.norm(w)
        if nrm > 1e-14:
            m_vecs[:, j] = w / nrm
            m_betas[j] = nrm
        else:
            m_vecs[:, j] = vectors[:, g[0]]
            m_betas[j] = 0.0
    return m_lams, m_vecs, m_betas, True


def spectral_decompose(
    system: LinearSystem,
    c: float | None = None,
    n: int | None = None,
    *,
    require_integer: bool = True,
) -> SpectralData:
    """Decompose ``b`` in the eigenbasis of ``a`` and fix the circuit constants.

    ``c`` defaults to ``DEFAULT_C_SCALE * lambda_min``; ``n`` defaults to the
    fewest qubits distinguishing all eigenvalues, ``ceil(log2(lambda_max + 1))``,
    and ``t = 2 pi / 2^n`` so the scaled eigenvalues equal the raw ones.

    With ``require_integer=True`` (the default) non-integer eigenvalues raise
    ``EigenvalueScalingError``; analytic-mode parameter sweeps may opt out,
    since only the bit-string encoding needs integrality.
    """
    w, v = hermitian_eig(system.a)
    if w[0] <= 0:
        raise SpectrumError(
            f"smallest eigenvalue {w[0]!r} is not strictly positive; "
            "only positive-definite systems are supported"
        )
    if c is None:
        c = DEFAULT_C_SCALE * float(w[0])
    c = float(c)
    if not 0 < c <= w[0] * (1 + 1e-12):
        raise CircuitConstantError(
            f"rotation constant C={c!r} outside (0, lambda_min={w[0]!r}]"
        )
    c = min(c, float(w[0]))
    betas = v.conj().T @ system.b
    lambdas, vectors, betas, merged = _merge_degenerate(w, v, betas)

    if n is None:
        n = max(1, math.ceil(math.log2(float(lambdas[-1]) + 1.0)))
    n = int(n)
    if n < 1:
        raise RangeError(f"register width n={n} must be >= 1")
    t = 2 * np.pi / 2**n
    scaled = (2**n) * lambdas * t / (2 * np.pi)
    off = np.max(np.abs(scaled - np.round(scaled)))
    if require_integer and off > _INTEGER_TOL:
        raise EigenvalueScalingError(
            f"scaled eigenvalues {scaled.tolist()} deviate from integers by {off:.2e}; "
            "rescale t (or pick n) so 2^n * lambda * t / (2 pi) is integral"
        )
    if np.round(scaled[-1]) >= 2**n and require_integer:
        raise EigenvalueScalingError(
            f"scaled eigenvalue {scaled[-1]!r} does not fit into {n} qubits"
        )
    return SpectralData(
        lambdas=lambdas, vectors=vectors, betas=betas, n=n, t=float(t), c=c,
        merged=merged, system=system,
    )


def build_state(spec: SpectralData, stage: str) -> TripartiteState:
    """Exact state after the given stage, over registers (L, U, R).

    The eigenvalue register has one basis vector per distinct eigenvalue; the
    solution register carries the full N-dimensional problem space.
    """
    if stage not in STAGES:
        raise StageError(f"unknown stage {stage!r}; expected one of {STAGES}")
    m = spec.size
    nb = spec.vectors.shape[0]
    dims = (m, nb, 2)
    cos, sin = spec.rotation_amplitudes()

    if stage == "psi_in":
        amps = np.zeros(dims, dtype=complex)
        amps[0, 0, 0] = 1.0
    elif stage == "psi_0":
        amps = np.zeros(dims, dtype=complex)
        amps[0, :, 0] = spec.vectors @ spec.betas
    elif stage == "psi_1":
        amps = np.zeros(dims, dtype=complex)
        for i in range(m):
            amps[i, :, 0] = spec.betas[i] * spec.vectors[:, i]
    elif stage == "psi_2":
        amps = np.zeros(dims, dtype=complex)
        for i in range(m):
            branch = spec.betas[i] * spec.vectors[:, i]
            amps[i, :, 0] = branch * cos[i]
            amps[i, :, 1] = branch * sin[i]
    else:  # psi_3
        amps = np.zeros(dims, dtype=complex)
        for i in range(m):
            branch = spec.betas[i] * spec.vectors[:, i]
            amps[0, :, 0] += branch * cos[i]
            amps[0, :, 1] += branch * sin[i]
    return TripartiteState(stage=stage, amplitudes=amps.ravel(), dims=dims)


def solution(spec: SpectralData) -> Solution:
    """Post-selected solution state, success probability and classical oracle."""
    weights = np.abs(spec.betas) ** 2
    sp = float(np.sum(weights * spec.c**2 / spec.lambdas**2))
    unnorm = spec.vectors @ (spec.c * spec.betas / spec.lambdas)
    x_state = unnorm / np.linalg.norm(unnorm)
    x_classical = spec.vectors @ (spec.betas / spec.lambdas)
    return Solution(x_state=x_state, sp=sp, x_classical=x_classical)


def condition_number(spec: SpectralData) -> float:
    """Ratio of the largest to the smallest eigenvalue."""
    return float(spec.lambdas[-1] / spec.lambdas[0])


_FAMILY_VECTORS = np.array([[1.0, 1.0], [-1.0, 1.0]]) / np.sqrt(2.0)


def kappa_family(kappa: float, b) -> LinearSystem:
    """2x2 family with fixed eigenvectors and eigenvalues (1, kappa).

    ``kappa = 2`` reproduces the reference two-dimensional system.
    """
    if kappa < 1:
        raise RangeError(f"condition number {kappa!r} must be >= 1")
    a = (_FAMILY_VECTORS * np.array([1.0, float(kappa)])) @ _FAMILY_VECTORS.T
    a = 0.5 * (a + a.T)
    return LinearSystem(a=a, b=np.asarray(b, dtype=complex))


def trivial_instance(spec: SpectralData, *, tol: float = 1e-12) -> bool:
    """True when ``b`` lies in a single eigenspace (one nonzero overlap)."""
    return int(np.sum(np.abs(spec.betas) ** 2 > tol)) <= 1
