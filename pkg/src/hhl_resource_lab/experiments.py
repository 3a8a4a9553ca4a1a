"""Parameter sweeps and their CSV/JSON table artifacts.

Every sweep produces a :class:`SweepTable` with a fixed column set and a
header comment carrying the package version, the seed and a hash of the
resolved configuration, so reruns diff byte-for-byte.  Grid points are
independent; they are evaluated through a thread pool capped by the
``HHL_LAB_THREADS`` environment variable, and rows always come out in grid
order.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .disorder import DisorderConfig, standard_quenched_averages
from .engine import (
    DEFAULT_C_SCALE,
    LinearSystem,
    SpectralData,
    kappa_family,
    spectral_decompose,
    trivial_instance,
)
from .errors import RangeError
from .measures import ResourceReport, micro_ggm, report, shared_eigenvalue_bits

_BUILTIN_MATRICES = {
    "paper-2d": np.array([[1.5, 0.5], [0.5, 1.5]]),
    "paper-3d": np.array(
        [[14.0, -4.0, -4.0], [-4.0, 11.0, -1.0], [-4.0, -1.0, 11.0]]
    )
    / 6.0,
}

_DEFAULT_B = {"paper-2d": (0.6, 0.8), "paper-3d": (1.0, 0.0, 0.0)}


def builtin_matrix(name: str) -> np.ndarray:
    try:
        return _BUILTIN_MATRICES[name].copy()
    except KeyError:
        raise RangeError(
            f"unknown builtin system {name!r}; expected one of {sorted(_BUILTIN_MATRICES)}"
        ) from None


def default_b(name: str) -> tuple[float, ...]:
    return _DEFAULT_B[name]


def normalized_b(b) -> np.ndarray:
    """Scale an input vector to unit length (zero vectors are rejected)."""
    arr = np.asarray(b, dtype=complex).ravel()
    nrm = np.linalg.norm(arr)
    if nrm == 0:
        raise RangeError("constant vector b must be nonzero")
    return arr / nrm


def thread_count() -> int:
    raw = os.environ.get("HHL_LAB_THREADS", "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise RangeError(f"HHL_LAB_THREADS={raw!r} is not an integer") from None
        if cap < 1:
            raise RangeError(f"HHL_LAB_THREADS={cap} must be >= 1")
        return cap
    return min(8, os.cpu_count() or 1)


def _map_ordered(fn, items: list):
    workers = thread_count()
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _grid(axis: tuple[float, float, int], *, bounded: bool = True) -> np.ndarray:
    lo, hi, steps = float(axis[0]), float(axis[1]), int(axis[2])
    if steps < 2:
        raise RangeError(f"sweep needs at least 2 steps, got {steps}")
    if hi < lo:
        raise RangeError(f"grid bounds out of order: {lo} > {hi}")
    if bounded and not (0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0):
        raise RangeError(f"axis [{lo}, {hi}] outside [0, 1]")
    return np.linspace(lo, hi, steps)


def _fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".12g")


def _canonical(obj):
    """JSON-stable form of a config: complex to [re, im], arrays to lists."""
    if isinstance(obj, dict):
        return {k: _canonical(obj[k]) for k in sorted(obj)}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


@dataclass
class SweepTable:
    """Column-ordered numeric table plus the provenance header."""

    columns: list[str]
    rows: list[list[float]]
    seed: int
    config: dict

    def config_hash(self) -> str:
        blob = json.dumps(_canonical(self.config), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def header_comment(self) -> str:
        return f"# hhl-resource-lab v{__version__} seed={self.seed} config={self.config_hash()}"

    def to_csv(self) -> str:
        lines = [self.header_comment(), ",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "meta": {
                "version": __version__,
                "seed": self.seed,
                "config": self.config_hash(),
            },
            "columns": self.columns,
            "rows": [{c: float(v) for c, v in zip(self.columns, row)} for row in self.rows],
        }


#: fixed scalar columns extracted from a ResourceReport, in table order
REPORT_COLUMNS = (
    "ggm",
    "ln_L_UR",
    "ln_U_LR",
    "ln_R_LU",
    "ln_LU",
    "ln_UR",
    "ln_LR",
    "coherence_global",
    "coherence_R",
    "coherence_U",
    "purity_L",
    "purity_U",
    "purity_R",
    "sp",
    "kappa",
)


def report_values(rep: ResourceReport) -> list[float]:
    return [
        rep.ggm,
        rep.ln["L_UR"],
        rep.ln["U_LR"],
        rep.ln["R_LU"],
        rep.ln["LU"],
        rep.ln["UR"],
        rep.ln["LR"],
        rep.coherence_global,
        rep.coherence_r,
        rep.coherence_u,
        rep.purities["L"],
        rep.purities["U"],
        rep.purities["R"],
        rep.sp,
        rep.kappa,
    ]


def _c_value(c):
    """None/'auto' means the default fraction of the smallest eigenvalue."""
    if c is None or (isinstance(c, str) and c == "auto"):
        return None
    return float(c)


def decompose(matrix, b, c=None, n=None, *, require_integer: bool = True) -> SpectralData:
    system = LinearSystem(a=np.asarray(matrix, dtype=complex), b=normalized_b(b))
    return spectral_decompose(system, _c_value(c), n, require_integer=require_integer)


# --- sweeps ----------------------------------------------------------------


def sweep_b(
    matrix,
    axes: list[tuple[float, float, int]],
    c=None,
    n=None,
    stage: str = "psi_2",
    seed: int = 0,
) -> SweepTable:
    """Resource table over the constant-vector simplex.

    A 2x2 system sweeps one axis (b0^2, with b1^2 = 1 - b0^2); a 3x3 system
    sweeps two axes (b0^2, b1^2) and omits grid points with b2^2 < 0.
    Components of b are taken nonnegative.
    """
    matrix = np.asarray(matrix, dtype=complex)
    dim = matrix.shape[0]
    if dim == 2:
        if len(axes) != 1:
            raise RangeError("a 2x2 system sweeps exactly one axis (b0^2)")
        grid0 = _grid(axes[0])
        points = [(float(s),) for s in grid0]
        param_cols = ["b0sq"]
    elif dim == 3:
        if len(axes) != 2:
            raise RangeError("a 3x3 system sweeps exactly two axes (b0^2, b1^2)")
        grid0, grid1 = _grid(axes[0]), _grid(axes[1])
        points = []
        for s0 in grid0:
            for s1 in grid1:
                if 1.0 - s0 - s1 >= -1e-12:
                    points.append((float(s0), float(s1)))
        param_cols = ["b0sq", "b1sq"]
    else:
        raise RangeError(f"b-sweep supports 2x2 and 3x3 systems, got {dim}x{dim}")

    def one(point):
        squares = list(point) + [max(0.0, 1.0 - sum(point))]
        b = np.sqrt(np.asarray(squares))
        spec = decompose(matrix, b, c=c, n=n)
        return list(point) + report_values(report(spec, stage))

    rows = _map_ordered(one, points)
    config = {
        "command": "sweep-b",
        "matrix": matrix,
        "axes": [list(a) for a in axes],
        "c": "auto" if _c_value(c) is None else float(c),
        "n": n,
        "stage": stage,
        "seed": seed,
    }
    return SweepTable(columns=param_cols + list(REPORT_COLUMNS), rows=rows, seed=seed, config=config)


#: columns of the condition-number sweep
KAPPA_COLUMNS = ("kappa", "ggm", "ln_LU", "coherence_R", "coherence_global", "sp")


def sweep_kappa(
    axis: tuple[float, float, int],
    b=(0.3,),
    c=None,
    stage: str = "psi_2",
    seed: int = 0,
) -> SweepTable:
    """Resource table over the 2x2 eigenvalue-ratio family at fixed ``b``.

    ``b`` with a single component is read as b0 with b1 = sqrt(1 - b0^2).
    The rotation constant defaults to the standard fraction of the smallest
    eigenvalue for every family member.
    """
    lo = float(axis[0])
    if lo < 1.0:
        raise RangeError(f"condition-number grid must start at >= 1, got {lo}")
    kappas = _grid(axis, bounded=False)
    b = np.asarray(b, dtype=complex).ravel()
    if b.size == 1:
        b0 = b[0]
        if abs(b0.imag) > 0 or not 0.0 <= b0.real <= 1.0:
            raise RangeError(f"single-component b is read as b0 and must be in [0, 1], got {b0}")
        b = np.array([b0.real, np.sqrt(1.0 - b0.real**2)], dtype=complex)
    bvec = normalized_b(b)

    def one(kappa):
        system = kappa_family(float(kappa), bvec)
        spec = spectral_decompose(system, _c_value(c), require_integer=False)
        rep = report(spec, stage)
        return [
            float(kappa),
            rep.ggm,
            rep.ln["LU"],
            rep.coherence_r,
            rep.coherence_global,
            rep.sp,
        ]

    rows = _map_ordered(one, list(kappas))
    config = {
        "command": "sweep-kappa",
        "axis": list(axis),
        "b": bvec,
        "c": "auto" if _c_value(c) is None else float(c),
        "stage": stage,
        "seed": seed,
    }
    return SweepTable(columns=list(KAPPA_COLUMNS), rows=rows, seed=seed, config=config)


#: columns of the disorder sweep
DISORDER_COLUMNS = (
    "b0sq",
    "sigma",
    "er_mean",
    "er_stderr",
    "ggm_mean",
    "ggm_stderr",
    "ln_LU_mean",
    "ln_LU_stderr",
    "coherence_R_mean",
    "coherence_R_stderr",
    "clamped_fraction",
)


def disorder_sweep(
    matrix,
    axis: tuple[float, float, int],
    sigmas: list[float],
    realizations: int = 10_000,
    seed: int = 0,
    c=None,
    n=None,
) -> SweepTable:
    """Quenched averages over a b0^2 grid for each disorder strength.

    All (grid point, sigma) cells share one seed, so the standardized draws
    are common across cells and reruns are bit-identical.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape[0] != 2:
        raise RangeError("the disorder sweep is defined for 2x2 systems")
    grid0 = _grid(axis)
    sigmas = [float(s) for s in sigmas]
    if not sigmas:
        raise RangeError("need at least one sigma value")
    cells = [(float(s), sig) for s in grid0 for sig in sigmas]

    def one(cell):
        s, sig = cell
        b = np.sqrt([s, 1.0 - s])
        spec = decompose(matrix, b, c=c, n=n)
        run = standard_quenched_averages(
            spec, DisorderConfig(sigma=sig, realizations=realizations, seed=seed)
        )
        row = [s, sig]
        for name in ("er", "ggm", "ln_LU", "coherence_R"):
            mean, stderr = run.averages[name]
            row.extend([mean, stderr])
        row.append(run.clamped_fraction)
        return row

    rows = _map_ordered(one, cells)
    config = {
        "command": "disorder",
        "matrix": matrix,
        "axis": list(axis),
        "sigmas": sigmas,
        "realizations": realizations,
        "c": "auto" if _c_value(c) is None else float(c),
        "n": n,
        "seed": seed,
    }
    return SweepTable(columns=list(DISORDER_COLUMNS), rows=rows, seed=seed, config=config)


# --- single-instance payloads ----------------------------------------------


def _complex_pairs(vec: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex)]


def report_dict(rep: ResourceReport) -> dict:
    return {
        "stage": rep.stage,
        "ggm": rep.ggm,
        "ln": dict(rep.ln),
        "coherence_global": rep.coherence_global,
        "coherence_R": rep.coherence_r,
        "coherence_U": rep.coherence_u,
        "purities": dict(rep.purities),
        "sp": rep.sp,
        "kappa": rep.kappa,
    }


def solve_payload(matrix, b, c=None, n=None) -> dict:
    """Solution, success probability, condition number and the post-rotation report."""
    from .engine import condition_number, solution

    spec = decompose(matrix, b, c=c, n=n)
    sol = solution(spec)
    rep = report(spec, "psi_2")
    return {
        "x_classical": _complex_pairs(sol.x_classical),
        "x_state": _complex_pairs(sol.x_state),
        "sp": sol.sp,
        "kappa": condition_number(spec),
        "c": spec.c,
        "n": spec.n,
        "betas": _complex_pairs(spec.betas),
        "lambdas": [float(v) for v in spec.lambdas],
        "trivial": trivial_instance(spec),
        "report": report_dict(rep),
    }


def micro_ggm_payload(matrix, b, c=None, n=None) -> dict:
    """Micro-level geometric measure plus the shared-bit factorization witness."""
    from .engine import build_state
    from .measures import ggm

    spec = decompose(matrix, b, c=c, n=n)
    value = micro_ggm(spec)
    witness = shared_eigenvalue_bits(spec) if value <= 1e-10 else []
    text = (
        " and ".join(f"bit {bit} (value {val})" for bit, val in witness) + " common"
        if witness
        else "no shared bit"
    )
    return {
        "micro_ggm": value,
        "analytic_ggm": ggm(build_state(spec, "psi_2")),
        "witness": [{"bit": bit, "value": val} for bit, val in witness],
        "witness_text": text,
        "scaled_lambdas": [int(round(v)) for v in spec.scaled_lambdas],
        "n": spec.n,
    }
