"""Eigenphase density and spacing experiments over batches of samples."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .quaternion import QuaternionArray, embed_matrix
from .sampler import EnsembleKind, EnsembleSpec, sample_batch
from .spectra import (
    TWO_PI,
    GofReport,
    HistogramData,
    chi_square_uniform,
    dedup_kramers,
    density_histogram,
    eigenphases,
    ks_test,
    spacing_histogram,
    spacings,
    surmise_bin_average,
    wigner_surmise,
)

__all__ = [
    "DENSITY_KINDS",
    "SPACING_BETA",
    "ExperimentResult",
    "collect_eigenphases",
    "density_experiment",
    "density_from_phases",
    "spacing_experiment",
    "spacing_from_phases",
    "surmise_cdf",
]

DENSITY_KINDS = frozenset(
    k.value
    for k in (
        EnsembleKind.CUE,
        EnsembleKind.COE,
        EnsembleKind.CSE,
        EnsembleKind.CUE_WRONG,
        EnsembleKind.ORTHOGONAL,
        EnsembleKind.USP,
        EnsembleKind.SP_QUATERNION,
    )
)
# cue_wrong is compared against the curve it fails to reproduce
SPACING_BETA = {"cue": 2, "coe": 1, "cse": 4, "cue_wrong": 2}


@dataclass
class ExperimentResult:
    histogram: HistogramData
    report: GofReport
    reference: np.ndarray


def _phase_reducer(kind: EnsembleKind):
    def reduce(M):
        if isinstance(M, QuaternionArray):
            M = embed_matrix(M)
        e = eigenphases(M, with_residual=False)
        if kind is EnsembleKind.CSE:
            e = dedup_kramers(e, 1e-8)
        return e.phases

    return reduce


def collect_eigenphases(spec: EnsembleSpec, count: int, threads: int = 1) -> list[np.ndarray]:
    """Eigenphases of samples ``0..count-1``; CSE spectra are de-duplicated."""
    if spec.kind.value not in DENSITY_KINDS:
        raise ValueError(f"ensemble '{spec.kind.value}' does not produce unitary matrices")
    return sample_batch(spec, count, threads=threads, func=_phase_reducer(spec.kind))


def density_from_phases(per_matrix, bins: int = 60) -> ExperimentResult:
    """Pooled eigenphase histogram, tested against the flat density ``1/(2 pi)``.

    The chi-square fields stay empty when some bin expects fewer than five
    phases.
    """
    pooled = np.concatenate(per_matrix)
    h = density_histogram(pooled, bins)
    report = ks_test(pooled, lambda x: x / TWO_PI)
    try:
        report.update(chi_square_uniform(h))
    except ValueError as err:
        report.extra["chi_square_skipped"] = str(err)
    ref = 1.0 / TWO_PI
    report.extra.update(
        {
            "reference_density": ref,
            "max_relative_deviation": float(np.max(np.abs(h.density - ref)) / ref),
            "n_phases": int(pooled.size),
        }
    )
    return ExperimentResult(h, report, np.full(bins, ref))


def density_experiment(spec: EnsembleSpec, count: int, bins: int = 60, threads: int = 1) -> ExperimentResult:
    return density_from_phases(collect_eigenphases(spec, count, threads), bins)


_CDF_CACHE: dict = {}


def surmise_cdf(beta: int):
    """Cumulative distribution of the Wigner surmise, tabulated on ``[0, 12]``."""
    if beta not in _CDF_CACHE:
        grid = np.linspace(0.0, 12.0, 24001)
        cdf = cumulative_trapezoid(wigner_surmise(grid, beta), grid, initial=0.0)
        cdf /= cdf[-1]
        _CDF_CACHE[beta] = (grid, cdf)
    grid, cdf = _CDF_CACHE[beta]
    return lambda s: np.interp(s, grid, cdf, right=1.0)


def spacing_from_phases(per_matrix, beta: int, bins: int = 50, s_max: float = 4.0) -> ExperimentResult:
    """Pooled spacing histogram on ``[0, s_max)`` against the Wigner surmise."""
    if len(per_matrix[0]) < 2:
        raise ValueError("spacings need at least two eigenphases per matrix")
    s = np.concatenate([spacings(p).s for p in per_matrix])
    h = spacing_histogram(s, bins, s_max)
    ref = surmise_bin_average(h.bin_edges, beta)
    report = ks_test(s, surmise_cdf(beta))
    report.extra.update(
        {
            "beta": beta,
            "sup_norm_deviation": float(np.max(np.abs(h.density - ref))),
            "n_spacings": int(s.size),
            "spacings_per_matrix": int(len(per_matrix[0])),
        }
    )
    return ExperimentResult(h, report, ref)


def spacing_experiment(
    spec: EnsembleSpec, count: int, bins: int = 50, s_max: float = 4.0, threads: int = 1
) -> ExperimentResult:
    try:
        beta = SPACING_BETA[spec.kind.value]
    except KeyError:
        raise ValueError(f"no reference spacing law for ensemble '{spec.kind.value}'") from None
    return spacing_from_phases(collect_eigenphases(spec, count, threads), beta, bins, s_max)
