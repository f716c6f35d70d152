"""Eigenphase statistics: density and spacing histograms, goodness of fit."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, stats

__all__ = [
    "EigenphaseSet",
    "GofReport",
    "HistogramData",
    "NotUnitaryError",
    "PairingError",
    "SpacingSample",
    "chi_square_uniform",
    "dedup_kramers",
    "density_histogram",
    "eigenphases",
    "histogram",
    "ks_test",
    "ks_two_sample",
    "kolmogorov_sf",
    "spacing_histogram",
    "spacings",
    "sup_deviation",
    "surmise_bin_average",
    "wigner_surmise",
]

TWO_PI = 2.0 * np.pi


class NotUnitaryError(ValueError):
    pass


class PairingError(ValueError):
    pass


@dataclass(frozen=True)
class EigenphaseSet:
    phases: np.ndarray
    max_residual: float = 0.0

    @property
    def n(self) -> int:
        return len(self.phases)


@dataclass(frozen=True)
class SpacingSample:
    s: np.ndarray


@dataclass(frozen=True)
class HistogramData:
    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    def merge(self, other: "HistogramData") -> "HistogramData":
        if not np.array_equal(self.bin_edges, other.bin_edges):
            raise ValueError("cannot merge histograms with different bins")
        return _from_counts(self.bin_edges, self.counts + other.counts)


@dataclass
class GofReport:
    ks_statistic: float = float("nan")
    ks_p_value: float = float("nan")
    chi_square: float = float("nan")
    chi_square_dof: int = 0
    chi_square_p_value: float = float("nan")
    extra: dict = field(default_factory=dict)

    def update(self, other: "GofReport") -> "GofReport":
        """Fill in the fields that ``other`` computed."""
        for name in ("ks_statistic", "ks_p_value", "chi_square", "chi_square_p_value"):
            v = getattr(other, name)
            if not np.isnan(v):
                setattr(self, name, v)
        if other.chi_square_dof:
            self.chi_square_dof = other.chi_square_dof
        self.extra.update(other.extra)
        return self

    def to_dict(self) -> dict:
        d = {
            "ks_statistic": self.ks_statistic,
            "ks_p_value": self.ks_p_value,
            "chi_square": self.chi_square,
            "chi_square_dof": self.chi_square_dof,
            "chi_square_p_value": self.chi_square_p_value,
        }
        d.update(self.extra)
        return {k: (None if isinstance(v, float) and np.isnan(v) else v) for k, v in d.items()}


def eigenphases(U, tol: float = 1e-8, with_residual: bool = True) -> EigenphaseSet:
    """Sorted eigenphases in ``[0, 2 pi)`` of a unitary matrix.

    Parameters
    ----------
    U : array_like
        Square matrix with ``max |U* U - I| < tol``.
    with_residual : bool
        Also compute eigenvectors and report ``max ||U v - lambda v||``.
        Turning this off skips the eigenvector computation.

    Raises
    ------
    NotUnitaryError
        If ``U`` fails the unitarity check.
    numpy.linalg.LinAlgError
        If the eigensolver does not converge.
    """
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise NotUnitaryError(f"need a square matrix, got shape {U.shape}")
    n = U.shape[0]
    res = np.max(np.abs(U.conj().T @ U - np.eye(n)))
    if res >= tol:
        raise NotUnitaryError(f"matrix is not unitary (residual {res:.3g})")
    if with_residual:
        lam, V = np.linalg.eig(U)
        max_res = float(np.max(np.linalg.norm(U @ V - V * lam, axis=0)))
    else:
        lam = np.linalg.eigvals(U)
        max_res = float("nan")
    theta = np.arctan2(lam.imag, lam.real)
    theta = np.where(theta < 0, theta + TWO_PI, theta)
    # arctan2 of -0.0 imaginary parts can land exactly on 2 pi
    theta = np.where(theta >= TWO_PI, theta - TWO_PI, theta)
    return EigenphaseSet(np.sort(theta), max_res)


def _phases(e):
    return e.phases if isinstance(e, EigenphaseSet) else np.sort(np.asarray(e, dtype=float))


def spacings(e) -> SpacingSample:
    """Normalised nearest-neighbour spacings ``n/(2 pi) (theta_{j+1} - theta_j)``.

    The last gap wraps around the circle, so there are ``n`` spacings and
    they sum to ``n``.
    """
    th = _phases(e)
    n = len(th)
    if n < 2:
        raise ValueError("need at least two eigenphases to form spacings")
    gaps = np.diff(np.append(th, th[0] + TWO_PI))
    return SpacingSample(n / TWO_PI * gaps)


def _from_counts(edges, counts) -> HistogramData:
    counts = np.asarray(counts, dtype=np.int64)
    total = counts.sum()
    dens = counts / (total * np.diff(edges)) if total else np.zeros(len(counts))
    return HistogramData(np.asarray(edges, dtype=float), counts, dens)


def histogram(values, bins: int, lo: float, hi: float) -> HistogramData:
    """Equal-width histogram on ``[lo, hi)``; values outside are dropped."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise ValueError("cannot histogram an empty sample")
    edges = np.linspace(lo, hi, bins + 1)
    idx = np.floor((values - lo) / (hi - lo) * bins).astype(np.int64)
    ok = (idx >= 0) & (idx < bins)
    counts = np.bincount(idx[ok], minlength=bins)
    return _from_counts(edges, counts)


def density_histogram(phases, bins: int = 60) -> HistogramData:
    """Histogram of eigenphases on ``[0, 2 pi)``, normalised to unit area."""
    return histogram(phases, bins, 0.0, TWO_PI)


def spacing_histogram(s, bins: int = 50, s_max: float = 4.0) -> HistogramData:
    """Histogram of spacings on ``[0, s_max)``.

    The density is normalised over the spacings that fall inside the range.
    """
    if isinstance(s, SpacingSample):
        s = s.s
    return histogram(s, bins, 0.0, s_max)


_SURMISE = {
    1: (np.pi / 2, 1, np.pi / 4),
    2: (32 / np.pi**2, 2, 4 / np.pi),
    4: (2**18 / (3**6 * np.pi**3), 4, 64 / (9 * np.pi)),
}


def wigner_surmise(s, beta: int):
    """Wigner surmise ``a s^beta exp(-b s^2)`` for ``beta`` in {1, 2, 4}."""
    try:
        a, k, b = _SURMISE[int(beta)]
    except KeyError:
        raise ValueError(f"beta must be 1, 2 or 4, got {beta}") from None
    s = np.asarray(s, dtype=float)
    out = a * s**k * np.exp(-b * s * s)
    return float(out) if out.ndim == 0 else out


def surmise_bin_average(edges, beta: int) -> np.ndarray:
    """Mean of the surmise over each histogram bin."""
    edges = np.asarray(edges, dtype=float)
    out = np.empty(len(edges) - 1)
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        out[i] = integrate.quad(wigner_surmise, lo, hi, args=(beta,))[0] / (hi - lo)
    return out


def sup_deviation(h: HistogramData, beta: int) -> float:
    """``max |density - surmise|`` over the bins of a spacing histogram."""
    return float(np.max(np.abs(h.density - surmise_bin_average(h.bin_edges, beta))))


def kolmogorov_sf(x: float) -> float:
    """``P(K > x)`` for the Kolmogorov distribution, via its alternating series."""
    # below 0.2 the cdf is under 1e-10 and the series converges slowly
    if x < 0.2:
        return 1.0
    total = 0.0
    k = 1
    while True:
        t = np.exp(-2.0 * k * k * x * x)
        total += t if k % 2 else -t
        if t < 1e-17:
            break
        k += 1
    return float(min(1.0, max(0.0, 2.0 * total)))


def ks_test(sample, cdf) -> GofReport:
    """One-sample Kolmogorov-Smirnov test against a continuous ``cdf``.

    The p-value uses the asymptotic distribution of ``sqrt(n) D``.
    """
    x = np.sort(np.asarray(sample, dtype=float))
    n = len(x)
    if n == 0:
        raise ValueError("ks_test needs a non-empty sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    d = float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))
    return GofReport(ks_statistic=d, ks_p_value=kolmogorov_sf(np.sqrt(n) * d))


def ks_two_sample(x, y) -> GofReport:
    """Two-sample KS test with the asymptotic p-value at ``n_eff = nm/(n+m)``."""
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    n, m = len(x), len(y)
    if n == 0 or m == 0:
        raise ValueError("ks_two_sample needs two non-empty samples")
    grid = np.concatenate([x, y])
    fx = np.searchsorted(x, grid, side="right") / n
    fy = np.searchsorted(y, grid, side="right") / m
    d = float(np.max(np.abs(fx - fy)))
    return GofReport(ks_statistic=d, ks_p_value=kolmogorov_sf(np.sqrt(n * m / (n + m)) * d))


def chi_square_uniform(h: HistogramData, min_expected: float = 5.0) -> GofReport:
    """Pearson chi-square of a histogram against equal expected counts per unit width.

    Raises ``ValueError`` if any expected count is below ``min_expected``.
    """
    counts = np.asarray(h.counts, dtype=float)
    w = h.widths
    expected = counts.sum() * w / w.sum()
    if np.any(expected < min_expected):
        raise ValueError(f"undersampled bins: smallest expected count {expected.min():.3g} < {min_expected}")
    chi = float(np.sum((counts - expected) ** 2 / expected))
    dof = len(counts) - 1
    p = float(stats.chi2.sf(chi, dof)) if dof > 0 else 1.0
    return GofReport(chi_square=chi, chi_square_dof=dof, chi_square_p_value=p)


def dedup_kramers(e, tol: float = 1e-8) -> EigenphaseSet:
    """Collapse doubly degenerate eigenphases to one per pair.

    Pairs are consecutive sorted phases; a pair may straddle ``0 = 2 pi``.

    Raises
    ------
    PairingError
        If the phases cannot be matched up within ``tol``.
    """
    th = _phases(e)
    n = len(th)
    if n % 2:
        raise PairingError(f"odd number of eigenphases ({n})")

    def gap(a, b):
        d = abs(a - b)
        return min(d, TWO_PI - d)

    for shift in (0, 1):
        rolled = np.roll(th, -shift)
        a, b = rolled[0::2], rolled[1::2]
        gaps = np.array([gap(x, y) for x, y in zip(a, b)])
        if np.all(gaps <= tol):
            kept = np.sort(np.mod(a, TWO_PI))
            res = e.max_residual if isinstance(e, EigenphaseSet) else 0.0
            return EigenphaseSet(kept, res)
    raise PairingError(f"eigenphases do not pair up within tol={tol}")
