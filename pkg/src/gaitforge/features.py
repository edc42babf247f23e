"""Empirical mode decomposition and the statistical feature set.

Sifting peels a signal into intrinsic mode functions: each IMF oscillates
about zero (its upper/lower envelope midline is near zero and its extremum
and zero-crossing counts differ by at most one), and the decomposition
reconstructs the input exactly as IMFs plus a slow residue. Six scalar
features summarize a signal or IMF for classification; box-plot quartile
statistics describe its distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .capture import TimeSeries

MAX_SIFTS = 100
SIFT_SD_TOL = 0.05           # Cauchy criterion between consecutive sifts
LOG_ENERGY_FLOOR = 1e-300    # squared samples below this contribute log(floor)


@dataclass(frozen=True)
class IMF:
    """One intrinsic mode function, on the parent signal's grid."""

    values: np.ndarray
    index: int


def _as_array(signal) -> np.ndarray:
    if isinstance(signal, TimeSeries):
        return np.asarray(signal.values, dtype=float)
    return np.asarray(signal, dtype=float)


def local_maxima(x: np.ndarray) -> np.ndarray:
    """Indices of strict interior maxima."""
    return np.nonzero((x[1:-1] > x[:-2]) & (x[1:-1] > x[2:]))[0] + 1


def local_minima(x: np.ndarray) -> np.ndarray:
    return np.nonzero((x[1:-1] < x[:-2]) & (x[1:-1] < x[2:]))[0] + 1


def count_extrema(x: np.ndarray) -> int:
    return len(local_maxima(x)) + len(local_minima(x))


def count_zero_crossings(x: np.ndarray) -> int:
    return int(np.count_nonzero(x[1:] * x[:-1] < 0))


def _mirrored_spline(idx: np.ndarray, vals: np.ndarray, n: int) -> np.ndarray:
    """Natural cubic spline through the extrema, with up to two extrema
    mirrored across each end so the envelope does not sag at the borders."""
    t = idx.astype(float)
    v = vals
    k = min(2, len(idx))
    left_t = 2 * 0.0 - t[:k][::-1]
    left_v = v[:k][::-1]
    right_t = 2 * float(n - 1) - t[-k:][::-1]
    right_v = v[-k:][::-1]
    tt = np.concatenate([left_t, t, right_t])
    vv = np.concatenate([left_v, v, right_v])
    tt, keep = np.unique(tt, return_index=True)
    vv = vv[keep]
    if len(tt) < 2:
        return np.full(n, vv[0])
    spline = CubicSpline(tt, vv, bc_type="natural")
    return spline(np.arange(n, dtype=float))


def envelope_mean(x: np.ndarray) -> np.ndarray | None:
    """Midline of the upper/lower extremum envelopes, or None when the
    signal has too few extrema on either side to sift further."""
    maxima = local_maxima(x)
    minima = local_minima(x)
    if len(maxima) < 1 or len(minima) < 1:
        return None
    n = len(x)
    upper = _mirrored_spline(maxima, x[maxima], n)
    lower = _mirrored_spline(minima, x[minima], n)
    return (upper + lower) / 2.0


def _is_imf_candidate(h: np.ndarray) -> bool:
    return abs(count_extrema(h) - count_zero_crossings(h)) <= 1


def _sift(x: np.ndarray) -> np.ndarray | None:
    """Extract one IMF from x.

    Returns None when x has no oscillation left or when the sift budget runs
    out before the mode passes the IMF checks; an unconverged mode stays in
    the residue rather than being emitted as a false IMF.
    """
    h = x
    for _ in range(MAX_SIFTS):
        mean = envelope_mean(h)
        if mean is None:
            return None
        h_next = h - mean
        denom = float(np.sum(h * h))
        sd = float(np.sum((h - h_next) ** 2)) / denom if denom > 0 else 0.0
        h = h_next
        if _is_imf_candidate(h) and sd < SIFT_SD_TOL:
            return h
    return None


def emd_decompose(signal, max_imfs: int = 10) -> tuple[list[IMF], np.ndarray]:
    """Decompose a signal into IMFs plus a residue.

    Extraction stops when the residue is monotone (fewer than two interior
    extrema) or ``max_imfs`` is reached. A monotone input simply comes back
    as the residue with no IMFs. The parts always sum back to the input.
    """
    x = _as_array(signal)
    if len(x) < 4:
        raise ValueError("need at least 4 samples to decompose")
    residue = x.copy()
    imfs: list[IMF] = []
    while len(imfs) < max_imfs:
        if count_extrema(residue) < 2:
            break
        imf_values = _sift(residue)
        if imf_values is None:
            break
        imfs.append(IMF(values=imf_values, index=len(imfs)))
        residue = residue - imf_values
    return imfs, residue


@dataclass(frozen=True)
class FeatureVector:
    """The six statistical features used for push/gait classification."""

    min: float
    max: float
    shannon_entropy: float  # bits
    log_energy: float
    rms: float
    zcr: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.min, self.max, self.shannon_entropy,
             self.log_energy, self.rms, self.zcr]
        )

    NAMES = ("min", "max", "shannon_entropy", "log_energy", "rms", "zcr")


def shannon_entropy(values, bins: int = 16) -> float:
    """Entropy (bits) of an equal-width histogram over [min, max].

    A point mass lands in a single bin and scores 0; a uniform spread over
    all bins scores log2(bins).
    """
    x = _as_array(values)
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        return 0.0
    counts, _ = np.histogram(x, bins=bins, range=(lo, hi))
    p = counts[counts > 0] / len(x)
    return float(-np.sum(p * np.log2(p)))


def log_energy(values) -> float:
    """Sum of log of squared samples, floored so zeros stay finite."""
    x = _as_array(values)
    sq = np.maximum(x * x, LOG_ENERGY_FLOOR)
    return float(np.sum(np.log(sq)))


def rms(values) -> float:
    x = _as_array(values)
    return float(np.sqrt(np.mean(x * x)))


def zero_crossing_rate(values) -> float:
    """Fraction of adjacent sample pairs with opposite signs.

    Exact zeros do not count as crossings; the divisor is T - 1.
    """
    x = _as_array(values)
    if len(x) < 2:
        return 0.0
    return count_zero_crossings(x) / (len(x) - 1)


def feature_vector(signal, bins: int = 16) -> FeatureVector:
    """All six features of a signal or IMF."""
    x = _as_array(signal)
    if len(x) == 0:
        raise ValueError("empty signal")
    return FeatureVector(
        min=float(x.min()),
        max=float(x.max()),
        shannon_entropy=shannon_entropy(x, bins=bins),
        log_energy=log_energy(x),
        rms=rms(x),
        zcr=zero_crossing_rate(x),
    )


@dataclass(frozen=True)
class BoxStats:
    """Box-plot quartile statistics with outlier fences."""

    q1: float
    q2: float
    q3: float
    iqr: float
    outliers: tuple[int, ...]            # beyond 3 * IQR fences
    suspected_outliers: tuple[int, ...]  # beyond 1.5 * IQR fences


def _median(sorted_vals: np.ndarray) -> float:
    n = len(sorted_vals)
    mid = n // 2
    if n % 2:
        return float(sorted_vals[mid])
    return float((sorted_vals[mid - 1] + sorted_vals[mid]) / 2.0)


def quartile_stats(values) -> BoxStats:
    """Quartiles by median-of-halves (the odd middle element belongs to
    neither half), with samples beyond the 3x / 1.5x IQR fences listed as
    outliers and suspected outliers."""
    x = _as_array(values)
    n = len(x)
    if n < 4:
        raise ValueError("need at least 4 samples")
    s = np.sort(x)
    q2 = _median(s)
    half = n // 2
    q1 = _median(s[:half])
    q3 = _median(s[n - half:])
    iqr = q3 - q1
    out, suspect = [], []
    for i, v in enumerate(x):
        if v < q1 - 3.0 * iqr or v > q3 + 3.0 * iqr:
            out.append(i)
        if v < q1 - 1.5 * iqr or v > q3 + 1.5 * iqr:
            suspect.append(i)
    return BoxStats(
        q1=q1, q2=q2, q3=q3, iqr=iqr,
        outliers=tuple(out), suspected_outliers=tuple(suspect),
    )


def write_feature_matrix_csv(path, rows: Sequence[tuple]) -> None:
    """Feature matrix: one row per (subject, joint, imf-index).

    Each row is (subject, joint, imf_index, FeatureVector, label).
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("subject,joint,imf_index," + ",".join(FeatureVector.NAMES) + ",label\n")
        for subject, joint, imf_index, fv, label in rows:
            feats = ",".join(f"{v:.6f}" for v in fv.as_array())
            fh.write(f"{subject},{joint},{imf_index},{feats},{label}\n")
