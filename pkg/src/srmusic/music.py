"""Single-snapshot MUSIC: noise-space correlation, imaging function, peak extraction.

The estimator Hankelizes the measurements, splits the left singular
subspace at rank S, scans the imaging function J = 1/R on a uniform grid,
and returns the S largest circular local maxima, optionally polished by
golden-section search. A perturbation report compares the observed
sup-norm change of R against the Wedin-type bound.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from srmusic.fourier import hankel, svd_split
from srmusic.torus import SupportSet

# (sqrt(5)-1)/2; 40 golden-section steps shrink a bracket by ~4e-9.
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
REFINE_ITERS = 40

DEFAULT_GRID_FACTOR = 16
MIN_GRID_FACTOR = 8


class UnderdeterminedPeaksError(RuntimeError):
    """The imaging function has fewer local maxima than sources requested."""

    def __init__(self, found: int, wanted: int):
        super().__init__(
            f"found {found} local maxima on the grid, need {wanted}"
        )
        self.found = found
        self.wanted = wanted


@dataclass(frozen=True)
class ImagingGrid:
    """Noise-space correlation and imaging function sampled on {k/N}."""

    resolution: int
    values_R: np.ndarray
    values_J: np.ndarray

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.resolution) / self.resolution

    def save_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["omega", "R", "J"])
            for w, r, j in zip(self.nodes, self.values_R, self.values_J):
                writer.writerow([repr(float(w)), repr(float(r)), repr(float(j))])


@dataclass(frozen=True)
class MusicEstimate:
    """Recovered support: the S largest local maxima of the imaging function."""

    recovered: SupportSet
    peak_values: tuple[float, ...]
    grid: ImagingGrid
    refined: bool

    def save_json(self, path) -> None:
        Path(path).write_text(
            json.dumps(
                {
                    "points": list(self.recovered.points),
                    "peak_values": list(self.peak_values),
                    "refined": self.refined,
                },
                indent=2,
            )
            + "\n"
        )


@dataclass(frozen=True)
class PerturbationReport:
    """Ingredients and verdict of the Wedin-type stability bound.

    precondition_ok is exactly 2*hankel_noise_norm < x_min * sigma_min_L *
    sigma_min_ML; the bound value is reported either way. sup_norm_diff is
    a grid approximation of the true sup and is NaN when not measured.
    """

    sup_norm_diff: float
    wedin_bound: float
    precondition_ok: bool
    hankel_noise_norm: float
    sigma_min_L: float
    sigma_min_ML: float
    x_min: float


def noise_correlation(W: np.ndarray, omega) -> float | np.ndarray:
    """Normalized projection of the steering vector onto the noise space.

    ||W* phi_L(omega)|| / sqrt(L+1), in [0, 1]. Zero exactly on the true
    support in the noiseless case. Accepts a scalar or an array of
    positions.
    """
    scalar = np.isscalar(omega)
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    rows = W.shape[0]
    phi = np.exp(-2j * np.pi * np.outer(np.arange(rows), om))
    vals = np.linalg.norm(W.conj().T @ phi, axis=0) / math.sqrt(rows)
    vals = np.minimum(vals, 1.0)
    return float(vals[0]) if scalar else vals


def imaging_function(W: np.ndarray, omega) -> float | np.ndarray:
    """Reciprocal of the noise-space correlation; +inf where it vanishes."""
    r = noise_correlation(W, omega)
    with np.errstate(divide="ignore"):
        return np.where(r == 0.0, np.inf, 1.0 / r) if isinstance(r, np.ndarray) else (
            math.inf if r == 0.0 else 1.0 / r
        )


def _circular_local_maxima(values: np.ndarray) -> list[tuple[int, int]]:
    """Index ranges (start, length) of circular local maxima, plateau aware.

    A run of equal values counts as a single maximum when both neighboring
    runs are strictly lower. A constant array has no maxima.
    """
    n = len(values)
    change = np.nonzero(values != np.roll(values, 1))[0]
    if len(change) == 0:
        return []
    starts = change
    maxima = []
    k = len(starts)
    for i in range(k):
        start = starts[i]
        nxt = starts[(i + 1) % k]
        length = (nxt - start) % n
        if length == 0:
            length = n
        prev_val = values[(start - 1) % n]
        next_val = values[nxt]
        v = values[start]
        if v > prev_val and v > next_val:
            maxima.append((int(start), int(length)))
    return maxima


def music_estimate(
    y: np.ndarray,
    S: int,
    L: int | None = None,
    N: int | None = None,
    refine: bool = False,
) -> MusicEstimate:
    """Run MUSIC on a single snapshot of M+1 Fourier measurements.

    L defaults to floor(M/2); the grid resolution N defaults to 16*M and
    must be at least 8*M so grid maxima track the true peaks. With refine,
    each peak is polished by golden-section search on its bracketing
    interval. Raises UnderdeterminedPeaksError when the grid shows fewer
    than S maxima.
    """
    y = np.asarray(y, dtype=complex)
    M = len(y) - 1
    if L is None:
        L = M // 2
    if N is None:
        N = DEFAULT_GRID_FACTOR * M
    if S < 1:
        raise ValueError("S must be at least 1")
    if not (S <= L <= M + 1 - S):
        raise ValueError(f"need S <= L <= M+1-S, got S={S}, L={L}, M={M}")
    if N < MIN_GRID_FACTOR * M:
        raise ValueError(f"grid resolution {N} below {MIN_GRID_FACTOR}*M = {MIN_GRID_FACTOR * M}")

    split = svd_split(hankel(y, L), S)
    W = split.noise_space
    nodes = np.arange(N) / N
    values_r = np.asarray(noise_correlation(W, nodes))
    with np.errstate(divide="ignore"):
        values_j = np.where(values_r == 0.0, np.inf, 1.0 / values_r)
    grid = ImagingGrid(resolution=N, values_R=values_r, values_J=values_j)

    runs = _circular_local_maxima(values_j)
    if len(runs) < S:
        raise UnderdeterminedPeaksError(found=len(runs), wanted=S)

    peaks = []
    for start, length in runs:
        mid = (start + (length - 1) // 2) % N
        peaks.append((start, length, mid, values_j[mid]))
    # Largest peaks first; ties broken toward smaller omega.
    peaks.sort(key=lambda p: (-p[3], p[2]))
    chosen = peaks[:S]

    positions = []
    peak_values = []
    for start, length, mid, val in chosen:
        if refine:
            lo = (start - 1) / N
            hi = (start + length) / N
            w = _refine_peak(W, lo, hi)
            positions.append(w % 1.0)
            peak_values.append(float(imaging_function(W, w % 1.0)))
        else:
            positions.append(mid / N)
            peak_values.append(float(val))

    order = np.argsort(positions)
    return MusicEstimate(
        recovered=SupportSet([positions[i] for i in order]),
        peak_values=tuple(peak_values[i] for i in order),
        grid=grid,
        refined=refine,
    )


def _refine_peak(W: np.ndarray, lo: float, hi: float) -> float:
    """Golden-section maximization of J (= minimization of R) on [lo, hi].

    Works in unwrapped coordinates, so a bracket may straddle the 0/1 cut.
    """
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = noise_correlation(W, c % 1.0)
    fd = noise_correlation(W, d % 1.0)
    for _ in range(REFINE_ITERS):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = noise_correlation(W, c % 1.0)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = noise_correlation(W, d % 1.0)
    return (a + b) / 2.0


def correlation_sup_diff(
    W_clean: np.ndarray, W_noisy: np.ndarray, N: int
) -> float:
    """Grid approximation of sup |R_noisy - R_clean| over the torus.

    Evaluated on the N uniform nodes; the true sup can only be larger by
    the grid discretization error.
    """
    if W_clean.shape[0] != W_noisy.shape[0]:
        raise ValueError(
            f"noise spaces live in different dimensions: "
            f"{W_clean.shape[0]} vs {W_noisy.shape[0]}"
        )
    nodes = np.arange(N) / N
    r_clean = np.asarray(noise_correlation(W_clean, nodes))
    r_noisy = np.asarray(noise_correlation(W_noisy, nodes))
    return float(np.max(np.abs(r_noisy - r_clean)))


def wedin_bound(
    hankel_noise_norm: float,
    x_min: float,
    sigma_min_L: float,
    sigma_min_ML: float,
    sup_norm_diff: float = math.nan,
) -> PerturbationReport:
    """Wedin-type bound 2||H(eta)|| / (x_min sigma_min(Phi_L) sigma_min(Phi_{M-L})).

    The precondition is that the bound value is below 1 in the sense
    2||H(eta)|| < x_min * sigma_min_L * sigma_min_ML; when it fails the
    bound is still reported, flagged as outside its validity regime.
    """
    if x_min <= 0 or sigma_min_L <= 0 or sigma_min_ML <= 0:
        raise ValueError("x_min and the sigma_min factors must be positive")
    if hankel_noise_norm < 0:
        raise ValueError("hankel_noise_norm must be nonnegative")
    denom = x_min * sigma_min_L * sigma_min_ML
    return PerturbationReport(
        sup_norm_diff=sup_norm_diff,
        wedin_bound=2.0 * hankel_noise_norm / denom,
        precondition_ok=2.0 * hankel_noise_norm < denom,
        hankel_noise_norm=hankel_noise_norm,
        sigma_min_L=sigma_min_L,
        sigma_min_ML=sigma_min_ML,
        x_min=x_min,
    )


def match_supports(truth: SupportSet, estimate: SupportSet) -> float:
    """Minimax matching error between two equal-size supports.

    Minimizes the largest pairwise torus distance over bijections. For
    circularly sorted sets the optimal bijection is order preserving, so
    only the S cyclic alignments are searched.
    """
    if truth.size != estimate.size:
        raise ValueError(
            f"cardinality mismatch: {truth.size} vs {estimate.size}"
        )
    t = truth.as_array()
    e = estimate.as_array()
    S = len(t)
    best = math.inf
    for k in range(S):
        d = np.abs(t - np.roll(e, -k))
        cost = float(np.max(np.minimum(d, 1.0 - d)))
        if cost < best:
            best = cost
    return best


def save_measurements(y: np.ndarray, path) -> None:
    """Write measurements as rows of (index, re, im); format by extension."""
    y = np.asarray(y, dtype=complex)
    path = Path(path)
    rows = [[i, float(v.real), float(v.imag)] for i, v in enumerate(y)]
    if path.suffix == ".json":
        path.write_text(json.dumps(rows) + "\n")
    else:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "re", "im"])
            for i, re, im in rows:
                writer.writerow([i, repr(re), repr(im)])


def load_measurements(path) -> np.ndarray:
    """Read measurements written by save_measurements (CSV or JSON)."""
    path = Path(path)
    if path.suffix == ".json":
        rows = json.loads(path.read_text())
    else:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [[int(r[0]), float(r[1]), float(r[2])] for r in reader]
    rows = sorted(rows, key=lambda r: r[0])
    indices = [int(r[0]) for r in rows]
    if indices != list(range(len(rows))):
        raise ValueError("measurement indices must be 0..M without gaps")
    return np.array([complex(r[1], r[2]) for r in rows])
