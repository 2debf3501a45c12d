"""Fourier/Vandermonde matrices, steering vectors, Hankel matrices, SVD splits.

All spectral quantities come from full dense SVDs; at desk scale (M up to a
few thousand) this is affordable and removes approximation error from the
bound checks.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from srmusic.torus import SupportSet

# Orthonormality / factorization / numerical-rank tolerances.
TAU_ORTH = 1e-10
TAU_FAC = 1e-10
TAU_RANK = 1e-8


@dataclass(frozen=True)
class FourierMatrix:
    """(M+1) x S matrix with entries exp(-2*pi*i*m*omega_j), m = 0..M."""

    entries: np.ndarray
    nodes: SupportSet
    M: int

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


@dataclass(frozen=True)
class HankelMatrix:
    """(L+1) x (M-L+1) matrix with constant anti-diagonals y[i+j]."""

    entries: np.ndarray
    L: int
    source_length: int

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


@dataclass(frozen=True)
class HankelSvd:
    """SVD of a Hankel matrix split into signal and noise left subspaces.

    signal_space has the top-S left singular vectors, noise_space the
    remaining L+1-S; together they form a unitary basis of C^(L+1).
    singular_values holds the full set, nonincreasing.
    """

    signal_space: np.ndarray
    noise_space: np.ndarray
    singular_values: np.ndarray


def vandermonde(omega: SupportSet, M: int) -> FourierMatrix:
    """Fourier matrix of the first M+1 samples of unit masses at omega."""
    if M < 1:
        raise ValueError("M must be a positive integer")
    if omega.size > M + 1:
        warnings.warn(
            f"more nodes ({omega.size}) than rows ({M + 1}); matrix is rank deficient",
            stacklevel=2,
        )
    entries = np.exp(-2j * np.pi * np.outer(np.arange(M + 1), omega.as_array()))
    return FourierMatrix(entries=entries, nodes=omega, M=M)


def steering_vector(omega: float, L: int) -> np.ndarray:
    """Column (1, e^{-2*pi*i*omega}, ..., e^{-2*pi*i*L*omega}), norm sqrt(L+1)."""
    if L < 0:
        raise ValueError("L must be nonnegative")
    return np.exp(-2j * np.pi * np.arange(L + 1) * omega)


def hankel(y: np.ndarray, L: int) -> HankelMatrix:
    """Hankel matrix of a measurement vector y of length M+1."""
    y = np.asarray(y)
    M = len(y) - 1
    if not (0 <= L <= M):
        raise ValueError(f"L = {L} outside [0, {M}] for {M + 1} measurements")
    entries = scipy.linalg.hankel(y[: L + 1], y[L:])
    return HankelMatrix(entries=entries, L=L, source_length=M + 1)


def svd_split(H: HankelMatrix, S: int) -> HankelSvd:
    """Full SVD of a Hankel matrix, left subspace split at rank S."""
    L = H.L
    rows, cols = H.entries.shape
    if not (0 <= S <= min(rows, cols)):
        raise ValueError(f"S = {S} must lie in [0, min({rows}, {cols})]")
    if S > L:
        raise ValueError(f"S = {S} leaves no noise space for L = {L}")
    try:
        u, s, _ = np.linalg.svd(H.entries, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"SVD failed on a {rows}x{cols} Hankel matrix: {exc}"
        ) from exc
    return HankelSvd(
        signal_space=u[:, :S],
        noise_space=u[:, S:],
        singular_values=s,
    )


def _singular_values(matrix) -> np.ndarray:
    a = np.asarray(matrix)
    if a.size == 0:
        raise ValueError("matrix is empty")
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"SVD failed on a {a.shape} matrix: {exc}") from exc


def sigma_min(matrix) -> float:
    """Smallest singular value."""
    return float(_singular_values(matrix).min())


def sigma_max(matrix) -> float:
    """Largest singular value."""
    return float(_singular_values(matrix).max())


def spectral_norm(matrix) -> float:
    """Operator 2-norm, identical to sigma_max."""
    return sigma_max(matrix)


def save_matrix_txt(matrix, path) -> None:
    """Write a complex matrix as text: a dims header, then one re,im per line.

    Entries are row-major; floats use repr so a round trip is exact.
    """
    a = np.asarray(matrix, dtype=complex)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    for v in a.ravel():
        lines.append(f"{float(v.real)!r},{float(v.imag)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_matrix_txt(path) -> np.ndarray:
    """Read a matrix written by save_matrix_txt."""
    lines = Path(path).read_text().splitlines()
    rows, cols = (int(t) for t in lines[0].split())
    vals = np.empty(rows * cols, dtype=complex)
    for k, line in enumerate(lines[1 : 1 + rows * cols]):
        re_s, im_s = line.split(",")
        vals[k] = complex(float(re_s), float(im_s))
    return vals.reshape(rows, cols)
