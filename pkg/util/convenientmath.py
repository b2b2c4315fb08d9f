from dataclasses import dataclass
import typing

import numpy as np
import scipy.linalg

import constants
from util.simerrors import DegenerateInputError, DimensionError, StructureError


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.atleast_2d(a), np.atleast_2d(b))


def khatriRao(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Column-wise Kronecker product: column j is kron(a[:, j], b[:, j])
    """
    try:
        return scipy.linalg.khatri_rao(np.atleast_2d(a), np.atleast_2d(b))
    except ValueError as error:
        raise DimensionError(
            f"khatriRao needs equal column counts, got {np.shape(a)} and {np.shape(b)}"
        ) from error


def permutedKron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    [a kron b_1, ..., a kron b_J], a column permutation of kron(a, b)
    """
    b = np.atleast_2d(b)
    return np.hstack([kron(a, b[:, [j]]) for j in range(b.shape[1])])


def vec(a: np.ndarray) -> np.ndarray:
    return np.reshape(a, -1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    if rows * cols != np.size(v):
        raise DimensionError(f"cannot unvec {np.size(v)} entries into {rows}x{cols}")
    return np.reshape(v, (rows, cols), order="F")


def diagOf(v: np.ndarray) -> np.ndarray:
    return np.diag(np.ravel(v))


def vecd(d: np.ndarray) -> np.ndarray:
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise StructureError(f"vecd needs a square matrix, got {d.shape}")
    offDiagonal = d - np.diag(np.diag(d))
    if offDiagonal.size and np.max(np.abs(offDiagonal)) >= constants.kDiagonalTolerance:
        raise StructureError("vecd needs a diagonal matrix")
    return np.diag(d).copy()


def pinvWithRank(a: np.ndarray) -> typing.Tuple[np.ndarray, int]:
    """
    Moore-Penrose pseudo-inverse together with the numerical rank, using the
    cutoff max(rows, cols) * sigma_max * eps
    """
    inverse, rank = scipy.linalg.pinv(a, return_rank=True)
    return inverse, int(rank)


def pinv(a: np.ndarray) -> np.ndarray:
    return pinvWithRank(a)[0]


def numericalRank(a: np.ndarray) -> int:
    return pinvWithRank(a)[1]


@dataclass(frozen=True)
class Rank1Factorization:
    u: np.ndarray
    sigma: float
    v: np.ndarray

    def matrix(self) -> np.ndarray:
        return self.sigma * np.outer(self.u, self.v.conj())


def rank1TruncatedSvd(a: np.ndarray) -> Rank1Factorization:
    """
    Dominant singular triplet of a. The first entry of u that is not
    negligible is made real and nonnegative, with v rotated to match.
    """
    a = np.atleast_2d(a)
    if not np.any(a):
        raise DegenerateInputError("rank-one approximation of a zero matrix")

    leftVectors, singularValues, rightVectorsH = np.linalg.svd(
        a, full_matrices=False
    )
    u = leftVectors[:, 0]
    v = rightVectorsH[0, :].conj()

    magnitudes = np.abs(u)
    reference = int(
        np.argmax(magnitudes > constants.kPhaseReferenceTolerance * magnitudes.max())
    )
    rotation = np.conj(u[reference]) / magnitudes[reference]
    u = u * rotation
    v = v * rotation
    u[reference] = magnitudes[reference]

    return Rank1Factorization(u, float(singularValues[0]), v)


def frobeniusSquared(a: np.ndarray) -> float:
    return float(np.vdot(a, a).real)
