import math
import typing

import numpy as np

from subsystems.channelsubsystem import combine
from util.convenientmath import rank1TruncatedSvd, unvec
from util.simerrors import DegenerateInputError, DimensionError


def krfDecouple(
    thetaHat: np.ndarray, M: int, L: int, N: int
) -> typing.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Split each combined channel column into its UT -> RIS and RIS -> BS
    factors with a rank-one approximation of unvec_{M x L}(theta_n).

    Returns (Ghat N x L, Hhat M x N, Ghat^T khatri-rao Hhat)
    """
    if thetaHat.shape != (L * M, N):
        raise DimensionError(f"theta is {thetaHat.shape}, expected {(L * M, N)}")

    Ghat = np.empty((N, L), dtype=complex)
    Hhat = np.empty((M, N), dtype=complex)
    for n in range(N):
        omega = unvec(thetaHat[:, n], M, L)
        if not np.any(omega):
            raise DegenerateInputError(f"combined channel column {n} is zero", n)
        factors = rank1TruncatedSvd(omega)
        scale = math.sqrt(factors.sigma)
        Ghat[n] = scale * factors.v.conj()
        Hhat[:, n] = scale * factors.u

    return Ghat, Hhat, combine(Ghat, Hhat)
