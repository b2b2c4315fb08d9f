"""
The least-squares building blocks shared by the receivers: the combined
channel update (pseudo-inverse and inverse-free), the symbol update
(pseudo-inverse and inverse-free) and the pilot-based ambiguity removal.

None of the (F kron I_M) products are formed; they are applied through the
M x KT matrix view [Y_1, ..., Y_K] of the received signal, in which the
combined channel appears as the M x NL matrix whose column nL + l is block l
of theta column n.
"""

import typing

import numpy as np

import constants
from subsystems.framesubsystem import FrameDesign, buildZ
from util.convenientmath import frobeniusSquared, pinvWithRank, unvec
from util.simerrors import (
    DegenerateInputError,
    DimensionError,
    EstimationSingularError,
    StructureError,
)


def buildF(X: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """
    F(X) = (I_K kron X^T) Z, KT x NL, one T x NL block per sub-frame
    """
    L = X.shape[0]
    if Z.shape[0] % L != 0:
        raise DimensionError(f"Z has {Z.shape[0]} rows, not a multiple of L={L}")
    K = Z.shape[0] // L
    return np.vstack([X.T @ Z[k * L : (k + 1) * L] for k in range(K)])


def _checkRank(rank: int, required: int) -> None:
    if rank < required:
        raise EstimationSingularError(rank, required)


def _thetaFromMatrixView(thetaMatrix: np.ndarray, L: int) -> np.ndarray:
    M, NL = thetaMatrix.shape
    return np.reshape(thetaMatrix, (L * M, NL // L), order="F")


def estimateTheta(y3: np.ndarray, F: np.ndarray, M: int, L: int) -> np.ndarray:
    """
    LS combined channel, unvec_{LM x N}((pinv(F) kron I_M) y3)
    """
    KT, NL = F.shape
    if y3.size != KT * M:
        raise DimensionError(f"y3 has {y3.size} entries, F implies {KT * M}")
    if NL % L != 0:
        raise DimensionError(f"F has {NL} columns, not a multiple of L={L}")
    inverse, rank = pinvWithRank(F)
    _checkRank(rank, NL)
    return _thetaFromMatrixView(unvec(y3, M, KT) @ inverse.T, L)


def _requireSemiUnitary(design: FrameDesign) -> None:
    if not design.semiUnitary:
        raise StructureError(
            f"inverse-free updates need K >= LN, got K={design.K} "
            f"with LN={design.L * design.N}"
        )


def symbolRowEnergies(X: np.ndarray) -> np.ndarray:
    energies = np.sum(np.abs(X) ** 2, axis=1)
    for row, energy in enumerate(energies):
        if energy == 0:
            raise DegenerateInputError(f"symbol row {row} is zero", row)
    return energies


def fastEstimateTheta(
    y3: np.ndarray,
    X: np.ndarray,
    design: FrameDesign,
    M: int,
    Z: typing.Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Inverse-free combined channel update, (1/K) unvec((diag(zeta) F^H kron I_M) y3)
    with zeta = 1_N kron [1/|x_1|^2, ..., 1/|x_L|^2]. Matches estimateTheta
    exactly when the frames are DFT designed with K >= LN.
    """
    _requireSemiUnitary(design)
    F = buildF(X, buildZ(design) if Z is None else Z)
    KT = F.shape[0]
    if y3.size != KT * M:
        raise DimensionError(f"y3 has {y3.size} entries, F implies {KT * M}")
    zeta = np.tile(1.0 / symbolRowEnergies(X), design.N)
    thetaMatrix = (unvec(y3, M, KT) @ F.conj()) * zeta / design.K
    return _thetaFromMatrixView(thetaMatrix, design.L)


def buildE(theta: np.ndarray, design: FrameDesign) -> np.ndarray:
    """
    E(theta), KM x L, block k is unvec_{M x L}(theta psi_k) diag(lambda_k)
    """
    LM, N = theta.shape
    if N != design.N or LM % design.L != 0:
        raise DimensionError(
            f"theta is {theta.shape}, design has N={design.N} L={design.L}"
        )
    M = LM // design.L
    combined = theta @ design.Psi.T
    return np.vstack(
        [unvec(combined[:, k], M, design.L) * design.Lambda[k] for k in range(design.K)]
    )


def buildEFromChannels(G: np.ndarray, H: np.ndarray, design: FrameDesign) -> np.ndarray:
    """
    E(G, H), block k is H diag(psi_k) G diag(lambda_k)
    """
    if G.shape != (design.N, design.L) or H.shape[1] != design.N:
        raise DimensionError(
            f"G is {G.shape}, H is {H.shape}, design has N={design.N} L={design.L}"
        )
    return np.vstack(
        [(H * design.Psi[k]) @ (G * design.Lambda[k]) for k in range(design.K)]
    )


def estimateX(y2t: np.ndarray, E: np.ndarray) -> np.ndarray:
    if y2t.shape[0] != E.shape[0]:
        raise DimensionError(f"y2t is {y2t.shape}, E is {E.shape}")
    inverse, rank = pinvWithRank(E)
    _checkRank(rank, E.shape[1])
    return inverse @ y2t


def remapPhi(theta: np.ndarray, M: int, N: int, L: int) -> np.ndarray:
    """
    L x NM rearrangement with entry (l, nM + m) = theta[lM + m, n]
    """
    return np.reshape(
        np.transpose(np.reshape(theta, (L, M, N)), (0, 2, 1)), (L, N * M)
    )


def fastEstimateX(
    y2t: np.ndarray, theta: np.ndarray, design: FrameDesign
) -> np.ndarray:
    """
    Inverse-free symbol update, (1/K) diag(xi) E(theta)^H y2t with
    xi_l = 1 / |row l of remapPhi(theta)|^2
    """
    _requireSemiUnitary(design)
    E = buildE(theta, design)
    if y2t.shape[0] != E.shape[0]:
        raise DimensionError(f"y2t is {y2t.shape}, E is {E.shape}")
    L = design.L
    M = theta.shape[0] // L
    rowEnergies = np.sum(np.abs(remapPhi(theta, M, design.N, L)) ** 2, axis=1)
    for row, energy in enumerate(rowEnergies):
        if energy == 0:
            raise DegenerateInputError(f"combined channel row {row} is zero", row)
    return (E.conj().T @ y2t) / rowEnergies.reshape(L, 1) / design.K


def removeAmbiguity(
    thetaHat: np.ndarray, Xhat: np.ndarray, M: int
) -> typing.Tuple[np.ndarray, np.ndarray]:
    """
    Use the known pilot column to undo the diagonal scaling shared by the
    estimates: theta <- (D kron I_M) theta, X <- D^-1 X with D = diag(Xhat[:, 0])
    """
    pilot = Xhat[:, constants.kPilotColumn] / constants.kPilotValue
    for row, value in enumerate(pilot):
        if abs(value) < constants.kPilotTolerance:
            raise DegenerateInputError(
                f"pilot estimate {row} is too small to rescale ({abs(value):.3g})", row
            )
    return np.repeat(pilot, M).reshape(-1, 1) * thetaHat, Xhat / pilot.reshape(-1, 1)


def reconstructionResidual(y2t: np.ndarray, E: np.ndarray, X: np.ndarray) -> float:
    """
    |Y_(2)^T - E X|^2, equal to |y3 - (F(X) kron I_M) vec(theta)|^2
    """
    return frobeniusSquared(y2t - E @ X)


def checkSymbolSystem(E: np.ndarray) -> None:
    """
    Raise when E has nearly dependent columns, judged against its largest
    singular value
    """
    singular = np.linalg.svd(E, compute_uv=False)
    usable = int(
        np.count_nonzero(
            singular**2 > constants.kStartConditionTolerance * singular[0] ** 2
        )
    )
    _checkRank(usable, E.shape[1])
