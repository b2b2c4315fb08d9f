"""
Trilinear alternating least squares: estimates H, G and X directly, one
least-squares problem each per iteration.
"""

import typing

import numpy as np

import constants
from physics import Unfoldings
from receivers import costmodel
from receivers.leastsquares import (
    buildEFromChannels,
    checkSymbolSystem,
    estimateX,
    reconstructionResidual,
)
from receivers.receiver import (
    BalsOptions,
    Receiver,
    ReceiverReport,
    hasConverged,
    initialSymbols,
    withRestarts,
)
from subsystems.channelsubsystem import combine, complexGaussian
from subsystems.framesubsystem import FrameDesign, SymbolFrame
from systemconfig import SystemConfig
from util.convenientmath import frobeniusSquared, kron, pinvWithRank, unvec
from util.simerrors import DegenerateInputError, EstimationSingularError


def buildHSystem(G: np.ndarray, X: np.ndarray, design: FrameDesign) -> np.ndarray:
    """
    N x KT, [diag(psi_1) G diag(lambda_1) X, ..., diag(psi_K) G diag(lambda_K) X]
    so that [Y_1, ..., Y_K] = H . system
    """
    return np.hstack(
        [
            (design.Psi[k].reshape(-1, 1) * G * design.Lambda[k]) @ X
            for k in range(design.K)
        ]
    )


def buildGSystem(H: np.ndarray, X: np.ndarray, design: FrameDesign) -> np.ndarray:
    """
    KTM x NL, block k is (diag(lambda_k) X)^T kron H diag(psi_k) so that
    y3 = system . vec(G)
    """
    return np.vstack(
        [
            kron((design.Lambda[k].reshape(-1, 1) * X).T, H * design.Psi[k])
            for k in range(design.K)
        ]
    )


def estimateH(
    unf: Unfoldings, G: np.ndarray, X: np.ndarray, design: FrameDesign
) -> np.ndarray:
    system = buildHSystem(G, X, design)
    inverse, rank = pinvWithRank(system)
    if rank < system.shape[0]:
        raise EstimationSingularError(rank, system.shape[0])
    return unf.asMatrix() @ inverse


def estimateG(
    unf: Unfoldings, H: np.ndarray, X: np.ndarray, design: FrameDesign
) -> np.ndarray:
    system = buildGSystem(H, X, design)
    inverse, rank = pinvWithRank(system)
    if rank < system.shape[1]:
        raise EstimationSingularError(rank, system.shape[1])
    return unvec(inverse @ unf.y3, design.N, design.L)


def removeTalsAmbiguity(
    Ghat: np.ndarray, Xhat: np.ndarray
) -> typing.Tuple[np.ndarray, np.ndarray]:
    """
    G <- G diag(p), X <- diag(p)^-1 X with p the estimated pilot column
    """
    pilot = Xhat[:, constants.kPilotColumn] / constants.kPilotValue
    for row, value in enumerate(pilot):
        if abs(value) < constants.kPilotTolerance:
            raise DegenerateInputError(
                f"pilot estimate {row} is too small to rescale ({abs(value):.3g})", row
            )
    return Ghat * pilot, Xhat / pilot.reshape(-1, 1)


def talsBaseline(
    unf: Unfoldings,
    design: FrameDesign,
    cfg: SystemConfig,
    opts: BalsOptions,
    rng: np.random.Generator,
) -> ReceiverReport:
    return withRestarts(
        lambda: _talsFromStart(
            unf,
            design,
            cfg,
            opts,
            initialSymbols(cfg, opts.initMode, rng),
            complexGaussian(rng, (cfg.N, cfg.L)),
        )
    )


def _talsFromStart(
    unf: Unfoldings,
    design: FrameDesign,
    cfg: SystemConfig,
    opts: BalsOptions,
    Xhat: np.ndarray,
    Ghat: np.ndarray,
) -> ReceiverReport:
    signalEnergy = frobeniusSquared(unf.y2t)

    residualTrace: typing.List[float] = []
    for iteration in range(1, opts.maxIterations + 1):
        try:
            Hhat = estimateH(unf, Ghat, Xhat, design)
            Ghat = estimateG(unf, Hhat, Xhat, design)
            E = buildEFromChannels(Ghat, Hhat, design)
            if iteration == 1:
                checkSymbolSystem(E)
            Xhat = estimateX(unf.y2t, E)
        except EstimationSingularError as error:
            raise error.atIteration(iteration) from error

        residualTrace.append(reconstructionResidual(unf.y2t, E, Xhat))
        if hasConverged(residualTrace, signalEnergy, opts.relTol):
            break

    Ghat, Xhat = removeTalsAmbiguity(Ghat, Xhat)
    return ReceiverReport(
        combine(Ghat, Hhat),
        Xhat,
        Ghat=Ghat,
        Hhat=Hhat,
        iterations=len(residualTrace),
        residualTrace=tuple(residualTrace),
        flops=costmodel.flopsTals(cfg).total(len(residualTrace)),
    )


class TalsReceiver(Receiver):
    label = constants.kReceiverTals

    def __init__(self, opts: BalsOptions = BalsOptions()) -> None:
        self.opts = opts

    # pylint: disable-next=unused-argument
    def estimate(
        self,
        unf: Unfoldings,
        design: FrameDesign,
        cfg: SystemConfig,
        frame: SymbolFrame,
        rng: np.random.Generator,
    ) -> ReceiverReport:
        return talsBaseline(unf, design, cfg, self.opts, rng)
