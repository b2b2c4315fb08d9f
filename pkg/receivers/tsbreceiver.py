"""
Two-stage semi-blind receiver.

Stage one (BALS) alternates least-squares updates of the combined channel and
of the symbols, starting from random symbols with the known pilot column.
Stage two (KRF) splits every column of the combined channel estimate into
its two channel factors and rebuilds the combined channel from them.
"""

import typing

import numpy as np

import constants
from physics import Unfoldings
from receivers import costmodel
from receivers.krfstage import krfDecouple
from receivers.leastsquares import (
    buildE,
    buildEFromChannels,
    buildF,
    checkSymbolSystem,
    estimateTheta,
    estimateX,
    fastEstimateTheta,
    fastEstimateX,
    reconstructionResidual,
    removeAmbiguity,
)
from receivers.receiver import (
    BalsOptions,
    Receiver,
    ReceiverReport,
    hasConverged,
    initialSymbols,
    withRestarts,
)
from subsystems.framesubsystem import FrameDesign, SymbolFrame, buildZ
from systemconfig import SystemConfig
from util.convenientmath import frobeniusSquared
from util.simerrors import EstimationSingularError


def bals(
    unf: Unfoldings,
    design: FrameDesign,
    cfg: SystemConfig,
    opts: BalsOptions,
    rng: np.random.Generator,
    Z: typing.Optional[np.ndarray] = None,
) -> ReceiverReport:
    Z = buildZ(design) if Z is None else Z
    return withRestarts(
        lambda: _balsFromStart(
            unf, design, cfg, opts, initialSymbols(cfg, opts.initMode, rng), Z
        )
    )


def _balsFromStart(
    unf: Unfoldings,
    design: FrameDesign,
    cfg: SystemConfig,
    opts: BalsOptions,
    Xhat: np.ndarray,
    Z: np.ndarray,
) -> ReceiverReport:
    M, L = cfg.M, cfg.L
    signalEnergy = frobeniusSquared(unf.y2t)

    residualTrace: typing.List[float] = []
    for iteration in range(1, opts.maxIterations + 1):
        try:
            if opts.useFastUpdates:
                thetaHat = fastEstimateTheta(unf.y3, Xhat, design, M, Z)
            else:
                thetaHat = estimateTheta(unf.y3, buildF(Xhat, Z), M, L)
            if iteration == 1:
                checkSymbolSystem(buildE(thetaHat, design))
            if opts.useFastUpdates:
                Xhat = fastEstimateX(unf.y2t, thetaHat, design)
            else:
                Xhat = estimateX(unf.y2t, buildE(thetaHat, design))
        except EstimationSingularError as error:
            raise error.atIteration(iteration) from error

        residualTrace.append(
            reconstructionResidual(unf.y2t, buildE(thetaHat, design), Xhat)
        )
        if hasConverged(residualTrace, signalEnergy, opts.relTol):
            break

    thetaHat, Xhat = removeAmbiguity(thetaHat, Xhat, M)
    return ReceiverReport(
        thetaHat,
        Xhat,
        iterations=len(residualTrace),
        residualTrace=tuple(residualTrace),
        flops=costmodel.flopsBals(cfg, opts.useFastUpdates).total(
            len(residualTrace)
        ),
    )


def tsb(
    unf: Unfoldings,
    design: FrameDesign,
    cfg: SystemConfig,
    opts: BalsOptions,
    rng: np.random.Generator,
    Z: typing.Optional[np.ndarray] = None,
) -> ReceiverReport:
    """
    BALS followed by KRF. thetaRaw keeps the BALS estimate, thetaHat is the
    KRF-refined one.
    """
    stageOne = bals(unf, design, cfg, opts, rng, Z)
    Ghat, Hhat, thetaRefined = krfDecouple(stageOne.thetaHat, cfg.M, cfg.L, cfg.N)

    Xhat = stageOne.Xhat
    flops = costmodel.flopsTsb(cfg, opts.useFastUpdates).total(stageOne.iterations)
    if opts.refineSymbols:
        Xhat = estimateX(unf.y2t, buildEFromChannels(Ghat, Hhat, design))
        flops += costmodel.xStepFlops(cfg)

    return ReceiverReport(
        thetaRefined,
        Xhat,
        thetaRaw=stageOne.thetaHat,
        Ghat=Ghat,
        Hhat=Hhat,
        iterations=stageOne.iterations,
        residualTrace=stageOne.residualTrace,
        flops=flops,
    )


class TsbReceiver(Receiver):
    def __init__(self, opts: BalsOptions = BalsOptions()) -> None:
        self.opts = opts
        if opts.refineSymbols:
            self.label = constants.kReceiverTsbRefined
        elif opts.useFastUpdates:
            self.label = constants.kReceiverTsbFast
        else:
            self.label = constants.kReceiverTsb

    def needsSemiUnitaryFrames(self) -> bool:
        return self.opts.useFastUpdates

    # pylint: disable-next=unused-argument
    def estimate(
        self,
        unf: Unfoldings,
        design: FrameDesign,
        cfg: SystemConfig,
        frame: SymbolFrame,
        rng: np.random.Generator,
    ) -> ReceiverReport:
        return tsb(unf, design, cfg, self.opts, rng)
