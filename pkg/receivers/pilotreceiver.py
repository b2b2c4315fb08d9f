"""
Pilot-only references: every symbol of the frame is known to the receiver.
"""

import threading
import typing

import numpy as np

import constants
from physics import Unfoldings
from receivers import costmodel
from receivers.krfstage import krfDecouple
from receivers.leastsquares import buildE, buildF, estimateTheta, estimateX
from receivers.receiver import Receiver, ReceiverReport
from subsystems.framesubsystem import FrameDesign, SymbolFrame, buildZ
from systemconfig import SystemConfig


def pilotTheta(
    unf: Unfoldings,
    design: FrameDesign,
    cfg: SystemConfig,
    Xknown: np.ndarray,
    Z: typing.Optional[np.ndarray] = None,
) -> np.ndarray:
    Z = buildZ(design) if Z is None else Z
    return estimateTheta(unf.y3, buildF(Xknown, Z), cfg.M, cfg.L)


def pilotLsReport(
    unf: Unfoldings, design: FrameDesign, cfg: SystemConfig, thetaLs: np.ndarray
) -> ReceiverReport:
    return ReceiverReport(
        thetaLs,
        estimateX(unf.y2t, buildE(thetaLs, design)),
        flops=costmodel.flopsPilotLs(cfg).total(0),
    )


def pilotKrfReport(
    unf: Unfoldings, design: FrameDesign, cfg: SystemConfig, thetaLs: np.ndarray
) -> ReceiverReport:
    Ghat, Hhat, thetaKrf = krfDecouple(thetaLs, cfg.M, cfg.L, cfg.N)
    return ReceiverReport(
        thetaKrf,
        estimateX(unf.y2t, buildE(thetaKrf, design)),
        thetaRaw=thetaLs,
        Ghat=Ghat,
        Hhat=Hhat,
        flops=costmodel.flopsPilotKrf(cfg).total(0),
    )


def pilotBaselines(
    unf: Unfoldings,
    design: FrameDesign,
    cfg: SystemConfig,
    Xknown: np.ndarray,
    Z: typing.Optional[np.ndarray] = None,
) -> typing.Tuple[ReceiverReport, ReceiverReport]:
    """
    (LS report, KRF report). The symbol estimates are the LS symbols obtained
    from each channel estimate, for error-rate comparisons.
    """
    thetaLs = pilotTheta(unf, design, cfg, Xknown, Z)
    return (
        pilotLsReport(unf, design, cfg, thetaLs),
        pilotKrfReport(unf, design, cfg, thetaLs),
    )


class PilotSolveCache(threading.local):
    """
    The pilot LS estimate of the realization last seen on this thread, so
    the LS and KRF references of one trial share a single solve
    """

    def __init__(self) -> None:
        threading.local.__init__(self)
        self.unf: typing.Optional[Unfoldings] = None
        self.thetaLs: typing.Optional[np.ndarray] = None

    def thetaFor(
        self,
        unf: Unfoldings,
        design: FrameDesign,
        cfg: SystemConfig,
        Xknown: np.ndarray,
    ) -> np.ndarray:
        if self.unf is not unf:
            self.thetaLs = pilotTheta(unf, design, cfg, Xknown)
            self.unf = unf
        return self.thetaLs


class PilotLsReceiver(Receiver):
    label = constants.kReceiverLs

    def __init__(self, cache: typing.Optional[PilotSolveCache] = None) -> None:
        self.cache = PilotSolveCache() if cache is None else cache

    # pylint: disable-next=unused-argument
    def estimate(
        self,
        unf: Unfoldings,
        design: FrameDesign,
        cfg: SystemConfig,
        frame: SymbolFrame,
        rng: np.random.Generator,
    ) -> ReceiverReport:
        thetaLs = self.cache.thetaFor(unf, design, cfg, frame.X)
        return pilotLsReport(unf, design, cfg, thetaLs)


class PilotKrfReceiver(Receiver):
    label = constants.kReceiverKrf

    def __init__(self, cache: typing.Optional[PilotSolveCache] = None) -> None:
        self.cache = PilotSolveCache() if cache is None else cache

    # pylint: disable-next=unused-argument
    def estimate(
        self,
        unf: Unfoldings,
        design: FrameDesign,
        cfg: SystemConfig,
        frame: SymbolFrame,
        rng: np.random.Generator,
    ) -> ReceiverReport:
        thetaLs = self.cache.thetaFor(unf, design, cfg, frame.X)
        return pilotKrfReport(unf, design, cfg, thetaLs)
