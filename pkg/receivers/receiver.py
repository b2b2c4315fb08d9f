from dataclasses import dataclass, field
from enum import Enum, auto
import typing

import numpy as np

import constants
from physics import Unfoldings
from subsystems.channelsubsystem import complexGaussian
from subsystems.framesubsystem import FrameDesign, SymbolFrame
from systemconfig import SystemConfig
from util.constellation import QamConstellation
from util.simerrors import ConfigError, EstimationSingularError


class InitMode(Enum):
    RandomConstellation = auto()
    Gaussian = auto()


@dataclass(frozen=True)
class BalsOptions:
    maxIterations: int = constants.kMaxIterations
    relTol: float = constants.kRelativeTolerance
    useFastUpdates: bool = False
    initMode: InitMode = InitMode.RandomConstellation
    refineSymbols: bool = False
    """re-estimate the symbols from the decoupled channels after KRF"""

    def __post_init__(self) -> None:
        if self.maxIterations < 1:
            raise ConfigError(f"must be at least 1, got {self.maxIterations}", "maxIterations")
        if not self.relTol > 0:
            raise ConfigError(f"must be positive, got {self.relTol}", "relTol")


@dataclass(frozen=True)
class ReceiverReport:
    thetaHat: np.ndarray
    """LM x N, final combined channel estimate"""
    Xhat: np.ndarray
    """L x T"""
    thetaRaw: typing.Optional[np.ndarray] = None
    """LM x N, estimate before KRF refinement"""
    Ghat: typing.Optional[np.ndarray] = None
    Hhat: typing.Optional[np.ndarray] = None
    iterations: int = 0
    residualTrace: typing.Tuple[float, ...] = field(default_factory=tuple)
    flops: int = 0

    @property
    def rawEstimate(self) -> np.ndarray:
        return self.thetaHat if self.thetaRaw is None else self.thetaRaw


def hasConverged(
    residualTrace: typing.Sequence[float], signalEnergy: float, relTol: float
) -> bool:
    """
    Stop once the residual no longer moves relative to itself, or once it is
    negligible against the received energy
    """
    current = residualTrace[-1]
    if current <= constants.kResidualFloor * signalEnergy:
        return True
    if len(residualTrace) < 2:
        return False
    return abs(current - residualTrace[-2]) <= relTol * current


def initialSymbols(
    cfg: SystemConfig, initMode: InitMode, rng: np.random.Generator
) -> np.ndarray:
    if initMode is InitMode.Gaussian:
        X = complexGaussian(rng, (cfg.L, cfg.T))
    else:
        X = QamConstellation(cfg.constellationOrder).draw(rng, (cfg.L, cfg.T))
    X[:, constants.kPilotColumn] = constants.kPilotValue
    return X


def withRestarts(attempt: typing.Callable[[], ReceiverReport]) -> ReceiverReport:
    """
    Run an alternating receiver, drawing a fresh start each time its first
    iteration is singular. A start drawn from a finite constellation can be
    exactly orthogonal to the transmitted symbols.
    """
    for _ in range(constants.kMaxStartAttempts - 1):
        try:
            return attempt()
        except EstimationSingularError as error:
            if error.iteration != 1:
                raise
    return attempt()


class Receiver:
    """
    Common interface of every receiver the harness runs on a realization
    """

    label = ""

    def estimate(
        self,
        unf: Unfoldings,
        design: FrameDesign,
        cfg: SystemConfig,
        frame: SymbolFrame,
        rng: np.random.Generator,
    ) -> ReceiverReport:
        """
        frame is the transmitted frame. Semi-blind receivers only use the
        pilot convention, pilot-only receivers treat it as fully known.
        """
        raise NotImplementedError("Must be implemented by subclass")

    def needsSemiUnitaryFrames(self) -> bool:
        return False
