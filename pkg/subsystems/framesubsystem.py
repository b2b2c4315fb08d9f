from dataclasses import dataclass
import cmath
import math

import numpy as np

import constants
from systemconfig import SystemConfig
from util.constellation import QamConstellation
from util.convenientmath import kron


@dataclass(frozen=True)
class FrameDesign:
    Lambda: np.ndarray
    """K x L, row k is the coding vector of sub-frame k"""
    Psi: np.ndarray
    """K x N, row k is the RIS phase-shift vector of sub-frame k"""
    omega: complex
    semiUnitary: bool
    """K >= LN, so Lambda^H Lambda = K I and Psi^H Psi = K I"""

    @property
    def K(self) -> int:
        return self.Lambda.shape[0]

    @property
    def L(self) -> int:
        return self.Lambda.shape[1]

    @property
    def N(self) -> int:
        return self.Psi.shape[1]


@dataclass(frozen=True)
class SymbolFrame:
    X: np.ndarray
    """L x T, column 0 is the pilot"""
    constellationOrder: int
    pilotColumnIndex: int = constants.kPilotColumn


@dataclass(frozen=True)
class IdentifiabilityReport:
    passed: bool
    bindingConstraint: str
    """empty when passed"""
    minimumSubFrames: int
    literalFloorBound: int
    """L * floor(max(N / T, 1 / M)), shown next to the ceiling-based minimum"""
    channelConditionMet: bool
    """K * T >= N * L"""
    symbolConditionMet: bool
    """K * M >= L"""
    dftSemiUnitary: bool
    """K >= L * N, needed by the DFT design and the fast updates"""
    fullRowRankSymbols: bool
    """T >= L"""
    rankOneSafe: bool
    """K >= L, symbols stay identifiable even with rank-one channels"""

    def describe(self) -> str:
        lines = [
            f"identifiable: {'yes' if self.passed else 'no'}",
            f"minimum sub-frames: {self.minimumSubFrames} "
            f"(floor-based bound {self.literalFloorBound})",
            f"KT >= NL: {self.channelConditionMet}",
            f"KM >= L: {self.symbolConditionMet}",
            f"K >= LN: {self.dftSemiUnitary}",
            f"T >= L: {self.fullRowRankSymbols}",
            f"K >= L: {self.rankOneSafe}",
        ]
        if not self.passed:
            lines.append(f"binding constraint: {self.bindingConstraint}")
        return "\n".join(lines)


def designDftFrames(K: int, N: int, L: int) -> FrameDesign:
    """
    Split the first NL columns of the K-point DFT into coding vectors and RIS
    phase shifts, so that row k of the DFT is lambda_k kron psi_k.
    """
    omega = cmath.exp(-2j * math.pi / K)
    k = np.arange(K).reshape(K, 1)
    # integer exponents reduced mod K before exponentiating
    Lambda = np.exp(-2j * math.pi * ((k * N * np.arange(L)) % K) / K)
    Psi = np.exp(-2j * math.pi * ((k * np.arange(N)) % K) / K)
    return FrameDesign(Lambda, Psi, omega, K >= L * N)


def buildZ(design: FrameDesign) -> np.ndarray:
    """
    KL x NL, row-block k is (psi_k kron diag(lambda_k))^T
    """
    return np.vstack(
        [
            kron(design.Psi[k].reshape(-1, 1), np.diag(design.Lambda[k])).T
            for k in range(design.K)
        ]
    )


def generateSymbols(
    L: int, T: int, order: int, rng: np.random.Generator
) -> SymbolFrame:
    X = QamConstellation(order).draw(rng, (L, T))
    X[:, constants.kPilotColumn] = constants.kPilotValue
    return SymbolFrame(X, order)


def detectNearest(Xhat: np.ndarray, order: int) -> SymbolFrame:
    return SymbolFrame(QamConstellation(order).nearest(Xhat), order)


def validateIdentifiability(cfg: SystemConfig) -> IdentifiabilityReport:
    channelConditionMet = cfg.K * cfg.T >= cfg.N * cfg.L
    symbolConditionMet = cfg.K * cfg.M >= cfg.L

    bindingConstraint = ""
    if not channelConditionMet:
        bindingConstraint = f"KT >= NL ({cfg.K * cfg.T} < {cfg.N * cfg.L})"
    elif not symbolConditionMet:
        bindingConstraint = f"KM >= L ({cfg.K * cfg.M} < {cfg.L})"

    return IdentifiabilityReport(
        passed=channelConditionMet and symbolConditionMet,
        bindingConstraint=bindingConstraint,
        minimumSubFrames=max(
            math.ceil(cfg.N * cfg.L / cfg.T), math.ceil(cfg.L / cfg.M)
        ),
        literalFloorBound=cfg.L * math.floor(max(cfg.N / cfg.T, 1 / cfg.M)),
        channelConditionMet=channelConditionMet,
        symbolConditionMet=symbolConditionMet,
        dftSemiUnitary=cfg.K >= cfg.L * cfg.N,
        fullRowRankSymbols=cfg.T >= cfg.L,
        rankOneSafe=cfg.K >= cfg.L,
    )


class FrameSubsystem:
    """
    Holds the frame design and symbol alphabet of a configuration
    """

    def __init__(self, cfg: SystemConfig) -> None:
        self.cfg = cfg
        self.design = designDftFrames(cfg.K, cfg.N, cfg.L)
        self.Z = buildZ(self.design)
        self.constellation = QamConstellation(cfg.constellationOrder)

    def drawSymbols(self, rng: np.random.Generator) -> SymbolFrame:
        return generateSymbols(
            self.cfg.L, self.cfg.T, self.cfg.constellationOrder, rng
        )
