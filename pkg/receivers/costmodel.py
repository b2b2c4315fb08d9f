"""
Closed-form operation counts for the receivers. Least-squares solves of an
I x J system cost 2IJ^2 + J^3, products (I x J)(J x P) cost IJP.
"""

from dataclasses import dataclass, field
import typing

import constants
from systemconfig import SystemConfig
from util import flopcounter

kThetaStep = "theta-step"
kXStep = "x-step"
kHStep = "h-step"
kGStep = "g-step"
kKrfStep = "krf"


@dataclass(frozen=True)
class FlopsBreakdown:
    receiver: str
    iterationSteps: typing.Mapping[str, int] = field(default_factory=dict)
    """flops / iteration, per step"""
    oneShotSteps: typing.Mapping[str, int] = field(default_factory=dict)
    """flops paid once, per step"""

    @property
    def perIteration(self) -> int:
        return sum(self.iterationSteps.values())

    @property
    def oneShot(self) -> int:
        return sum(self.oneShotSteps.values())

    def total(self, iterations: int) -> int:
        return iterations * self.perIteration + self.oneShot

    def step(self, name: str) -> int:
        return self.iterationSteps.get(name, 0) + self.oneShotSteps.get(name, 0)

    def plus(self, other: "FlopsBreakdown", receiver: str) -> "FlopsBreakdown":
        iterationSteps = dict(self.iterationSteps)
        for name, value in other.iterationSteps.items():
            iterationSteps[name] = iterationSteps.get(name, 0) + value
        oneShotSteps = dict(self.oneShotSteps)
        for name, value in other.oneShotSteps.items():
            oneShotSteps[name] = oneShotSteps.get(name, 0) + value
        return FlopsBreakdown(receiver, iterationSteps, oneShotSteps)


def thetaStepFlops(cfg: SystemConfig, fastUpdates: bool = False) -> int:
    K, T, M, NL = cfg.K, cfg.T, cfg.M, cfg.N * cfg.L
    build = cfg.K * flopcounter.matrixMultiply(T, cfg.L, NL)
    if fastUpdates:
        return (
            build
            + flopcounter.matrixMultiply(M, K * T, NL)
            + flopcounter.scaling(M, NL)
        )
    return (
        build
        + flopcounter.leastSquares(K * T, NL)
        + flopcounter.matrixMultiply(M, K * T, NL)
    )


def xStepFlops(cfg: SystemConfig, fastUpdates: bool = False) -> int:
    K, T, M, N, L = cfg.K, cfg.T, cfg.M, cfg.N, cfg.L
    build = flopcounter.matrixMultiply(L * M, N, K)
    if fastUpdates:
        return (
            build
            + flopcounter.matrixMultiply(L, K * M, T)
            + flopcounter.scaling(L, T)
        )
    return (
        build
        + flopcounter.leastSquares(K * M, L)
        + flopcounter.matrixMultiply(L, K * M, T)
    )


def flopsBals(cfg: SystemConfig, fastUpdates: bool = False) -> FlopsBreakdown:
    return FlopsBreakdown(
        constants.kReceiverBals,
        {
            kThetaStep: thetaStepFlops(cfg, fastUpdates),
            kXStep: xStepFlops(cfg, fastUpdates),
        },
    )


def flopsKrf(cfg: SystemConfig) -> FlopsBreakdown:
    return FlopsBreakdown(
        constants.kReceiverKrf,
        oneShotSteps={kKrfStep: constants.kKrfCostFactor * cfg.N * cfg.M * cfg.L},
    )


def flopsTsb(cfg: SystemConfig, fastUpdates: bool = False) -> FlopsBreakdown:
    label = constants.kReceiverTsbFast if fastUpdates else constants.kReceiverTsb
    return flopsBals(cfg, fastUpdates).plus(flopsKrf(cfg), label)


def flopsTals(cfg: SystemConfig) -> FlopsBreakdown:
    K, T, M, N, L = cfg.K, cfg.T, cfg.M, cfg.N, cfg.L
    hStep = (
        K * flopcounter.matrixMultiply(N, L, T)
        + flopcounter.leastSquares(K * T, N)
        + flopcounter.matrixMultiply(M, K * T, N)
    )
    gStep = (
        K * T * M * L * N
        + flopcounter.leastSquares(K * T * M, N * L)
        + flopcounter.matrixMultiply(N * L, K * T * M, 1)
    )
    xStep = (
        K * flopcounter.matrixMultiply(M, N, L)
        + flopcounter.leastSquares(K * M, L)
        + flopcounter.matrixMultiply(L, K * M, T)
    )
    return FlopsBreakdown(
        constants.kReceiverTals, {kHStep: hStep, kGStep: gStep, kXStep: xStep}
    )


def flopsPilotLs(cfg: SystemConfig) -> FlopsBreakdown:
    return FlopsBreakdown(
        constants.kReceiverLs, oneShotSteps={kThetaStep: thetaStepFlops(cfg)}
    )


def flopsPilotKrf(cfg: SystemConfig) -> FlopsBreakdown:
    return flopsPilotLs(cfg).plus(flopsKrf(cfg), constants.kReceiverKrf)


def dominantStepRatio(cfg: SystemConfig) -> float:
    """
    Leading least-squares term of the TALS g-step over that of the BALS
    theta-step
    """
    NL = cfg.N * cfg.L
    return flopcounter.leastSquaresLeadingTerm(
        cfg.K * cfg.T * cfg.M, NL
    ) / flopcounter.leastSquaresLeadingTerm(cfg.K * cfg.T, NL)
