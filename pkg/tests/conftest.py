from dataclasses import dataclass

import numpy as np
import pytest
from wpilib import DataLogManager

from physics import ReceivedTensor, Unfoldings, synthesize, unfold
from subsystems.channelsubsystem import ChannelState, rayleighChannel
from subsystems.framesubsystem import (
    FrameDesign,
    SymbolFrame,
    designDftFrames,
    generateSymbols,
)
from systemconfig import SystemConfig


@pytest.fixture(scope="session", autouse=True)
def dataLog(tmp_path_factory):
    DataLogManager.start(str(tmp_path_factory.mktemp("logs")))
    yield


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def randomComplex(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def smallConfig() -> SystemConfig:
    return SystemConfig(
        M=4,
        N=4,
        L=2,
        T=4,
        K=8,
        snrGridDb=(0.0, 10.0, 20.0, 30.0),
        runs=4,
        baseSeed=3,
        constellationOrder=16,
        channelKind="rayleigh",
    )


@dataclass
class Scenario:
    cfg: SystemConfig
    design: FrameDesign
    channel: ChannelState
    frame: SymbolFrame
    received: ReceivedTensor
    unf: Unfoldings


def makeScenario(cfg: SystemConfig, rng: np.random.Generator) -> Scenario:
    design = designDftFrames(cfg.K, cfg.N, cfg.L)
    channel = ChannelState.fromChannels(
        rayleighChannel(cfg.N, cfg.L, rng), rayleighChannel(cfg.M, cfg.N, rng)
    )
    frame = generateSymbols(cfg.L, cfg.T, cfg.constellationOrder, rng)
    received = synthesize(channel, design, frame)
    return Scenario(cfg, design, channel, frame, received, unfold(received))


@pytest.fixture
def noiselessScenario(smallConfig, rng) -> Scenario:
    return makeScenario(smallConfig, rng)
