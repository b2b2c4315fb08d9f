from dataclasses import dataclass
import math

import numpy as np

import constants
from util.convenientmath import khatriRao
from util.simerrors import ConfigError, DimensionError


@dataclass(frozen=True)
class GeometricChannelParams:
    numPaths: int = constants.kDefaultPaths
    arraySpacing: float = constants.kDefaultArraySpacing
    """wavelengths"""

    def __post_init__(self) -> None:
        if self.numPaths < 1:
            raise ConfigError(f"need at least one path, got {self.numPaths}", "paths")


@dataclass(frozen=True)
class ChannelState:
    G: np.ndarray
    """N x L, UT -> RIS"""
    H: np.ndarray
    """M x N, RIS -> BS"""
    theta: np.ndarray
    """LM x N, G^T khatri-rao H"""

    @staticmethod
    def fromChannels(G: np.ndarray, H: np.ndarray) -> "ChannelState":
        return ChannelState(G, H, combine(G, H))


def steeringVector(
    numElements: int, angle: float, spacing: float = constants.kDefaultArraySpacing
) -> np.ndarray:
    """
    Unit-norm uniform linear array response
    """
    phases = -2j * math.pi * spacing * np.arange(numElements) * math.sin(angle)
    return np.exp(phases) / math.sqrt(numElements)


def complexGaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """
    i.i.d. CN(0, 1)
    """
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(
        2
    )


def svChannel(
    rx: int, tx: int, params: GeometricChannelParams, rng: np.random.Generator
) -> np.ndarray:
    """
    Narrowband Saleh-Valenzuela channel,
    sqrt(rx * tx / P) * sum_p alpha_p a_rx(theta_p) a_tx(phi_p)^H
    """
    gains = complexGaussian(rng, params.numPaths)
    arrivals = rng.uniform(0.0, 2 * math.pi, params.numPaths)
    departures = rng.uniform(0.0, 2 * math.pi, params.numPaths)

    channel = np.zeros((rx, tx), dtype=complex)
    for gain, arrival, departure in zip(gains, arrivals, departures):
        channel += gain * np.outer(
            steeringVector(rx, arrival, params.arraySpacing),
            steeringVector(tx, departure, params.arraySpacing).conj(),
        )
    return math.sqrt(rx * tx / params.numPaths) * channel


def rayleighChannel(rx: int, tx: int, rng: np.random.Generator) -> np.ndarray:
    return complexGaussian(rng, (rx, tx))


def combine(G: np.ndarray, H: np.ndarray) -> np.ndarray:
    if G.shape[0] != H.shape[1]:
        raise DimensionError(
            f"G is {G.shape} and H is {H.shape}, RIS dimensions differ"
        )
    return khatriRao(G.T, H)


class ChannelSubsystem:
    """
    Draws the UT -> RIS and RIS -> BS channels of one realization
    """

    def __init__(
        self,
        kind: str = constants.kDefaultChannelKind,
        params: GeometricChannelParams = GeometricChannelParams(),
    ) -> None:
        if kind not in constants.kChannelKinds:
            raise ConfigError(f"unknown channel kind {kind!r}", "channel")
        self.kind = kind
        self.params = params

    def draw(
        self, M: int, N: int, L: int, rng: np.random.Generator
    ) -> ChannelState:
        if self.kind == constants.kChannelKindRayleigh:
            G = rayleighChannel(N, L, rng)
            H = rayleighChannel(M, N, rng)
        else:
            G = svChannel(N, L, self.params, rng)
            H = svChannel(M, N, self.params, rng)
        return ChannelState.fromChannels(G, H)
