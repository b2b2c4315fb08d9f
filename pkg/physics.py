#
# The forward model of the link. Given the channels, the frame design and the
# transmitted symbols, this produces what the base station receives over the
# K sub-frames:
#
#   Y_k = H diag(psi_k) G diag(lambda_k) X + V_k
#
# and the two unfoldings of the received tensor that the receivers consume.
#

from dataclasses import dataclass, replace
import math
import typing

import numpy as np

from subsystems.channelsubsystem import ChannelState, complexGaussian
from subsystems.framesubsystem import FrameDesign, SymbolFrame
from util.convenientmath import frobeniusSquared, unvec, vec
from util.simerrors import DegenerateInputError, DimensionError
from util.units import decibelsToRatio


@dataclass(frozen=True)
class ReceivedTensor:
    slices: typing.Tuple[np.ndarray, ...]
    """K matrices, each M x T"""
    snrDb: float = math.inf
    noiseVariance: float = 0.0
    """per complex entry"""

    @property
    def K(self) -> int:
        return len(self.slices)

    def signalPower(self) -> float:
        """
        Mean power per complex sample
        """
        total = sum(frobeniusSquared(y) for y in self.slices)
        return total / sum(y.size for y in self.slices)


@dataclass(frozen=True)
class Unfoldings:
    y3: np.ndarray
    """KTM, [vec(Y_1); ...; vec(Y_K)]"""
    y2t: np.ndarray
    """KM x T, [Y_1; ...; Y_K]"""
    M: int
    T: int

    @property
    def K(self) -> int:
        return self.y2t.shape[0] // self.M

    def asMatrix(self) -> np.ndarray:
        """
        M x KT, [Y_1, ..., Y_K]
        """
        return unvec(self.y3, self.M, self.K * self.T)

    def slices(self) -> typing.List[np.ndarray]:
        return [self.y2t[k * self.M : (k + 1) * self.M] for k in range(self.K)]


def synthesize(
    ch: ChannelState, design: FrameDesign, frame: SymbolFrame
) -> ReceivedTensor:
    G, H, X = ch.G, ch.H, frame.X
    N, L = G.shape
    if H.shape[1] != N or design.N != N or design.L != L or X.shape[0] != L:
        raise DimensionError(
            f"inconsistent shapes G {G.shape}, H {H.shape}, X {X.shape}, "
            f"design K={design.K} N={design.N} L={design.L}"
        )
    return ReceivedTensor(
        tuple(
            (H * design.Psi[k]) @ (G * design.Lambda[k]) @ X for k in range(design.K)
        )
    )


def addNoise(
    received: ReceivedTensor, snrDb: float, rng: np.random.Generator
) -> ReceivedTensor:
    """
    Add CN(0, sigma^2) noise with sigma^2 = mean signal power / 10^(snr/10)
    """
    if math.isinf(snrDb) and snrDb > 0:
        return replace(received, snrDb=snrDb, noiseVariance=0.0)

    signalPower = received.signalPower()
    if signalPower == 0:
        raise DegenerateInputError(f"cannot set an SNR of {snrDb} dB on a zero signal")

    noiseVariance = signalPower / decibelsToRatio(snrDb)
    noisy = tuple(
        y + math.sqrt(noiseVariance) * complexGaussian(rng, y.shape)
        for y in received.slices
    )
    return ReceivedTensor(noisy, snrDb, noiseVariance)


def unfold(received: ReceivedTensor) -> Unfoldings:
    M, T = received.slices[0].shape
    return Unfoldings(
        np.concatenate([vec(y) for y in received.slices]),
        np.vstack(received.slices),
        M,
        T,
    )
