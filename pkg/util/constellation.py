import math

import numpy as np

import constants
from util.simerrors import ConfigError


def binaryToGray(values: np.ndarray) -> np.ndarray:
    return values ^ (values >> 1)


class QamConstellation:
    """
    Square M-QAM with Gray mapping, normalized to unit average symbol energy.
    symbols[i] is the point carrying the bit label i.
    """

    def __init__(self, order: int) -> None:
        if order not in constants.kSupportedConstellationOrders:
            raise ConfigError(
                f"unsupported constellation order {order}, expected one of "
                f"{constants.kSupportedConstellationOrders}",
                "constellation",
            )
        self.order = order
        # grid position i carries the label grayIndexes[i]
        self.symbols = np.empty(order, dtype=complex)
        self.symbols[self._grayIndexes(order)] = self._createConstellation(order)

    @staticmethod
    def _createConstellation(order: int) -> np.ndarray:
        side = int(round(math.sqrt(order)))
        symbols = np.empty(order, dtype=complex)
        for jj in range(side):
            for ii in range(side):
                symbols[ii * side + jj] = complex(
                    -(side - 1) + jj * 2, (side - 1) - ii * 2
                )
        averageEnergy = (order - 1) * 2.0 / 3.0
        return symbols / math.sqrt(averageEnergy)

    @staticmethod
    def _grayIndexes(order: int) -> np.ndarray:
        # row Gray code in the high half of the label, column Gray code in the low half
        side = int(round(math.sqrt(order)))
        bitsPerAxis = int(round(math.log2(side)))
        column = binaryToGray(np.arange(side, dtype=int))
        indexMatrix = (column.reshape(side, 1) << bitsPerAxis) + column.reshape(1, side)
        return np.reshape(indexMatrix, order)

    def draw(self, rng: np.random.Generator, shape) -> np.ndarray:
        return self.symbols[rng.integers(0, self.order, size=shape)]

    def demodulate(self, received: np.ndarray) -> np.ndarray:
        """
        Index of the nearest constellation point for every entry
        """
        received = np.asarray(received)
        distances = np.abs(self.symbols.reshape(-1, 1) - received.reshape(1, -1))
        return np.argmin(distances, axis=0).reshape(received.shape)

    def nearest(self, received: np.ndarray) -> np.ndarray:
        return self.symbols[self.demodulate(received)]
