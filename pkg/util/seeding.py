import hashlib

import numpy as np

import constants


def trialSeed(baseSeed: int, snrIndex: int, trialIndex: int) -> int:
    """
    Independent stream per (base seed, SNR point, trial), kept within 63 bits
    """
    state = np.random.SeedSequence([baseSeed, snrIndex, trialIndex]).generate_state(
        1, np.uint64
    )[0]
    return int(state) & constants.kSeedMask


def receiverGenerator(seed: int, receiverLabel: str) -> np.random.Generator:
    """
    Stream used by a receiver for its own initialization. It depends only on
    the trial seed and the receiver, not on which other receivers run.
    """
    return np.random.default_rng(
        [seed, constants.kReceiverLabels.index(receiverLabel) + 1]
    )


def realizationDigest(*arrays: np.ndarray) -> str:
    digest = hashlib.sha256()
    for array in arrays:
        array = np.ascontiguousarray(array)
        digest.update(str(array.shape).encode("utf-8"))
        digest.update(array.tobytes())
    return digest.hexdigest()
