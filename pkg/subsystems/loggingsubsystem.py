import typing

from wpilib import DataLogManager
from wpiutil.log import DoubleLogEntry, IntegerLogEntry

from util.keyorganization import ReceiverLogKeys

import constants


class ReceiverLogEntries:
    def __init__(self, receiver: str) -> None:
        log = DataLogManager.getLog()
        keys = ReceiverLogKeys(f"{constants.kReceiverLogKeyPrefix}/{receiver}")
        self.snr = DoubleLogEntry(log, keys.snrKey)
        self.nmse = DoubleLogEntry(log, keys.nmseKey)
        self.ser = DoubleLogEntry(log, keys.serKey)
        self.iterations = DoubleLogEntry(log, keys.iterationsKey)
        self.flops = IntegerLogEntry(log, keys.flopsKey)
        self.failed = IntegerLogEntry(log, keys.failedKey)


class LoggingSubsystem:
    """
    Writes the per-SNR aggregates of every receiver to the data log, one
    entry set per receiver
    """

    def __init__(self, receivers: typing.Iterable[str]) -> None:
        self.entries = {receiver: ReceiverLogEntries(receiver) for receiver in receivers}

    def logSnrPoint(
        self,
        receiver: str,
        snrDb: float,
        meanNmseDb: float,
        meanSer: float,
        meanIterations: float,
        flops: int,
        failures: int,
    ) -> None:
        if receiver not in self.entries:
            self.entries[receiver] = ReceiverLogEntries(receiver)
        entries = self.entries[receiver]
        entries.snr.append(snrDb)
        entries.nmse.append(meanNmseDb)
        entries.ser.append(meanSer)
        entries.iterations.append(meanIterations)
        entries.flops.append(flops)
        entries.failed.append(failures)
        DataLogManager.log(
            f"{receiver} @ {snrDb:g} dB: NMSE {meanNmseDb:.2f} dB, SER {meanSer:.3e}, "
            f"{meanIterations:.1f} iterations, {failures} failed"
        )
