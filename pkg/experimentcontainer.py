from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
import math
import time
import typing

import numpy as np
import pandas as pd
from wpilib import DataLogManager

import constants
from physics import addNoise, synthesize, unfold
from receivers import costmodel
from receivers.pilotreceiver import (
    PilotKrfReceiver,
    PilotLsReceiver,
    PilotSolveCache,
)
from receivers.receiver import BalsOptions, Receiver
from receivers.talsreceiver import TalsReceiver
from receivers.tsbreceiver import TsbReceiver
from subsystems.channelsubsystem import ChannelSubsystem, GeometricChannelParams
from subsystems.framesubsystem import (
    FrameSubsystem,
    SymbolFrame,
    detectNearest,
    validateIdentifiability,
)
from subsystems.loggingsubsystem import LoggingSubsystem
from systemconfig import SystemConfig
from util.convenientmath import frobeniusSquared
from util.seeding import realizationDigest, receiverGenerator, trialSeed
from util.simerrors import (
    ConfigError,
    DegenerateInputError,
    DimensionError,
    EstimationSingularError,
    StructureError,
)
from util.units import ratioToDecibels

kReceiverFailures = (
    EstimationSingularError,
    DegenerateInputError,
    StructureError,
    np.linalg.LinAlgError,
)


@dataclass(frozen=True)
class TrialResult:
    receiver: str
    snrDb: float
    trial: int
    seed: int
    nmseRaw: float
    nmseRefined: float
    ser: float
    iterations: int
    flops: int
    failed: bool
    wallTime: float
    """seconds"""
    realizationDigest: str
    """channels, symbols and received signal shared by the receivers of a trial"""


@dataclass(frozen=True)
class SweepResult:
    runs: int
    trials: typing.Tuple[TrialResult, ...]
    aggregates: pd.DataFrame
    runtime: pd.DataFrame

    def trialsFrame(self) -> pd.DataFrame:
        return trialsToFrame(self.trials)


def nmse(truth: np.ndarray, estimate: np.ndarray) -> float:
    if truth.shape != estimate.shape:
        raise DimensionError(f"truth is {truth.shape}, estimate is {estimate.shape}")
    energy = frobeniusSquared(truth)
    if energy == 0:
        raise DegenerateInputError("NMSE against a zero reference")
    return frobeniusSquared(truth - estimate) / energy


def ser(trueFrame: SymbolFrame, detected: SymbolFrame) -> float:
    """
    Fraction of wrongly detected data symbols, pilot column excluded
    """
    if (
        trueFrame.X.shape != detected.X.shape
        or trueFrame.constellationOrder != detected.constellationOrder
    ):
        raise DimensionError(
            f"frames differ: {trueFrame.X.shape}/{trueFrame.constellationOrder} "
            f"and {detected.X.shape}/{detected.constellationOrder}"
        )
    data = np.ones(trueFrame.X.shape[1], dtype=bool)
    data[trueFrame.pilotColumnIndex] = False
    truth = trueFrame.X[:, data]
    if truth.size == 0:
        return 0.0
    return float(np.count_nonzero(~np.isclose(truth, detected.X[:, data])) / truth.size)


def buildReceivers(
    labels: typing.Iterable[str], opts: BalsOptions = BalsOptions()
) -> typing.List[Receiver]:
    receivers = []
    pilotCache = PilotSolveCache()
    for label in labels:
        if label == constants.kReceiverTsb:
            receivers.append(TsbReceiver(opts))
        elif label == constants.kReceiverTsbFast:
            receivers.append(TsbReceiver(replace(opts, useFastUpdates=True)))
        elif label == constants.kReceiverTsbRefined:
            receivers.append(TsbReceiver(replace(opts, refineSymbols=True)))
        elif label == constants.kReceiverTals:
            receivers.append(TalsReceiver(opts))
        elif label == constants.kReceiverLs:
            receivers.append(PilotLsReceiver(pilotCache))
        elif label == constants.kReceiverKrf:
            receivers.append(PilotKrfReceiver(pilotCache))
        else:
            raise ConfigError(
                f"unknown receiver {label!r}, expected one of {constants.kReceiverLabels}",
                "receivers",
            )
    return receivers


def trialsToFrame(trials: typing.Iterable[TrialResult]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "receiver": result.receiver,
                "snr_db": float(result.snrDb),
                "trial": result.trial,
                "seed": result.seed,
                "nmse_raw": result.nmseRaw,
                "nmse_refined": result.nmseRefined,
                "ser": result.ser,
                "iterations": result.iterations,
                "flops": result.flops,
                "failed": int(result.failed),
                "wall_time": result.wallTime,
            }
            for result in trials
        ],
        columns=list(constants.kTrialsColumns) + ["wall_time"],
    )


class ExperimentContainer:
    """
    This class is where a simulation campaign is declared: the configuration,
    the subsystems that draw realizations, and the receivers under test.
    """

    def __init__(
        self,
        cfg: SystemConfig,
        receivers: typing.Iterable[str] = constants.kDefaultReceivers,
        opts: BalsOptions = BalsOptions(),
    ) -> None:
        report = validateIdentifiability(cfg)
        if not report.passed:
            raise ConfigError(
                f"configuration is not identifiable: {report.bindingConstraint}"
            )
        self.cfg = cfg
        self.opts = opts

        # The realization subsystems
        self.channel = ChannelSubsystem(
            cfg.channelKind, GeometricChannelParams(numPaths=cfg.paths)
        )
        self.frame = FrameSubsystem(cfg)

        self.receivers = buildReceivers(receivers, opts)
        if not self.frame.design.semiUnitary:
            unusable = [
                receiver.label
                for receiver in self.receivers
                if receiver.needsSemiUnitaryFrames()
            ]
            if unusable:
                raise ConfigError(
                    f"{', '.join(unusable)} need K >= LN, "
                    f"got K={cfg.K} with LN={cfg.L * cfg.N}",
                    "receivers",
                )
        self.receiverLabels = [receiver.label for receiver in self.receivers]

    def runTrial(
        self, snrDb: float, trialIndex: int, snrIndex: int = 0
    ) -> typing.List[TrialResult]:
        """
        Draw one realization and run every receiver on it
        """
        cfg = self.cfg
        seed = trialSeed(cfg.baseSeed, snrIndex, trialIndex)
        rng = np.random.default_rng(seed)

        channel = self.channel.draw(cfg.M, cfg.N, cfg.L, rng)
        frame = self.frame.drawSymbols(rng)
        received = addNoise(
            synthesize(channel, self.frame.design, frame), snrDb, rng
        )
        unf = unfold(received)
        digest = realizationDigest(channel.G, channel.H, frame.X, unf.y2t)

        results = []
        for receiver in self.receivers:
            started = time.perf_counter()
            try:
                report = receiver.estimate(
                    unf,
                    self.frame.design,
                    cfg,
                    frame,
                    receiverGenerator(seed, receiver.label),
                )
                detected = detectNearest(report.Xhat, cfg.constellationOrder)
                results.append(
                    TrialResult(
                        receiver.label,
                        snrDb,
                        trialIndex,
                        seed,
                        nmse(channel.theta, report.rawEstimate),
                        nmse(channel.theta, report.thetaHat),
                        ser(frame, detected),
                        report.iterations,
                        report.flops,
                        False,
                        time.perf_counter() - started,
                        digest,
                    )
                )
            except kReceiverFailures as error:
                DataLogManager.log(
                    f"Trial {trialIndex} @ {snrDb:g} dB: {receiver.label} failed: {error}"
                )
                results.append(
                    TrialResult(
                        receiver.label,
                        snrDb,
                        trialIndex,
                        seed,
                        math.nan,
                        math.nan,
                        math.nan,
                        0,
                        0,
                        True,
                        time.perf_counter() - started,
                        digest,
                    )
                )
        return results

    def runSweep(
        self, workers: int = 1, logger: typing.Optional[LoggingSubsystem] = None
    ) -> SweepResult:
        """
        Every SNR point times every run. Trials may run on a thread pool;
        results are always gathered in (SNR index, trial index) order.
        """
        cfg = self.cfg
        jobs = [
            (snrIndex, snrDb, trialIndex)
            for snrIndex, snrDb in enumerate(cfg.snrGridDb)
            for trialIndex in range(cfg.runs)
        ]

        def runJob(job: typing.Tuple[int, float, int]) -> typing.List[TrialResult]:
            snrIndex, snrDb, trialIndex = job
            return self.runTrial(snrDb, trialIndex, snrIndex)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                perTrial = list(executor.map(runJob, jobs))
        else:
            perTrial = [runJob(job) for job in jobs]

        trials = tuple(result for results in perTrial for result in results)
        aggregates, runtime = self.aggregate(trials, logger)
        return SweepResult(cfg.runs, trials, aggregates, runtime)

    def aggregate(
        self,
        trials: typing.Sequence[TrialResult],
        logger: typing.Optional[LoggingSubsystem] = None,
    ) -> typing.Tuple[pd.DataFrame, pd.DataFrame]:
        """
        Means over the successful trials of each (receiver, SNR). A bals row
        is derived from the raw estimates of the tsb trials.
        """
        frame = trialsToFrame(trials)
        krfOneShot = costmodel.flopsKrf(self.cfg).oneShot
        aggregateRows = []
        runtimeRows = []

        labels = list(self.receiverLabels)
        if constants.kReceiverTsb in labels:
            labels.insert(labels.index(constants.kReceiverTsb) + 1, constants.kReceiverBals)

        for snrDb in self.cfg.snrGridDb:
            for label in labels:
                source = (
                    constants.kReceiverTsb if label == constants.kReceiverBals else label
                )
                rows = frame[(frame["receiver"] == source) & (frame["snr_db"] == snrDb)]
                succeeded = rows[rows["failed"] == 0]
                failures = len(rows) - len(succeeded)
                runs = len(succeeded)

                nmseColumn = (
                    "nmse_raw" if label == constants.kReceiverBals else "nmse_refined"
                )
                meanNmse = float(succeeded[nmseColumn].mean()) if runs else math.nan
                meanSer = float(succeeded["ser"].mean()) if runs else math.nan
                meanIterations = float(succeeded["iterations"].mean()) if runs else math.nan
                flops = int(round(succeeded["flops"].mean())) if runs else 0
                if label == constants.kReceiverBals and runs:
                    flops -= krfOneShot

                aggregateRows.append(
                    {
                        "receiver": label,
                        "snr_db": float(snrDb),
                        "runs": runs,
                        "mean_nmse_db": ratioToDecibels(meanNmse),
                        "mean_ser": meanSer,
                        "mean_iters": meanIterations,
                        "flops": flops,
                    }
                )
                if label != constants.kReceiverBals:
                    runtimeRows.append(
                        {
                            "receiver": label,
                            "snr_db": float(snrDb),
                            "runs": len(rows),
                            "mean_wall_time_ms": float(rows["wall_time"].mean())
                            * constants.kMillisecondsPerSecond
                            if len(rows)
                            else math.nan,
                        }
                    )
                if failures:
                    DataLogManager.log(
                        f"{label} @ {snrDb:g} dB: {failures} of {len(rows)} trials failed"
                    )
                if logger is not None:
                    logger.logSnrPoint(
                        label,
                        float(snrDb),
                        ratioToDecibels(meanNmse),
                        meanSer,
                        meanIterations,
                        flops,
                        failures,
                    )

        return (
            pd.DataFrame(aggregateRows, columns=list(constants.kAggregateColumns)),
            pd.DataFrame(runtimeRows, columns=list(constants.kRuntimeColumns)),
        )


def runTrial(
    cfg: SystemConfig,
    snrDb: float,
    trialIndex: int,
    receivers: typing.Iterable[str] = constants.kDefaultReceivers,
    opts: BalsOptions = BalsOptions(),
    snrIndex: typing.Optional[int] = None,
) -> typing.List[TrialResult]:
    if snrIndex is None:
        snrIndex = cfg.snrGridDb.index(snrDb) if snrDb in cfg.snrGridDb else 0
    return ExperimentContainer(cfg, receivers, opts).runTrial(
        snrDb, trialIndex, snrIndex
    )


def runSweep(
    cfg: SystemConfig,
    receivers: typing.Iterable[str] = constants.kDefaultReceivers,
    opts: BalsOptions = BalsOptions(),
    workers: int = 1,
    logger: typing.Optional[LoggingSubsystem] = None,
) -> SweepResult:
    return ExperimentContainer(cfg, receivers, opts).runSweep(workers, logger)
