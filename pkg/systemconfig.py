import configparser
from dataclasses import dataclass, field, replace
import typing

from os import path
from wpilib import DataLogManager

import constants
from util.simerrors import ConfigError

kDimensionKeys = ("M", "N", "L", "T", "K")
kOptionalKeys = ("snr_db", "runs", "seed", "constellation", "channel", "paths")
kSection = "system"


@dataclass(frozen=True)
class SystemConfig:
    """
    The link dimensions and experiment settings of one simulation campaign
    """

    M: int = constants.kDefaultBaseStationAntennas
    N: int = constants.kDefaultRisElements
    L: int = constants.kDefaultTerminalAntennas
    T: int = constants.kDefaultSymbolPeriods
    K: int = constants.kDefaultSubFrames
    snrGridDb: typing.Tuple[float, ...] = field(
        default=constants.kDefaultSnrGridDb
    )
    runs: int = constants.kDefaultRuns
    baseSeed: int = constants.kDefaultBaseSeed
    constellationOrder: int = constants.kDefaultConstellationOrder
    channelKind: str = constants.kDefaultChannelKind
    paths: int = constants.kDefaultPaths

    def __post_init__(self) -> None:
        for key in kDimensionKeys:
            if getattr(self, key) < 1:
                raise ConfigError(f"must be at least 1, got {getattr(self, key)}", key)
        if self.runs < 1:
            raise ConfigError(f"must be at least 1, got {self.runs}", "runs")
        if self.baseSeed < 0:
            raise ConfigError(f"must be nonnegative, got {self.baseSeed}", "seed")
        if self.paths < 1:
            raise ConfigError(f"must be at least 1, got {self.paths}", "paths")
        if self.constellationOrder not in constants.kSupportedConstellationOrders:
            raise ConfigError(
                f"expected one of {constants.kSupportedConstellationOrders}, "
                f"got {self.constellationOrder}",
                "constellation",
            )
        if self.channelKind not in constants.kChannelKinds:
            raise ConfigError(
                f"expected one of {constants.kChannelKinds}, got {self.channelKind!r}",
                "channel",
            )
        if not self.snrGridDb:
            raise ConfigError("needs at least one SNR point", "snr_db")

    def withOverrides(self, **changes) -> "SystemConfig":
        return replace(
            self, **{key: value for key, value in changes.items() if value is not None}
        )


def _parseInt(values: typing.Mapping[str, str], key: str) -> int:
    try:
        return int(values[key])
    except ValueError as error:
        raise ConfigError(f"expected an integer, got {values[key]!r}", key) from error


def _parseSnrGrid(text: str) -> typing.Tuple[float, ...]:
    try:
        return tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError as error:
        raise ConfigError(
            f"expected a comma separated list of dB values, got {text!r}", "snr_db"
        ) from error


def parseConfig(text: str) -> SystemConfig:
    """
    Parse `key = value` lines. Blank lines and # comments are ignored, unknown
    keys are errors.
    """
    parser = configparser.ConfigParser(
        comment_prefixes=("#",), inline_comment_prefixes=("#",)
    )
    parser.optionxform = str
    try:
        parser.read_string(f"[{kSection}]\n" + text)
    except configparser.Error as error:
        raise ConfigError(f"malformed config: {error}") from error
    values = dict(parser[kSection])

    for key in values:
        if key not in kDimensionKeys + kOptionalKeys:
            raise ConfigError("unknown key", key)
    for key in kDimensionKeys:
        if key not in values:
            raise ConfigError("missing required key", key)

    settings = {key: _parseInt(values, key) for key in kDimensionKeys}
    if "snr_db" in values:
        settings["snrGridDb"] = _parseSnrGrid(values["snr_db"])
    if "runs" in values:
        settings["runs"] = _parseInt(values, "runs")
    if "seed" in values:
        settings["baseSeed"] = _parseInt(values, "seed")
    if "constellation" in values:
        settings["constellationOrder"] = _parseInt(values, "constellation")
    if "channel" in values:
        settings["channelKind"] = values["channel"].strip()
    if "paths" in values:
        settings["paths"] = _parseInt(values, "paths")
    return SystemConfig(**settings)


def loadConfig(filename: str) -> SystemConfig:
    if not path.isabs(filename):
        filename = path.realpath(filename)
    try:
        with open(filename, "r", encoding="utf-8") as file:
            config = parseConfig(file.read())
    except OSError as error:
        raise ConfigError(f"cannot read {filename}: {error.strerror}") from error
    DataLogManager.log(
        f"Loaded config {path.basename(filename)}: M={config.M} N={config.N} "
        f"L={config.L} T={config.T} K={config.K}"
    )
    return config
