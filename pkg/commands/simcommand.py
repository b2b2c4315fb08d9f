import typing

import click
from wpilib import DataLogManager

import constants
from receivers.receiver import BalsOptions
from systemconfig import SystemConfig, loadConfig
from util.simerrors import ConfigError


class SimCommand:
    """
    A command-line action. run() logs the start, executes, and logs the end.
    """

    def __init__(self) -> None:
        self.name = self.__class__.__name__

    def getName(self) -> str:
        return self.name

    def initialize(self) -> None:
        DataLogManager.log(f"Command: {self.getName()}")

    def execute(self) -> typing.Any:
        raise NotImplementedError("Must be implemented by subclass")

    def end(self) -> None:
        DataLogManager.log("... DONE")

    def run(self) -> typing.Any:
        self.initialize()
        result = self.execute()
        self.end()
        return result


def parseCommaList(text: str) -> typing.List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def loadConfigOrFail(filename: str) -> SystemConfig:
    try:
        return loadConfig(filename)
    except ConfigError as error:
        raise click.BadParameter(str(error), param_hint="--config") from error


def campaignSettings(
    config: str,
    runs: typing.Optional[int],
    fullRuns: bool,
    fastUpdates: bool,
    receivers: str,
    seed: typing.Optional[int],
) -> typing.Tuple[SystemConfig, typing.List[str], BalsOptions]:
    """
    Config file plus command-line overrides, the receiver labels to run and
    the alternating least squares options
    """
    cfg = loadConfigOrFail(config)
    if fullRuns:
        runs = constants.kFullScaleRuns
    try:
        cfg = cfg.withOverrides(runs=runs, baseSeed=seed)
    except ConfigError as error:
        raise click.BadParameter(str(error)) from error

    labels = parseCommaList(receivers)
    for label in labels:
        if label not in constants.kReceiverLabels:
            raise click.BadParameter(
                f"unknown receiver {label!r}, expected one of "
                f"{', '.join(constants.kReceiverLabels)}",
                param_hint="--receivers",
            )
    if fastUpdates and constants.kReceiverTsbFast not in labels:
        position = (
            labels.index(constants.kReceiverTsb) + 1
            if constants.kReceiverTsb in labels
            else len(labels)
        )
        labels.insert(position, constants.kReceiverTsbFast)
    return cfg, labels, BalsOptions()


def campaignOptions(function: typing.Callable) -> typing.Callable:
    options = [
        click.option(
            "--config",
            required=True,
            type=click.Path(exists=True, dir_okay=False),
            help="key = value system configuration file",
        ),
        click.option("--runs", type=click.IntRange(min=1), help="trials per SNR point"),
        click.option(
            "--full-runs",
            is_flag=True,
            help=f"use {constants.kFullScaleRuns} trials per SNR point",
        ),
        click.option(
            "--fast-updates",
            is_flag=True,
            help="also run TSB with the inverse-free updates",
        ),
        click.option(
            "--receivers",
            default=",".join(constants.kDefaultReceivers),
            show_default=True,
            help="comma separated receivers",
        ),
        click.option(
            "--seed",
            type=click.IntRange(min=0),
            envvar=constants.kSeedEnvironmentVariable,
            help="base seed, overrides the config file",
        ),
        click.option(
            "--workers",
            type=click.IntRange(min=1),
            default=1,
            show_default=True,
            help="trials run concurrently",
        ),
    ]
    for option in reversed(options):
        function = option(function)
    return function
