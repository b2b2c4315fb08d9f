import os
import typing

import click

import constants
from commands.simcommand import campaignOptions, campaignSettings
from commands.simulatecommand import SimulateCommand
from experimentcontainer import SweepResult
from receivers.receiver import BalsOptions
from systemconfig import SystemConfig
from util.resultstable import writeAggregates, writeRuntime, writeTrials


class SweepCommand(SimulateCommand):
    def __init__(
        self,
        cfg: SystemConfig,
        receivers: typing.List[str],
        opts: BalsOptions,
        outputDirectory: str,
        workers: int = 1,
    ) -> None:
        SimulateCommand.__init__(self, cfg, receivers, opts, workers)
        self.outputDirectory = outputDirectory

    def execute(self) -> SweepResult:
        result = SimulateCommand.execute(self)
        os.makedirs(self.outputDirectory, exist_ok=True)
        writeTrials(
            result.trialsFrame(),
            os.path.join(self.outputDirectory, constants.kTrialsFileName),
        )
        writeAggregates(
            result.aggregates,
            os.path.join(self.outputDirectory, constants.kAggregateFileName),
        )
        writeRuntime(
            result.runtime,
            os.path.join(self.outputDirectory, constants.kRuntimeFileName),
        )
        return result


@click.command()
@campaignOptions
@click.option(
    "--out",
    required=True,
    type=click.Path(file_okay=False),
    help="directory receiving the results files",
)
# pylint: disable-next=too-many-arguments
def sweep(config, runs, full_runs, fast_updates, receivers, seed, workers, out) -> None:
    """Run the Monte Carlo sweep and write trials, aggregate and runtime files."""
    cfg, labels, opts = campaignSettings(
        config, runs, full_runs, fast_updates, receivers, seed
    )
    SweepCommand(cfg, labels, opts, out, workers).run()
    for name in (
        constants.kTrialsFileName,
        constants.kAggregateFileName,
        constants.kRuntimeFileName,
    ):
        click.echo(os.path.join(out, name))
