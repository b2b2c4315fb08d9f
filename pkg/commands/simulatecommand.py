import typing

import click

from commands.simcommand import SimCommand, campaignOptions, campaignSettings
from experimentcontainer import ExperimentContainer, SweepResult
from receivers.receiver import BalsOptions
from subsystems.loggingsubsystem import LoggingSubsystem
from systemconfig import SystemConfig
from util.simerrors import ConfigError


class SimulateCommand(SimCommand):
    def __init__(
        self,
        cfg: SystemConfig,
        receivers: typing.List[str],
        opts: BalsOptions,
        workers: int = 1,
    ) -> None:
        SimCommand.__init__(self)
        try:
            self.container = ExperimentContainer(cfg, receivers, opts)
        except ConfigError as error:
            raise click.BadParameter(str(error), param_hint="--config") from error
        self.workers = workers

    def execute(self) -> SweepResult:
        logger = LoggingSubsystem(self.container.receiverLabels)
        return self.container.runSweep(self.workers, logger)


@click.command()
@campaignOptions
# pylint: disable-next=too-many-arguments
def simulate(config, runs, full_runs, fast_updates, receivers, seed, workers) -> None:
    """Run the Monte Carlo sweep and print the aggregate table."""
    cfg, labels, opts = campaignSettings(
        config, runs, full_runs, fast_updates, receivers, seed
    )
    result = SimulateCommand(cfg, labels, opts, workers).run()
    click.echo(result.aggregates.to_csv(index=False, lineterminator="\n"), nl=False)
