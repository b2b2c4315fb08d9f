import click

import constants
from commands.simcommand import SimCommand, loadConfigOrFail
from subsystems.framesubsystem import IdentifiabilityReport, validateIdentifiability
from systemconfig import SystemConfig


class ValidateCommand(SimCommand):
    def __init__(self, cfg: SystemConfig) -> None:
        SimCommand.__init__(self)
        self.cfg = cfg

    def execute(self) -> IdentifiabilityReport:
        return validateIdentifiability(self.cfg)


@click.command()
@click.option(
    "--config", required=True, type=click.Path(exists=True, dir_okay=False)
)
@click.pass_context
def validate(ctx: click.Context, config: str) -> None:
    """Check that the configured dimensions are identifiable."""
    report = ValidateCommand(loadConfigOrFail(config)).run()
    click.echo(report.describe())
    if not report.passed:
        ctx.exit(constants.kValidationFailedExitCode)
