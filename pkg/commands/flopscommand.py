import typing

import click
import pandas as pd

import constants
from commands.simcommand import SimCommand, loadConfigOrFail, parseCommaList
from receivers import costmodel
from systemconfig import SystemConfig

kStepColumns = (
    costmodel.kThetaStep,
    costmodel.kXStep,
    costmodel.kHStep,
    costmodel.kGStep,
    costmodel.kKrfStep,
)


def flopsTables(
    cfg: SystemConfig, risElements: typing.Sequence[int], iterations: int = 1
) -> typing.Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Per-step costs of each receiver for every N, and the TALS / TSB comparison
    at equal iteration counts
    """
    stepRows = []
    comparisonRows = []
    for n in risElements:
        sized = cfg.withOverrides(N=n)
        breakdowns = [
            costmodel.flopsTsb(sized),
            costmodel.flopsTsb(sized, fastUpdates=True),
            costmodel.flopsTals(sized),
            costmodel.flopsKrf(sized),
        ]
        for breakdown in breakdowns:
            row = {"n": n, "receiver": breakdown.receiver}
            row.update(
                {step.replace("-", "_"): breakdown.step(step) for step in kStepColumns}
            )
            row["per_iteration"] = breakdown.perIteration
            row["one_shot"] = breakdown.oneShot
            row["total"] = breakdown.total(iterations)
            stepRows.append(row)

        tsbTotal = breakdowns[0].total(iterations)
        talsTotal = breakdowns[2].total(iterations)
        comparisonRows.append(
            {
                "n": n,
                "tsb_total": tsbTotal,
                "tals_total": talsTotal,
                "tals_over_tsb": talsTotal / tsbTotal,
                "gap": talsTotal - tsbTotal,
                "dominant_ratio": costmodel.dominantStepRatio(sized),
            }
        )
    return pd.DataFrame(stepRows), pd.DataFrame(comparisonRows)


class FlopsCommand(SimCommand):
    def __init__(
        self, cfg: SystemConfig, risElements: typing.Sequence[int], iterations: int
    ) -> None:
        SimCommand.__init__(self)
        self.cfg = cfg
        self.risElements = risElements
        self.iterations = iterations

    def execute(self) -> typing.Tuple[pd.DataFrame, pd.DataFrame]:
        return flopsTables(self.cfg, self.risElements, self.iterations)


@click.command()
@click.option(
    "--config", required=True, type=click.Path(exists=True, dir_okay=False)
)
@click.option(
    "--sweep-n",
    default=",".join(str(n) for n in constants.kDefaultFlopsSweepN),
    show_default=True,
    help="comma separated RIS element counts",
)
@click.option(
    "--iterations",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    help="iterations charged to both iterative receivers",
)
def flops(config: str, sweep_n: str, iterations: int) -> None:
    """Print the analytic operation counts per receiver and step."""
    try:
        risElements = [int(item) for item in parseCommaList(sweep_n)]
    except ValueError as error:
        raise click.BadParameter(str(error), param_hint="--sweep-n") from error
    if not risElements or min(risElements) < 1:
        raise click.BadParameter("needs positive counts", param_hint="--sweep-n")

    steps, comparison = FlopsCommand(
        loadConfigOrFail(config), risElements, iterations
    ).run()
    click.echo(steps.to_csv(index=False, lineterminator="\n"))
    click.echo(comparison.to_csv(index=False, lineterminator="\n"), nl=False)
