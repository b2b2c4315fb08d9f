#!/usr/bin/env python3

import click
from wpilib import DataLogManager

import constants
from commands.flopscommand import flops
from commands.simulatecommand import simulate
from commands.sweepcommand import sweep
from commands.validatecommand import validate


@click.group()
def cli() -> None:
    """
    Semi-blind channel estimation for RIS-assisted MIMO links: Monte Carlo
    sweeps, identifiability checks and operation counts.
    """
    DataLogManager.start(constants.kLogDirectory)


cli.add_command(simulate)
cli.add_command(sweep)
cli.add_command(flops)
cli.add_command(validate)


if __name__ == "__main__":
    cli()
