import math

import pint

unitRegistry = pint.UnitRegistry()


def decibelsToRatio(valueDb: float) -> float:
    """
    Power ratio of a decibel value, 10 dB -> 10
    """
    if math.isinf(valueDb):
        return math.inf if valueDb > 0 else 0.0
    return unitRegistry.Quantity(valueDb, unitRegistry.decibel).m_as("dimensionless")


def ratioToDecibels(ratio: float) -> float:
    if math.isnan(ratio):
        return math.nan
    if ratio <= 0:
        return -math.inf
    if math.isinf(ratio):
        return math.inf
    return unitRegistry.Quantity(ratio, "dimensionless").m_as(unitRegistry.decibel)
