"""
Reading and writing the comma separated results files. Floats are written in
their shortest round-trip form and read back with round-trip precision, so a
write -> read -> write cycle reproduces the file byte for byte.
"""

import re
import typing

import pandas as pd

import constants
from util.simerrors import ResultsParseError

kIntegerColumns = ("trial", "seed", "iterations", "flops", "failed", "runs")
kTextColumns = ("receiver",)


def writeTable(frame: pd.DataFrame, filename: str, columns: typing.Sequence[str]) -> None:
    frame.loc[:, list(columns)].to_csv(filename, index=False, lineterminator="\n")


def writeTrials(frame: pd.DataFrame, filename: str) -> None:
    writeTable(frame, filename, constants.kTrialsColumns)


def writeAggregates(frame: pd.DataFrame, filename: str) -> None:
    writeTable(frame, filename, constants.kAggregateColumns)


def writeRuntime(frame: pd.DataFrame, filename: str) -> None:
    writeTable(frame, filename, constants.kRuntimeColumns)


def _lineNumberOf(error: Exception) -> typing.Optional[int]:
    match = re.search(r"line (\d+)", str(error))
    return int(match.group(1)) if match else None


def readTable(filename: str, columns: typing.Sequence[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(
            filename,
            float_precision="round_trip",
            dtype={column: str for column in kTextColumns},
            keep_default_na=False,
            na_values=[""],
        )
    except pd.errors.EmptyDataError as error:
        raise ResultsParseError("file is empty", lineNumber=1) from error
    except pd.errors.ParserError as error:
        raise ResultsParseError(str(error), lineNumber=_lineNumberOf(error)) from error

    for column in columns:
        if column not in frame.columns:
            raise ResultsParseError(f"missing column {column!r}", 1, column)
    if list(frame.columns) != list(columns):
        extra = [column for column in frame.columns if column not in columns]
        raise ResultsParseError(
            f"header does not match {','.join(columns)}",
            1,
            extra[0] if extra else None,
        )

    for column in columns:
        if column in kTextColumns:
            missing = frame[column].isna()
            if missing.any():
                raise ResultsParseError(
                    f"empty {column!r}", int(missing.idxmax()) + 2, column
                )
            continue
        numeric = pd.to_numeric(frame[column], errors="coerce")
        bad = numeric.isna() & frame[column].notna()
        if bad.any():
            row = int(bad.idxmax())
            raise ResultsParseError(
                f"{column!r} has non-numeric value {frame[column][row]!r}",
                row + 2,
                column,
            )
        if column in kIntegerColumns:
            if numeric.isna().any() or (numeric != numeric.round()).any():
                row = int((numeric.isna() | (numeric != numeric.round())).idxmax())
                raise ResultsParseError(
                    f"{column!r} must hold integers", row + 2, column
                )
            numeric = numeric.astype("int64")
        frame[column] = numeric
    return frame


def readTrials(filename: str) -> pd.DataFrame:
    return readTable(filename, constants.kTrialsColumns)


def readAggregates(filename: str) -> pd.DataFrame:
    return readTable(filename, constants.kAggregateColumns)


def readRuntime(filename: str) -> pd.DataFrame:
    return readTable(filename, constants.kRuntimeColumns)
