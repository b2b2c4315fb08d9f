"""
Operation counts for dense complex linear algebra, in complex multiply-adds.
"""


def matrixMultiply(rows: int, inner: int, cols: int) -> int:
    """
    (rows x inner) . (inner x cols)
    """
    return rows * inner * cols


def leastSquares(rows: int, cols: int) -> int:
    """
    QR-style solve of a full column rank rows x cols system
    """
    return 2 * rows * cols**2 + cols**3


def scaling(rows: int, cols: int) -> int:
    """
    Row or column scaling of a rows x cols matrix
    """
    return rows * cols


def leastSquaresLeadingTerm(rows: int, cols: int) -> int:
    return 2 * rows * cols**2
