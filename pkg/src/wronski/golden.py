"""Reference values of d(m, p) and I(m, p), keyed by (m, p).

Each entry is looked up by its table coordinates (row p, column m), so a
mismatch can name the exact cell.  Cells without a reference value are
absent.
"""

D_TABLE: dict[tuple[int, int], int] = {
    # row p = 2, columns m = 2..8
    (2, 2): 2, (3, 2): 5, (4, 2): 14, (5, 2): 42, (6, 2): 132, (7, 2): 429, (8, 2): 1430,
    # row p = 3, columns m = 3..8
    (3, 3): 42, (4, 3): 462, (5, 3): 6006, (6, 3): 87516, (7, 3): 1385670, (8, 3): 23371634,
    # row p = 4, columns m = 4..6
    (4, 4): 24024, (5, 4): 1662804, (6, 4): 140229804,
    # row p = 5, column m = 5
    (5, 5): 701149020,
}

I_TABLE: dict[tuple[int, int], int] = {
    # row p = 2, columns m = 3..12
    (3, 2): 1, (4, 2): 0, (5, 2): 2, (6, 2): 0, (7, 2): 5,
    (8, 2): 0, (9, 2): 14, (10, 2): 0, (11, 2): 42, (12, 2): 0,
    # row p = 3, columns m = 3..12
    (3, 3): 0, (4, 3): 2, (5, 3): 0, (6, 3): 12, (7, 3): 0,
    (8, 3): 110, (9, 3): 0, (10, 3): 1274, (11, 3): 0, (12, 3): 17136,
    # row p = 4, columns m = 4..11
    (4, 4): 0, (5, 4): 12, (6, 4): 0, (7, 4): 286, (8, 4): 0,
    (9, 4): 12376, (10, 4): 0, (11, 4): 759696,
    # row p = 5, columns m = 5..11
    (5, 5): 0, (6, 5): 286, (7, 5): 0, (8, 5): 33592, (9, 5): 0,
    (10, 5): 8320480, (11, 5): 0,
}


def cell(table: str, m: int, p: int) -> str:
    return f"{table}-table row p={p}, column m={m}"
