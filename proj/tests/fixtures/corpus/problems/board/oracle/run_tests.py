from harness import run


def play(cls, moves):
    board = cls()
    for row, col, mark in moves:
        board.place(row, col, mark)
    return board


def raises_on_taken(cls):
    board = cls()
    board.place(1, 1, "X")
    try:
        board.place(1, 1, "O")
    except ValueError:
        return True
    return False


FULL_DRAW = [(0, 0, "X"), (0, 1, "O"), (0, 2, "X"), (1, 0, "X"), (1, 1, "O"),
             (1, 2, "O"), (2, 0, "O"), (2, 1, "X"), (2, 2, "X")]

CASES = [
    lambda c: play(c, []).winner() is None,
    lambda c: play(c, []).is_full() is False,
    lambda c: play(c, [(0, 0, "X"), (0, 1, "X"), (0, 2, "X")]).winner() == "X",
    lambda c: play(c, [(0, 1, "O"), (1, 1, "O"), (2, 1, "O")]).winner() == "O",
    lambda c: play(c, [(0, 0, "X"), (1, 1, "X"), (2, 2, "X")]).winner() == "X",
    lambda c: play(c, [(0, 2, "O"), (1, 1, "O"), (2, 0, "O")]).winner() == "O",
    raises_on_taken,
    lambda c: play(c, FULL_DRAW).is_full() is True and play(c, FULL_DRAW).winner() is None,
    lambda c: play(c, [(0, 0, "X"), (0, 1, "O"), (2, 2, "X")]).winner() is None,
    lambda c: play(c, FULL_DRAW[:8]).is_full() is False,
]

run("Board", CASES, lambda cls, case: case(cls))
