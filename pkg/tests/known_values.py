"""Reference data shared by several test modules."""

EXPECTED_SOLUTIONS = {
    (3, 0, 0, 0), (5, 0, 1, 1), (7, 0, 2, 2), (11, 0, 3, 4), (1, 1, 0, 0),
    (2, 1, 0, 0), (2, 2, 0, 0), (3, 3, 0, 1), (4, 1, 0, 1), (4, 2, 0, 1),
    (4, 3, 1, 1), (5, 5, 0, 2), (6, 3, 0, 2), (6, 4, 1, 2), (6, 5, 2, 2),
    (8, 6, 1, 3), (9, 1, 3, 3), (9, 2, 3, 3), (10, 9, 3, 4), (11, 6, 4, 4),
}
