"""Re-derive the frozen oracle values from the naive brute force."""
import oracles
from test_autgrp import ORDERS


def test_frozen_aut_orders():
    grams = {("sp", 2): lambda p: [[0, 1], [p - 1, 0]], ("tr", 2): lambda p: [[1, 0], [0, 1]],
             ("tr", 3): lambda p: [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}
    for (kind, n, p), (order, neutral) in ORDERS.items():
        g = grams[(kind, n)](p)
        assert oracles.projective_similitude_count(p, g) == order
        if n % 2 == 0 and kind == "tr":
            assert oracles.proper_projective_similitude_count(p, g) == neutral


def test_frozen_class_counts():
    assert len(oracles.symmetric_similarity_classes(3, 2)) == 2
    assert len(oracles.symmetric_similarity_classes(3, 3)) == 1
    assert len(oracles.symmetric_similarity_classes(5, 2)) == 2
