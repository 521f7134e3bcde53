import math

import numpy as np
import pytest

from videval.errors import DegenerateInputError
from videval.runner import kendall_tau_b, spearman_rho


def oracle_tau_b(xs, ys):
    """O(n^2) pair-count definition: tau-b = (C - D) / sqrt((C+D+Tx)(C+D+Ty)),
    where Tx/Ty count pairs tied only in x / only in y and pairs tied in
    both are excluded from every count."""
    c = d = tx = ty = 0
    n = len(xs)
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                tx += 1
            elif dy == 0:
                ty += 1
            elif (dx > 0) == (dy > 0):
                c += 1
            else:
                d += 1
    return (c - d) / math.sqrt((c + d + tx) * (c + d + ty))


def mean_ranks(values):
    """Average ranks with ties sharing the mean of their rank block."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def oracle_rho(xs, ys):
    rx = mean_ranks(list(xs))
    ry = mean_ranks(list(ys))
    return float(np.corrcoef(rx, ry)[0, 1])


def test_tau_perfect_concordance():
    assert kendall_tau_b([1, 2, 3], [1, 2, 3]) == 1.0


def test_tau_perfect_discordance():
    assert kendall_tau_b([1, 2, 3], [3, 2, 1]) == -1.0


def test_tau_tied_example():
    # C=4, D=0, Tx=1, Ty=1 -> 4 / sqrt(5 * 5) = 0.8
    xs, ys = [1, 2, 2, 3], [1, 2, 3, 3]
    assert oracle_tau_b(xs, ys) == 0.8
    assert kendall_tau_b(xs, ys) == 0.8


def test_rho_monotone():
    assert spearman_rho([1, 5, 9], [2, 3, 11]) == 1.0
    assert spearman_rho([1, 5, 9], [11, 3, 2]) == -1.0


def test_rho_tied_example():
    # ranks x = [1, 2.5, 2.5, 4], y = [1, 2, 3.5, 3.5] -> 5/6
    xs, ys = [1, 2, 2, 3], [1, 2, 3, 3]
    assert oracle_rho(xs, ys) == pytest.approx(5 / 6, abs=1e-12)
    assert spearman_rho(xs, ys) == pytest.approx(5 / 6, abs=1e-12)


def test_degenerate_inputs():
    with pytest.raises(DegenerateInputError):
        kendall_tau_b([1, 1, 1], [1, 2, 3])
    with pytest.raises(DegenerateInputError):
        spearman_rho([1, 2, 3], [5, 5, 5])
    with pytest.raises(ValueError):
        kendall_tau_b([1], [1])
    with pytest.raises(ValueError):
        kendall_tau_b([1, 2], [1, 2, 3])


def test_matches_oracles_on_random_ties():
    rng = np.random.default_rng(23)
    for _ in range(100):
        n = int(rng.integers(2, 60))
        xs = rng.integers(0, 8, size=n).tolist()
        ys = rng.integers(0, 8, size=n).tolist()
        if len(set(xs)) < 2 or len(set(ys)) < 2:
            continue
        assert kendall_tau_b(xs, ys) == pytest.approx(oracle_tau_b(xs, ys), abs=1e-12)
        assert spearman_rho(xs, ys) == pytest.approx(oracle_rho(xs, ys), abs=1e-12)


def test_invariance_under_increasing_transforms():
    rng = np.random.default_rng(29)
    for _ in range(50):
        n = int(rng.integers(3, 40))
        xs = rng.integers(0, 6, size=n).astype(float)
        ys = rng.integers(0, 6, size=n).astype(float)
        if len(set(xs)) < 2 or len(set(ys)) < 2:
            continue
        fx = (3.0 * xs + 1.0).tolist()          # strictly increasing affine
        gy = np.exp(ys).tolist()                # strictly increasing nonlinear
        assert kendall_tau_b(fx, gy) == pytest.approx(
            kendall_tau_b(xs.tolist(), ys.tolist()), abs=1e-12)
        assert spearman_rho(fx, gy) == pytest.approx(
            spearman_rho(xs.tolist(), ys.tolist()), abs=1e-12)


def test_tau_symmetry_and_negation():
    rng = np.random.default_rng(31)
    for _ in range(50):
        n = int(rng.integers(3, 40))
        xs = rng.integers(0, 6, size=n).tolist()
        ys = rng.uniform(0, 1, size=n).tolist()  # no ties in y
        if len(set(xs)) < 2:
            continue
        assert kendall_tau_b(xs, ys) == pytest.approx(kendall_tau_b(ys, xs), abs=1e-12)
        assert kendall_tau_b(xs, [-y for y in ys]) == pytest.approx(
            -kendall_tau_b(xs, ys), abs=1e-12)
