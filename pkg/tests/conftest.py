"""Shared fixtures and random-instance generators for the test suite."""

import random

import pytest

from bbenet import (
    And,
    BooleanNetwork,
    Const,
    Not,
    Or,
    Partition,
    Var,
    parse_bnet,
)

# Three-variable example network: the first two variables always evolve
# identically once they agree, the third does not.
TOY3_TEXT = """\
x1, !x3 | x1
x2, x1 | x2 | !x3
x3, x2 & !x3
"""

# Five-gene cortical area development model (bit order: Fgf8, Pax6,
# Emx2, Sp8, Coup_tfi).
CORTICAL_TEXT = """\
targets, factors
Fgf8, Fgf8 & !Emx2 & Sp8
Pax6, !Emx2 & Sp8 & !Coup_tfi
Emx2, !Fgf8 & !Pax6 & !Sp8 & Coup_tfi
Sp8, Fgf8 & !Emx2
Coup_tfi, !Fgf8 & !Sp8
"""


@pytest.fixture
def toy3():
    return parse_bnet(TOY3_TEXT)


@pytest.fixture
def cortical():
    return parse_bnet(CORTICAL_TEXT)


def random_expr(rng: random.Random, names, depth):
    """Random expression of depth at most ``depth`` over ``names``."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.15:
            return Const(rng.randint(0, 1))
        return Var(rng.choice(names))
    roll = rng.random()
    if roll < 0.25:
        return Not(random_expr(rng, names, depth - 1))
    left = random_expr(rng, names, depth - 1)
    right = random_expr(rng, names, depth - 1)
    return And(left, right) if roll < 0.625 else Or(left, right)


def random_network(rng: random.Random, n: int, depth: int = 4) -> BooleanNetwork:
    names = tuple(f"v{i}" for i in range(n))
    return BooleanNetwork(
        names, tuple(random_expr(rng, names, depth) for _ in names)
    )


def random_partition(rng: random.Random, bn: BooleanNetwork) -> Partition:
    """Random partition of the network's variables."""
    k = rng.randint(1, bn.n)
    buckets = {}
    for name in bn.variables:
        buckets.setdefault(rng.randrange(k), []).append(name)
    return Partition.of(buckets.values(), bn.variables)


def coarsen(rng: random.Random, p: Partition, order) -> Partition:
    """Merge random pairs of blocks; the result is coarser than ``p``."""
    blocks = [list(b) for b in p.blocks]
    merges = rng.randint(0, max(0, len(blocks) - 1))
    for _ in range(merges):
        if len(blocks) < 2:
            break
        i, j = rng.sample(range(len(blocks)), 2)
        blocks[i].extend(blocks.pop(j))
    return Partition.of(blocks, order)


def all_set_partitions(names):
    """Every partition of ``names`` as a list of lists (Bell-number many)."""
    names = list(names)

    def rec(i, groups):
        if i == len(names):
            yield [list(g) for g in groups]
            return
        for g in groups:
            g.append(names[i])
            yield from rec(i + 1, groups)
            g.pop()
        groups.append([names[i]])
        yield from rec(i + 1, groups)
        groups.pop()

    yield from rec(0, [])
