"""Build the reduced network for a confirmed backward equivalence.

Each block becomes one variable of the reduced network, named by joining
the block's members with ``__`` in sorted order.  The block's update is
the update of its lexicographically smallest member with every variable
renamed to its block variable, with no simplification (duplicated
conjuncts are kept as they arise).  Any member would do: reductions
taken with different representatives have identical step functions.

``project`` and ``lift`` are the two directions of the bijection between
states constant on the partition and states of the reduced network.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .bbe import check_bbe
from .errors import BbenetError, NotABbeError
from .network import BooleanNetwork, Partition, State
from .expr import substitute

__all__ = [
    "ReductionResult",
    "ReductionReport",
    "reduce_network",
    "project",
    "lift",
    "format_mapping",
    "timed_reduction",
]


@dataclass(frozen=True)
class ReductionResult:
    reduced: BooleanNetwork
    partition: Partition
    original_variables: tuple[str, ...]
    block_of: dict  # original variable -> reduced variable
    members_of: dict  # reduced variable -> sorted original names
    representative_of: dict  # reduced variable -> chosen original variable


@dataclass(frozen=True)
class ReductionReport:
    original_size: int
    reduced_size: int
    ratio: float
    strategy: str
    time_ms: float


def reduce_network(bn: BooleanNetwork, p: Partition) -> ReductionResult:
    """Collapse each block of ``p`` into one variable.

    ``p`` must be a backward equivalence of ``bn``; this is re-verified
    here because the construction is meaningless otherwise, and a silent
    misuse would produce a semantically wrong network.  Raises
    :class:`NotABbeError` carrying the witness state on failure.
    """
    outcome = check_bbe(bn, p)
    if not outcome.is_bbe:
        raise NotABbeError(outcome.witness)

    names = ["__".join(block) for block in p.blocks]
    if len(set(names)) != len(names):
        raise BbenetError(
            "merged block names collide; rename the clashing variables first"
        )
    renaming = {}
    for name, block in zip(names, p.blocks):
        for member in block:
            renaming[member] = name
    updates = tuple(
        substitute(bn.update_of(block[0]), renaming) for block in p.blocks
    )
    reduced = BooleanNetwork(tuple(names), updates)
    return ReductionResult(
        reduced=reduced,
        partition=p,
        original_variables=bn.variables,
        block_of=dict(renaming),
        members_of={name: block for name, block in zip(names, p.blocks)},
        representative_of={name: block[0] for name, block in zip(names, p.blocks)},
    )


def project(res: ReductionResult, s: State) -> State:
    """Map a constant state of the original network to the reduced state
    that assigns each block its shared value."""
    if len(s) != len(res.original_variables):
        raise ValueError("state width does not match the original network")
    position = {name: i for i, name in enumerate(res.original_variables)}
    values = []
    for block in res.partition.blocks:
        first = s[position[block[0]]]
        for name in block[1:]:
            if s[position[name]] != first:
                raise ValueError("state is not constant on the partition")
        values.append(first)
    return tuple(values)


def lift(res: ReductionResult, t: State) -> State:
    """Inverse of :func:`project`: spread each block value over its members."""
    if len(t) != res.reduced.n:
        raise ValueError("state width does not match the reduced network")
    position = {name: i for i, name in enumerate(res.original_variables)}
    s = [0] * len(res.original_variables)
    for value, block in zip(t, res.partition.blocks):
        for name in block:
            s[position[name]] = value
    return tuple(s)


def format_mapping(res: ReductionResult) -> str:
    """Sidecar text mapping, one line per reduced variable."""
    lines = [
        f"{name}: {','.join(res.members_of[name])}" for name in res.reduced.variables
    ]
    return "\n".join(lines) + "\n"


def timed_reduction(
    bn: BooleanNetwork, p: Partition, strategy: str, started: float
) -> ReductionReport:
    """Report helper: sizes, ratio, and wall-clock milliseconds since
    ``started`` (a ``time.perf_counter`` value)."""
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    return ReductionReport(
        original_size=bn.n,
        reduced_size=len(p),
        ratio=len(p) / bn.n,
        strategy=strategy,
        time_ms=elapsed_ms,
    )
