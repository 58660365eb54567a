"""Backward equivalence checking and maximal-partition refinement.

A partition of the network's variables is a backward equivalence when
every state that assigns one shared value per block steps to a state
that does so too.  The check runs directly on the update functions (no
state graph needed): the negated condition goes to the SAT solver, and
a model is a counterexample state.

``maximal_bbe`` computes the unique coarsest such partition refining a
given one by counterexample-driven splitting: while the candidate fails,
split every block by the 0/1 image its members take at the witness
state, and repeat.  Each split strictly increases the block count, so at
most ``n`` iterations run.  The final partition does not depend on which
witnesses the solver happens to produce, but the deterministic solver
makes the whole trace reproducible as well.

``brute_check_bbe`` and ``brute_maximal_bbe`` are independent
enumeration twins of the SAT-based routines, kept as correctness
oracles: they walk all ``2^k`` constant states (one bit per block)
instead of solving formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .errors import CapExceededError
from .expr import evaluate
from .network import (
    BooleanNetwork,
    Partition,
    State,
    format_state,
    is_constant_state,
    step,
)
from .sat import build_negated_phi, solve

__all__ = [
    "BbeCheck",
    "TraceStep",
    "RefinementTrace",
    "check_bbe",
    "split_by_witness",
    "maximal_bbe",
    "brute_check_bbe",
    "brute_maximal_bbe",
    "format_trace",
]

BRUTE_BLOCK_CAP = 24


@dataclass(frozen=True)
class BbeCheck:
    """Outcome of an equivalence check.

    ``witness`` is ``None`` when the partition is a backward
    equivalence; otherwise it is a state constant on the candidate
    partition whose successor is not.
    """

    witness: Optional[State]

    @property
    def is_bbe(self) -> bool:
        return self.witness is None


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    witness: State
    partition: Partition  # the refined partition produced by this split


@dataclass(frozen=True)
class RefinementTrace:
    steps: tuple[TraceStep, ...]
    final: Partition


def check_bbe(bn: BooleanNetwork, p: Partition) -> BbeCheck:
    """SAT-based equivalence check; the model, restricted to the network
    variables, becomes the witness state."""
    cnf = build_negated_phi(bn, p)
    result = solve(cnf)
    if not result.satisfiable:
        return BbeCheck(None)
    model = result.assignment
    witness = tuple(1 if model[cnf.var_index[name]] else 0 for name in bn.variables)
    return BbeCheck(witness)


def split_by_witness(bn: BooleanNetwork, p: Partition, s: State) -> Partition:
    """Split every block of ``p`` by the value each member's update takes
    at ``s``; empty halves are dropped.  The result refines ``p``."""
    if not is_constant_state(bn, s, p):
        raise ValueError("witness state is not constant on the partition")
    env = dict(zip(bn.variables, s))
    image = {name: evaluate(f, env) for name, f in zip(bn.variables, bn.updates)}
    blocks = []
    for block in p.blocks:
        zeros = [name for name in block if image[name] == 0]
        ones = [name for name in block if image[name] == 1]
        if zeros:
            blocks.append(zeros)
        if ones:
            blocks.append(ones)
    return Partition.of(blocks, bn.variables)


def maximal_bbe(
    bn: BooleanNetwork,
    initial: Partition,
    want_trace: bool = False,
    check: Callable[[BooleanNetwork, Partition], BbeCheck] = check_bbe,
) -> tuple[Partition, Optional[RefinementTrace]]:
    """Coarsest backward equivalence refining ``initial``.

    ``check`` exists as a hook so tests (or callers with their own
    oracle) can drive the refinement with scripted witnesses; the result
    is the same for any sound oracle.
    """
    part = initial
    steps: list[TraceStep] = []
    iteration = 0
    while True:
        outcome = check(bn, part)
        if outcome.is_bbe:
            break
        iteration += 1
        refined = split_by_witness(bn, part, outcome.witness)
        if len(refined) == len(part):
            raise RuntimeError("witness failed to split the partition")
        if want_trace:
            steps.append(TraceStep(iteration, outcome.witness, refined))
        part = refined
    trace = RefinementTrace(tuple(steps), part) if want_trace else None
    return part, trace


def brute_check_bbe(
    bn: BooleanNetwork, p: Partition, cap: int = BRUTE_BLOCK_CAP
) -> BbeCheck:
    """Enumeration twin of :func:`check_bbe`.

    Walks the ``2^k`` states constant on ``p`` (one bit per block, block
    index 0 as the most significant counting bit) and reports the first
    one, in counting order, whose successor is not constant.
    """
    k = len(p.blocks)
    if k > cap:
        raise CapExceededError(f"{k} blocks exceed the enumeration cap of {cap}")
    positions = [[bn.position(name) for name in block] for block in p.blocks]
    n = bn.n
    for code in range(1 << k):
        s = [0] * n
        for j, block_positions in enumerate(positions):
            value = (code >> (k - 1 - j)) & 1
            for pos in block_positions:
                s[pos] = value
        state = tuple(s)
        image = step(bn, state)
        for block_positions in positions:
            first = image[block_positions[0]]
            if any(image[pos] != first for pos in block_positions[1:]):
                return BbeCheck(state)
    return BbeCheck(None)


def brute_maximal_bbe(
    bn: BooleanNetwork, initial: Partition, cap: int = BRUTE_BLOCK_CAP
) -> Partition:
    """Refinement loop driven by :func:`brute_check_bbe`; by uniqueness of
    the coarsest equivalence it must return exactly what
    :func:`maximal_bbe` returns."""
    part, _ = maximal_bbe(
        bn, initial, check=lambda net, p: brute_check_bbe(net, p, cap=cap)
    )
    return part


def format_trace(trace: RefinementTrace) -> str:
    """Line-oriented trace export: ``iter=<k> witness=<bits> blocks=<count>``."""
    lines = [
        f"iter={s.iteration} witness={format_state(s.witness)} blocks={len(s.partition)}"
        for s in trace.steps
    ]
    return "\n".join(lines) + ("\n" if lines else "")
