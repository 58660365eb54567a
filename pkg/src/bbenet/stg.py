"""Explicit state transition graphs, attractors, and preservation checks.

The synchronous graph on all ``2^n`` states is a functional graph (every
state has exactly one successor), so it is stored as a successor table
indexed by the integer encoding of states and its attractors are exactly
its cycles, found by a three-color traversal.  Update functions are
evaluated over all states at once with numpy bit arithmetic.

Explicit construction is guarded by a variable cap (default 25, about
33M successor entries); reduce first or raise the cap for larger
networks.

``verify_isomorphism`` and ``verify_attractor_preservation`` are
executable forms of the guarantees the reduction gives on the constant
slice of the state space: stepping commutes with projecting/lifting in
both directions, attractors never straddle the boundary of the constant
set, and the constant attractors of the original network are exactly the
attractors of the reduced one, up to the state bijection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import CapExceededError
from .expr import And, Const, Not, Or, Var
from .network import (
    BooleanNetwork,
    Partition,
    format_state,
    pack_state,
    unpack_state,
)
from .reduction import ReductionResult, lift, project, reduce_network

__all__ = [
    "DEFAULT_CAP",
    "Stg",
    "Attractor",
    "RestrictedStg",
    "CheckReport",
    "build_stg",
    "stg_attractors",
    "attractors",
    "restrict_constant",
    "verify_isomorphism",
    "verify_attractor_preservation",
    "export_dot",
    "format_attractors",
]

DEFAULT_CAP = 25


@dataclass(frozen=True, eq=False)
class Stg:
    variables: tuple[str, ...]
    successor: np.ndarray  # successor[s] for every integer-encoded state s

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def size(self) -> int:
        return len(self.successor)


@dataclass(frozen=True)
class Attractor:
    """An absorbing cycle, rotated to start at its smallest state."""

    states: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.states)


@dataclass(frozen=True, eq=False)
class RestrictedStg:
    """The subgraph induced by the states constant on a partition."""

    variables: tuple[str, ...]
    states: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    problems: tuple[str, ...]


def _bit_column(idx: np.ndarray, n: int, position: int) -> np.ndarray:
    return ((idx >> (n - 1 - position)) & 1).astype(bool)


def _eval_over_states(expr, idx: np.ndarray, n: int, position: dict) -> np.ndarray:
    if isinstance(expr, Var):
        return _bit_column(idx, n, position[expr.name])
    if isinstance(expr, Const):
        return np.full(len(idx), bool(expr.value))
    if isinstance(expr, Not):
        return ~_eval_over_states(expr.child, idx, n, position)
    if isinstance(expr, And):
        return _eval_over_states(expr.left, idx, n, position) & _eval_over_states(
            expr.right, idx, n, position
        )
    if isinstance(expr, Or):
        return _eval_over_states(expr.left, idx, n, position) | _eval_over_states(
            expr.right, idx, n, position
        )
    raise TypeError(f"not an expression node: {expr!r}")


def build_stg(bn: BooleanNetwork, cap: int = DEFAULT_CAP) -> Stg:
    """Successor table over all ``2^n`` states; raises
    :class:`CapExceededError` when ``n`` exceeds ``cap``."""
    n = bn.n
    if n > cap:
        raise CapExceededError(
            f"explicit graph over {n} variables exceeds the cap of {cap}"
        )
    dtype = np.int64 if n > 30 else np.int32
    size = 1 << n
    idx = np.arange(size, dtype=dtype)
    position = {name: i for i, name in enumerate(bn.variables)}
    successor = np.zeros(size, dtype=dtype)
    for i, update in enumerate(bn.updates):
        column = _eval_over_states(update, idx, n, position)
        successor |= column.astype(dtype) << (n - 1 - i)
    return Stg(bn.variables, successor)


def stg_attractors(stg: Stg) -> list[Attractor]:
    """All cycles of the successor table, via three-color traversal.

    Colors: 0 unvisited, 1 on the current walk, 2 settled.  Hitting a
    state of the current walk closes a new cycle; hitting a settled
    state means the walk drains into a known region.  Result is sorted
    by smallest member state.
    """
    successor = stg.successor.tolist()
    size = len(successor)
    color = bytearray(size)
    found: list[Attractor] = []
    for start in range(size):
        if color[start]:
            continue
        path: list[int] = []
        s = start
        while color[s] == 0:
            color[s] = 1
            path.append(s)
            s = successor[s]
        if color[s] == 1:
            at = path.index(s)
            cycle = path[at:]
            pivot = cycle.index(min(cycle))
            found.append(Attractor(tuple(cycle[pivot:] + cycle[:pivot])))
        for visited in path:
            color[visited] = 2
    found.sort(key=lambda a: a.states[0])
    return found


def attractors(bn: BooleanNetwork, cap: int = DEFAULT_CAP) -> list[Attractor]:
    return stg_attractors(build_stg(bn, cap))


def _constant_mask(variables, p: Partition, size: int, n: int) -> np.ndarray:
    idx = np.arange(size, dtype=np.int64 if n > 30 else np.int32)
    position = {name: i for i, name in enumerate(variables)}
    mask = np.ones(size, dtype=bool)
    for block in p.blocks:
        first = _bit_column(idx, n, position[block[0]])
        for name in block[1:]:
            mask &= first == _bit_column(idx, n, position[name])
    return mask


def restrict_constant(stg: Stg, p: Partition) -> RestrictedStg:
    """Keep only the states constant on ``p`` and the edges between them."""
    if p.universe != frozenset(stg.variables):
        raise ValueError("partition does not cover the graph's variables")
    mask = _constant_mask(stg.variables, p, stg.size, stg.n)
    states = tuple(int(s) for s in np.nonzero(mask)[0])
    successor = stg.successor
    edges = tuple(
        (s, int(successor[s])) for s in states if mask[int(successor[s])]
    )
    return RestrictedStg(stg.variables, states, edges)


def verify_isomorphism(
    bn: BooleanNetwork, p: Partition, cap: int = DEFAULT_CAP
) -> CheckReport:
    """Check that the constant slice of the original graph and the full
    graph of the reduced network are the same graph under the state
    bijection, and that no attractor straddles the constant set.

    Stops at the first discrepancy; any failure here indicates an
    implementation bug, not a property of the model.
    """
    from .network import step

    if bn.n > cap:
        raise CapExceededError(
            f"verification over {bn.n} variables exceeds the cap of {cap}"
        )
    res = reduce_network(bn, p)  # re-verifies that p is an equivalence
    reduced = res.reduced
    k = reduced.n
    problems = []
    for code in range(1 << k):
        t = unpack_state(code, k)
        s = lift(res, t)
        image = step(bn, s)
        reduced_image = step(reduced, t)
        try:
            projected = project(res, image)
        except ValueError:
            problems.append(
                f"successor of constant state {format_state(s)} is not constant"
            )
            break
        if projected != reduced_image:
            problems.append(
                f"projecting the successor of {format_state(s)} gives "
                f"{format_state(projected)}, the reduced network steps to "
                f"{format_state(reduced_image)}"
            )
            break
        if image != lift(res, reduced_image):
            problems.append(
                f"lifting the reduced successor of {format_state(t)} disagrees "
                f"with the original successor"
            )
            break
    if not problems:
        stg = build_stg(bn, cap)
        mask = _constant_mask(bn.variables, p, stg.size, bn.n)
        for attractor in stg_attractors(stg):
            inside = [bool(mask[s]) for s in attractor.states]
            if any(inside) and not all(inside):
                first = format_state(unpack_state(attractor.states[0], bn.n))
                problems.append(
                    f"attractor through {first} touches the constant states "
                    f"but leaves them"
                )
                break
    return CheckReport(not problems, tuple(problems))


def verify_attractor_preservation(
    bn: BooleanNetwork, p: Partition, cap: int = DEFAULT_CAP
) -> CheckReport:
    """Check that the original attractors meeting the constant set map
    exactly onto the attractors of the reduced network."""
    if bn.n > cap:
        raise CapExceededError(
            f"verification over {bn.n} variables exceeds the cap of {cap}"
        )
    res = reduce_network(bn, p)
    original = attractors(bn, cap)
    reduced = attractors(res.reduced, cap)
    mask = _constant_mask(bn.variables, p, 1 << bn.n, bn.n)
    problems = []
    constant_attractors = []
    for attractor in original:
        inside = [bool(mask[s]) for s in attractor.states]
        if not any(inside):
            continue
        if not all(inside):
            first = format_state(unpack_state(attractor.states[0], bn.n))
            problems.append(
                f"attractor through {first} touches the constant states but leaves them"
            )
            continue
        constant_attractors.append(attractor)

    projected = set()
    for attractor in constant_attractors:
        cycle = [
            pack_state(project(res, unpack_state(s, bn.n))) for s in attractor.states
        ]
        pivot = cycle.index(min(cycle))
        image = Attractor(tuple(cycle[pivot:] + cycle[:pivot]))
        if image.length != attractor.length:
            problems.append("projection changed an attractor's length")
        projected.add(image)

    if projected != set(reduced):
        problems.append(
            f"{len(projected)} projected constant attractors vs "
            f"{len(reduced)} attractors in the reduced network"
        )
    return CheckReport(not problems, tuple(problems))


def export_dot(
    graph: Union[Stg, RestrictedStg], highlight: Optional[Partition] = None
) -> str:
    """Render a graph in DOT.  Node names are state bitstrings; when
    ``highlight`` is given, states constant on it get a fill color.
    Self-loops are always drawn explicitly."""
    n = len(graph.variables)
    if isinstance(graph, Stg):
        states = range(graph.size)
        edges = ((s, int(graph.successor[s])) for s in states)
    else:
        states = graph.states
        edges = graph.edges

    mask = None
    if highlight is not None:
        if highlight.universe != frozenset(graph.variables):
            raise ValueError("partition does not cover the graph's variables")
        mask = _constant_mask(graph.variables, highlight, 1 << n, n)

    lines = ["digraph stg {", "  node [shape=box];"]
    for s in states:
        name = format_state(unpack_state(s, n))
        if mask is not None and mask[s]:
            lines.append(f'  "{name}" [style=filled, fillcolor=plum];')
        else:
            lines.append(f'  "{name}";')
    for a, b in edges:
        lines.append(
            f'  "{format_state(unpack_state(a, n))}" -> '
            f'"{format_state(unpack_state(b, n))}";'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_attractors(found: list[Attractor], n: int) -> str:
    """One attractor per line: ``len=<k>: s1 -> s2 -> ... -> s1``."""
    lines = []
    for attractor in found:
        cycle = [format_state(unpack_state(s, n)) for s in attractor.states]
        cycle.append(cycle[0])
        lines.append(f"len={attractor.length}: {' -> '.join(cycle)}")
    return "\n".join(lines) + ("\n" if lines else "")
