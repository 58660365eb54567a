"""Synchronous Boolean networks, their states, and variable partitions.

A network is an ordered list of variables, one update expression per
variable.  Declaration order fixes the bit positions used everywhere
downstream: states are tuples of 0/1 with position i holding the value
of ``variables[i]``, bitstrings read left to right in that order, and
the integer encoding of a state treats position 0 as the most
significant bit.

The text format consumed by :func:`parse_bnet` is line oriented:
``#`` lines and blank lines are ignored, one optional leading header
line ``targets, factors`` is skipped, and every other line reads
``name , expression`` with the expression syntax of :mod:`bbenet.expr`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union

from .errors import ParseError, PartitionError, UnknownVariableError
from .expr import (
    BoolExpr,
    Const,
    Var,
    evaluate,
    free_vars,
    parse_expr,
    serialize_expr,
)

__all__ = [
    "State",
    "BooleanNetwork",
    "Partition",
    "InputKind",
    "parse_bnet",
    "serialize_bnet",
    "step",
    "detect_inputs",
    "initial_partition",
    "is_refinement",
    "is_constant_state",
    "parse_partition_file",
    "pack_state",
    "unpack_state",
    "format_state",
]

State = tuple  # tuple of 0/1 ints, one per variable in declaration order


@dataclass(frozen=True)
class BooleanNetwork:
    """A pair of variable names and update expressions, same order."""

    variables: tuple[str, ...]
    updates: tuple[BoolExpr, ...]

    def __post_init__(self):
        if not self.variables:
            raise ValueError("a network needs at least one variable")
        if len(self.variables) != len(self.updates):
            raise ValueError("one update expression per variable required")
        positions = {}
        for i, name in enumerate(self.variables):
            if name in positions:
                raise ValueError(f"duplicate variable '{name}'")
            positions[name] = i
        for name, update in zip(self.variables, self.updates):
            for ref in free_vars(update):
                if ref not in positions:
                    raise ValueError(
                        f"update of '{name}' references undeclared variable '{ref}'"
                    )
        object.__setattr__(self, "_positions", positions)

    @property
    def n(self) -> int:
        return len(self.variables)

    def position(self, name: str) -> int:
        return self._positions[name]

    def update_of(self, name: str) -> BoolExpr:
        return self.updates[self._positions[name]]


def pack_state(s: State) -> int:
    """Integer encoding of a state, position 0 as most significant bit."""
    value = 0
    for b in s:
        value = (value << 1) | b
    return value


def unpack_state(value: int, n: int) -> State:
    return tuple((value >> (n - 1 - i)) & 1 for i in range(n))


def format_state(s: State) -> str:
    return "".join(str(b) for b in s)


def step(bn: BooleanNetwork, s: State) -> State:
    """Apply all update functions at once; every state has exactly one successor."""
    if len(s) != bn.n:
        raise ValueError(f"state width {len(s)} does not match network size {bn.n}")
    env = dict(zip(bn.variables, s))
    return tuple(evaluate(f, env) for f in bn.updates)


def parse_bnet(text: str) -> BooleanNetwork:
    """Parse the ``name, expression`` text format into a network.

    Raises :class:`ParseError` (with a line number) on duplicate
    declarations, references to undeclared variables, and expression
    syntax errors.
    """
    entries = []
    saw_content = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "," not in line:
            raise ParseError("expected 'name, expression'", line=lineno)
        name, _, rhs = line.partition(",")
        name = name.strip()
        rhs = rhs.strip()
        if not saw_content and name == "targets" and rhs == "factors":
            saw_content = True
            continue
        saw_content = True
        if not _is_identifier(name):
            raise ParseError(f"invalid variable name {name!r}", line=lineno)
        entries.append((lineno, name, rhs))

    if not entries:
        raise ParseError("no variable declarations found", line=None)

    names = []
    declared = set()
    for lineno, name, _ in entries:
        if name in declared:
            raise ParseError(f"duplicate declaration of '{name}'", line=lineno)
        declared.add(name)
        names.append(name)

    updates = []
    for lineno, name, rhs in entries:
        try:
            updates.append(parse_expr(rhs, known_vars=declared))
        except UnknownVariableError as exc:
            raise UnknownVariableError(exc.name, line=lineno, offset=exc.offset) from None
        except ParseError as exc:
            raise ParseError(exc.message, line=lineno, offset=exc.offset) from None
    return BooleanNetwork(tuple(names), tuple(updates))


def _is_identifier(name: str) -> bool:
    from .expr import IDENT_RE

    m = IDENT_RE.match(name)
    return m is not None and m.end() == len(name)


def serialize_bnet(bn: BooleanNetwork) -> str:
    """Render a network in the text format; inverse of :func:`parse_bnet`."""
    lines = ["targets, factors"]
    for name, update in zip(bn.variables, bn.updates):
        lines.append(f"{name}, {serialize_expr(update)}")
    return "\n".join(lines) + "\n"


class InputKind(Enum):
    STABLE_0 = "stable-0"
    STABLE_1 = "stable-1"
    IDENTITY = "identity"
    NON_INPUT = "non-input"

    @property
    def is_input(self) -> bool:
        return self is not InputKind.NON_INPUT


def detect_inputs(bn: BooleanNetwork) -> dict[str, InputKind]:
    """Classify each variable by the syntactic shape of its update.

    A variable is an input when its update is literally ``0``, ``1``, or
    the variable itself.  The check is purely syntactic: an update such
    as ``a | !a`` is semantically stable but still counts as non-input.
    """
    kinds = {}
    for name, update in zip(bn.variables, bn.updates):
        if isinstance(update, Const):
            kinds[name] = InputKind.STABLE_1 if update.value else InputKind.STABLE_0
        elif isinstance(update, Var) and update.name == name:
            kinds[name] = InputKind.IDENTITY
        else:
            kinds[name] = InputKind.NON_INPUT
    return kinds


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks of variable names covering a network's variables.

    Canonical form, produced by :meth:`Partition.of`: names inside a
    block are sorted lexicographically, blocks are ordered by the bit
    position of their earliest-declared member.  Canonicalization keeps
    every downstream iteration order, and hence every emitted byte,
    deterministic.
    """

    blocks: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        index = {}
        for i, block in enumerate(self.blocks):
            if not block:
                raise PartitionError("empty block")
            for name in block:
                if name in index:
                    raise PartitionError(f"variable '{name}' appears in two blocks")
                index[name] = i
        object.__setattr__(self, "_block_index", index)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[str]], order: Sequence[str]) -> "Partition":
        """Canonicalize ``blocks`` against the ordered universe ``order``.

        Raises :class:`PartitionError` when a name is unknown, repeated,
        or missing from the blocks.
        """
        position = {name: i for i, name in enumerate(order)}
        cleaned = []
        seen = set()
        for block in blocks:
            members = sorted(set(block))
            if not members:
                continue
            for name in members:
                if name not in position:
                    raise PartitionError(f"unknown variable '{name}'")
                if name in seen:
                    raise PartitionError(f"variable '{name}' appears in two blocks")
                seen.add(name)
            cleaned.append(tuple(members))
        missing = [name for name in order if name not in seen]
        if missing:
            raise PartitionError(f"variables not covered: {', '.join(missing)}")
        cleaned.sort(key=lambda block: min(position[m] for m in block))
        return cls(tuple(cleaned))

    @property
    def universe(self) -> frozenset:
        return frozenset(self._block_index)

    def block_index(self, name: str) -> int:
        return self._block_index[name]

    def block_of(self, name: str) -> tuple[str, ...]:
        return self.blocks[self._block_index[name]]

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "{" + "} {".join(",".join(b) for b in self.blocks) + "}"


def initial_partition(
    bn: BooleanNetwork, strategy: Union[str, Partition]
) -> Partition:
    """Build the starting partition for refinement.

    ``"maximal"`` puts every variable in one block, ``"inputs"``
    isolates each input variable in a singleton so reductions stay valid
    for any combination of input values, and a :class:`Partition` is
    validated against the network and canonicalized.
    """
    if isinstance(strategy, Partition):
        return Partition.of(strategy.blocks, bn.variables)
    if strategy == "maximal":
        return Partition.of([bn.variables], bn.variables)
    if strategy == "inputs":
        kinds = detect_inputs(bn)
        blocks = [[name] for name in bn.variables if kinds[name].is_input]
        rest = [name for name in bn.variables if not kinds[name].is_input]
        if rest:
            blocks.append(rest)
        return Partition.of(blocks, bn.variables)
    raise ValueError(f"unknown strategy {strategy!r}")


def is_refinement(fine: Partition, coarse: Partition) -> bool:
    """True iff every block of ``fine`` is a subset of a block of ``coarse``."""
    if fine.universe != coarse.universe:
        raise ValueError("partitions cover different variable sets")
    for block in fine.blocks:
        target = set(coarse.block_of(block[0]))
        if not set(block) <= target:
            return False
    return True


def is_constant_state(bn: BooleanNetwork, s: State, p: Partition) -> bool:
    """True iff ``s`` assigns one shared value to every block of ``p``."""
    for block in p.blocks:
        first = s[bn.position(block[0])]
        for name in block[1:]:
            if s[bn.position(name)] != first:
                return False
    return True


def parse_partition_file(
    text: str, bn: BooleanNetwork, rest: str = "singletons"
) -> Partition:
    """Parse a partition file: one block per line, names comma separated.

    ``#`` starts a comment.  Variables not mentioned are assigned per
    ``rest``: ``"singletons"`` (default) puts each in its own block,
    ``"block"`` gathers them into one shared block.
    """
    if rest not in ("singletons", "block"):
        raise ValueError(f"unknown rest policy {rest!r}")
    blocks = []
    listed = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        members = [m.strip() for m in line.split(",") if m.strip()]
        if not members:
            raise ParseError("empty block line", line=lineno)
        for name in members:
            if name not in bn._positions:
                raise ParseError(f"unknown variable '{name}'", line=lineno)
            if name in listed:
                raise ParseError(f"variable '{name}' listed twice", line=lineno)
            listed.add(name)
        blocks.append(members)
    remaining = [name for name in bn.variables if name not in listed]
    if rest == "singletons":
        blocks.extend([name] for name in remaining)
    elif remaining:
        blocks.append(remaining)
    return Partition.of(blocks, bn.variables)
