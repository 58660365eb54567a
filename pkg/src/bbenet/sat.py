"""CNF construction and a small, complete, deterministic SAT solver.

Literals follow the DIMACS convention: variable ``i`` (a positive
integer) appears as the literal ``+i``, its negation as ``-i``.  Network
variables always occupy indices ``1..n`` in declaration order; auxiliary
variables introduced by the Tseitin transformation sit above ``n``.

The solver is an iterative DPLL with two watched literals per clause.
It is deliberately deterministic: unit propagation runs to fixpoint
before each decision, branching always picks the lowest-index unassigned
variable and tries ``False`` first.  Identical input therefore yields an
identical result, including the model returned for satisfiable formulas,
across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .expr import And, BoolExpr, Const, Not, Or, Var
from .network import BooleanNetwork, Partition

__all__ = [
    "CnfFormula",
    "SatResult",
    "tseitin",
    "solve",
    "build_negated_phi",
    "to_dimacs",
]


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list[tuple[int, ...]]
    var_index: dict[str, int]  # network variable name -> CNF index (1..n)


@dataclass(frozen=True)
class SatResult:
    """Either unsatisfiable (``assignment is None``) or a total model."""

    assignment: Optional[dict[int, bool]]

    @property
    def satisfiable(self) -> bool:
        return self.assignment is not None


def tseitin(
    expr: BoolExpr, index_of: Mapping[str, int], next_free: int
) -> tuple[int, list[tuple[int, ...]], int]:
    """Encode ``expr`` into definitional clauses, returning
    ``(root literal, clauses, new next_free)``.

    Asserting the root literal together with the clauses is
    equisatisfiable with the expression.  Negations fold into literal
    polarity, so plain variables and their negations produce no clauses.
    Gate variables are numbered top-down in a left-to-right traversal,
    making the encoding a deterministic function of the tree.
    """
    clauses: list[tuple[int, ...]] = []

    def encode(e) -> int:
        nonlocal next_free
        if isinstance(e, Var):
            return index_of[e.name]
        if isinstance(e, Not):
            return -encode(e.child)
        if isinstance(e, Const):
            gate = next_free
            next_free += 1
            clauses.append((gate,) if e.value else (-gate,))
            return gate
        if isinstance(e, (And, Or)):
            gate = next_free
            next_free += 1
            a = encode(e.left)
            b = encode(e.right)
            if isinstance(e, And):
                clauses.extend([(-gate, a), (-gate, b), (gate, -a, -b)])
            else:
                clauses.extend([(gate, -a), (gate, -b), (-gate, a, b)])
            return gate
        raise TypeError(f"not an expression node: {e!r}")

    root = encode(expr)
    return root, clauses, next_free


def _xor_gate(gate: int, a: int, b: int, clauses: list) -> None:
    # gate <-> (a xor b)
    clauses.extend([(-gate, a, b), (-gate, -a, -b), (gate, -a, b), (gate, a, -b)])


def build_negated_phi(bn: BooleanNetwork, p: Partition) -> CnfFormula:
    """CNF whose models are exactly the counterexample states for ``p``.

    The formula conjoins a premise, "the state is constant on every
    block" (encoded as equality chains from each member to the block's
    lexicographically smallest member, linear in block size), with the
    negated conclusion, "some variable's update disagrees with its block
    representative's update" (a disjunction of Tseitin-encoded XOR
    gates).  Unsatisfiability means the partition is an equivalence;
    a model, restricted to indices ``1..n``, is a state constant on
    ``p`` whose successor is not.
    """
    var_index = {name: i + 1 for i, name in enumerate(bn.variables)}
    clauses: list[tuple[int, ...]] = []
    next_free = bn.n + 1

    for block in p.blocks:
        rep = var_index[block[0]]
        for name in block[1:]:
            x = var_index[name]
            clauses.extend([(-x, rep), (x, -rep)])

    roots: dict[str, int] = {}

    def root_of(name: str) -> int:
        nonlocal next_free
        if name not in roots:
            root, gate_clauses, next_free = tseitin(
                bn.update_of(name), var_index, next_free
            )
            clauses.extend(gate_clauses)
            roots[name] = root
        return roots[name]

    gates = []
    for block in p.blocks:
        rep_root = root_of(block[0])
        for name in block:
            member_root = root_of(name)
            gate = next_free
            next_free += 1
            _xor_gate(gate, member_root, rep_root, clauses)
            gates.append(gate)
    clauses.append(tuple(gates))

    return CnfFormula(num_vars=next_free - 1, clauses=clauses, var_index=var_index)


def solve(cnf: CnfFormula) -> SatResult:
    """Decide satisfiability; complete and deterministic.

    Returns a total assignment over ``1..num_vars`` when satisfiable.
    """
    nvars = cnf.num_vars
    assign = [0] * (nvars + 1)  # 0 free, +1 true, -1 false

    # Normalize: drop tautologies, dedupe literals, split off units.
    units: list[int] = []
    clauses: list[list[int]] = []
    for raw in cnf.clauses:
        kept: list[int] = []
        seen: set[int] = set()
        tautology = False
        for lit in raw:
            if -lit in seen:
                tautology = True
                break
            if lit not in seen:
                seen.add(lit)
                kept.append(lit)
        if tautology:
            continue
        if not kept:
            return SatResult(None)
        if len(kept) == 1:
            units.append(kept[0])
        else:
            clauses.append(kept)

    # watch[lit + nvars] lists clauses currently watching lit.
    watch: list[list[list[int]]] = [[] for _ in range(2 * nvars + 1)]
    for clause in clauses:
        watch[clause[0] + nvars].append(clause)
        watch[clause[1] + nvars].append(clause)

    trail: list[int] = []
    qhead = 0

    def enqueue(lit: int) -> None:
        assign[abs(lit)] = 1 if lit > 0 else -1
        trail.append(lit)

    def undo_to(mark: int) -> None:
        nonlocal qhead
        for lit in trail[mark:]:
            assign[abs(lit)] = 0
        del trail[mark:]
        qhead = mark

    def propagate() -> bool:
        nonlocal qhead
        while qhead < len(trail):
            falsified = -trail[qhead]
            qhead += 1
            watchers = watch[falsified + nvars]
            i = 0
            while i < len(watchers):
                clause = watchers[i]
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                oval = assign[abs(other)]
                if oval == (1 if other > 0 else -1):
                    i += 1
                    continue
                moved = False
                for j in range(2, len(clause)):
                    lit = clause[j]
                    val = assign[abs(lit)]
                    if val == 0 or val == (1 if lit > 0 else -1):
                        clause[1], clause[j] = clause[j], clause[1]
                        watch[lit + nvars].append(clause)
                        watchers[i] = watchers[-1]
                        watchers.pop()
                        moved = True
                        break
                if moved:
                    continue
                if oval == 0:
                    enqueue(other)
                    i += 1
                else:
                    return False  # clause fully falsified
        return True

    for unit in units:
        val = assign[abs(unit)]
        if val == 0:
            enqueue(unit)
        elif val != (1 if unit > 0 else -1):
            return SatResult(None)

    # decisions: [var, flipped?, trail length before the decision]
    decisions: list[list] = []
    next_var = 1
    while True:
        if not propagate():
            while decisions and decisions[-1][1]:
                _, _, mark = decisions.pop()
                undo_to(mark)
            if not decisions:
                return SatResult(None)
            record = decisions[-1]
            undo_to(record[2])
            record[1] = True
            enqueue(record[0])  # second branch: True
            next_var = record[0]
            continue
        while next_var <= nvars and assign[next_var] != 0:
            next_var += 1
        if next_var > nvars:
            return SatResult({i: assign[i] > 0 for i in range(1, nvars + 1)})
        decisions.append([next_var, False, len(trail)])
        enqueue(-next_var)  # first branch: False


def to_dimacs(cnf: CnfFormula) -> str:
    """Standard DIMACS rendering, handy for debugging with external tools."""
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    for clause in cnf.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"
