"""State graphs, attractors, restriction, and the preservation checks."""

import random

import numpy as np
import pytest

from bbenet import (
    Attractor,
    CapExceededError,
    Partition,
    attractors,
    build_stg,
    export_dot,
    format_attractors,
    initial_partition,
    maximal_bbe,
    parse_bnet,
    restrict_constant,
    stg_attractors,
    verify_attractor_preservation,
    verify_isomorphism,
)
from conftest import random_network

# Successor table of the three-variable example, enumerated by hand from
# its update functions (states as integers, first variable = top bit).
TOY3_SUCCESSORS = [6, 0, 7, 2, 6, 6, 7, 6]

# Successor table of its two-variable reduction, same convention.
TOY3_REDUCED_SUCCESSORS = [2, 0, 3, 2]

TOY3_REDUCED_TEXT = "x1__x2, !x3 | x1__x2\nx3, x1__x2 & !x3\n"


def attractors_by_pointer_doubling(successor: np.ndarray) -> set:
    """Independent cycle finder: square the successor map until every
    state lands on a cycle, then walk the cycles."""
    n_steps = max(1, int(np.ceil(np.log2(len(successor)))) + 1)
    jump = successor.copy()
    for _ in range(n_steps):
        jump = jump[jump]
    on_cycle = sorted(set(jump.tolist()))
    succ = successor.tolist()
    seen = set()
    cycles = set()
    for start in on_cycle:
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        s = succ[start]
        while s != start:
            cycle.append(s)
            seen.add(s)
            s = succ[s]
        pivot = cycle.index(min(cycle))
        cycles.add(tuple(cycle[pivot:] + cycle[:pivot]))
    return cycles


class TestBuildStg:
    def test_toy3_table(self, toy3):
        stg = build_stg(toy3)
        assert stg.successor.tolist() == TOY3_SUCCESSORS

    def test_toy3_reduced_table(self):
        stg = build_stg(parse_bnet(TOY3_REDUCED_TEXT))
        assert stg.successor.tolist() == TOY3_REDUCED_SUCCESSORS

    def test_identity_variable(self):
        stg = build_stg(parse_bnet("a, a"))
        assert stg.successor.tolist() == [0, 1]

    def test_matches_step_on_random_networks(self, toy3):
        from bbenet import pack_state, step, unpack_state

        rng = random.Random(97)
        for _ in range(20):
            bn = random_network(rng, rng.randint(1, 8))
            stg = build_stg(bn)
            for code in range(1 << bn.n):
                expected = pack_state(step(bn, unpack_state(code, bn.n)))
                assert int(stg.successor[code]) == expected

    def test_cap(self, toy3):
        with pytest.raises(CapExceededError):
            build_stg(toy3, cap=2)


class TestAttractors:
    def test_toy3_reduced_two_cycle(self):
        found = attractors(parse_bnet(TOY3_REDUCED_TEXT))
        assert found == [Attractor((2, 3))]  # the cycle 10 -> 11 -> 10

    def test_cortical_two_point_attractors(self, cortical):
        # Hand-checked fixed points of the five update functions.
        found = attractors(cortical)
        assert found == [Attractor((0b00101,)), Attractor((0b11010,))]

    def test_identity_network(self):
        assert attractors(parse_bnet("a, a")) == [Attractor((0,)), Attractor((1,))]

    def test_agrees_with_pointer_doubling_oracle(self):
        rng = random.Random(101)
        for _ in range(40):
            bn = random_network(rng, rng.randint(1, 12))
            stg = build_stg(bn)
            expected = attractors_by_pointer_doubling(stg.successor)
            assert {a.states for a in stg_attractors(stg)} == expected

    def test_sorted_by_smallest_state(self):
        rng = random.Random(103)
        for _ in range(20):
            bn = random_network(rng, rng.randint(1, 9))
            found = attractors(bn)
            starts = [a.states[0] for a in found]
            assert starts == sorted(starts)
            for a in found:
                assert a.states[0] == min(a.states)


class TestRestrictConstant:
    def test_toy3_constant_slice(self, toy3):
        p = Partition.of([["x1", "x2"], ["x3"]], toy3.variables)
        restricted = restrict_constant(build_stg(toy3), p)
        assert restricted.states == (0b000, 0b001, 0b110, 0b111)
        assert set(restricted.edges) == {(0, 6), (1, 0), (6, 7), (7, 6)}

    def test_all_singletons_keep_everything(self, toy3):
        p = Partition.of([[v] for v in toy3.variables], toy3.variables)
        restricted = restrict_constant(build_stg(toy3), p)
        assert len(restricted.states) == 8
        assert len(restricted.edges) == 8

    def test_swap_network_single_block(self):
        bn = parse_bnet("a, b\nb, a")
        p = initial_partition(bn, "maximal")
        restricted = restrict_constant(build_stg(bn), p)
        assert restricted.states == (0b00, 0b11)
        assert set(restricted.edges) == {(0, 0), (3, 3)}

    def test_state_count_is_two_to_the_blocks(self):
        rng = random.Random(107)
        for _ in range(20):
            bn = random_network(rng, rng.randint(1, 8))
            part, _ = maximal_bbe(bn, initial_partition(bn, "maximal"))
            restricted = restrict_constant(build_stg(bn), part)
            assert len(restricted.states) == 1 << len(part)


class TestVerification:
    def test_cortical(self, cortical):
        part, _ = maximal_bbe(cortical, initial_partition(cortical, "maximal"))
        report = verify_isomorphism(cortical, part)
        assert report.ok, report.problems
        assert verify_attractor_preservation(cortical, part).ok
        restricted = restrict_constant(build_stg(cortical), part)
        assert len(restricted.states) == 16

    def test_toy3(self, toy3):
        p = Partition.of([["x1", "x2"], ["x3"]], toy3.variables)
        assert verify_isomorphism(toy3, p).ok
        assert verify_attractor_preservation(toy3, p).ok

    def test_all_singletons_identity_case(self, toy3, cortical):
        for bn in (toy3, cortical):
            p = Partition.of([[v] for v in bn.variables], bn.variables)
            assert verify_isomorphism(bn, p).ok
            assert verify_attractor_preservation(bn, p).ok

    def test_toy3_projected_attractor(self, toy3):
        # The original two-cycle with agreeing first variables maps to
        # the reduced two-cycle {10, 11}.
        part = Partition.of([["x1", "x2"], ["x3"]], toy3.variables)
        assert attractors(toy3) == [Attractor((0b110, 0b111))]
        from bbenet import project, reduce_network, unpack_state, pack_state

        res = reduce_network(toy3, part)
        projected = [
            pack_state(project(res, unpack_state(s, 3)))
            for s in attractors(toy3)[0].states
        ]
        assert sorted(projected) == [2, 3]
        assert attractors(res.reduced) == [Attractor((2, 3))]

    def test_random_corpus_never_fails(self):
        rng = random.Random(109)
        for _ in range(40):
            bn = random_network(rng, rng.randint(2, 10))
            part, _ = maximal_bbe(bn, initial_partition(bn, "maximal"))
            iso = verify_isomorphism(bn, part)
            assert iso.ok, iso.problems
            att = verify_attractor_preservation(bn, part)
            assert att.ok, att.problems

    def test_attractor_lengths_preserved(self):
        from bbenet import pack_state, project, reduce_network, unpack_state

        rng = random.Random(113)
        for _ in range(30):
            bn = random_network(rng, rng.randint(2, 9))
            part, _ = maximal_bbe(bn, initial_partition(bn, "maximal"))
            res = reduce_network(bn, part)
            stg = build_stg(bn)
            reduced_by_start = {a.states[0]: a for a in attractors(res.reduced)}
            for attractor in stg_attractors(stg):
                states = [unpack_state(s, bn.n) for s in attractor.states]
                try:
                    image = [pack_state(project(res, s)) for s in states]
                except ValueError:
                    continue  # not inside the constant slice
                assert len(set(image)) == attractor.length
                assert reduced_by_start[min(image)].length == attractor.length

    def test_cap_guard(self, cortical):
        part, _ = maximal_bbe(cortical, initial_partition(cortical, "maximal"))
        with pytest.raises(CapExceededError):
            verify_isomorphism(cortical, part, cap=3)


class TestExportDot:
    def test_reduced_toy3_counts(self):
        dot = export_dot(build_stg(parse_bnet(TOY3_REDUCED_TEXT)))
        nodes = [line for line in dot.splitlines() if '";' in line and "->" not in line]
        edges = [line for line in dot.splitlines() if "->" in line]
        assert len(nodes) == 4
        assert len(edges) == 4
        assert '"10" -> "11";' in dot

    def test_no_highlight_no_fill(self, toy3):
        assert "fillcolor" not in export_dot(build_stg(toy3))

    def test_highlight_fills_exactly_constant_states(self, toy3):
        p = Partition.of([["x1", "x2"], ["x3"]], toy3.variables)
        dot = export_dot(build_stg(toy3), highlight=p)
        filled = [line for line in dot.splitlines() if "fillcolor" in line]
        assert len(filled) == 4
        for bits in ("000", "001", "110", "111"):
            assert any(f'"{bits}"' in line for line in filled)

    def test_self_loops_drawn_explicitly(self):
        dot = export_dot(build_stg(parse_bnet("a, a")))
        assert '"0" -> "0";' in dot
        assert '"1" -> "1";' in dot

    def test_restricted_graph(self, toy3):
        p = Partition.of([["x1", "x2"], ["x3"]], toy3.variables)
        dot = export_dot(restrict_constant(build_stg(toy3), p))
        assert '"010"' not in dot
        assert '"001" -> "000";' in dot


class TestFormatAttractors:
    def test_cycle_line(self):
        text = format_attractors([Attractor((2, 3))], 2)
        assert text == "len=2: 10 -> 11 -> 10\n"

    def test_point_attractors(self, cortical):
        text = format_attractors(attractors(cortical), 5)
        assert text == "len=1: 00101 -> 00101\nlen=1: 11010 -> 11010\n"
