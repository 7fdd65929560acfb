import dataclasses

import pytest

from presto import corpus, expr as ex
from presto.dsl import parse_pres
from presto.pres import (
    PresNet,
    Transition,
    UnknownElement,
    adjacency,
    classify_ports,
    enabled_transitions,
    validate_net,
)


def tiny_net(**overrides) -> PresNet:
    fields = dict(
        name="tiny",
        places=("a", "b"),
        var_of={"a": "a", "b": "b"},
        token_type={"a": "int", "b": "int"},
        transitions=(Transition("t", ex.Apply("f", (ex.Var("a"),))),),
        input_arcs=frozenset({("a", "t")}),
        output_arcs=frozenset({("t", "b")}),
        initial_marking=frozenset({"a"}),
    )
    fields.update(overrides)
    return PresNet(**fields)


class TestAdjacency:
    def test_two_input_transition(self, guard_split):
        adj = adjacency(guard_split, "t1")
        assert adj.preset_of == {"p1", "p2"}
        assert adj.postset_of == {"p4"}

    def test_single_arc_net(self):
        net = tiny_net()
        assert adjacency(net, "a").postset_of == {"t"}
        assert adjacency(net, "a").preset_of == frozenset()

    def test_self_loop_place_sees_transition_both_sides(self, guard_split):
        adj = adjacency(guard_split, "p7")
        assert "t3" in adj.preset_of
        assert "t3" in adj.postset_of

    def test_unknown_element(self, guard_split):
        with pytest.raises(UnknownElement):
            adjacency(guard_split, "nope")

    def test_involution_over_corpus(self, guard_split, card_a, jammer_nonpipelined):
        for net in (guard_split, card_a, jammer_nonpipelined):
            for t in net.transitions:
                for p in adjacency(net, t.id).preset_of:
                    assert t.id in adjacency(net, p).postset_of
                for p in adjacency(net, t.id).postset_of:
                    assert t.id in adjacency(net, p).preset_of


class TestClassifyPorts:
    def test_cardinality_ports(self, card_a):
        ports = classify_ports(card_a)
        assert ports.in_ports == {"Pa", "Pb"}
        assert ports.out_ports == {"Pe", "Pf", "Pg"}

    def test_one_place_no_transition_net_is_invalid_instead(self):
        net = tiny_net(places=("a",), var_of={"a": "a"}, token_type={"a": "int"},
                       transitions=(), input_arcs=frozenset(), output_arcs=frozenset())
        rules = {v.rule for v in validate_net(net)}
        assert "EmptyTransitions" in rules and "EmptyInputArcs" in rules

    def test_jammer_initially_marked_feeds_the_six_copies(self, jammer_nonpipelined):
        net = jammer_nonpipelined
        ports = classify_ports(net)
        assert ports.initially_marked == {"sig", "th", "tr", "om", "mp", "dp"}
        copies = {t.id for t in net.transitions if t.id.endswith("-Copy")} | {"in-Copy"}
        fed = set()
        for p in ports.initially_marked:
            fed |= adjacency(net, p).postset_of
        assert fed == copies

    def test_stable_under_declaration_order(self, card_a):
        from presto.dsl import print_net

        reordered = dataclasses.replace(
            card_a,
            places=tuple(reversed(card_a.places)),
            transitions=tuple(reversed(card_a.transitions)),
        )
        reparsed = parse_pres(print_net(reordered))
        assert classify_ports(reparsed).in_ports == classify_ports(card_a).in_ports
        assert classify_ports(reparsed).out_ports == classify_ports(card_a).out_ports


class TestEnabled:
    def test_guard_split_initial(self, guard_split):
        assert enabled_transitions(guard_split, guard_split.initial_marking) == {"t1", "t2", "t3"}

    def test_empty_marking(self, guard_split):
        assert enabled_transitions(guard_split, frozenset()) == frozenset()

    def test_partial_inputs_not_enabled(self, guard_split):
        assert "t1" not in enabled_transitions(guard_split, frozenset({"p1"}))
        assert enabled_transitions(guard_split, frozenset({"p1", "p2"})) == {"t1"}


class TestValidate:
    def test_corpus_nets_are_clean(self):
        for name in corpus.NETS:
            assert validate_net(corpus.load_net(name)) == [], name

    def test_postset_variable_mismatch(self, guard_split):
        broken = dataclasses.replace(guard_split, var_of={**guard_split.var_of, "p5": "p5"})
        assert any(v.rule == "PostsetVariableMismatch" and v.element == "t2" for v in validate_net(broken))

    def test_guard_scope_violation(self, guard_split):
        foreign = ex.Rel(">", ex.Var("zz"), ex.IntConst(0))
        t2 = next(t for t in guard_split.transitions if t.id == "t2")
        patched = tuple(dataclasses.replace(t, guard=foreign) if t.id == "t2" else t for t in guard_split.transitions)
        broken = dataclasses.replace(guard_split, transitions=patched)
        assert any(v.rule == "GuardScopeViolation" and v.element == "t2" for v in validate_net(broken))
        assert t2.guard is not None

    def test_function_scope_violation(self):
        net = tiny_net(transitions=(Transition("t", ex.Var("zz")),))
        assert any(v.rule == "FunctionScopeViolation" for v in validate_net(net))

    def test_dropped_arc_breaks_preset(self, card_a):
        broken = dataclasses.replace(card_a, input_arcs=frozenset(a for a in card_a.input_arcs if a != ("A1", "t-e")))
        assert any(v.rule == "EmptyPreset" and v.element == "t-e" for v in validate_net(broken))

    def test_unknown_arc_endpoints(self):
        net = tiny_net(input_arcs=frozenset({("a", "t"), ("ghost", "t")}))
        assert any(v.rule == "UnknownPlace" and v.element == "ghost" for v in validate_net(net))

    def test_guarded_transition_with_boolean_fn_rejected(self):
        net = tiny_net(transitions=(Transition("t", ex.Rel("=", ex.Var("a"), ex.Var("a"))),))
        assert any(v.rule == "IllSortedFunction" for v in validate_net(net))


def test_parse_matches_manual_construction():
    src = """
    net two {
      place a marked;
      place b;
      transition t { pre a; post b; fn f(a); }
    }
    """
    net = parse_pres(src)
    assert net.places == ("a", "b")
    assert net.initial_marking == {"a"}
    assert net.var_of == {"a": "a", "b": "b"}
