import pytest

from presto import corpus, expr as ex
from presto.convert import pres_to_fsmd
from presto.dsl import (
    DslSemanticError,
    DslSyntaxError,
    parse_expression,
    parse_fsmd,
    parse_net_document,
    parse_pres,
    parse_scenario,
    print_fsmd,
    print_net,
)


class TestExpressionSyntax:
    def test_precedence(self):
        assert parse_expression("a + b * c") == ex.add(ex.Var("a"), ex.mul(ex.Var("b"), ex.Var("c")))

    def test_not_binds_looser_than_relations(self):
        e = parse_expression("not a = b")
        assert e == ex.BoolOp("not", (ex.Rel("=", ex.Var("a"), ex.Var("b")),))

    def test_hyphen_binds_into_identifiers(self):
        assert parse_expression("in-Copy(x)") == ex.Apply("in-Copy", (ex.Var("x"),))
        assert parse_expression("a-b") == ex.Var("a-b")
        assert parse_expression("a - b") == ex.sub(ex.Var("a"), ex.Var("b"))

    def test_negative_literals(self):
        assert parse_expression("-5") == ex.IntConst(-5)
        assert parse_expression("a - -5") == ex.sub(ex.Var("a"), ex.IntConst(-5))
        assert parse_expression("-(5)") == ex.neg(ex.IntConst(5))

    def test_trailing_input_rejected(self):
        with pytest.raises(DslSyntaxError):
            parse_expression("a + b c")


class TestNetParsing:
    def test_guard_split_fixture_shape(self, guard_split):
        assert len(guard_split.places) == 7
        assert len(guard_split.transitions) == 3
        by_id = {t.id: t for t in guard_split.transitions}
        assert by_id["t2"].guard is not None
        assert by_id["t1"].guard is None and by_id["t3"].guard is None
        assert guard_split.var_of["p5"] == "p6"

    def test_empty_file_is_a_syntax_error(self):
        with pytest.raises(DslSyntaxError):
            parse_pres("")

    def test_duplicate_place_is_semantic(self):
        src = "net d { place a marked; place a; transition t { pre a; post a; fn a; } }"
        with pytest.raises(DslSemanticError) as err:
            parse_pres(src)
        assert any(v.rule == "DuplicateName" and v.element == "a" for v in err.value.violations)

    def test_semantic_errors_carry_spans(self):
        src = """net d {
          place a marked;
          transition t { pre a; post a; fn zz; }
        }"""
        with pytest.raises(DslSemanticError) as err:
            parse_pres(src)
        assert any(v.rule == "FunctionScopeViolation" for v in err.value.violations)
        assert err.value.spans["t"].line == 3

    def test_syntax_error_position(self):
        with pytest.raises(DslSyntaxError) as err:
            parse_pres("net d {\n  place 5;\n}")
        assert err.value.span.line == 2

    def test_round_trip_all_corpus_nets(self):
        for name in corpus.NETS:
            with open(corpus.corpus_path(name), encoding="utf-8") as fh:
                src = fh.read()
            first = parse_pres(src)
            second = parse_pres(print_net(first))
            assert first == second, name
            assert print_net(second) == print_net(first), name


class TestFsmdParsing:
    def test_reset_only_machine(self):
        m = parse_fsmd("fsmd tiny { states q0; reset q0; }")
        assert m.states == ("q0",)
        assert m.reset == "q0"
        assert m.transitions == ()

    def test_duplicate_guard_key_rejected(self):
        with open(corpus.corpus_path("dup_guard_key"), encoding="utf-8") as fh:
            src = fh.read()
        with pytest.raises(DslSemanticError) as err:
            parse_fsmd(src)
        assert any(v.rule == "NondeterministicF" for v in err.value.violations)

    def test_round_trip_converted_machines(self, jammer_nonpipelined, jammer_pipelined, addthree_a, addthree_b):
        for net in (jammer_nonpipelined, jammer_pipelined, addthree_a, addthree_b):
            m = pres_to_fsmd(net).fsmd
            text = print_fsmd(m)
            again = parse_fsmd(text)
            assert print_fsmd(again) == text
            assert again.states == m.states
            assert again.reset == m.reset
            assert again.inputs == m.inputs and again.outputs == m.outputs
            assert len(again.transitions) == len(m.transitions)

    def test_stepwise_chain_counts(self, jammer_nonpipelined):
        m = parse_fsmd(print_fsmd(pres_to_fsmd(jammer_nonpipelined).fsmd))
        assert len(m.states) == 16
        assert len(m.transitions) == 15


class TestScenarioParsing:
    def test_jammer_scenario_fields(self):
        doc = corpus.load_scenario("jammer")
        assert doc.check == "fsmd"
        assert doc.var_map == {"out": "out2"}
        assert doc.vectors == [{"sig": 3, "th": 5, "tr": 1, "om": 2, "mp": 4, "dp": 6}]
        assert doc.default_seed == 11
        assert doc.seeds == 10
        assert doc.left.endswith("jammer_nonpipelined.pres")

    def test_interp_bodies_evaluate(self):
        doc = corpus.load_scenario("guard_split")
        decl = next(d for d in doc.interps if d.symbol == "f_t1")
        env = ex.Environment(dict(zip(decl.params, (2, 3))))
        assert ex.evaluate(decl.body, env) == 5

    def test_interp_body_scope_checked(self):
        with pytest.raises(DslSemanticError):
            parse_scenario('scenario s { interp f(x) = x + zz; }')

    def test_unknown_clause_rejected(self):
        with pytest.raises(DslSyntaxError):
            parse_scenario("scenario s { bogus 3; }")


def test_document_spans_cover_declarations():
    doc = parse_net_document(open(corpus.corpus_path("guard_split"), encoding="utf-8").read())
    assert {"p1", "p7", "t1", "t2", "t3"} <= set(doc.spans)
    assert doc.spans["t2"].line > doc.spans["p1"].line
