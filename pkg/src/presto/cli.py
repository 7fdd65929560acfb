"""Command-line front end.

Exit codes are a function of the result alone: 0 success/equivalent,
1 not equivalent, 2 inconclusive (or a run that did not quiesce),
3 usage or parse errors.  ``--json FILE`` additionally writes the
structured report.  Set ``PRESTO_COLOR=0`` to disable ANSI styling.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import dot, dsl, expr as ex
from .convert import ConversionConfig, Conversion, ConvertError, pres_to_fsmd
from .equiv import (
    PortMap,
    Sampled,
    Symbolic,
    check_cardinality,
    check_functional,
    check_fsmd_equivalence,
    derive_right_inputs,
)
from .fsmd import Fsmd
from .pres import PresNet
from .sim import (
    QUIESCENT,
    MaximalStep,
    SimError,
    RandomMaximal,
    SeededInterpretation,
    confluence_check,
    out_port_values,
    simulate_run,
    trace_json,
)
from .verdict import Verdict

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _color_enabled() -> bool:
    if os.environ.get("PRESTO_COLOR", "") == "0":
        return False
    return sys.stdout.isatty()


def _styled(text: str, code: str) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if _color_enabled() else text


def _verdict_line(v: Verdict) -> str:
    colors = {"Equivalent": "32", "NotEquivalent": "31", "Inconclusive": "33"}
    line = _styled(v.status, colors[v.status]) + f"  [{v.method}]"
    if v.reason:
        line += f"\n  reason: {v.reason}"
    if v.witness is not None:
        line += f"\n  witness: {json.dumps(v.witness, sort_keys=True)}"
    return line


def _load_model(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise UsageError(str(err)) from None
    if path.endswith(".fsmd"):
        return dsl.parse_fsmd(text)
    return dsl.parse_pres(text)


def _load_scenario(path: str) -> dsl.ScenarioDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise UsageError(str(err)) from None
    return dsl.parse_scenario(text, base_dir=os.path.dirname(os.path.abspath(path)))


def _interpretation(doc: dsl.ScenarioDocument):
    explicit = {}
    for decl in doc.interps:
        def make(d: dsl.InterpDecl):
            def fn(*args: int) -> int:
                if len(args) != len(d.params):
                    raise ex.SortMismatch(f"{d.symbol} expects {len(d.params)} arguments, got {len(args)}")
                return int(ex.evaluate(d.body, ex.Environment(dict(zip(d.params, args)))))

            return fn

        explicit[decl.symbol] = make(decl)
    if doc.default_seed is None:
        return explicit

    seeded = SeededInterpretation(doc.default_seed)

    class Table:
        def __contains__(self, symbol: str) -> bool:
            return True

        def __getitem__(self, symbol: str):
            return explicit.get(symbol) or seeded[symbol]

        def get(self, symbol: str, default=None):
            return self[symbol]

    return Table()


def _write_json(path: Optional[str], payload: dict) -> None:
    if not path:
        return
    payload = {"schemaVersion": SCHEMA_VERSION, **payload}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _verdict_json(v: Verdict) -> dict:
    return {"status": v.status, "method": v.method, "witness": v.witness, "reason": v.reason}


def _as_fsmd(model, state_bound: int) -> tuple[Fsmd, Optional[Conversion]]:
    if isinstance(model, Fsmd):
        return model, None
    conv = pres_to_fsmd(model, ConversionConfig(state_bound=state_bound))
    return conv.fsmd, conv


def cmd_validate(args) -> int:
    try:
        model = _load_model(args.file)
    except dsl.DslSemanticError as err:
        print("invalid:")
        for v in err.violations:
            at = err.spans.get(v.element)
            print(f"  {at}: {v}" if at else f"  {v}")
        _write_json(args.json, {"command": "validate", "ok": False, "violations": [str(v) for v in err.violations]})
        return 3
    kind = "fsmd" if isinstance(model, Fsmd) else "net"
    print(f"ok: {kind} {model.name} is well-formed")
    _write_json(args.json, {"command": "validate", "ok": True, "violations": []})
    return 0


def cmd_convert(args) -> int:
    net = _load_model(args.net)
    if not isinstance(net, PresNet):
        raise UsageError("convert expects a net file")
    conv = pres_to_fsmd(net, ConversionConfig(state_bound=args.state_bound, on_unsafe=args.on_unsafe))
    text = dsl.print_fsmd(conv.fsmd)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    print(f"states: {conv.states_visited}", file=sys.stderr)
    report = {
        "command": "convert",
        "states": conv.states_visited,
        "state_markings": {q: sorted(m) for q, m in conv.marking_of_state.items()},
        "transitions": [
            {
                "source": t.source,
                "target": t.target,
                "guards": [str(g) for g in t.guard_set],
                "updates": {a.target: str(a.expr) for a in t.updates},
                "labels": [list(chain) for chain in conv.labels[i]],
            }
            for i, t in enumerate(conv.fsmd.transitions)
        ],
        "warnings": [str(w) for w in conv.warnings],
    }
    _write_json(args.json, report)
    return 0


def cmd_simulate(args) -> int:
    doc = _load_scenario(args.scenario)
    interp = _interpretation(doc)
    max_steps = args.max_steps or doc.max_steps
    left_net = _load_model(doc.resolve(doc.left)) if doc.left else None
    runs = []
    worst = 0
    for side, path in (("left", doc.resolve(doc.left)), ("right", doc.resolve(doc.right))):
        if path is None:
            continue
        net = left_net if side == "left" else _load_model(path)
        if not isinstance(net, PresNet):
            raise UsageError("simulate expects net models")

        def vector_for(vec: dict) -> dict:
            if side == "left" or left_net is None:
                return dict(vec)
            pm = PortMap(dict(doc.in_map), dict(doc.out_map))
            return derive_right_inputs(left_net, net, pm, dict(vec))

        if args.schedules and args.schedules > 1:
            verdict = confluence_check(net, vector_for(doc.vectors[0] if doc.vectors else {}),
                                       interp, schedules=args.schedules, seed=args.seed or 0, max_steps=max_steps)
            print(f"{side} ({net.name}): {_verdict_line(verdict)}")
            runs.append({"model": side, "confluence": _verdict_json(verdict)})
            worst = max(worst, verdict.exit_code())
            continue
        for vector in doc.vectors or [{}]:
            inputs = vector_for(vector)
            policy = RandomMaximal(args.seed) if args.seed is not None else MaximalStep()
            run = simulate_run(net, inputs, interp, policy, max_steps)
            outs = out_port_values(net, run.final_state)
            print(f"{side} ({net.name}): {run.status} after {run.steps} steps; out-ports {outs}")
            runs.append({"model": side, "vector": inputs, **trace_json(run), "out_ports": outs})
            if run.status != QUIESCENT:
                worst = max(worst, 2)
    _write_json(args.json, {"command": "simulate", "runs": runs})
    return worst


def cmd_check_pres(args) -> int:
    doc = _load_scenario(args.scenario)
    if not doc.left or not doc.right:
        raise UsageError("check-pres needs both a left and a right model")
    n1 = _load_model(doc.resolve(doc.left))
    n2 = _load_model(doc.resolve(doc.right))
    if not isinstance(n1, PresNet) or not isinstance(n2, PresNet):
        raise UsageError("check-pres expects net models")
    pm = PortMap(dict(doc.in_map), dict(doc.out_map))
    interp = _interpretation(doc)
    strategy_name = args.strategy or doc.strategy
    if doc.check == "cardinality":
        verdict = check_cardinality(n1, n2, pm, doc.vectors, interp, doc.max_steps)
    else:
        strategy = Sampled() if strategy_name == "sampled" else Symbolic()
        verdict = check_functional(n1, n2, pm, strategy, doc.vectors, interp, doc.max_steps)
    print(_verdict_line(verdict))
    _write_json(args.json, {"command": "check-pres", "check": doc.check, "strategy": strategy_name,
                            "verdict": _verdict_json(verdict)})
    return verdict.exit_code()


def cmd_check_fsmd(args) -> int:
    doc = _load_scenario(args.scenario)
    if not doc.left or not doc.right:
        raise UsageError("check-fsmd needs both a left and a right model")
    m1, _ = _as_fsmd(_load_model(doc.resolve(doc.left)), doc.state_bound)
    m2, _ = _as_fsmd(_load_model(doc.resolve(doc.right)), doc.state_bound)
    verdict = check_fsmd_equivalence(m1, m2, dict(doc.var_map))
    print(_verdict_line(verdict))
    _write_json(args.json, {"command": "check-fsmd", "verdict": _verdict_json(verdict)})
    return verdict.exit_code()


def cmd_export_dot(args) -> int:
    model = _load_model(args.file)
    text = dot.export_dot(model)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="presto", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a .pres or .fsmd file")
    p.add_argument("file")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("convert", help="convert a net into a machine")
    p.add_argument("net")
    p.add_argument("-o", "--output")
    p.add_argument("--state-bound", type=int, default=10_000)
    p.add_argument("--on-unsafe", choices=["error", "reject"], default="error")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("simulate", help="run a scenario's models on its input vectors")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--schedules", type=int, default=1, help="with N>1, run a schedule-independence check")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("check-pres", help="net-to-net equivalence per the scenario")
    p.add_argument("scenario")
    p.add_argument("--strategy", choices=["symbolic", "sampled"], default=None)
    p.add_argument("--json")
    p.set_defaults(fn=cmd_check_pres)

    p = sub.add_parser("check-fsmd", help="machine-to-machine path equivalence per the scenario")
    p.add_argument("scenario")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_check_fsmd)

    p = sub.add_parser("export-dot", help="render a model as Graphviz")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_export_dot)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return 0 if stop.code == 0 else 3
    if getattr(args, "on_unsafe", None) == "reject":
        args.on_unsafe = "reject-firing-set"
    try:
        return args.fn(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except dsl.DslError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except (ConvertError, SimError, ex.ExprError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
