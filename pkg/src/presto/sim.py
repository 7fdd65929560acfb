"""Concrete-token execution of nets.

Tokens carry integers; a step picks one firing set whose guards all hold
under the current token values, consumes the input tokens and produces
output tokens valued by each transition's transfer expression.  All
fired transitions read the pre-step state.  Uninterpreted function
symbols need an interpretation table; fixtures and tests use small
affine maps, either written out or derived deterministically from a
seed per symbol.

Runs stop at quiescence (nothing structurally enabled), deadlock
(structurally enabled transitions exist but every guard fails), or a
step bound.  Fixing the policy seed makes a run bit-for-bit
reproducible, which is what the schedule-independence check exploits.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from . import expr as ex
from .convert import FiringSet, construct_set_of_transitions, fire_set
from .pres import PresNet, classify_ports, enabled_transitions
from .verdict import EQUIVALENT, INCONCLUSIVE, NOT_EQUIVALENT, Verdict

TokenState = dict  # place -> int, domain = currently marked places

QUIESCENT = "Quiescent"
DEADLOCK = "Deadlock"
STEP_BOUND_EXCEEDED = "StepBoundExceeded"


class SimError(Exception):
    pass


class NoEnabledSet(SimError):
    """No firing set is concretely available; callers split quiescence from deadlock."""

    def __init__(self, structurally_enabled: bool):
        super().__init__("no firing set has all guards true")
        self.structurally_enabled = structurally_enabled


class ValueConflict(SimError):
    """Two marked input places share a variable but hold different values."""


@dataclass(frozen=True)
class MaximalStep:
    """Always take the first maximal firing set (deterministic)."""


@dataclass(frozen=True)
class RandomMaximal:
    """Uniform choice among the available maximal firing sets."""

    seed: int


SchedulePolicy = Union[MaximalStep, RandomMaximal]


class SeededInterpretation:
    """Deterministic per-symbol affine interpretations.

    Symbol ``s`` at arity ``n`` acts as ``c0 + c1*x1 + ... + cn*xn`` with
    small nonzero coefficients derived from sha256(seed, s, i).  Distinct
    symbols get distinct-looking maps, and compositions of different
    symbols almost never commute, which makes the maps good witnesses.
    """

    def __init__(self, seed: int):
        self.seed = seed

    def _coeff(self, symbol: str, i: int) -> int:
        digest = hashlib.sha256(f"{self.seed}:{symbol}:{i}".encode()).digest()
        c = int.from_bytes(digest[:4], "big") % 13 - 6
        return c if c != 0 else 7

    def __contains__(self, symbol: str) -> bool:
        return True

    def __getitem__(self, symbol: str):
        def fn(*args: int) -> int:
            acc = self._coeff(symbol, 0)
            for i, a in enumerate(args, start=1):
                acc += self._coeff(symbol, i) * a
            return acc

        return fn

    def get(self, symbol: str, default=None):
        return self[symbol]

    def keys(self):  # pragma: no cover - interface completeness
        return ()

    def items(self):  # pragma: no cover - interface completeness
        return ()


Interpretation = Mapping  # symbol -> callable; SeededInterpretation also qualifies


@dataclass
class RunOutcome:
    status: str
    final_state: TokenState
    trace: list[tuple[FiringSet, TokenState]] = field(default_factory=list)
    steps: int = 0


def _env_for(net: PresNet, tid: str, ts: TokenState, interp: Interpretation) -> ex.Environment:
    values: dict[str, int] = {}
    for p in sorted(net.preset(tid)):
        v = net.var_of[p]
        if v in values and values[v] != ts[p]:
            raise ValueConflict(f"places sharing variable {v!r} hold different values at {tid!r}")
        values[v] = ts[p]
    return ex.Environment(values, interp)


def _candidates(net: PresNet, ts: TokenState, interp: Interpretation) -> list[FiringSet]:
    marking = frozenset(ts)
    out = []
    for fs in construct_set_of_transitions(net, marking):
        ok = True
        for tid in fs.transitions:
            t = net.transition(tid)
            if t.guard is None:
                continue
            if not ex.evaluate(t.guard, _env_for(net, tid, ts, interp)):
                ok = False
                break
        if ok and fs.guard_set:
            # Negated-competitor decisions must hold too, else this set is
            # shadowed by the alternative it was carved out against.
            for g in fs.guard_set:
                scope = ex.free_vars(g)
                values: dict[str, int] = {}
                for p in sorted(marking):
                    v = net.var_of[p]
                    if v in scope and v not in values:
                        values[v] = ts[p]
                if not ex.evaluate(g, ex.Environment(values, interp)):
                    ok = False
                    break
        if ok:
            out.append(fs)
    return out


def simulate_step(
    net: PresNet,
    ts: TokenState,
    interp: Interpretation,
    policy: SchedulePolicy = MaximalStep(),
    rng: Optional[random.Random] = None,
) -> tuple[FiringSet, TokenState]:
    """Fire one maximal step chosen by the policy; values read the pre-step state."""
    candidates = _candidates(net, ts, interp)
    if not candidates:
        raise NoEnabledSet(bool(enabled_transitions(net, frozenset(ts))))
    if isinstance(policy, RandomMaximal):
        chooser = rng if rng is not None else random.Random(policy.seed)
        fs = chooser.choice(candidates)
    else:
        fs = candidates[0]
    produced: dict[str, int] = {}
    for tid in fs.transitions:
        t = net.transition(tid)
        value = ex.evaluate(t.fn, _env_for(net, tid, ts, interp))
        for p in net.postset(tid):
            produced[p] = value
    marking = fire_set(net, frozenset(ts), fs)
    new_ts: TokenState = {}
    for p in marking:
        new_ts[p] = produced[p] if p in produced else ts[p]
    return fs, new_ts


def simulate_run(
    net: PresNet,
    inputs: TokenState,
    interp: Interpretation,
    policy: SchedulePolicy = MaximalStep(),
    max_steps: int = 1_000,
) -> RunOutcome:
    """Iterate steps from the initial token assignment until rest or bound."""
    if frozenset(inputs) != frozenset(net.initial_marking):
        raise SimError(
            f"input domain {sorted(inputs)} does not match the initial marking {sorted(net.initial_marking)}"
        )
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    rng = random.Random(policy.seed) if isinstance(policy, RandomMaximal) else None
    ts = dict(inputs)
    trace: list[tuple[FiringSet, TokenState]] = []
    for step in range(max_steps):
        try:
            fs, ts = simulate_step(net, ts, interp, policy, rng)
        except NoEnabledSet as stop:
            status = DEADLOCK if stop.structurally_enabled else QUIESCENT
            return RunOutcome(status, ts, trace, step)
        trace.append((fs, dict(ts)))
    try:
        simulate_step(net, ts, interp, policy, rng)
    except NoEnabledSet as stop:
        status = DEADLOCK if stop.structurally_enabled else QUIESCENT
        return RunOutcome(status, ts, trace, max_steps)
    return RunOutcome(STEP_BOUND_EXCEEDED, ts, trace, max_steps)


def out_port_values(net: PresNet, ts: TokenState) -> dict[str, int]:
    ports = classify_ports(net)
    return {p: ts[p] for p in sorted(ports.out_ports) if p in ts}


def confluence_check(
    net: PresNet,
    inputs: TokenState,
    interp: Interpretation,
    schedules: int = 10,
    seed: int = 0,
    max_steps: int = 1_000,
) -> Verdict:
    """Run several randomized maximal schedules and compare what reaches the out-ports.

    Equivalent means every schedule quiesced with identical out-port
    tokens; a difference is returned with the two diverging traces.
    """
    if schedules < 2:
        raise ValueError("confluence needs at least two schedules")
    outcomes: list[tuple[int, RunOutcome]] = []
    for i in range(schedules):
        outcomes.append((seed + i, simulate_run(net, inputs, interp, RandomMaximal(seed + i), max_steps)))
    method = f"confluence(schedules={schedules}, seed={seed})"
    for s, run in outcomes:
        if run.status != QUIESCENT:
            return Verdict(INCONCLUSIVE, method, reason=f"seed {s} ended {run.status} after {run.steps} steps")
    base_seed, base = outcomes[0]
    base_out = out_port_values(net, base.final_state)
    for s, run in outcomes[1:]:
        run_out = out_port_values(net, run.final_state)
        if run_out != base_out:
            return Verdict(
                NOT_EQUIVALENT,
                method,
                witness={
                    "seeds": [base_seed, s],
                    "out_ports": [base_out, run_out],
                    "traces": [trace_json(base), trace_json(run)],
                },
            )
    return Verdict(EQUIVALENT, method)


def trace_json(run: RunOutcome) -> dict:
    return {
        "status": run.status,
        "steps": run.steps,
        "final": {p: run.final_state[p] for p in sorted(run.final_state)},
        "trace": [
            {
                "fired": list(fs.transitions),
                "guards": [str(g) for g in fs.guard_set],
                "tokens": {p: ts[p] for p in sorted(ts)},
            }
            for fs, ts in run.trace
        ],
    }
