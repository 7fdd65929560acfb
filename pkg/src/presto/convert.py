"""Conversion of a net into an FSMD by symbolic simulation.

Starting from the initial marking, each reachable marking becomes a
control state.  At a marking, the structurally enabled transitions are
partitioned into conflict groups (transitions conflict when their input
places overlap); a firing set picks one transition per group and fires
all of them together, a maximal step.  Each alternative choice inside
a group yields its own firing set, discriminated by guards: a chosen
guarded transition contributes its guard positively, and in a two-way
group where an unguarded transition wins over a guarded one the loser's
guard is recorded negated.  Firing sets whose guard decisions contradict
each other syntactically are dropped with a warning.

The machine's interface follows the marking: inputs are the variables of
initially marked places, storage the rest, outputs the variables of
places with no consumers.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from . import expr as ex
from .fsmd import Fsmd, FsmdTransition, UpdateSet
from .pres import PresNet, Violation, classify_ports, enabled_transitions


class ConvertError(Exception):
    pass


class NotEnabled(ConvertError):
    pass


class UnsafeMarking(ConvertError):
    """Firing would put a second token on an already marked place."""


class StateBoundExceeded(ConvertError):
    def __init__(self, bound: int):
        super().__init__(f"conversion exceeded the state bound of {bound}")
        self.bound = bound


@dataclass(frozen=True)
class FiringSet:
    """A set of pairwise non-conflicting transitions fired in one step."""

    transitions: tuple[str, ...]
    guard_set: tuple[ex.Expr, ...]


@dataclass(frozen=True)
class ConversionConfig:
    state_bound: int = 10_000
    on_unsafe: str = "error"  # "error" | "reject-firing-set"

    def __post_init__(self) -> None:
        if self.state_bound < 1:
            raise ValueError("state_bound must be at least 1")
        if self.on_unsafe not in ("error", "reject-firing-set"):
            raise ValueError(f"unknown unsafe policy {self.on_unsafe!r}")


def _conflict_groups(net: PresNet, enabled: list[str]) -> list[list[str]]:
    """Connected components of the "input places overlap" relation, in declaration order."""
    order = {t.id: i for i, t in enumerate(net.transitions)}
    parent = {t: t for t in enabled}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for a, b in itertools.combinations(enabled, 2):
        if net.preset(a) & net.preset(b):
            union(a, b)
    groups: dict[str, list[str]] = {}
    for t in enabled:
        groups.setdefault(find(t), []).append(t)
    out = [sorted(g, key=order.__getitem__) for g in groups.values()]
    out.sort(key=lambda g: order[g[0]])
    return out


def _guard_decisions(net: PresNet, groups: list[list[str]], choice: tuple[str, ...]) -> Optional[list[ex.Expr]]:
    """Guard set selecting this combination, or None when it contradicts itself."""
    decided: list[ex.Expr] = []
    for group, chosen in zip(groups, choice):
        t = net.transition(chosen)
        if t.guard is not None:
            decided.append(t.guard)
        elif len(group) == 2:
            other = net.transition(group[0] if group[1] == chosen else group[1])
            if other.guard is not None:
                decided.append(ex.negate_guard(other.guard))
    normals: dict[ex.Expr, ex.Expr] = {}
    for g in decided:
        n = ex.normalize(g)
        if ex.normalize(ex.negate_guard(g)) in normals:
            return None
        normals.setdefault(n, g)
    return list(normals.values())


def construct_set_of_transitions(
    net: PresNet, m: frozenset[str], warnings: Optional[list[Violation]] = None
) -> list[FiringSet]:
    """All maximal firing sets available at a marking, in deterministic order.

    Unguarded, conflict-free transitions appear in every set; conflicting
    transitions produce one alternative per choice.  Combinations whose
    guard decisions contain both a guard and its negation are dropped
    (reported through ``warnings`` when given).
    """
    order = {t.id: i for i, t in enumerate(net.transitions)}
    enabled = sorted(enabled_transitions(net, m), key=order.__getitem__)
    if not enabled:
        return []
    groups = _conflict_groups(net, enabled)
    sets: list[FiringSet] = []
    for choice in itertools.product(*groups):
        guards = _guard_decisions(net, groups, choice)
        if guards is None:
            if warnings is not None:
                warnings.append(
                    Violation("InconsistentGuards", "+".join(choice), "contradictory guard decisions; set dropped")
                )
            continue
        sets.append(FiringSet(tuple(sorted(choice, key=order.__getitem__)), tuple(guards)))
    return sets


def fire_set(net: PresNet, m: frozenset[str], fs: FiringSet | tuple[str, ...]) -> frozenset[str]:
    """Successor marking: consume every input place, then produce every output place.

    Raises :class:`UnsafeMarking` when a produced place is already marked
    (and not consumed this step) or two fired transitions produce it.
    """
    tids = fs.transitions if isinstance(fs, FiringSet) else tuple(fs)
    enabled = enabled_transitions(net, m)
    for tid in tids:
        if tid not in enabled:
            raise NotEnabled(f"transition {tid!r} is not enabled at {sorted(m)}")
    for a, b in itertools.combinations(tids, 2):
        if net.preset(a) & net.preset(b):
            raise NotEnabled(f"transitions {a!r} and {b!r} compete for a token")
    consumed = frozenset().union(*(net.preset(t) for t in tids)) if tids else frozenset()
    remaining = m - consumed
    produced: set[str] = set()
    for tid in tids:
        for p in net.postset(tid):
            if p in produced or p in remaining:
                raise UnsafeMarking(f"firing {sorted(tids)} puts a second token on {p!r}")
            produced.add(p)
    return remaining | produced


@dataclass
class Conversion:
    """Converted machine plus the bookkeeping that ties it back to the net."""

    fsmd: Fsmd
    marking_of_state: dict[str, frozenset[str]]
    state_of_marking: dict[frozenset[str], str]
    # Per machine transition, one label per update: the applied-symbol
    # chain of the update expression, or the net transition's own name
    # for a pass-through (identity) update.
    labels: list[list[tuple[str, ...]]]
    firing_sets: dict[str, list[FiringSet]]
    warnings: list[Violation] = field(default_factory=list)

    @property
    def states_visited(self) -> int:
        return len(self.marking_of_state)


def _updates_for(net: PresNet, fs: FiringSet) -> tuple[UpdateSet, list[tuple[str, ...]]]:
    pairs: list[tuple[str, ex.Expr]] = []
    labels: list[tuple[str, ...]] = []
    for tid in fs.transitions:
        t = net.transition(tid)
        pairs.append((net.postset_var(tid), t.fn))
        chain = ex.apply_chain(t.fn)
        labels.append(chain if chain else (tid,))
    return UpdateSet.of(pairs), labels


def pres_to_fsmd(net: PresNet, cfg: ConversionConfig = ConversionConfig()) -> Conversion:
    """Explore reachable markings breadth-first and emit the machine.

    The result is deterministic: states are named ``q0, q1, ...`` in
    discovery order (``q0`` is the initial marking) and transitions are
    emitted in firing-set order per state.
    """
    ports = classify_ports(net)
    inputs = frozenset(net.var_of[p] for p in net.initial_marking)
    storage = frozenset(net.var_of[p] for p in net.places) - inputs
    outputs = frozenset(net.var_of[p] for p in ports.out_ports)

    m0 = frozenset(net.initial_marking)
    state_of: dict[frozenset[str], str] = {m0: "q0"}
    marking_of: dict[str, frozenset[str]] = {"q0": m0}
    transitions: list[FsmdTransition] = []
    labels: list[list[tuple[str, ...]]] = []
    firing_sets: dict[str, list[FiringSet]] = {}
    warnings: list[Violation] = []

    work: deque[frozenset[str]] = deque([m0])
    while work:
        m = work.popleft()
        q = state_of[m]
        sets = construct_set_of_transitions(net, m, warnings)
        firing_sets[q] = sets
        for fs in sets:
            try:
                succ = fire_set(net, m, fs)
            except UnsafeMarking as err:
                if cfg.on_unsafe == "reject-firing-set":
                    warnings.append(Violation("UnsafeMarking", "+".join(fs.transitions), str(err)))
                    continue
                raise
            if succ not in state_of:
                if len(state_of) >= cfg.state_bound:
                    raise StateBoundExceeded(cfg.state_bound)
                name = f"q{len(state_of)}"
                state_of[succ] = name
                marking_of[name] = succ
                work.append(succ)
            updates, update_labels = _updates_for(net, fs)
            transitions.append(FsmdTransition(q, fs.guard_set, state_of[succ], updates))
            labels.append(update_labels)

    machine = Fsmd(
        name=net.name,
        states=tuple(marking_of),
        reset="q0",
        inputs=inputs,
        storage=storage,
        outputs=outputs,
        transitions=tuple(transitions),
    )
    return Conversion(machine, marking_of, state_of, labels, firing_sets, warnings)
