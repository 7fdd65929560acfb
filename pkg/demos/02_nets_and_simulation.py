"""Nets, structural queries, and concrete token execution.

The guard-split example has three transitions enabled at once; two of
them compete for the same tokens, so the guard decides which maximal
step fires.  Running it with concrete integers shows the branch choice,
the token flow, and quiescence.
"""

from presto import adjacency, classify_ports, corpus, enabled_transitions, simulate_run
from presto.sim import out_port_values

net = corpus.load_net("guard_split")

print("== structure ==")
print("places:          ", ", ".join(net.places))
print("initially marked:", sorted(net.initial_marking))
ports = classify_ports(net)
print("in-ports:        ", sorted(ports.in_ports))
print("out-ports:       ", sorted(ports.out_ports))
adj = adjacency(net, "p7")
print("p7 producers:    ", sorted(adj.preset_of), " consumers:", sorted(adj.postset_of), "(self-loop)")
print("enabled at start:", sorted(enabled_transitions(net, net.initial_marking)))

interp = {
    "f_t1": lambda a, b: a + b,
    "f_t2": lambda a: a * 2,
    "f_t3": lambda a: a,
    "g": lambda a: a,
}

print()
print("== a run where the guard holds (p3 = 5) ==")
run = simulate_run(net, {"p1": 1, "p2": 2, "p3": 5, "p7": 9}, interp)
for fs, tokens in run.trace:
    print("fired", list(fs.transitions), "->", tokens)
print(run.status, "with out-ports", out_port_values(net, run.final_state))

print()
print("== a run where the guard fails (p3 = 0) ==")
run = simulate_run(net, {"p1": 1, "p2": 2, "p3": 0, "p7": 9}, interp)
for fs, tokens in run.trace:
    print("fired", list(fs.transitions), "->", tokens)
print(run.status, "with out-ports", out_port_values(net, run.final_state))
