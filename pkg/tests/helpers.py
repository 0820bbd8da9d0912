"""Seeded random generators and oracles shared by the property suites."""

from __future__ import annotations

import random

from pwr.netlist import CellInstance, CellKind, Design, Endpoint, Island, Net
from pwr.pimsim import ScriptCommand, Trace

VOLTAGES = (0.8, 1.0, 1.2)


def random_design(rng: random.Random) -> Design:
    """A small valid multi-island design with only plain cells."""
    islands = tuple(
        Island(f"isl{i}", vdd=rng.choice(VOLTAGES), switchable=rng.random() < 0.4)
        for i in range(rng.randint(2, 4))
    )
    cells = tuple(
        CellInstance(
            f"c{i}",
            CellKind.STD,
            rng.choice(islands).name,
            cap_ff=round(rng.uniform(1.0, 50.0), 1),
            gate_count=rng.randint(1, 500),
        )
        for i in range(rng.randint(2, 10))
    )
    nets = tuple(
        Net(
            f"n{i}",
            Endpoint(rng.choice(cells).name, "z"),
            tuple(Endpoint(rng.choice(cells).name, f"a{j}") for j in range(rng.randint(1, 3))),
        )
        for i in range(rng.randint(1, 12))
    )
    return Design(islands, cells, nets, ())


def random_script(rng: random.Random, max_commands: int = 8) -> tuple[ScriptCommand, ...]:
    commands = []
    t = 0.0
    for _ in range(rng.randint(0, max_commands)):
        t += rng.choice((0, 1, 5, 19, 20, 21, 40, 60, 100))
        commands.append(ScriptCommand(float(t), rng.choice(("write_sleep", "read_status"))))
    return tuple(commands)


def check_trace_safety(trace: Trace) -> None:
    """Assert the controller's ordering invariants over a whole trace:

    1. the sleep bias is never asserted while isolation is down;
    2. retention save completes before the bias asserts;
    3. the bias drops before restore completes;
    4. restore completes before isolation drops;
    5. ready status only ever appears with every signal deasserted.
    """
    iso = bias = saved = False
    last_t = None
    for t, event in trace.events:
        if last_t is not None:
            assert t >= last_t, "trace times must be non-decreasing"
        last_t = t
        if event == "ISO=1":
            iso = True
        elif event == "ISO=0":
            assert not bias, "bias must drop before isolation"
            assert not saved, "restore must complete before isolation drops"
            iso = False
        elif event == "BIAS=1":
            assert iso, "bias asserted without isolation"
            assert saved, "bias asserted before retention save completed"
            bias = True
        elif event == "BIAS=0":
            bias = False
        elif event == "SAVE_DONE":
            saved = True
        elif event == "RESTORE_DONE":
            assert not bias, "restore ran while the bias was still asserted"
            saved = False
        elif event == "STATUS=ready":
            assert not (iso or bias or saved), "ready status outside the active state"
        if bias:
            assert iso, "bias held while isolation dropped"
