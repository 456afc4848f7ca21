"""Nondeterministic register machines: model, validator, interpreter, text format.

The interpreter is the independent oracle for everything the compilers
produce: a machine generates the set of register-3..m contents over all
halting runs that start from empty registers, with registers 1 and 2 (the
only decrementable ones) required to be empty at the halt label.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Union


LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class MachineParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class AddInstr:
    """Increment a register, then jump to one of two labels (chosen freely)."""

    register: int
    branch_a: str
    branch_b: str


@dataclass(frozen=True)
class SubInstr:
    """Decrement-and-jump to ``dec_branch`` if nonzero, else jump to ``zero_branch``."""

    register: int
    dec_branch: str
    zero_branch: str


@dataclass(frozen=True)
class HaltInstr:
    pass


Instruction = Union[AddInstr, SubInstr, HaltInstr]


@dataclass(frozen=True)
class RegisterMachine:
    """``registers`` counts all registers; 1 and 2 are working, 3.. are output."""

    registers: int
    instructions: dict[str, Instruction]
    initial: str
    halt: str
    name: str = ""

    def output_count(self) -> int:
        return max(self.registers - 2, 0)

    def labels(self) -> tuple[str, ...]:
        return tuple(self.instructions)


RMState = tuple[str, tuple[int, ...]]


def rm_validate(m: RegisterMachine) -> list[str]:
    v: list[str] = []
    if m.registers < 2:
        v.append(f"need at least 2 registers, got {m.registers}")
    if m.initial not in m.instructions:
        v.append(f"initial label {m.initial} has no instruction")
    halts = [lab for lab, ins in m.instructions.items() if isinstance(ins, HaltInstr)]
    if halts != [m.halt]:
        v.append(f"expected exactly one HALT at {m.halt}, found {halts}")
    for lab, ins in m.instructions.items():
        if not LABEL_RE.match(lab):
            v.append(f"bad label name {lab!r}")
        if isinstance(ins, AddInstr):
            if not 1 <= ins.register <= m.registers:
                v.append(f"{lab}: ADD on unknown register {ins.register}")
            targets = (ins.branch_a, ins.branch_b)
        elif isinstance(ins, SubInstr):
            if ins.register not in (1, 2):
                v.append(f"{lab}: SUB on register {ins.register}; only registers 1 and 2 may be decremented")
            targets = (ins.dec_branch, ins.zero_branch)
        else:
            if lab != m.halt:
                v.append(f"{lab}: HALT at a non-halt label")
            targets = ()
        for t in targets:
            if t not in m.instructions:
                v.append(f"{lab}: jump to undefined label {t}")
    return v


def rm_step(m: RegisterMachine, state: RMState) -> tuple[RMState, ...]:
    """All successor states; an ADD branches two ways unless both targets agree."""
    label, regs = state
    ins = m.instructions[label]
    if isinstance(ins, HaltInstr):
        raise ValueError(f"stepping a halted state at {label}")
    if isinstance(ins, AddInstr):
        bumped = regs[: ins.register - 1] + (regs[ins.register - 1] + 1,) + regs[ins.register :]
        if ins.branch_a == ins.branch_b:
            return ((ins.branch_a, bumped),)
        return ((ins.branch_a, bumped), (ins.branch_b, bumped))
    if regs[ins.register - 1] > 0:
        dec = regs[: ins.register - 1] + (regs[ins.register - 1] - 1,) + regs[ins.register :]
        return ((ins.dec_branch, dec),)
    return ((ins.zero_branch, regs),)


@dataclass
class RMExploreReport:
    outputs: set[tuple[int, ...]] = field(default_factory=set)
    min_depths: dict[tuple[int, ...], int] = field(default_factory=dict)
    truncated: bool = False
    convention_violations: list[RMState] = field(default_factory=list)
    visited: int = 0


def _output_of(m: RegisterMachine, regs: tuple[int, ...]) -> tuple[int, ...]:
    return regs[2:]


def rm_explore(m: RegisterMachine, max_steps: int) -> RMExploreReport:
    """BFS from the all-zero initial state, collecting halting outputs.

    States reaching the halt label with register 1 or 2 nonzero violate the
    generation convention and are reported instead of contributing a result.
    """
    report = RMExploreReport()
    start: RMState = (m.initial, (0,) * m.registers)
    seen = {start}
    frontier: deque[RMState] = deque([start])
    depth = 0
    while frontier:
        if depth > max_steps:
            report.truncated = True
            break
        next_frontier: deque[RMState] = deque()
        for state in frontier:
            label, regs = state
            if label == m.halt:
                if regs[0] == 0 and regs[1] == 0:
                    out = _output_of(m, regs)
                    report.outputs.add(out)
                    report.min_depths.setdefault(out, depth)
                else:
                    report.convention_violations.append(state)
                continue
            if depth == max_steps:
                report.truncated = True
                continue
            for succ in rm_step(m, state):
                if succ not in seen:
                    seen.add(succ)
                    next_frontier.append(succ)
        frontier = next_frontier
        depth += 1
    report.visited = len(seen)
    return report


def rm_trace_lengths(m: RegisterMachine, max_steps: int) -> set[tuple[tuple[int, ...], int]]:
    """All (output vector, trace length) pairs reachable within the bound.

    Unlike :func:`rm_explore` this keys visited states by depth as well, so
    one output reached along traces of different lengths is reported once
    per length.
    """
    pairs: set[tuple[tuple[int, ...], int]] = set()
    start: RMState = (m.initial, (0,) * m.registers)
    seen = {(start, 0)}
    frontier = deque([start])
    depth = 0
    while frontier and depth <= max_steps:
        next_frontier: deque[RMState] = deque()
        for state in frontier:
            label, regs = state
            if label == m.halt:
                if regs[0] == 0 and regs[1] == 0:
                    pairs.add((_output_of(m, regs), depth))
                continue
            if depth == max_steps:
                continue
            for succ in rm_step(m, state):
                if (succ, depth + 1) not in seen:
                    seen.add((succ, depth + 1))
                    next_frontier.append(succ)
        frontier = next_frontier
        depth += 1
    return pairs


def fresh_label(m: RegisterMachine, stem: str) -> str:
    """A label not used by the machine, derived from ``stem``."""
    if stem not in m.instructions:
        return stem
    i = 2
    while f"{stem}{i}" in m.instructions:
        i += 1
    return f"{stem}{i}"


# ---------------------------------------------------------------------------
# Text format


def parse_machine(text: str, name: str = "") -> RegisterMachine:
    """Parse the line format::

        registers 4
        l0: ADD(3) l1 l2
        l1: SUB(1) l2 l3
        lh: HALT
    """
    registers: int | None = None
    instructions: dict[str, Instruction] = {}
    order: list[str] = []
    halt: str | None = None
    instr_re = re.compile(
        r"(?P<label>\S+)\s*:\s*(?:(?P<op>ADD|SUB)\s*\(\s*(?P<reg>\d+)\s*\)\s+(?P<t1>\S+)\s+(?P<t2>\S+)|(?P<halt>HALT))\s*\Z"
    )
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if registers is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "registers" or not parts[1].isdigit():
                raise MachineParseError("expected header 'registers <count>'", lineno)
            registers = int(parts[1])
            continue
        match = instr_re.match(line)
        if not match:
            raise MachineParseError(f"cannot parse instruction: {line!r}", lineno)
        label = match.group("label")
        if not LABEL_RE.match(label):
            raise MachineParseError(f"bad label {label!r}", lineno)
        if label in instructions:
            raise MachineParseError(f"duplicate label {label}", lineno)
        if match.group("halt"):
            if halt is not None:
                raise MachineParseError("second HALT instruction", lineno)
            instructions[label] = HaltInstr()
            halt = label
        else:
            reg = int(match.group("reg"))
            t1, t2 = match.group("t1"), match.group("t2")
            if match.group("op") == "ADD":
                instructions[label] = AddInstr(reg, t1, t2)
            else:
                instructions[label] = SubInstr(reg, t1, t2)
        order.append(label)
    if registers is None:
        raise MachineParseError("missing 'registers' header", 1)
    if not order:
        raise MachineParseError("machine has no instructions", 1)
    if halt is None:
        raise MachineParseError("machine has no HALT instruction", 1)
    return RegisterMachine(registers, instructions, initial=order[0], halt=halt, name=name)


def render_machine(m: RegisterMachine) -> str:
    lines = []
    if m.name:
        lines.append(f"# {m.name}")
    lines.append(f"registers {m.registers}")
    labels = list(m.instructions)
    # keep the initial label first so a round trip preserves it
    if labels and labels[0] != m.initial:
        labels.remove(m.initial)
        labels.insert(0, m.initial)
    for lab in labels:
        ins = m.instructions[lab]
        if isinstance(ins, AddInstr):
            lines.append(f"{lab}: ADD({ins.register}) {ins.branch_a} {ins.branch_b}")
        elif isinstance(ins, SubInstr):
            lines.append(f"{lab}: SUB({ins.register}) {ins.dec_branch} {ins.zero_branch}")
        else:
            lines.append(f"{lab}: HALT")
    return "\n".join(lines) + "\n"
