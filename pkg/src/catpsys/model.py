"""Static data model of a membrane system: structure, rules, targets, validation.

A configuration is a rooted labeled membrane tree plus an environment
multiset.  Rules attach to membrane *labels*, so several coexisting
membranes with the same label (possible after membrane creation) share one
rule set.  All types are immutable values after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, NamedTuple, Union

from catpsys.multiset import EMPTY, Alphabet, Multiset, Symbol, format_multiset


class PathError(KeyError):
    """A child-index path does not exist in the configuration tree."""


# ---------------------------------------------------------------------------
# Targets


@dataclass(frozen=True)
class Target:
    """Destination of a produced object: here, out, in, or in_<label>."""

    kind: str  # "here" | "out" | "in"
    label: str | None = None  # membrane label for in_<label>

    def __post_init__(self) -> None:
        if self.kind not in ("here", "out", "in"):
            raise ValueError(f"bad target kind: {self.kind!r}")
        if self.label is not None and self.kind != "in":
            raise ValueError("only 'in' targets may name a membrane label")

    @property
    def is_inward(self) -> bool:
        return self.kind == "in"

    def __str__(self) -> str:
        if self.kind == "in" and self.label is not None:
            return f"in_{self.label}"
        return self.kind


HERE = Target("here")
OUT = Target("out")
IN = Target("in")


def in_label(label: str) -> Target:
    return Target("in", label)


class RhsObject(NamedTuple):
    symbol: Symbol
    target: Target


# ---------------------------------------------------------------------------
# Rules


@dataclass(frozen=True)
class NonCoopRule:
    """``a -> v`` with an optional dissolution marker.

    ``group_target`` is only meaningful under target selection and for rules
    with an empty right-hand side (e.g. ``d -> (.,out)``); for a non-empty
    right-hand side the validator requires all object targets to agree with
    it in target-selection systems.
    """

    lhs: Symbol
    rhs: tuple[RhsObject, ...]
    dissolves: bool = False
    label: str | None = None
    empty_rhs_target: Target = HERE

    def lhs_multiset(self) -> Multiset:
        return Multiset.of(self.lhs)

    def group_target(self) -> Target:
        return self.rhs[0].target if self.rhs else self.empty_rhs_target


@dataclass(frozen=True)
class CatalyticRule:
    """``c a -> c v``; the catalyst itself may carry a target in mobile systems."""

    catalyst: Symbol
    reactant: Symbol
    rhs: tuple[RhsObject, ...]
    catalyst_target: Target = HERE
    label: str | None = None

    def lhs_multiset(self) -> Multiset:
        return Multiset.of(self.catalyst, self.reactant)

    def group_target(self) -> Target:
        return HERE  # catalytic rules are all-here under target selection


@dataclass(frozen=True)
class CreationRule:
    """``c a -> c [ u ]_label``: create a membrane with given label and contents."""

    catalyst: Symbol
    reactant: Symbol
    new_label: str
    contents: Multiset = EMPTY
    label: str | None = None

    def lhs_multiset(self) -> Multiset:
        return Multiset.of(self.catalyst, self.reactant)

    def group_target(self) -> Target:
        return HERE


Rule = Union[NonCoopRule, CatalyticRule, CreationRule]


def rule_dissolves(rule: Rule) -> bool:
    return isinstance(rule, NonCoopRule) and rule.dissolves


def rule_rhs(rule: Rule) -> tuple[RhsObject, ...]:
    return rule.rhs if isinstance(rule, (NonCoopRule, CatalyticRule)) else ()


# ---------------------------------------------------------------------------
# Control modes


@dataclass(frozen=True)
class Plain:
    """Unrestricted nondeterministic maximal parallelism."""


@dataclass(frozen=True)
class LabelSelection:
    """Each step selects one label set from ``sets`` and applies a maximal
    multiset of rules whose labels all lie in the selected set."""

    sets: tuple[tuple[str, frozenset[str]], ...]


@dataclass(frozen=True)
class TargetSelection:
    """Each region applies, per step, a maximal multiset of rules sharing one
    target; all inward objects of a region go to one shared child."""


@dataclass(frozen=True)
class Controlled:
    """Rule availability follows a schedule of label sets.

    With ``period`` set the schedule repeats (time-varying, step ``i`` uses
    the set at ``i mod period``); otherwise it is a finite word.  ``weak``
    relaxes halting so a computation may stop at any point where the
    scheduled set admits nothing, not just at a period boundary.
    """

    schedule: tuple[tuple[str, frozenset[str]], ...]
    period: int | None = None
    weak: bool = False

    def __post_init__(self) -> None:
        if self.period is not None:
            if self.period < 1 or self.period != len(self.schedule):
                raise ValueError("period must equal the schedule length")

    def set_at(self, step_index: int) -> frozenset[str] | None:
        """Scheduled label set for a step, or None past a finite schedule."""
        if self.period is not None:
            return self.schedule[step_index % self.period][1]
        if step_index < len(self.schedule):
            return self.schedule[step_index][1]
        return None

    def name_at(self, step_index: int) -> str:
        if self.period is not None:
            return self.schedule[step_index % self.period][0]
        if step_index < len(self.schedule):
            return self.schedule[step_index][0]
        return "<exhausted>"


ControlMode = Union[Plain, LabelSelection, TargetSelection, Controlled]


# ---------------------------------------------------------------------------
# Configurations


@dataclass(frozen=True)
class MembraneNode:
    label: str
    contents: Multiset
    children: tuple[MembraneNode, ...] = ()


@dataclass(frozen=True)
class Configuration:
    environment: Multiset
    skin: MembraneNode


Path = tuple[int, ...]


def iter_regions(cfg: Configuration) -> Iterator[tuple[Path, MembraneNode]]:
    """Preorder traversal of (path, node) pairs; the skin has the empty path."""

    def walk(node: MembraneNode, path: Path) -> Iterator[tuple[Path, MembraneNode]]:
        yield path, node
        for i, child in enumerate(node.children):
            yield from walk(child, path + (i,))

    return walk(cfg.skin, ())


def region_lookup(cfg: Configuration, path: Path) -> MembraneNode:
    """Resolve a child-index path; paths, not labels, identify nodes."""
    node = cfg.skin
    for i in path:
        if not 0 <= i < len(node.children):
            raise PathError(f"invalid path {path!r}")
        node = node.children[i]
    return node


def membrane_count(cfg: Configuration) -> int:
    return sum(1 for _ in iter_regions(cfg))


def canonicalize(cfg: Configuration) -> str:
    """Deterministic string, invariant under permutation of sibling subtrees.

    Siblings are sorted by their own canonical strings (which begin with the
    membrane label), so two configurations are isomorphic iff the strings
    are equal.
    """

    def node_str(node: MembraneNode) -> str:
        inner = ""
        if node.children:
            inner = "[" + "|".join(sorted(node_str(c) for c in node.children)) + "]"
        return f"{node.label}{{{format_multiset(node.contents)}}}{inner}"

    return f"env{{{format_multiset(cfg.environment)}}} {node_str(cfg.skin)}"


# ---------------------------------------------------------------------------
# The system itself


@dataclass(frozen=True)
class PSystem:
    """A membrane system in any of the supported variants.

    ``output_region`` is a membrane label, or None for the environment.
    ``rules`` maps membrane labels to rule tuples; labels that only come
    into existence through creation rules still get their rule set here.
    """

    alphabet: Alphabet
    catalysts: frozenset[Symbol]
    initial: Configuration
    rules: dict[str, tuple[Rule, ...]]
    output_region: str | None
    output_order: tuple[Symbol, ...]
    control: ControlMode = field(default_factory=Plain)
    mobile: bool = False
    creation: bool = False
    targets_labeled: bool = False
    name: str = ""

    def region_rules(self, label: str) -> tuple[Rule, ...]:
        return self.rules.get(label, ())

    def all_rules(self) -> Iterator[tuple[str, int, Rule]]:
        for label in self.rules:
            for i, rule in enumerate(self.rules[label]):
                yield label, i, rule

    def rule_by_label(self, rule_label: str) -> tuple[str, int, Rule] | None:
        for region, i, rule in self.all_rules():
            if rule.label == rule_label:
                return region, i, rule
        return None

    def without_rule(self, rule_label: str) -> PSystem:
        """Copy of the system with one labeled rule removed (for mutation tests)."""
        found = self.rule_by_label(rule_label)
        if found is None:
            raise KeyError(f"no rule labeled {rule_label!r}")
        region, idx, _ = found
        new_rules = dict(self.rules)
        new_rules[region] = tuple(r for j, r in enumerate(new_rules[region]) if j != idx)
        return replace(self, rules=new_rules)


def initial_labels(cfg: Configuration) -> set[str]:
    return {node.label for _, node in iter_regions(cfg)}


def creatable_labels(sys: PSystem) -> set[str]:
    return {
        rule.new_label
        for _, _, rule in sys.all_rules()
        if isinstance(rule, CreationRule)
    }


def catalyst_total(sys: PSystem, cfg: Configuration) -> int:
    total = sum(cfg.environment.count(c) for c in sys.catalysts)
    for _, node in iter_regions(cfg):
        total += sum(node.contents.count(c) for c in sys.catalysts)
    return total


# ---------------------------------------------------------------------------
# Validation


def validate_system(sys: PSystem) -> list[str]:
    """Check every static invariant; violations are returned as data, not raised."""
    v: list[str] = []
    skin_label = sys.initial.skin.label
    known_labels = initial_labels(sys.initial) | creatable_labels(sys)

    for cat in sys.catalysts:
        if cat not in sys.alphabet:
            v.append(f"catalyst {cat.display} is not in the object alphabet")

    for _, node in iter_regions(sys.initial):
        for sym, _ in node.contents:
            if sym not in sys.alphabet:
                v.append(f"initial contents use undeclared symbol {sym.display}")
    for sym, _ in sys.initial.environment:
        if sym not in sys.alphabet:
            v.append(f"initial environment uses undeclared symbol {sym.display}")

    needs_labels = isinstance(sys.control, (LabelSelection, Controlled))
    seen_rule_labels: set[str] = set()

    for region, idx, rule in sys.all_rules():
        where = f"rule {rule.label or idx} in region {region}"
        if region not in known_labels:
            v.append(f"{where}: region label {region} neither initial nor creatable")

        if needs_labels:
            if rule.label is None:
                v.append(f"{where}: unlabeled rule under label-based control")
            elif rule.label in seen_rule_labels:
                v.append(f"{where}: duplicate rule label {rule.label}")
        if rule.label is not None:
            seen_rule_labels.add(rule.label)

        rhs = rule_rhs(rule)
        for obj in rhs:
            if obj.symbol in sys.catalysts:
                v.append(f"{where}: catalyst {obj.symbol.display} on right-hand side")
            if obj.symbol not in sys.alphabet:
                v.append(f"{where}: undeclared symbol {obj.symbol.display}")
            if obj.target.label is not None and not sys.targets_labeled:
                v.append(f"{where}: in_<label> target in a system without labeled targets")

        if isinstance(rule, NonCoopRule):
            if rule.lhs in sys.catalysts:
                v.append(f"{where}: catalyst {rule.lhs.display} evolves")
            if rule.dissolves and region == skin_label:
                v.append(f"{where}: dissolution in the skin region")
        elif isinstance(rule, CatalyticRule):
            if rule.catalyst not in sys.catalysts:
                v.append(f"{where}: {rule.catalyst.display} is not a declared catalyst")
            if rule.reactant in sys.catalysts:
                v.append(f"{where}: catalyst {rule.reactant.display} as reactant")
            if rule.catalyst_target != HERE:
                if not sys.mobile:
                    v.append(f"{where}: immobile catalyst moved")
                if rule.catalyst_target.kind == "out" and region == skin_label:
                    v.append(f"{where}: catalyst sent out of the skin")
                if rule.catalyst_target.label is not None and not sys.targets_labeled:
                    v.append(f"{where}: in_<label> catalyst target without labeled targets")
        elif isinstance(rule, CreationRule):
            if not sys.creation:
                v.append(f"{where}: creation rule in a system without creation")
            if rule.catalyst not in sys.catalysts:
                v.append(f"{where}: {rule.catalyst.display} is not a declared catalyst")
            if rule.reactant in sys.catalysts:
                v.append(f"{where}: catalyst {rule.reactant.display} as reactant")
            if rule.new_label == skin_label:
                v.append(f"{where}: creation of the skin label")
            for sym, _ in rule.contents:
                if sym in sys.catalysts:
                    v.append(f"{where}: catalyst {sym.display} in created contents")
                if sym not in sys.alphabet:
                    v.append(f"{where}: undeclared symbol {sym.display} in created contents")

        if isinstance(sys.control, TargetSelection):
            if isinstance(rule, CatalyticRule):
                bad = rule.catalyst_target != HERE or any(o.target != HERE for o in rhs)
                if bad:
                    v.append(f"{where}: catalytic rule with non-here target under target selection")
            else:
                targets = {o.target for o in rhs}
                if len(targets) > 1:
                    v.append(f"{where}: mixed targets under target selection")

    if needs_labels:
        declared = (
            sys.control.sets
            if isinstance(sys.control, LabelSelection)
            else sys.control.schedule
        )
        for set_name, labels in declared:
            for lab in labels:
                if lab not in seen_rule_labels:
                    v.append(f"label set {set_name} references unknown rule label {lab}")

    if sys.output_region is not None and sys.output_region not in known_labels:
        v.append(f"output region {sys.output_region} does not exist")
    if len(set(sys.output_order)) != len(sys.output_order):
        v.append("output order contains duplicates")
    for sym in sys.output_order:
        if sym not in sys.alphabet:
            v.append(f"output order uses undeclared symbol {sym.display}")

    return v


def assert_valid(sys: PSystem) -> PSystem:
    violations = validate_system(sys)
    if violations:
        raise ValueError("invalid system:\n" + "\n".join(violations))
    return sys
