"""Finite multisets over per-system interned symbol alphabets.

Symbols are interned per :class:`Alphabet`, never globally, so two loaded
systems can never alias each other's objects.  Multisets are immutable
values and safe to share between exploration workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence


class MultisetUnderflow(Exception):
    """Raised when a subtraction would drive some count negative."""


class SymbolError(ValueError):
    """Bad symbol name or use of a symbol foreign to an alphabet."""


# Characters that would collide with the text formats (rule arrows, targets,
# comments, count markers) if they appeared inside a symbol name.
_FORBIDDEN_CHARS = set(" \t\n()[],\"")
_RESERVED_TOKENS = {".", "->", "delta", "-"}


def _check_display(display: str) -> None:
    if not display:
        raise SymbolError("empty symbol name")
    if display in _RESERVED_TOKENS:
        raise SymbolError(f"reserved token used as symbol name: {display!r}")
    if any(ch in _FORBIDDEN_CHARS for ch in display):
        raise SymbolError(f"illegal character in symbol name: {display!r}")
    if display[0] in "'#@":
        # leading quote clashes with token quoting, leading # with comments,
        # leading @ with directives; '#' itself is written quoted
        if display != "#":
            raise SymbolError(f"symbol name may not start with {display[0]!r}: {display!r}")
    # a trailing ^<digits> would be ambiguous with the count marker a^2
    i = len(display)
    while i > 0 and display[i - 1].isdigit():
        i -= 1
    if 0 < i < len(display) and display[i - 1] == "^":
        raise SymbolError(f"symbol name may not end in ^<digits>: {display!r}")


@dataclass(frozen=True, eq=False)
class Symbol:
    """An interned object symbol.

    Equality and hashing are identity based: the owning alphabet guarantees
    one instance per display name, and symbols from different alphabets are
    distinct even when they share a display name.
    """

    index: int
    display: str

    def __repr__(self) -> str:
        return f"Symbol({self.display!r})"


class Alphabet:
    """Interning table for the object alphabet of one system."""

    def __init__(self, names: Iterable[str] = ()) -> None:
        self._by_name: dict[str, Symbol] = {}
        self._symbols: list[Symbol] = []
        for name in names:
            self.intern(name)

    def intern(self, display: str) -> Symbol:
        sym = self._by_name.get(display)
        if sym is None:
            _check_display(display)
            sym = Symbol(len(self._symbols), display)
            self._by_name[display] = sym
            self._symbols.append(sym)
        return sym

    def get(self, display: str) -> Symbol | None:
        return self._by_name.get(display)

    def require(self, display: str) -> Symbol:
        sym = self._by_name.get(display)
        if sym is None:
            raise SymbolError(f"undeclared symbol: {display!r}")
        return sym

    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(self._symbols)

    def __contains__(self, sym: object) -> bool:
        return isinstance(sym, Symbol) and self._by_name.get(sym.display) is sym

    def __len__(self) -> int:
        return len(self._symbols)

    def __repr__(self) -> str:
        return f"Alphabet({[s.display for s in self._symbols]!r})"


class Multiset:
    """Immutable finite multiset of symbols (absent symbol = count 0)."""

    __slots__ = ("_counts", "_hash", "_total")

    def __init__(self, counts: Mapping[Symbol, int] | Iterable[tuple[Symbol, int]] = ()):
        items = counts.items() if isinstance(counts, Mapping) else counts
        store: dict[Symbol, int] = {}
        for sym, k in items:
            if k < 0:
                raise ValueError(f"negative multiplicity for {sym.display}: {k}")
            if k:
                store[sym] = store.get(sym, 0) + k
        self._counts = store
        self._hash: int | None = None
        self._total = sum(store.values())

    @classmethod
    def of(cls, *symbols: Symbol) -> Multiset:
        return cls((s, 1) for s in symbols)

    def count(self, sym: Symbol) -> int:
        return self._counts.get(sym, 0)

    __getitem__ = count

    @property
    def total(self) -> int:
        return self._total

    def distinct(self) -> int:
        return len(self._counts)

    def __bool__(self) -> bool:
        return bool(self._counts)

    def items(self) -> list[tuple[Symbol, int]]:
        """Pairs sorted by display name; the canonical iteration order."""
        return sorted(self._counts.items(), key=lambda it: it[0].display)

    def __iter__(self) -> Iterator[tuple[Symbol, int]]:
        return iter(self.items())

    def symbols(self) -> set[Symbol]:
        return set(self._counts)

    def to_dict(self) -> dict[Symbol, int]:
        return dict(self._counts)

    def add(self, sym: Symbol, k: int = 1) -> Multiset:
        if k < 0:
            raise ValueError(f"cannot add a negative count: {k}")
        if k == 0:
            return self
        d = dict(self._counts)
        d[sym] = d.get(sym, 0) + k
        return Multiset(d)

    def plus(self, other: Multiset) -> Multiset:
        if not other._counts:
            return self
        d = dict(self._counts)
        for sym, k in other._counts.items():
            d[sym] = d.get(sym, 0) + k
        return Multiset(d)

    def subtract(self, other: Multiset) -> Multiset:
        """Pointwise difference; raises :class:`MultisetUnderflow` if not ``other <= self``."""
        d = dict(self._counts)
        for sym, k in other._counts.items():
            have = d.get(sym, 0)
            if have < k:
                raise MultisetUnderflow(f"{sym.display}: {have} < {k}")
            if have == k:
                del d[sym]
            else:
                d[sym] = have - k
        return Multiset(d)

    def leq(self, other: Multiset) -> bool:
        return all(other._counts.get(sym, 0) >= k for sym, k in self._counts.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Multiset({format_multiset(self)!r})"


EMPTY = Multiset()


def parikh(m: Multiset, order: Sequence[Symbol]) -> tuple[int, ...]:
    """Project ``m`` onto a fixed symbol sequence; symbols outside it are dropped."""
    if len(set(order)) != len(order):
        raise ValueError("output symbol sequence contains duplicates")
    return tuple(m.count(sym) for sym in order)


def needs_quoting(display: str) -> bool:
    return "#" in display


def format_symbol(display: str) -> str:
    return f"'{display}'" if needs_quoting(display) else display


def format_multiset(m: Multiset) -> str:
    """Canonical text form: ``sym^count`` tokens sorted by display, ``-`` when empty.

    Two multisets over the same alphabet are equal iff their canonical
    strings are equal.
    """
    if not m:
        return "-"
    parts = []
    for sym, k in m.items():
        tok = format_symbol(sym.display)
        parts.append(tok if k == 1 else f"{tok}^{k}")
    return " ".join(parts)


def parse_count_token(token: str) -> tuple[str, int]:
    """Split a ``sym^count`` token; a bare token has count 1."""
    caret = token.rfind("^")
    if caret > 0 and token[caret + 1 :].isdigit():
        return token[:caret], int(token[caret + 1 :])
    return token, 1


def parse_multiset(tokens: Sequence[str], alphabet: Alphabet) -> Multiset:
    """Parse canonical-form tokens against an alphabet; ``-`` denotes empty."""
    if list(tokens) == ["-"]:
        return EMPTY
    pairs = []
    for tok in tokens:
        name, k = parse_count_token(tok)
        if name.startswith("'") and name.endswith("'") and len(name) >= 3:
            name = name[1:-1]
        pairs.append((alphabet.require(name), k))
    return Multiset(pairs)
