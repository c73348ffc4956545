"""Data model for finite-state transducers and cascades.

Transducers here are immutable values: states are the integers
``0..state_count-1`` with state 0 always the initial state, arcs carry an
input and an output symbol, and any subset of states may be final.  Two
symbol texts are reserved: ``<eps>`` stands for the empty string (an
``<eps>`` input consumes nothing, an ``<eps>`` output emits nothing) and
``<unk>`` matches any token outside the transducer's alphabet.  An
``<unk>:<unk>`` arc passes the matched token through unchanged; ``<unk>``
with a fixed output is also legal, but ``<unk>`` as the output of any
other arc is rejected because there is no token to pass through.

A transducer's effective alphabets are the declared symbol sets united
with the non-reserved symbols actually on arcs; unknown-ness is judged
against the combined sigma of both sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple


class FstError(Exception):
    """Base class for every error raised by this package."""


class BadSymbolText(FstError):
    """Symbol text is empty, has whitespace, or squats on ``<...>``."""


class EmptyFst(FstError):
    """A transducer needs at least one state."""


class InvalidStateIndex(FstError):
    """Arc endpoint or final state outside ``0..state_count-1``."""


class IllegalUnknownOutput(FstError):
    """``<unk>`` may appear as output only on ``<unk>:<unk>`` arcs."""


class ReservedSymbolInAlphabet(FstError):
    """Declared alphabets may not contain ``<eps>`` or ``<unk>``."""


EPSILON_TEXT = "<eps>"
UNKNOWN_TEXT = "<unk>"
_RESERVED_TEXTS = (EPSILON_TEXT, UNKNOWN_TEXT)


class Symbol:
    """An interned alphabet symbol.

    Two symbols are equal iff their texts are equal; construction interns
    by text, so at most one instance exists per text and identity checks
    are safe internally.  Texts must be non-empty and whitespace-free,
    and apart from the two reserved symbols may not both start with ``<``
    and end with ``>``.
    """

    __slots__ = ("id", "text")

    _registry: dict[str, "Symbol"] = {}

    def __new__(cls, text):
        if isinstance(text, Symbol):
            return text
        interned = cls._registry.get(text)
        if interned is not None:
            return interned
        if not isinstance(text, str):
            raise BadSymbolText(
                f"symbol text must be a string, got {type(text).__name__}")
        if not text:
            raise BadSymbolText("symbol text must be non-empty")
        if any(ch.isspace() for ch in text):
            raise BadSymbolText(f"symbol text may not contain whitespace: {text!r}")
        if text.startswith("<") and text.endswith(">") and text not in _RESERVED_TEXTS:
            raise BadSymbolText(f"texts of the form <...> are reserved: {text!r}")
        sym = object.__new__(cls)
        sym.id = len(cls._registry)
        sym.text = text
        cls._registry[text] = sym
        return sym

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Symbol) and other.text == self.text

    def __hash__(self):
        return hash(self.text)

    def __lt__(self, other):
        return self.text < other.text

    def __le__(self, other):
        return self.text <= other.text

    def __reduce__(self):
        # re-intern on unpickle so identity checks keep working
        return (Symbol, (self.text,))

    def __repr__(self):
        return f"Symbol({self.text!r})"


EPSILON = Symbol(EPSILON_TEXT)
UNKNOWN = Symbol(UNKNOWN_TEXT)


def is_reserved(symbol: Symbol) -> bool:
    """True for ``<eps>`` and ``<unk>``."""
    return symbol is EPSILON or symbol is UNKNOWN


class Arc(NamedTuple):
    """One transition: ``src --input:output--> dst``."""

    src: int
    dst: int
    input: Symbol
    output: Symbol


def _arc_sort_key(arc: Arc):
    return (arc.src, arc.input.text, arc.output.text, arc.dst)


class Fst:
    """An immutable nondeterministic finite-state transducer.

    Construction validates everything, deduplicates arcs and stores them
    in canonical order (by source, input text, output text, destination),
    so two transducers built from the same content compare equal no
    matter how their arcs were listed.  Declared alphabet entries that
    also occur on arcs are dropped (they are implied); the effective
    alphabets ``sigma_in``/``sigma_out``/``sigma`` are precomputed.
    """

    __slots__ = ("state_count", "finals", "arcs", "declared_in", "declared_out",
                 "sigma_in", "sigma_out", "sigma", "arcs_from",
                 "eps_arcs_from", "unk_arcs_from", "sym_arcs_from")

    def __init__(self, state_count, finals=(), arcs=(), declared_in=(), declared_out=()):
        state_count = int(state_count)
        if state_count < 1:
            raise EmptyFst("a transducer needs at least one state")
        final_set = frozenset(int(q) for q in finals)
        for q in final_set:
            if not 0 <= q < state_count:
                raise InvalidStateIndex(f"final state {q} outside 0..{state_count - 1}")
        normalized = set()
        for item in arcs:
            src, dst, ins, outs = item
            arc = Arc(int(src), int(dst), Symbol(ins), Symbol(outs))
            if not 0 <= arc.src < state_count or not 0 <= arc.dst < state_count:
                raise InvalidStateIndex(
                    f"arc {arc.src}->{arc.dst} touches a state outside 0..{state_count - 1}")
            if arc.output is UNKNOWN and arc.input is not UNKNOWN:
                raise IllegalUnknownOutput(
                    f"{arc.input.text}:{UNKNOWN_TEXT} has no defined output; "
                    f"{UNKNOWN_TEXT} is only legal as the output of an "
                    f"{UNKNOWN_TEXT}:{UNKNOWN_TEXT} identity arc")
            normalized.add(arc)
        arc_tuple = tuple(sorted(normalized, key=_arc_sort_key))
        din = frozenset(Symbol(s) for s in declared_in)
        dout = frozenset(Symbol(s) for s in declared_out)
        for s in din | dout:
            if is_reserved(s):
                raise ReservedSymbolInAlphabet(
                    f"declared alphabets may not contain {s.text}")
        on_in = frozenset(a.input for a in arc_tuple if not is_reserved(a.input))
        on_out = frozenset(a.output for a in arc_tuple if not is_reserved(a.output))
        self.state_count = state_count
        self.finals = final_set
        self.arcs = arc_tuple
        self.declared_in = din - on_in
        self.declared_out = dout - on_out
        self.sigma_in = on_in | self.declared_in
        self.sigma_out = on_out | self.declared_out
        self.sigma = self.sigma_in | self.sigma_out
        buckets = [[] for _ in range(state_count)]
        for a in arc_tuple:
            buckets[a.src].append(a)
        self.arcs_from = tuple(tuple(b) for b in buckets)
        # per-state arc indexes so application can look up the few arcs a
        # token can take instead of scanning the whole state
        eps_idx, unk_idx, sym_idx = [], [], []
        for bucket in self.arcs_from:
            eps_idx.append(tuple(a for a in bucket if a.input is EPSILON))
            unk_idx.append(tuple(a for a in bucket if a.input is UNKNOWN))
            by_sym = {}
            for a in bucket:
                if not is_reserved(a.input):
                    by_sym.setdefault(a.input, []).append(a)
            sym_idx.append({s: tuple(v) for s, v in by_sym.items()})
        self.eps_arcs_from = tuple(eps_idx)
        self.unk_arcs_from = tuple(unk_idx)
        self.sym_arcs_from = tuple(sym_idx)

    def _key(self):
        return (self.state_count, self.finals, self.arcs,
                self.declared_in, self.declared_out)

    def __eq__(self, other):
        return isinstance(other, Fst) and other._key() == self._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"Fst(states={self.state_count}, arcs={len(self.arcs)}, "
                f"finals={sorted(self.finals)})")


def make_fst(state_count, finals=(), arcs=(), declared_in=(), declared_out=()) -> Fst:
    """Build a validated transducer.

    ``arcs`` may contain :class:`Arc` values or plain ``(src, dst, input,
    output)`` tuples; symbols may be given as strings.  Duplicate arcs
    collapse, and arcs are stored in canonical order.
    """
    return Fst(state_count, finals, arcs, declared_in, declared_out)


def matches(token, arc_input, sigma) -> bool:
    """Does an arc labeled ``arc_input`` accept ``token``?

    An ordinary arc input accepts exactly itself; ``<unk>`` accepts any
    token outside ``sigma``.  ``token`` must be an ordinary symbol.
    """
    token = Symbol(token)
    arc_input = Symbol(arc_input)
    if arc_input is UNKNOWN:
        return token not in sigma
    return token == arc_input


def effective_alphabets(fst: Fst):
    """``(sigma_in, sigma_out, sigma)``: declared symbols united with the
    non-reserved symbols on arcs, per side, plus the union of both sides."""
    return fst.sigma_in, fst.sigma_out, fst.sigma


@dataclass(frozen=True)
class FstStats:
    """Size counters: states, arcs, input symbols, output symbols."""

    states: int
    arcs: int
    insyms: int
    outsyms: int


def fst_stats(fst: Fst) -> FstStats:
    """Counters for one transducer, invariant under arc reordering."""
    return FstStats(fst.state_count, len(fst.arcs),
                    len(fst.sigma_in), len(fst.sigma_out))


class Cascade:
    """An ordered sequence of transducers applied first to last.

    The output tape of each stage feeds the input tape of the next.
    """

    __slots__ = ("stages",)

    def __init__(self, stages: Iterable[Fst]):
        stages = tuple(stages)
        if not stages:
            raise ValueError("a cascade needs at least one stage")
        for f in stages:
            if not isinstance(f, Fst):
                raise TypeError(f"cascade stages must be Fst, got {type(f).__name__}")
        self.stages = stages

    def __len__(self):
        return len(self.stages)

    def __iter__(self):
        return iter(self.stages)

    def __getitem__(self, i):
        return self.stages[i]

    def __eq__(self, other):
        return isinstance(other, Cascade) and other.stages == self.stages

    def __hash__(self):
        return hash(self.stages)

    def __repr__(self):
        return f"Cascade({len(self.stages)} stages)"
