"""Applying transducers and cascades, and comparing bounded relations.

Application is plain nondeterministic search over configurations.  Since
epsilon loops and ambiguity can make the search space infinite, every
entry point takes :class:`Limits`; whenever a bound actually cuts a path
or drops an output, the result is flagged truncated, and truncated
relations refuse to be compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .core import EPSILON, UNKNOWN, FstError, Symbol

PROBE_TEXT = "__probe__"
"""Conventional probe token: a legal symbol kept outside every sane
alphabet, used to exercise unknown-symbol paths during verification."""


class ReservedInputToken(FstError):
    """Input sequences may not contain ``<eps>`` or ``<unk>``."""


class TruncatedRelation(FstError):
    """Relation equality is undecidable once enumeration hit a limit."""


@dataclass(frozen=True)
class Limits:
    """Search bounds for nondeterministic application.

    ``max_outputs`` caps the distinct outputs kept per input sequence,
    ``max_epsilon_moves`` caps consecutive input-epsilon transitions on
    one path, and ``max_output_len`` caps emitted output length.
    """

    max_outputs: int = 100_000
    max_epsilon_moves: int = 64
    max_output_len: int = 512

    def __post_init__(self):
        for name in ("max_outputs", "max_epsilon_moves", "max_output_len"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


DEFAULT_LIMITS = Limits()


class ApplyResult(NamedTuple):
    outputs: frozenset
    truncated: bool


@dataclass(frozen=True)
class Relation:
    """A finite set of (input sequence, output sequence) pairs."""

    pairs: frozenset
    truncated: bool = False


class RelationComparison(NamedTuple):
    equal: bool
    witness: Optional[tuple]
    side: Optional[str]  # "left"/"right": which relation holds the witness


def _as_tokens(seq) -> tuple:
    tokens = tuple(Symbol(t) for t in seq)
    for t in tokens:
        if t is EPSILON or t is UNKNOWN:
            raise ReservedInputToken(f"input may not contain {t.text}")
    return tokens


def _seq_key(seq):
    return tuple(s.text for s in seq)


def _run_fst(fst, tokens, limits):
    """Depth-first search over (state, position, output, epsilon-run)
    configurations; returns (set of output tuples, truncated flag).

    Consumption agrees with :func:`fstred.core.matches`: the per-state
    index yields the arcs labeled with the token itself, plus the
    ``<unk>`` arcs when the token is outside the sigma.
    """
    n = len(tokens)
    sigma = fst.sigma
    finals = fst.finals
    eps_arcs = fst.eps_arcs_from
    unk_arcs = fst.unk_arcs_from
    sym_arcs = fst.sym_arcs_from
    max_eps = limits.max_epsilon_moves
    max_out_len = limits.max_output_len
    outputs = set()
    truncated = False
    start = (0, 0, (), 0)
    stack = [start]
    seen = {start}
    while stack:
        state, pos, out, eps_run = stack.pop()
        if pos == n and state in finals and out not in outputs:
            if len(outputs) >= limits.max_outputs:
                truncated = True
                break
            outputs.add(out)
        if pos < n:
            tok = tokens[pos]
            consuming = sym_arcs[state].get(tok, ())
            if tok not in sigma and unk_arcs[state]:
                consuming += unk_arcs[state]
            for arc in consuming:
                if arc.output is EPSILON:
                    nout = out
                elif arc.output is UNKNOWN:
                    nout = out + (tok,)
                else:
                    nout = out + (arc.output,)
                if len(nout) > max_out_len:
                    truncated = True
                    continue
                cfg = (arc.dst, pos + 1, nout, 0)
                if cfg not in seen:
                    seen.add(cfg)
                    stack.append(cfg)
        for arc in eps_arcs[state]:
            if eps_run >= max_eps:
                truncated = True
                break
            nout = out if arc.output is EPSILON else out + (arc.output,)
            if len(nout) > max_out_len:
                truncated = True
                continue
            cfg = (arc.dst, pos, nout, eps_run + 1)
            if cfg not in seen:
                seen.add(cfg)
                stack.append(cfg)
    return outputs, truncated


def apply_fst(fst, input, limits=DEFAULT_LIMITS) -> ApplyResult:
    """Every output sequence the transducer can produce for ``input``.

    An arc consumes one token when its input symbol matches it (``<unk>``
    matches tokens outside the sigma); an ``<eps>`` input consumes
    nothing.  ``<eps>`` output emits nothing, an identity ``<unk>:<unk>``
    arc emits the consumed token itself.  A path accepts iff it ends in a
    final state with the input fully consumed.
    """
    tokens = _as_tokens(input)
    outputs, truncated = _run_fst(fst, tokens, limits)
    return ApplyResult(frozenset(outputs), truncated)


def apply_cascade(cascade, input, limits=DEFAULT_LIMITS) -> ApplyResult:
    """Feed ``input`` through every stage in order, unioning the outputs
    of each stage over all intermediate sequences of the previous one."""
    tokens = _as_tokens(input)
    current = {tokens}
    truncated = False
    for fst in cascade:
        nxt = set()
        for seq in sorted(current, key=_seq_key):
            outs, cut = _run_fst(fst, seq, limits)
            truncated |= cut
            nxt |= outs
        if len(nxt) > limits.max_outputs:
            truncated = True
            nxt = set(sorted(nxt, key=_seq_key)[:limits.max_outputs])
        current = nxt
    return ApplyResult(frozenset(current), truncated)


def _stage_relation(fst, vocab, max_len, limits):
    """Bounded relation of one transducer over inputs drawn from ``vocab``.

    Walks the arc graph once, sharing input prefixes across the (up to
    exponentially many) candidate input sequences instead of applying the
    transducer to each separately.  Returns ``(dict input -> set of
    outputs, truncated)``; inputs that accept nothing are absent.
    """
    sigma = fst.sigma
    finals = fst.finals
    eps_arcs = fst.eps_arcs_from
    unk_arcs = fst.unk_arcs_from
    vocab_set = frozenset(vocab)
    unknown_tokens = tuple(v for v in sorted(vocab) if v not in sigma)
    # the vocabulary is fixed for the whole walk, so the consuming arcs
    # usable at each state can be filtered once up front
    consuming = []
    for by_sym in fst.sym_arcs_from:
        usable = []
        for sym, arcs in by_sym.items():
            if sym in vocab_set:
                usable.extend(arcs)
        consuming.append(tuple(usable))
    max_eps = limits.max_epsilon_moves
    max_out_len = limits.max_output_len
    results = {}
    truncated = False
    start = (0, (), (), 0)
    stack = [start]
    seen = {start}
    while stack:
        state, inp, out, eps_run = stack.pop()
        if state in finals:
            bucket = results.get(inp)
            if bucket is None:
                bucket = results[inp] = set()
            if out not in bucket:
                if len(bucket) >= limits.max_outputs:
                    truncated = True
                else:
                    bucket.add(out)
        if len(inp) < max_len:
            for arc in consuming[state]:
                ninp = inp + (arc.input,)
                nout = out if arc.output is EPSILON else out + (arc.output,)
                if len(nout) > max_out_len:
                    truncated = True
                    continue
                cfg = (arc.dst, ninp, nout, 0)
                if cfg not in seen:
                    seen.add(cfg)
                    stack.append(cfg)
            if unknown_tokens:
                for arc in unk_arcs[state]:
                    for tok in unknown_tokens:
                        ninp = inp + (tok,)
                        if arc.output is EPSILON:
                            nout = out
                        elif arc.output is UNKNOWN:
                            nout = out + (tok,)
                        else:
                            nout = out + (arc.output,)
                        if len(nout) > max_out_len:
                            truncated = True
                            continue
                        cfg = (arc.dst, ninp, nout, 0)
                        if cfg not in seen:
                            seen.add(cfg)
                            stack.append(cfg)
        for arc in eps_arcs[state]:
            if eps_run >= max_eps:
                truncated = True
                break
            nout = out if arc.output is EPSILON else out + (arc.output,)
            if len(nout) > max_out_len:
                truncated = True
                continue
            cfg = (arc.dst, inp, nout, eps_run + 1)
            if cfg not in seen:
                seen.add(cfg)
                stack.append(cfg)
    return results, truncated


def enumerate_relation(cascade, max_input_len, input_vocab, limits=DEFAULT_LIMITS) -> Relation:
    """All (input, output) pairs of the cascade for every input sequence
    over ``input_vocab`` of length 0..``max_input_len``.

    To exercise unknown-symbol paths, the vocabulary should include one
    probe token outside every stage's sigma (see :data:`PROBE_TEXT`).
    """
    if max_input_len < 0:
        raise ValueError("max_input_len must be >= 0")
    vocab = sorted({Symbol(v) for v in input_vocab})
    for v in vocab:
        if v is EPSILON or v is UNKNOWN:
            raise ReservedInputToken(f"input vocabulary may not contain {v.text}")
    stages = list(cascade)
    if not stages:
        raise ValueError("cannot enumerate an empty cascade")
    mapping, truncated = _stage_relation(stages[0], vocab, max_input_len, limits)
    for fst in stages[1:]:
        memo = {}
        next_mapping = {}
        for inp, mids in mapping.items():
            acc = set()
            for mid in mids:
                hit = memo.get(mid)
                if hit is None:
                    hit = memo[mid] = _run_fst(fst, mid, limits)
                outs, cut = hit
                truncated |= cut
                acc |= outs
            if len(acc) > limits.max_outputs:
                truncated = True
                acc = set(sorted(acc, key=_seq_key)[:limits.max_outputs])
            if acc:
                next_mapping[inp] = acc
        mapping = next_mapping
    pairs = frozenset((inp, out) for inp, outs in mapping.items() for out in outs)
    return Relation(pairs, truncated)


def relations_equal(r1: Relation, r2: Relation) -> RelationComparison:
    """Set equality, with one deterministic witness pair on inequality.

    Raises :class:`TruncatedRelation` if either side hit a limit: the
    missing pairs could hide behind the cut, so no verdict is possible.
    """
    if r1.truncated or r2.truncated:
        raise TruncatedRelation(
            "relation enumeration was truncated; raise the limits to decide equality")
    if r1.pairs == r2.pairs:
        return RelationComparison(True, None, None)

    def key(pair):
        return (_seq_key(pair[0]), _seq_key(pair[1]))

    only_left = r1.pairs - r2.pairs
    only_right = r2.pairs - r1.pairs
    wl = min(only_left, key=key) if only_left else None
    wr = min(only_right, key=key) if only_right else None
    if wl is not None and (wr is None or key(wl) <= key(wr)):
        return RelationComparison(False, wl, "left")
    return RelationComparison(False, wr, "right")
