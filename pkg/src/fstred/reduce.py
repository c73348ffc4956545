"""Merging interchangeable intermediate symbols between adjacent transducers.

Two input symbols of a downstream transducer are interchangeable when
every state offers them exactly the same (output symbol, destination)
choices.  All members of such a class can be replaced by a single
representative, on the output side of the upstream transducer and the
input side of the downstream one; duplicate arcs then collapse and both
the arc count and the intermediate alphabet shrink, while the pair as a
whole keeps computing the same relation.

In a longer cascade the intermediate alphabets are reduced back to
front: collapsing downstream symbols can make upstream output symbols
agree and unlock merges that a front-to-back sweep would miss, so the
reverse order is always at least as good.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace

from .core import (Arc, Cascade, Fst, FstError, FstStats, Symbol, UNKNOWN,
                   fst_stats, is_reserved, make_fst, InvalidStateIndex)


class ReservedCandidate(FstError):
    """``<eps>`` and ``<unk>`` can never take part in merging."""


@dataclass(frozen=True)
class Partition:
    """Disjoint equivalence classes over candidate symbols.

    Classes are ordered by representative text; each representative is
    the byte-smallest member of its class, which makes reduction output
    deterministic across runs and platforms.
    """

    classes: tuple
    representatives: tuple

    def rep_map(self) -> dict:
        """Every member mapped to its class representative (including the
        representatives themselves)."""
        out = {}
        for cls, rep in zip(self.classes, self.representatives):
            for sym in cls:
                out[sym] = rep
        return out

    @property
    def classes_merged(self) -> int:
        """Number of non-singleton classes."""
        return sum(1 for c in self.classes if len(c) > 1)

    @property
    def symbols_eliminated(self) -> int:
        """Number of symbols replaced by some other representative."""
        return sum(len(c) - 1 for c in self.classes)


@dataclass(frozen=True)
class ReductionReport:
    """Before/after counters for one transducer.

    ``stage_index`` is the 0-based position of the transducer within its
    cascade; for a bare pair the downstream transducer is stage 1.
    Reduction never touches states, so ``after.states == before.states``.
    """

    stage_index: int
    before: FstStats
    after: FstStats
    classes_merged: int = 0
    symbols_eliminated: int = 0


def signature(fst: Fst, state: int, symbol) -> frozenset:
    """The set of (output symbol, destination) pairs offered for
    ``symbol`` at ``state``."""
    if not 0 <= state < fst.state_count:
        raise InvalidStateIndex(f"state {state} outside 0..{fst.state_count - 1}")
    symbol = Symbol(symbol)
    return frozenset((a.output, a.dst) for a in fst.arcs_from[state] if a.input == symbol)


def compute_partition(t2: Fst, candidates) -> Partition:
    """Coarsest partition of ``candidates`` under signature equality at
    every state of ``t2``.

    Starts from a single class holding all candidates and refines it
    state by state, splitting each class by the members' signatures
    there; stops early once every class is a singleton.  The result is
    independent of the scan order: it is exactly the grouping of
    candidates by their full per-state signature profile.
    """
    cands = frozenset(Symbol(c) for c in candidates)
    for c in cands:
        if is_reserved(c):
            raise ReservedCandidate(f"{c.text} can never be merged")
    if not cands:
        return Partition((), ())
    classes = [set(cands)]
    for state in range(t2.state_count):
        if all(len(c) == 1 for c in classes):
            break
        sig_here = defaultdict(set)
        for arc in t2.arcs_from[state]:
            if arc.input in cands:
                sig_here[arc.input].add((arc.output, arc.dst))
        if not sig_here:
            continue
        refined = []
        for cls in classes:
            if len(cls) == 1:
                refined.append(cls)
                continue
            groups = defaultdict(set)
            for sym in cls:
                groups[frozenset(sig_here.get(sym, ()))].add(sym)
            refined.extend(groups.values())
        classes = refined
    ordered = sorted((frozenset(c) for c in classes), key=lambda c: min(c).text)
    return Partition(tuple(ordered), tuple(min(c) for c in ordered))


def eligible_candidates(t1: Fst, t2: Fst) -> frozenset:
    """Input symbols of ``t2`` that may safely take part in merging.

    All of ``t2``'s effective input alphabet qualifies, with one
    restriction: when ``t1`` can pass tokens through unseen (it has an
    identity ``<unk>:<unk>`` arc), only symbols ``t1`` itself knows stay
    eligible, because anything else must keep its identity on the
    intermediate tape.
    """
    cands = t2.sigma_in
    if any(a.input is UNKNOWN and a.output is UNKNOWN for a in t1.arcs):
        cands &= t1.sigma
    return frozenset(cands)


def _coerce_rep(rep) -> dict:
    out = {}
    for k, v in rep.items():
        k, v = Symbol(k), Symbol(v)
        if is_reserved(k) or is_reserved(v):
            raise ReservedCandidate("reserved symbols can never be relabeled")
        out[k] = v
    return out


def relabel_output_side(t1: Fst, rep) -> Fst:
    """Rewrite every arc output and declared output symbol through ``rep``
    (identity outside its domain; identity-unknown arcs untouched).
    States and finals are preserved; duplicate arcs collapse."""
    rep = _coerce_rep(rep)
    arcs = [Arc(a.src, a.dst, a.input, rep.get(a.output, a.output)) for a in t1.arcs]
    declared_out = {rep.get(s, s) for s in t1.declared_out}
    return make_fst(t1.state_count, t1.finals, arcs, t1.declared_in, declared_out)


def relabel_input_side(t2: Fst, rep) -> Fst:
    """Rewrite every arc input and declared input symbol through ``rep``;
    merged-away symbols disappear from the input alphabet.  States and
    finals are preserved; duplicate arcs collapse."""
    rep = _coerce_rep(rep)
    arcs = [Arc(a.src, a.dst, rep.get(a.input, a.input), a.output) for a in t2.arcs]
    declared_in = {rep.get(s, s) for s in t2.declared_in}
    return make_fst(t2.state_count, t2.finals, arcs, declared_in, t2.declared_out)


def reduce_pair(t1: Fst, t2: Fst):
    """Reduce the intermediate alphabet between two adjacent transducers.

    Returns ``(t1', t2', partition, report)``; the report carries the
    downstream transducer's before/after counters.
    """
    partition = compute_partition(t2, eligible_candidates(t1, t2))
    rep = partition.rep_map()
    t1r = relabel_output_side(t1, rep)
    t2r = relabel_input_side(t2, rep)
    report = ReductionReport(
        stage_index=1,
        before=fst_stats(t2),
        after=fst_stats(t2r),
        classes_merged=partition.classes_merged,
        symbols_eliminated=partition.symbols_eliminated,
    )
    return t1r, t2r, partition, report


def reduce_cascade(cascade: Cascade):
    """Reduce every intermediate alphabet of a cascade, last pair first.

    Each adjacent pair is reduced exactly once, from the end of the
    cascade towards the front; a second sweep is always a no-op.
    Returns ``(reduced cascade, reports in processing order)``.
    """
    stages = list(cascade)
    if len(stages) < 2:
        raise ValueError("cascade reduction needs at least two stages")
    reports = []
    for i in range(len(stages) - 2, -1, -1):
        t1r, t2r, _partition, report = reduce_pair(stages[i], stages[i + 1])
        stages[i], stages[i + 1] = t1r, t2r
        reports.append(replace(report, stage_index=i + 1))
    return Cascade(stages), reports
