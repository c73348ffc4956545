"""Seeded random cascades with planted mergeable symbols, for testing.

Generation is a pure function of the seed, built on splitmix64 so the
same seed yields byte-identical cascades on every platform.  Each tape
gets its own alphabet; on the intermediate tapes some symbols are
planted as behavioral clones of earlier ones (they carry exactly the
donor's arcs in the downstream stage), which guarantees non-trivial
equivalence classes whenever redundancy is positive.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Cascade, EPSILON, Symbol, UNKNOWN, make_fst

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64: tiny, fully specified, identical everywhere.

    state' = state + 0x9E3779B97F4A7C15 (mod 2^64); output is the new
    state scrambled by two xor-shift-multiply rounds.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next_u64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends inclusive."""
        return lo + self.below(hi - lo + 1)

    def chance(self, p: float) -> bool:
        return self.next_u64() < int(p * 2.0 ** 64)

    def choice(self, seq):
        return seq[self.below(len(seq))]


@dataclass(frozen=True)
class GenParams:
    """Knobs for :func:`random_cascade`; ranges are inclusive pairs.

    ``redundancy`` is the probability that an intermediate-tape symbol is
    planted as a behavioral clone of an earlier one.
    """

    seed: int
    stages: int = 3
    states_per_stage: tuple = (2, 8)
    alphabet_size: tuple = (2, 6)
    arcs_per_state: tuple = (1, 3)
    redundancy: float = 0.5
    final_prob: float = 0.3
    epsilon_prob: float = 0.1
    unknown_prob: float = 0.1

    def __post_init__(self):
        if self.stages < 2:
            raise ValueError("a cascade worth reducing needs at least 2 stages")
        for name, floor in (("states_per_stage", 1), ("alphabet_size", 1),
                            ("arcs_per_state", 0)):
            lo, hi = getattr(self, name)
            if lo < floor or lo > hi:
                raise ValueError(f"{name} range ({lo}, {hi}) is empty or too small")
        if not 0.0 <= self.redundancy <= 1.0:
            raise ValueError("redundancy must be in [0, 1]")
        if not 0.0 < self.final_prob <= 1.0:
            raise ValueError("final_prob must be in (0, 1]")
        for name in ("epsilon_prob", "unknown_prob"):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise ValueError(f"{name} must be in [0, 1)")


def _tape_symbols(k: int, size: int) -> tuple:
    prefix = "abcdefghijklmnopqrstuvwxyz"[k] if k < 26 else f"t{k}x"
    return tuple(Symbol(f"{prefix}{i}") for i in range(size))


def _random_stage(rng, params, in_tape, out_tape, clones):
    states = rng.randint(*params.states_per_stage)
    finals = {q for q in range(states) if rng.chance(params.final_prob)}
    if not finals:
        finals = {rng.below(states)}
    bases = [s for s in in_tape if s not in clones]
    arcs = []
    for src in range(states):
        for _ in range(rng.randint(*params.arcs_per_state)):
            if src + 1 < states and rng.chance(params.epsilon_prob):
                # epsilon-input arcs always advance the state index, so a
                # generated stage never contains a pure-epsilon cycle
                dst = rng.randint(src + 1, states - 1)
                arcs.append((src, dst, EPSILON, rng.choice(out_tape)))
                continue
            dst = rng.below(states)
            if rng.chance(params.unknown_prob):
                out = UNKNOWN if rng.chance(0.5) else rng.choice(out_tape)
                arcs.append((src, dst, UNKNOWN, out))
            else:
                out = EPSILON if rng.chance(params.epsilon_prob) else rng.choice(out_tape)
                arcs.append((src, dst, rng.choice(bases), out))
    # thread arc: maps the first symbol of this tape to the first symbol
    # of the next one, initial state to a final state, so the stages of a
    # cascade always compose on at least one input
    arcs.append((0, min(finals), in_tape[0], out_tape[0]))
    twins = []
    for clone, donor in clones.items():
        twins.extend((src, dst, clone, out)
                     for (src, dst, inp, out) in arcs if inp == donor)
    arcs.extend(twins)
    return make_fst(states, finals, arcs, in_tape, out_tape)


def random_cascade(params: GenParams) -> Cascade:
    """A connectable random cascade, deterministic in ``params.seed``.

    Every stage's output symbols are drawn from the next stage's input
    tape, every stage has at least one final state, and each clone
    planted on an intermediate tape duplicates its donor's full arc set
    in the downstream stage (so it is mergeable by construction).
    """
    rng = SplitMix64(params.seed)
    n = params.stages
    tapes = [_tape_symbols(k, rng.randint(*params.alphabet_size)) for k in range(n + 1)]
    clone_of = [dict() for _ in range(n + 1)]
    for k in range(1, n):
        donors = [tapes[k][0]]
        for sym in tapes[k][1:]:
            if rng.chance(params.redundancy):
                clone_of[k][sym] = rng.choice(donors)
            else:
                donors.append(sym)
    return Cascade(_random_stage(rng, params, tapes[k], tapes[k + 1], clone_of[k])
                   for k in range(n))
