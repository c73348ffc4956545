"""Text formats: ``.fst`` transducers, ``.lst`` manifests, ``.tsv`` reports.

A ``.fst`` file is line oriented, fields separated by runs of spaces or
tabs:

    SRC DST IN OUT      one arc (SRC/DST are decimal state indices)
    STATE               one final state
    !isym SYMBOL        declare an input symbol beyond those on arcs
    !osym SYMBOL        likewise for the output side
    # ...               comment; blank lines are skipped

The state count is one plus the highest state index mentioned (at least
one).  ``serialize_fst`` writes declarations, then arcs in canonical
order, then final states ascending, so output is canonical and
serialize/parse round-trips are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Fst, FstError, make_fst


class ParseError(FstError):
    """Malformed ``.fst`` or ``.lst`` input."""


def _parse_state(token: str, lineno: int) -> int:
    if not token.isdigit():
        raise ParseError(
            f"line {lineno}: state index must be a non-negative decimal, got {token!r}")
    return int(token)


def parse_fst(text: str) -> Fst:
    """Parse the line format above into a validated transducer."""
    arcs = []
    finals = []
    declared_in = []
    declared_out = []
    top = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] in ("!isym", "!osym"):
            if len(fields) != 2:
                raise ParseError(f"line {lineno}: {fields[0]} takes exactly one symbol")
            (declared_in if fields[0] == "!isym" else declared_out).append(fields[1])
        elif len(fields) == 1:
            q = _parse_state(fields[0], lineno)
            finals.append(q)
            top = max(top, q)
        elif len(fields) == 4:
            src = _parse_state(fields[0], lineno)
            dst = _parse_state(fields[1], lineno)
            arcs.append((src, dst, fields[2], fields[3]))
            top = max(top, src, dst)
        else:
            raise ParseError(
                f"line {lineno}: expected an arc (4 fields), a final state (1 field) "
                f"or a !isym/!osym declaration, got {len(fields)} fields")
    return make_fst(top + 1, finals, arcs, declared_in, declared_out)


def serialize_fst(fst: Fst) -> str:
    """Canonical text form; parses back to a structurally equal transducer
    (isolated trailing states excepted, since nothing mentions them)."""
    lines = []
    for s in sorted(fst.declared_in):
        lines.append(f"!isym {s.text}")
    for s in sorted(fst.declared_out):
        lines.append(f"!osym {s.text}")
    for a in fst.arcs:
        lines.append(f"{a.src} {a.dst} {a.input.text} {a.output.text}")
    for q in sorted(fst.finals):
        lines.append(str(q))
    return "".join(line + "\n" for line in lines)


@dataclass(frozen=True)
class Manifest:
    """Ordered transducer file paths; the first line is applied first."""

    paths: tuple[str, ...]


def parse_manifest(text: str) -> Manifest:
    """One path per non-comment, non-blank line."""
    paths = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        paths.append(line)
    if not paths:
        raise ParseError("manifest lists no transducer files")
    return Manifest(tuple(paths))


def serialize_manifest(manifest: Manifest) -> str:
    return "".join(p + "\n" for p in manifest.paths)


_REPORT_COLUMNS = ("fst",
                   "states_before", "arcs_before", "insyms_before", "outsyms_before",
                   "states_after", "arcs_after", "insyms_after", "outsyms_after")


def write_report(reports: Sequence) -> str:
    """Render reduction reports as TSV.

    One row per transducer (1-based), then a ``total`` row summing the
    state and arc columns; symbol columns are dashed there because sums
    across different alphabets mean nothing.
    """
    lines = ["\t".join(_REPORT_COLUMNS)]
    total = [0, 0, 0, 0]  # states_before, arcs_before, states_after, arcs_after
    for idx, r in enumerate(reports, 1):
        b, a = r.before, r.after
        lines.append("\t".join(map(str, (idx, b.states, b.arcs, b.insyms, b.outsyms,
                                         a.states, a.arcs, a.insyms, a.outsyms))))
        total[0] += b.states
        total[1] += b.arcs
        total[2] += a.states
        total[3] += a.arcs
    lines.append("\t".join(map(str, ("total", total[0], total[1], "-", "-",
                                     total[2], total[3], "-", "-"))))
    return "".join(line + "\n" for line in lines)
