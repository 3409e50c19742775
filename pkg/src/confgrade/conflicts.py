"""Conflict-marker parsing and one-sided virtual merges.

A conflicted file is fragmentary: the marker blocks interleave two
variants, so no grammar can parse it. Resolving every block toward one
side yields a whole file again; recording where each replacement landed
lets later analysis know which syntax nodes a conflict touches.
"""

from __future__ import annotations

from dataclasses import dataclass

from .merge3 import A_MARKER, B_MARKER, BASE_MARKER, SEP_MARKER
from .spans import LineSpan


class MalformedConflictError(ValueError):
    """Conflict markers are unbalanced or nested."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class ConflictBlock:
    """One marker block: the two variants plus optional base lines."""

    index: int
    a_text: tuple[str, ...]
    b_text: tuple[str, ...]
    base_text: tuple[str, ...] | None
    m_span: LineSpan  # span in the conflicted file, marker lines included


@dataclass(frozen=True)
class VirtualMerge:
    """A conflicted file resolved wholly toward one side.

    ``conflict_ranges`` has one span per source block, in block order;
    a side that contributed no lines gets an empty span at the splice
    point so block indices stay aligned across both sides.
    """

    side: str  # "a" or "b"
    lines: tuple[str, ...]
    conflict_ranges: tuple[LineSpan, ...]

    @property
    def text(self) -> str:
        if not self.lines:
            return ""
        return "\n".join(self.lines) + "\n"


def _is_a_marker(line: str) -> bool:
    return line == A_MARKER or line.startswith(A_MARKER + " ")


def _is_b_marker(line: str) -> bool:
    return line == B_MARKER or line.startswith(B_MARKER + " ")


def _is_base_marker(line: str) -> bool:
    return line == BASE_MARKER or line.startswith(BASE_MARKER + " ")


def _is_separator(line: str) -> bool:
    return line == SEP_MARKER


def parse_conflict_blocks(version_m: str) -> list[ConflictBlock]:
    """Parse all marker blocks of a conflicted file, in order.

    A bare ``=======`` line outside any open block is treated as text
    (it is a common section underline), but side markers are strict:
    nesting or a missing counterpart raises :class:`MalformedConflictError`
    naming the offending line.
    """
    lines = version_m.splitlines()
    blocks: list[ConflictBlock] = []
    state = "text"  # text | a | base | b
    start_line = 0
    a_lines: list[str] = []
    base_lines: list[str] = []
    b_lines: list[str] = []
    saw_base = False

    for no, line in enumerate(lines, start=1):
        line = line.rstrip("\r")
        if state == "text":
            if _is_a_marker(line):
                state = "a"
                start_line = no
                a_lines, base_lines, b_lines = [], [], []
                saw_base = False
            elif _is_b_marker(line):
                raise MalformedConflictError("end marker without start marker", no)
            elif _is_base_marker(line):
                raise MalformedConflictError("base marker without start marker", no)
            continue
        if _is_a_marker(line):
            raise MalformedConflictError("nested start marker", no)
        if state in ("a", "base") and _is_separator(line):
            state = "b"
        elif state == "a" and _is_base_marker(line):
            state = "base"
            saw_base = True
        elif _is_b_marker(line):
            if state != "b":
                raise MalformedConflictError("end marker before separator", no)
            blocks.append(
                ConflictBlock(
                    index=len(blocks),
                    a_text=tuple(a_lines),
                    b_text=tuple(b_lines),
                    base_text=tuple(base_lines) if saw_base else None,
                    m_span=LineSpan(start_line, no),
                )
            )
            state = "text"
        elif state == "a":
            a_lines.append(line)
        elif state == "base":
            base_lines.append(line)
        else:
            b_lines.append(line)

    if state != "text":
        raise MalformedConflictError("unterminated conflict block", start_line)
    return blocks


def build_side_merged(version_m: str, side: str) -> VirtualMerge:
    """Resolve every conflict block toward ``side`` ("a" or "b").

    Marker lines and the other side's text (and any diff3 base section)
    are dropped; non-conflict lines carry over verbatim and in order.
    """
    if side not in ("a", "b"):
        raise ValueError(f"side must be 'a' or 'b', got {side!r}")
    blocks = parse_conflict_blocks(version_m)
    m_lines = version_m.splitlines()

    out: list[str] = []
    ranges: list[LineSpan] = []
    cursor = 0  # 0-based index into m_lines
    for block in blocks:
        out.extend(m_lines[cursor : block.m_span.start - 1])
        chosen = block.a_text if side == "a" else block.b_text
        if chosen:
            start = len(out) + 1
            out.extend(chosen)
            ranges.append(LineSpan(start, len(out)))
        else:
            ranges.append(LineSpan.empty_at(len(out) + 1))
        cursor = block.m_span.end
    out.extend(m_lines[cursor:])

    return VirtualMerge(side=side, lines=tuple(out), conflict_ranges=tuple(ranges))
