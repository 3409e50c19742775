"""Inclusive 1-based line spans shared by the conflict and syntax layers."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class LineSpan:
    """A range of lines, 1-based and inclusive on both ends.

    A span with ``end < start`` is empty; empty spans mark zero-length
    splice points (e.g. a conflict side that deleted every line) and
    intersect nothing.
    """

    start: int
    end: int

    @classmethod
    def empty_at(cls, line: int) -> "LineSpan":
        return cls(line, line - 1)

    def is_empty(self) -> bool:
        return self.end < self.start

    def __len__(self) -> int:
        return max(0, self.end - self.start + 1)

    def contains(self, line: int) -> bool:
        return self.start <= line <= self.end

    def overlaps(self, other: "LineSpan") -> bool:
        if self.is_empty() or other.is_empty():
            return False
        return self.start <= other.end and other.start <= self.end

    def shifted(self, delta: int) -> "LineSpan":
        return LineSpan(self.start + delta, self.end + delta)
