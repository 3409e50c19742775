"""Grade conflicts by resolving complexity from their operation traces.

Whitelist rules over the per-block operation sets of the two sides:

  * Text       - either side touched a comment (CMT).
  * Functional - either side touched function-body content (FBD).
  * Syntax     - restricting each side to declaration-shaped operations
    {CTD, FPD, LSO, VD}, the two restricted sets differ (symmetric
    difference is non-empty): one side changes declarations the other
    does not, so a one-sided pick can lose or duplicate them.

Every non-empty combination of the three flags is one of the seven
grade categories; a block whose trace triggers no rule falls into the
distinct unclassified bucket and is reported separately, never among
the seven.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coloring import CodeOp, OperationTrace

SYNTAX_OPS = frozenset({CodeOp.CTD, CodeOp.FPD, CodeOp.LSO, CodeOp.VD})

CATEGORY_NAMES = ("T", "S", "F", "T+S", "T+F", "S+F", "T+S+F")
UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class GradeLabel:
    """A subset of {Text, Syntax, Functional}; all-false means unclassified."""

    text: bool
    syntax: bool
    functional: bool

    @property
    def is_unclassified(self) -> bool:
        return not (self.text or self.syntax or self.functional)

    @property
    def name(self) -> str:
        if self.is_unclassified:
            return UNCLASSIFIED
        parts = []
        if self.text:
            parts.append("T")
        if self.syntax:
            parts.append("S")
        if self.functional:
            parts.append("F")
        return "+".join(parts)

    @classmethod
    def from_name(cls, name: str) -> "GradeLabel":
        if name == UNCLASSIFIED:
            return cls(False, False, False)
        parts = set(name.split("+"))
        unknown = parts - {"T", "S", "F"}
        if unknown or not parts:
            raise ValueError(f"not a grade name: {name!r}")
        return cls("T" in parts, "S" in parts, "F" in parts)


def classify_conflict(
    p_ai: frozenset[CodeOp] | set[CodeOp], p_bi: frozenset[CodeOp] | set[CodeOp]
) -> GradeLabel:
    """Apply the three whitelist rules to one block's operation pair."""
    union = set(p_ai) | set(p_bi)
    s_a = set(p_ai) & SYNTAX_OPS
    s_b = set(p_bi) & SYNTAX_OPS
    return GradeLabel(
        text=CodeOp.CMT in union,
        syntax=bool(s_a ^ s_b),
        functional=CodeOp.FBD in union,
    )


def label_scenario(trace: OperationTrace) -> list[GradeLabel]:
    """One grade per conflict block, in block order."""
    return [classify_conflict(a, b) for a, b in zip(trace.p_a, trace.p_b)]
