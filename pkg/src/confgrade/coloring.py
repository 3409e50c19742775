"""Abstract conflict-touching syntax nodes into prioritized code operations.

Each node maps to operation kinds two ways: its own kind through a
per-language table, plus FBD for any node nested inside a function body
(every modification of body content counts as a function-body edit).
Kinds carry ascending priorities; on a single node the highest-priority
kind overrides the rest, so a local declaration inside a body resolves
to VD, not FBD. Only operations whose node intersects a conflict range
are kept, indexed by the block the range belongs to.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .conflicts import VirtualMerge
from .syntax import Node, parse_to_syntax_tree


class CodeOp(enum.IntEnum):
    """The six abstract code operations, in ascending priority order."""

    CTD = 1  # composite type definition
    FBD = 2  # function body definition
    FPD = 3  # function prototype definition
    LSO = 4  # language-specific operation (macros, imports, ...)
    CMT = 5  # commenting
    VD = 6   # variable declaration


MappingTable = dict[str, dict[str, CodeOp]]


@dataclass(frozen=True)
class OperationTrace:
    """Per-block prioritized operation sets for the two virtual merges."""

    p_a: tuple[frozenset[CodeOp], ...]
    p_b: tuple[frozenset[CodeOp], ...]

    def __len__(self) -> int:
        return len(self.p_a)


class MappingError(ValueError):
    """A mapping table names an unknown operation or is malformed."""


def load_mapping(path: str | Path | None = None) -> MappingTable:
    """Load a node-kind-to-operation table; default ships with the package."""
    if path is None:
        raw = resources.files("confgrade.data").joinpath("default_mapping.json").read_text()
    else:
        raw = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MappingError(f"mapping table is not valid JSON: {exc}") from exc
    table: MappingTable = {}
    for language, kinds in data.items():
        if not isinstance(kinds, dict):
            raise MappingError(f"mapping for {language!r} must be an object")
        table[language] = {}
        for kind, op_name in kinds.items():
            try:
                table[language][kind] = CodeOp[op_name]
            except KeyError:
                raise MappingError(
                    f"unknown operation {op_name!r} for {language}.{kind}"
                ) from None
    return table


_DEFAULT_MAPPING: MappingTable | None = None


def default_mapping() -> MappingTable:
    global _DEFAULT_MAPPING
    if _DEFAULT_MAPPING is None:
        _DEFAULT_MAPPING = load_mapping()
    return _DEFAULT_MAPPING


def map_node_to_operations(
    node: Node,
    language: str,
    mapping: MappingTable | None = None,
    inside_function_body: bool = False,
) -> set[CodeOp]:
    """Operation kinds a node contributes, before prioritization.

    Unmapped node kinds yield the empty set; body nesting adds FBD.
    """
    table = (mapping or default_mapping()).get(language, {})
    kinds: set[CodeOp] = set()
    own = table.get(node.kind)
    if own is not None:
        kinds.add(own)
    if inside_function_body:
        kinds.add(CodeOp.FBD)
    return kinds


def prioritize(kinds: set[CodeOp]) -> set[CodeOp]:
    """Collapse a kind set to its highest-priority member."""
    if not kinds:
        raise ValueError("cannot prioritize an empty operation set")
    return {max(kinds)}


def color_side(
    vm: VirtualMerge, language: str, mapping: MappingTable | None = None
) -> list[frozenset[CodeOp]]:
    """Prioritized, deduplicated operation kinds per conflict block for one side."""
    tree = parse_to_syntax_tree(vm.text, language)
    per_block: list[set[CodeOp]] = [set() for _ in vm.conflict_ranges]
    for node, inside in tree.walk_with_body_flag():
        kinds = map_node_to_operations(node, language, mapping, inside)
        if not kinds:
            continue
        winner = prioritize(kinds)
        for idx, conflict_range in enumerate(vm.conflict_ranges):
            if node.span.overlaps(conflict_range):
                per_block[idx].update(winner)
    return [frozenset(ops) for ops in per_block]


def color_conflicts(
    vm_a: VirtualMerge,
    vm_b: VirtualMerge,
    language: str,
    mapping: MappingTable | None = None,
) -> OperationTrace:
    """Color both virtual merges of one scenario into an OperationTrace."""
    if len(vm_a.conflict_ranges) != len(vm_b.conflict_ranges):
        raise ValueError(
            "virtual merges disagree on block count: "
            f"{len(vm_a.conflict_ranges)} vs {len(vm_b.conflict_ranges)}"
        )
    return OperationTrace(
        p_a=tuple(color_side(vm_a, language, mapping)),
        p_b=tuple(color_side(vm_b, language, mapping)),
    )
