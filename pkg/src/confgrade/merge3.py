"""Three-way text merge producing git-style two-side conflict markers.

The merge walks sync regions (lines where the base matches both derived
versions) and resolves each intervening region: changes on one side apply
cleanly, identical changes collapse, and diverging changes become a
conflict block delimited by ``<<<<<<<`` / ``=======`` / ``>>>>>>>``.
"""

from __future__ import annotations

from difflib import SequenceMatcher
from typing import Iterator, Sequence

A_MARKER = "<<<<<<<"
SEP_MARKER = "======="
BASE_MARKER = "|||||||"
B_MARKER = ">>>>>>>"


def _matching_blocks(base: Sequence[str], other: Sequence[str]) -> list[tuple[int, int, int]]:
    # autojunk off: the popularity heuristic degrades merges of large files
    sm = SequenceMatcher(None, base, other, autojunk=False)
    return [(m.a, m.b, m.size) for m in sm.get_matching_blocks()]


def find_sync_regions(
    base: Sequence[str], a: Sequence[str], b: Sequence[str]
) -> list[tuple[int, int, int, int, int, int]]:
    """Regions where all three versions agree.

    Returns tuples ``(obeg, oend, abeg, aend, bbeg, bend)`` of half-open
    index ranges, ending with a zero-length sentinel at the ends of the
    three sequences.
    """
    amatches = _matching_blocks(base, a)
    bmatches = _matching_blocks(base, b)
    regions: list[tuple[int, int, int, int, int, int]] = []
    ai = bi = 0
    while ai < len(amatches) and bi < len(bmatches):
        abase, amatch, alen = amatches[ai]
        bbase, bmatch, blen = bmatches[bi]
        start = max(abase, bbase)
        end = min(abase + alen, bbase + blen)
        if start < end:
            regions.append(
                (
                    start,
                    end,
                    amatch + (start - abase),
                    amatch + (end - abase),
                    bmatch + (start - bbase),
                    bmatch + (end - bbase),
                )
            )
        if abase + alen <= bbase + blen:
            ai += 1
        else:
            bi += 1
    regions.append((len(base), len(base), len(a), len(a), len(b), len(b)))
    return regions


def merge_regions(
    base: Sequence[str], a: Sequence[str], b: Sequence[str]
) -> Iterator[tuple]:
    """Yield merge decisions between successive sync regions.

    Yields ``("unchanged", obeg, oend)``, ``("a", abeg, aend)``,
    ``("b", bbeg, bend)``, or
    ``("conflict", obeg, oend, abeg, aend, bbeg, bend)``.
    """
    on = an = bn = 0
    for obeg, oend, abeg, aend, bbeg, bend in find_sync_regions(base, a, b):
        if on < obeg or an < abeg or bn < bbeg:
            a_changed = list(a[an:abeg]) != list(base[on:obeg])
            b_changed = list(b[bn:bbeg]) != list(base[on:obeg])
            if a_changed and b_changed:
                if list(a[an:abeg]) == list(b[bn:bbeg]):
                    yield ("a", an, abeg)
                else:
                    yield ("conflict", on, obeg, an, abeg, bn, bbeg)
            elif a_changed:
                yield ("a", an, abeg)
            elif b_changed:
                yield ("b", bn, bbeg)
            else:
                yield ("unchanged", on, obeg)
        if obeg < oend:
            yield ("unchanged", obeg, oend)
        on, an, bn = oend, aend, bend


def merge_lines(
    base: Sequence[str],
    a: Sequence[str],
    b: Sequence[str],
    a_label: str = "a",
    b_label: str = "b",
    base_label: str | None = None,
) -> tuple[list[str], bool]:
    """Merge two line lists against their ancestor.

    Args:
        base: Ancestor lines (no trailing newlines).
        a: Lines of the first derived version.
        b: Lines of the second derived version.
        a_label: Label after the ``<<<<<<<`` marker.
        b_label: Label after the ``>>>>>>>`` marker.
        base_label: When given, base lines are emitted after a
            ``|||||||`` marker (diff3 style); default omits them.

    Returns:
        ``(merged_lines, had_conflict)``.
    """
    out: list[str] = []
    had_conflict = False
    for region in merge_regions(base, a, b):
        tag = region[0]
        if tag == "unchanged":
            out.extend(base[region[1] : region[2]])
        elif tag == "a":
            out.extend(a[region[1] : region[2]])
        elif tag == "b":
            out.extend(b[region[1] : region[2]])
        else:
            _, obeg, oend, abeg, aend, bbeg, bend = region
            had_conflict = True
            out.append(f"{A_MARKER} {a_label}")
            out.extend(a[abeg:aend])
            if base_label is not None:
                out.append(f"{BASE_MARKER} {base_label}")
                out.extend(base[obeg:oend])
            out.append(SEP_MARKER)
            out.extend(b[bbeg:bend])
            out.append(f"{B_MARKER} {b_label}")
    return out, had_conflict


def merge_texts(
    base: str, a: str, b: str, a_label: str = "a", b_label: str = "b"
) -> tuple[str, bool]:
    """Line-based three-way merge of whole texts (LF-normalized output)."""
    merged, had_conflict = merge_lines(
        base.splitlines(), a.splitlines(), b.splitlines(), a_label, b_label
    )
    text = "\n".join(merged)
    if merged:
        text += "\n"
    return text, had_conflict
