"""Error-tolerant structural parser for Python source.

A character scanner folds physical lines into logical statements
(tracking bracket depth, string literals including triple-quoted and
prefixed forms, comments, and backslash continuations); an indent-based
pass then recognizes the handful of shapes the coloring stage maps to
code operations. Anything unrecognized becomes an unmapped statement
node, so damaged input degrades to fewer operations, never to a failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..spans import LineSpan
from . import Node, SyntaxTree

_STRING_PREFIXES = {
    "r", "b", "u", "f", "rb", "br", "fr", "rf", "bf", "fb", "ur", "ru"
}
_COMPOUND_KEYWORDS = {
    "if", "elif", "else", "for", "while", "with", "try", "except",
    "finally", "match", "case", "def", "class", "async",
}
_OPERATORS = (
    "**=", "//=", ">>=", "<<=", "...",
    "==", "!=", "<=", ">=", "->", ":=", "+=", "-=", "*=", "/=", "%=",
    "@=", "&=", "|=", "^=", "**", "//", "<<", ">>",
)


@dataclass
class _Tok:
    value: str
    line: int
    depth: int
    is_name: bool


@dataclass
class _Stmt:
    indent: int
    start_line: int
    end_line: int
    tokens: list[_Tok] = field(default_factory=list)
    strings: list[LineSpan] = field(default_factory=list)
    comments: list[LineSpan] = field(default_factory=list)


def _indent_width(line: str) -> int:
    col = 0
    for ch in line:
        if ch == " ":
            col += 1
        elif ch == "\t":
            col += 8 - col % 8
        else:
            break
    return col


class _Scanner:
    """Folds physical lines into logical statements."""

    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.stmts: list[_Stmt] = []
        self.cur: _Stmt | None = None
        self.depth = 0
        # open multi-line string: (quote char, raw, triple, start line)
        self.string_state: tuple[str, bool, bool, int] | None = None

    def scan(self) -> list[_Stmt]:
        for no, line in enumerate(self.lines, start=1):
            self._scan_line(no, line)
        if self.string_state is not None:
            # unterminated string runs to EOF
            quote, raw, triple, start = self.string_state
            self._ensure_stmt(len(self.lines) or 1, 0)
            self.cur.strings.append(LineSpan(start, len(self.lines)))
            self.string_state = None
        self._finish(len(self.lines))
        return self.stmts

    def _ensure_stmt(self, line: int, indent: int) -> None:
        if self.cur is None:
            self.cur = _Stmt(indent=indent, start_line=line, end_line=line)

    def _finish(self, end_line: int) -> None:
        if self.cur is not None:
            self.cur.end_line = max(self.cur.start_line, end_line)
            self.stmts.append(self.cur)
            self.cur = None

    def _scan_line(self, no: int, line: str) -> None:
        i = 0
        n = len(line)

        if self.string_state is not None:
            quote, raw, triple, start = self.string_state
            end = self._find_string_end(line, 0, quote, raw, triple)
            if end is None:
                return  # still inside the string
            self.cur.strings.append(LineSpan(start, no))
            self.string_state = None
            i = end

        indent = _indent_width(line)
        continuation = False

        while i < n:
            ch = line[i]
            if ch in " \t":
                i += 1
                continue
            if ch == "#":
                self._ensure_stmt(no, indent)
                self.cur.comments.append(LineSpan(no, no))
                break
            if ch == "\\" and i == n - 1:
                self._ensure_stmt(no, indent)
                continuation = True
                break
            if ch.isalpha() or ch == "_":
                j = i + 1
                while j < n and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                word = line[i:j]
                if (
                    j < n
                    and line[j] in "\"'"
                    and word.lower() in _STRING_PREFIXES
                ):
                    i = self._start_string(line, j, no, indent, raw="r" in word.lower())
                    if i is None:
                        return
                    continue
                self._ensure_stmt(no, indent)
                self.cur.tokens.append(_Tok(word, no, self.depth, True))
                i = j
                continue
            if ch in "\"'":
                i = self._start_string(line, i, no, indent, raw=False)
                if i is None:
                    return
                continue
            if ch.isdigit():
                j = i + 1
                while j < n and (line[j].isalnum() or line[j] in "._"):
                    j += 1
                self._ensure_stmt(no, indent)
                self.cur.tokens.append(_Tok(line[i:j], no, self.depth, False))
                i = j
                continue
            if ch == ";" and self.depth == 0:
                self._finish(no)
                i += 1
                continue
            op = None
            for cand in _OPERATORS:
                if line.startswith(cand, i):
                    op = cand
                    break
            if op is None:
                op = ch
            self._ensure_stmt(no, indent)
            if op in "([{":
                self.cur.tokens.append(_Tok(op, no, self.depth, False))
                self.depth += 1
            elif op in ")]}":
                self.depth = max(0, self.depth - 1)
                self.cur.tokens.append(_Tok(op, no, self.depth, False))
            else:
                self.cur.tokens.append(_Tok(op, no, self.depth, False))
            i += len(op)

        if self.cur is not None:
            self.cur.end_line = no
        if self.depth == 0 and not continuation and self.string_state is None:
            self._finish(no)

    def _start_string(
        self, line: str, i: int, no: int, indent: int, raw: bool
    ) -> int | None:
        """Consume a string starting at ``line[i]``; None if it spans lines."""
        self._ensure_stmt(no, indent)
        quote = line[i]
        triple = line[i : i + 3] == quote * 3
        start = i + (3 if triple else 1)
        end = self._find_string_end(line, start, quote, raw, triple)
        if end is None:
            if triple:
                self.string_state = (quote, raw, True, no)
                return None
            # unterminated single-quote string: recover at end of line
            self.cur.strings.append(LineSpan(no, no))
            return len(line)
        self.cur.strings.append(LineSpan(no, no))
        return end

    @staticmethod
    def _find_string_end(
        line: str, i: int, quote: str, raw: bool, triple: bool
    ) -> int | None:
        closer = quote * 3 if triple else quote
        n = len(line)
        while i < n:
            if not raw and line[i] == "\\":
                i += 2
                continue
            if line.startswith(closer, i):
                return i + len(closer)
            i += 1
        return None


def _is_name(tok: _Tok) -> bool:
    return tok.is_name


def _leaf_nodes(stmt: _Stmt) -> list[Node]:
    leaves = [Node("string", span) for span in stmt.strings]
    leaves += [Node("comment", span) for span in stmt.comments]
    leaves.sort(key=lambda node: (node.span.start, node.span.end))
    return leaves


def _is_comment_only(stmt: _Stmt) -> bool:
    return not stmt.tokens and not stmt.strings and bool(stmt.comments)


def _compound_keyword(stmt: _Stmt) -> str | None:
    if not stmt.tokens:
        return None
    first = stmt.tokens[0]
    if not first.is_name or first.value not in _COMPOUND_KEYWORDS:
        return None
    last = stmt.tokens[-1]
    if last.value != ":" or last.depth != 0:
        return None
    if first.value == "async" and len(stmt.tokens) > 1:
        return stmt.tokens[1].value
    return first.value


def _simple_kind(stmt: _Stmt, scope_kind: str, scope_names: set[str]) -> str:
    toks = stmt.tokens
    if not toks:
        return "expression_statement"
    first = toks[0]
    if first.is_name and first.value == "import":
        return "import_statement"
    if first.is_name and first.value == "from":
        return "import_from_statement"
    if first.value == "@":
        return "decorator"

    eq_index = next(
        (k for k, t in enumerate(toks) if t.value == "=" and t.depth == 0), None
    )
    annotated = (
        len(toks) >= 2
        and first.is_name
        and toks[1].value == ":"
        and toks[1].depth == 0
        and first.value not in _COMPOUND_KEYWORDS
    )
    if annotated:
        return "annotated_assignment"
    if eq_index is not None and eq_index >= 1:
        targets = toks[:eq_index]
        if all(t.is_name or t.value == "," for t in targets):
            names = [t.value for t in targets if t.is_name]
            if scope_kind in ("module", "class") and names:
                fresh = any(name not in scope_names for name in names)
                scope_names.update(names)
                return "binding_assignment" if fresh else "assignment"
            return "assignment"
        return "assignment"
    return "expression_statement"


def _suite_span(nodes: list[Node], fallback_line: int) -> LineSpan:
    if not nodes:
        return LineSpan.empty_at(fallback_line)
    return LineSpan(nodes[0].span.start, nodes[-1].span.end)


class _Builder:
    def __init__(self, stmts: list[_Stmt]):
        self.stmts = stmts

    def parse_suite(
        self, i: int, header_indent: int, scope_kind: str, scope_names: set[str]
    ) -> tuple[list[Node], int]:
        nodes: list[Node] = []
        while i < len(self.stmts) and self.stmts[i].indent > header_indent:
            node, i = self.parse_statement(i, scope_kind, scope_names)
            nodes.append(node)
        return nodes, i

    def parse_statement(
        self, i: int, scope_kind: str, scope_names: set[str]
    ) -> tuple[Node, int]:
        stmt = self.stmts[i]
        if _is_comment_only(stmt):
            return Node("comment", stmt.comments[0]), i + 1

        kw = _compound_keyword(stmt)
        if kw is None:
            kind = _simple_kind(stmt, scope_kind, scope_names)
            node = Node(
                kind, LineSpan(stmt.start_line, stmt.end_line), _leaf_nodes(stmt)
            )
            return node, i + 1

        if kw == "def":
            suite, j = self.parse_suite(i + 1, stmt.indent, "function", set())
            header = Node(
                "function_header",
                LineSpan(stmt.start_line, stmt.end_line),
                _leaf_nodes(stmt),
            )
            body = Node("function_body", _suite_span(suite, stmt.end_line + 1), suite)
            node = Node(
                "function_definition",
                LineSpan(stmt.start_line, max(stmt.end_line, body.span.end)),
                [header, body],
            )
            return node, j
        if kw == "class":
            suite, j = self.parse_suite(i + 1, stmt.indent, "class", set())
            header = Node(
                "class_header",
                LineSpan(stmt.start_line, stmt.end_line),
                _leaf_nodes(stmt),
            )
            body = Node("class_body", _suite_span(suite, stmt.end_line + 1), suite)
            node = Node(
                "class_definition",
                LineSpan(stmt.start_line, max(stmt.end_line, body.span.end)),
                [header, body],
            )
            return node, j

        suite, j = self.parse_suite(i + 1, stmt.indent, scope_kind, scope_names)
        children = _leaf_nodes(stmt)
        children.append(Node("block", _suite_span(suite, stmt.end_line + 1), suite))
        node = Node(
            f"{kw}_statement",
            LineSpan(stmt.start_line, max(stmt.end_line, children[-1].span.end)),
            children,
        )
        return node, j


def parse_python(text: str) -> SyntaxTree:
    """Parse Python source; tolerant of syntactically broken input."""
    stmts = _Scanner(text).scan()
    builder = _Builder(stmts)
    # indent floor of -1 consumes everything, including column-zero code
    nodes, _ = builder.parse_suite(0, -1, "module", set())
    total_lines = max(1, len(text.splitlines()))
    root = Node("module", LineSpan(1, total_lines), nodes)
    return SyntaxTree(language="python", root=root)
