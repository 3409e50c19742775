"""Error-tolerant structural parser for C, C++, and Java.

A lexer produces identifier/punctuation/string/comment/preprocessor
tokens with line positions; a brace-driven recognizer then extracts the
shapes that map to code operations: composite type headers and bodies,
function definitions split into declarator and body, prototypes,
variable and field declarations, imports/packages/annotations, and
preprocessor lines. Unrecognized constructs degrade to unmapped
statement nodes rather than failing.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..spans import LineSpan
from . import Node, SyntaxTree

_MULTI_PUNCT = (
    "<<=", ">>=", "->*", "...", "<=>", "::", "->", "==", "!=", "<=", ">=",
    "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<", ">>",
)
_CONTROL_KEYWORDS = {
    "if", "else", "for", "while", "do", "switch", "case", "default",
    "break", "continue", "return", "goto", "try", "catch", "finally",
    "throw", "new", "delete", "synchronized", "assert", "sizeof",
}
_BASE_TYPE_KEYWORDS = {
    "int", "void", "char", "float", "double", "long", "short",
    "unsigned", "signed", "bool", "auto", "var", "byte", "boolean",
}
_COMPOSITE_KEYWORDS = {
    "c": {"struct", "union", "enum"},
    "cpp": {"struct", "union", "enum", "class"},
    "java": {"class", "interface", "enum"},
}
_ACCESS_LABELS = {"public", "private", "protected"}
_RAW_PREFIXES = {"R", "LR", "uR", "UR", "u8R"}


@dataclass
class _CTok:
    type: str  # ident | punct | string | char | number | comment | preproc
    value: str
    line_start: int
    line_end: int


def _lex(text: str, language: str) -> list[_CTok]:
    toks: list[_CTok] = []
    line = 1
    i = 0
    n = len(text)
    at_line_start = True

    def newline_count(segment: str) -> int:
        return segment.count("\n")

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            at_line_start = True
            continue
        if ch in " \t\r":
            i += 1
            continue
        if ch == "#" and at_line_start and language in ("c", "cpp"):
            start = i
            start_line = line
            i += 1
            while i < n:
                if text[i] == "\\" and i + 1 < n and text[i + 1] == "\n":
                    line += 1
                    i += 2
                    continue
                if text[i] == "\n":
                    break
                i += 1
            body = text[start:i]
            directive = body[1:].strip().split(None, 1)
            name = directive[0] if directive else ""
            toks.append(_CTok("preproc", name, start_line, line))
            continue
        at_line_start = False
        if ch == "/" and text.startswith("//", i):
            start_line = line
            j = text.find("\n", i)
            i = n if j < 0 else j
            toks.append(_CTok("comment", "//", start_line, line))
            continue
        if ch == "/" and text.startswith("/*", i):
            start_line = line
            j = text.find("*/", i + 2)
            if j < 0:
                seg = text[i:]
                i = n
            else:
                seg = text[i : j + 2]
                i = j + 2
            toks.append(
                _CTok("comment", "/*", start_line, start_line + newline_count(seg))
            )
            line += newline_count(seg)
            continue
        if ch == '"':
            if language == "java" and text.startswith('"""', i):
                start_line = line
                j = text.find('"""', i + 3)
                if j < 0:
                    seg = text[i:]
                    i = n
                else:
                    seg = text[i : j + 3]
                    i = j + 3
                toks.append(
                    _CTok("string", seg, start_line, start_line + newline_count(seg))
                )
                line += newline_count(seg)
                continue
            start_line = line
            j = i + 1
            while j < n and text[j] != "\n":
                if text[j] == "\\" and j + 1 < n:
                    j += 2
                    continue
                if text[j] == '"':
                    j += 1
                    break
                j += 1
            toks.append(_CTok("string", text[i:j], start_line, line))
            i = j
            continue
        if ch == "'":
            start_line = line
            j = i + 1
            while j < n and text[j] != "\n":
                if text[j] == "\\" and j + 1 < n:
                    j += 2
                    continue
                if text[j] == "'":
                    j += 1
                    break
                j += 1
            toks.append(_CTok("char", text[i:j], start_line, line))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if (
                language == "cpp"
                and word in _RAW_PREFIXES
                and j < n
                and text[j] == '"'
            ):
                # raw string: R"delim( ... )delim"
                k = j + 1
                while k < n and text[k] not in "(\n":
                    k += 1
                delim = text[j + 1 : k]
                closer = ")" + delim + '"'
                start_line = line
                end = text.find(closer, k)
                if end < 0:
                    seg = text[i:]
                    i = n
                else:
                    seg = text[i : end + len(closer)]
                    i = end + len(closer)
                toks.append(
                    _CTok("string", seg, start_line, start_line + newline_count(seg))
                )
                line += newline_count(seg)
                continue
            toks.append(_CTok("ident", word, line, line))
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "._'"):
                j += 1
            toks.append(_CTok("number", text[i:j], line, line))
            i = j
            continue
        op = next((p for p in _MULTI_PUNCT if text.startswith(p, i)), ch)
        toks.append(_CTok("punct", op, line, line))
        i += len(op)
    return toks


_PREPROC_KINDS = {"include": "preproc_include", "define": "preproc_def"}


def _preproc_node(tok: _CTok) -> Node:
    kind = _PREPROC_KINDS.get(tok.value, "preproc_directive")
    return Node(kind, LineSpan(tok.line_start, tok.line_end))


def _leaf(tok: _CTok) -> Node | None:
    if tok.type == "comment":
        return Node("comment", LineSpan(tok.line_start, tok.line_end))
    if tok.type == "string":
        return Node("string", LineSpan(tok.line_start, tok.line_end))
    if tok.type == "preproc":
        return _preproc_node(tok)
    return None


class _Parser:
    def __init__(self, tokens: list[_CTok], language: str):
        self.toks = tokens
        self.language = language
        self.composites = _COMPOSITE_KEYWORDS[language]

    # -- helpers ------------------------------------------------------

    def _at(self, pos: int) -> _CTok | None:
        return self.toks[pos] if pos < len(self.toks) else None

    def _absorb_braces(self, pos: int, leaves: list[Node]) -> int:
        """Consume a balanced brace group starting at '{'; collect leaves."""
        depth = 0
        while pos < len(self.toks):
            tok = self.toks[pos]
            node = _leaf(tok)
            if node is not None:
                leaves.append(node)
            elif tok.type == "punct" and tok.value == "{":
                depth += 1
            elif tok.type == "punct" and tok.value == "}":
                depth -= 1
                if depth == 0:
                    return pos + 1
            pos += 1
        return pos

    # -- containers ---------------------------------------------------

    def parse_container(
        self, pos: int, scope: str, stop_at_rbrace: bool
    ) -> tuple[list[Node], int]:
        children: list[Node] = []
        while pos < len(self.toks):
            tok = self.toks[pos]
            if tok.type in ("comment", "preproc"):
                node = _leaf(tok)
                if node is not None:
                    children.append(node)
                pos += 1
                continue
            if tok.type == "punct" and tok.value == "}":
                if stop_at_rbrace:
                    return children, pos
                pos += 1  # stray closing brace: skip, stay tolerant
                continue
            if tok.type == "punct" and tok.value == ";":
                pos += 1
                continue
            handled = self._try_scope_directives(pos, scope, children)
            if handled is not None:
                pos = handled
                continue
            node, pos = self.parse_statement(pos, scope)
            if node is not None:
                children.append(node)
        return children, pos

    def _try_scope_directives(
        self, pos: int, scope: str, children: list[Node]
    ) -> int | None:
        tok = self.toks[pos]
        lang = self.language
        if lang == "java" and tok.type == "ident" and tok.value in ("package", "import"):
            kind = "package_declaration" if tok.value == "package" else "import_declaration"
            end = pos
            while end < len(self.toks) and not (
                self.toks[end].type == "punct" and self.toks[end].value == ";"
            ):
                end += 1
            last = self._at(end) or self.toks[-1]
            children.append(Node(kind, LineSpan(tok.line_start, last.line_end)))
            return end + 1
        if lang == "java" and tok.type == "punct" and tok.value == "@":
            nxt = self._at(pos + 1)
            if nxt is not None and nxt.type == "ident" and nxt.value != "interface":
                end = pos + 2
                while (
                    end + 1 < len(self.toks)
                    and self.toks[end].type == "punct"
                    and self.toks[end].value == "."
                    and self.toks[end + 1].type == "ident"
                ):
                    end += 2
                last_line = self.toks[end - 1].line_end
                if (
                    end < len(self.toks)
                    and self.toks[end].type == "punct"
                    and self.toks[end].value == "("
                ):
                    depth = 0
                    while end < len(self.toks):
                        t = self.toks[end]
                        if t.type == "punct" and t.value == "(":
                            depth += 1
                        elif t.type == "punct" and t.value == ")":
                            depth -= 1
                            if depth == 0:
                                last_line = t.line_end
                                end += 1
                                break
                        end += 1
                children.append(Node("annotation", LineSpan(tok.line_start, last_line)))
                return end
        if (
            lang in ("c", "cpp")
            and scope == "type"
            and tok.type == "ident"
            and tok.value in _ACCESS_LABELS
        ):
            nxt = self._at(pos + 1)
            if nxt is not None and nxt.type == "punct" and nxt.value == ":":
                children.append(
                    Node("access_label", LineSpan(tok.line_start, nxt.line_end))
                )
                return pos + 2
        if lang == "cpp" and tok.type == "ident" and tok.value == "namespace":
            look = pos + 1
            while look < len(self.toks) and not (
                self.toks[look].type == "punct" and self.toks[look].value in "{;="
            ):
                look += 1
            if look < len(self.toks) and self.toks[look].value == "{":
                inner, end = self.parse_container(look + 1, "file", True)
                last = self._at(end) or self.toks[-1]
                children.append(
                    Node(
                        "namespace_definition",
                        LineSpan(tok.line_start, last.line_end),
                        inner,
                    )
                )
                return end + 1
        if (
            lang == "cpp"
            and tok.type == "ident"
            and tok.value == "extern"
            and (nxt := self._at(pos + 1)) is not None
            and nxt.type == "string"
            and (brace := self._at(pos + 2)) is not None
            and brace.type == "punct"
            and brace.value == "{"
        ):
            inner, end = self.parse_container(pos + 3, scope, True)
            last = self._at(end) or self.toks[-1]
            children.append(
                Node(
                    "linkage_specification",
                    LineSpan(tok.line_start, last.line_end),
                    inner,
                )
            )
            return end + 1
        return None

    # -- statements ---------------------------------------------------

    def parse_statement(self, pos: int, scope: str) -> tuple[Node | None, int]:
        head: list[_CTok] = []
        leaves: list[Node] = []
        depth = 0
        saw_eq_depth0 = False
        start_tok = self.toks[pos]

        while pos < len(self.toks):
            tok = self.toks[pos]
            leaf = _leaf(tok)
            if leaf is not None:
                leaves.append(leaf)
                if tok.type == "string":
                    head.append(tok)
                pos += 1
                continue
            if tok.type == "punct":
                if tok.value in "([":
                    depth += 1
                elif tok.value in ")]":
                    depth = max(0, depth - 1)
                elif tok.value == ";" and depth == 0:
                    return self._finish_simple(head, leaves, start_tok, tok, scope), pos + 1
                elif tok.value == "{" and depth == 0:
                    if saw_eq_depth0:
                        pos = self._absorb_braces(pos, leaves)
                        continue
                    return self._finish_compound(head, leaves, start_tok, pos, scope)
                elif tok.value == "}" and depth == 0:
                    node = self._finish_simple(head, leaves, start_tok, tok, scope)
                    return node, pos  # caller owns the brace
                elif tok.value == "=" and depth == 0:
                    saw_eq_depth0 = True
            head.append(tok)
            pos += 1

        last = self.toks[-1]
        return self._finish_simple(head, leaves, start_tok, last, scope), pos

    def _finish_simple(
        self,
        head: list[_CTok],
        leaves: list[Node],
        start_tok: _CTok,
        end_tok: _CTok,
        scope: str,
    ) -> Node | None:
        if not head and not leaves:
            return None
        span = LineSpan(start_tok.line_start, end_tok.line_end)
        kind = self._classify_simple(head, scope)
        return Node(kind, span, leaves)

    def _classify_simple(self, head: list[_CTok], scope: str) -> str:
        toks = [t for t in head if t.type != "string"]
        if not toks:
            return "expression_statement"
        first = toks[0]
        if first.type == "ident" and first.value in _CONTROL_KEYWORDS:
            return "expression_statement"
        if self.language in ("c", "cpp") and first.value == "typedef":
            return "type_definition"
        if self.language == "cpp" and first.value == "using":
            if any(t.value == "=" for t in toks):
                return "alias_declaration"
            return "using_declaration"
        if (
            len(toks) == 2
            and first.type == "ident"
            and first.value in self.composites
            and toks[1].type == "ident"
        ):
            return "type_forward"

        idents_before_paren: list[_CTok] = []
        paren_index = None
        d = 0
        saw_eq = False
        for k, t in enumerate(toks):
            if t.type == "punct":
                if t.value in "([":
                    if t.value == "(" and d == 0 and paren_index is None and not saw_eq:
                        paren_index = k
                    d += 1
                elif t.value in ")]":
                    d = max(0, d - 1)
                elif t.value == "=" and d == 0:
                    saw_eq = True
            elif paren_index is None and t.type == "ident" and not saw_eq:
                idents_before_paren.append(t)

        if paren_index is not None and paren_index >= 1:
            prev = toks[paren_index - 1]
            qualifies = (
                prev.type == "ident"
                and prev.value not in _CONTROL_KEYWORDS
                and prev.value not in _BASE_TYPE_KEYWORDS
                and len(idents_before_paren) >= 2
                and not any(
                    t.type == "punct" and t.value in (".", "->")
                    for t in toks[:paren_index]
                )
            )
            if scope in ("function", "block") and any(
                t.type == "punct" and t.value == "::" for t in toks[:paren_index]
            ):
                qualifies = False
            if qualifies:
                return "function_declarator"

        return self._declaration_or_expression(toks, scope)

    def _declaration_or_expression(self, toks: list[_CTok], scope: str) -> str:
        pre: list[_CTok] = []
        d = 0
        for t in toks:
            if t.type == "punct" and t.value == "=" and d == 0:
                break
            if t.type == "punct":
                if t.value in "([":
                    d += 1
                elif t.value in ")]":
                    d = max(0, d - 1)
            pre.append(t)
        # strip trailing array extents: name[10][20]
        while len(pre) >= 2 and pre[-1].type == "punct" and pre[-1].value == "]":
            d = 0
            for k in range(len(pre) - 1, -1, -1):
                if pre[k].type == "punct" and pre[k].value == "]":
                    d += 1
                elif pre[k].type == "punct" and pre[k].value == "[":
                    d -= 1
                    if d == 0:
                        pre = pre[:k]
                        break
            else:
                break
        if not pre or pre[-1].type != "ident":
            return "expression_statement"
        first = pre[0]
        if first.type != "ident":
            return "expression_statement"
        allowed_punct = {"*", "&", "<", ">", ",", "::", "[", "]", "@", "..."}
        idents = 0
        for t in pre:
            if t.type == "ident":
                idents += 1
            elif t.type == "punct" and t.value not in allowed_punct:
                return "expression_statement"
            elif t.type not in ("ident", "punct", "number"):
                return "expression_statement"
        if idents < 2:
            return "expression_statement"
        return "field_declaration" if scope == "type" else "declaration"

    def _finish_compound(
        self,
        head: list[_CTok],
        leaves: list[Node],
        start_tok: _CTok,
        brace_pos: int,
        scope: str,
    ) -> tuple[Node, int]:
        toks = [t for t in head if t.type != "string"]
        first = toks[0] if toks else None

        if first is not None and first.type == "ident" and first.value in _CONTROL_KEYWORDS:
            return self._generic_compound(head, leaves, start_tok, brace_pos, scope)

        comp = self._composite_index(toks)
        if comp is not None:
            return self._composite(toks, leaves, start_tok, brace_pos, comp)

        fn = self._function_index(toks)
        if fn is not None:
            return self._function(head, leaves, start_tok, brace_pos)

        if (
            toks
            and toks[-1].type == "ident"
            and sum(1 for t in toks if t.type == "ident") >= 2
            and not any(t.type == "punct" and t.value == "(" for t in toks)
        ):
            # brace initialization: type name{...};
            end = self._absorb_braces(brace_pos, leaves)
            last = self._at(end - 1) or self.toks[-1]
            kind = "field_declaration" if scope == "type" else "declaration"
            return Node(kind, LineSpan(start_tok.line_start, last.line_end), leaves), end

        return self._generic_compound(head, leaves, start_tok, brace_pos, scope)

    def _composite_index(self, toks: list[_CTok]) -> int | None:
        best = None
        d = 0
        for k, t in enumerate(toks):
            if t.type == "punct":
                if t.value in "([":
                    d += 1
                elif t.value in ")]":
                    d = max(0, d - 1)
            if d == 0 and t.type == "ident" and t.value in self.composites:
                best = k
        if best is None:
            if self.language == "java":
                for k in range(len(toks) - 1):
                    if (
                        toks[k].type == "punct"
                        and toks[k].value == "@"
                        and toks[k + 1].value == "interface"
                    ):
                        return k
            return None
        # no call parens may follow the keyword (rules out "struct X f() {")
        d = 0
        for t in toks[best + 1 :]:
            if t.type == "punct":
                if t.value == "(" and d == 0:
                    return None
                if t.value in "([":
                    d += 1
                elif t.value in ")]":
                    d = max(0, d - 1)
        if best > 0 and toks[best].value == "class" and toks[best - 1].value == "enum":
            return best - 1
        return best

    def _function_index(self, toks: list[_CTok]) -> int | None:
        d = 0
        for k, t in enumerate(toks):
            if t.type == "punct":
                if t.value == "(" and d == 0:
                    prev = toks[k - 1] if k > 0 else None
                    if prev is None:
                        return None
                    if prev.type == "ident" and prev.value not in _CONTROL_KEYWORDS:
                        return k
                    if (
                        prev.type == "punct"
                        and k >= 2
                        and toks[k - 2].type == "ident"
                        and toks[k - 2].value == "operator"
                    ):
                        return k
                    return None
                if t.value in "([":
                    d += 1
                elif t.value in ")]":
                    d = max(0, d - 1)
        return None

    def _composite(
        self,
        toks: list[_CTok],
        leaves: list[Node],
        start_tok: _CTok,
        brace_pos: int,
        kw_index: int,
    ) -> tuple[Node, int]:
        kw_tok = toks[kw_index]
        kw = "annotation_type" if kw_tok.value == "@" else kw_tok.value
        if kw == "enum" and kw_index + 1 < len(toks) and toks[kw_index + 1].value == "class":
            kw = "enum"
        if self.language == "java":
            kind = f"{kw}_declaration"
        else:
            kind = f"{kw}_specifier"

        header_end = toks[-1].line_end if toks else start_tok.line_end
        header = Node("type_header", LineSpan(start_tok.line_start, header_end), leaves)

        brace_tok = self.toks[brace_pos]
        if kw == "enum":
            members, end = self._parse_enum_body(brace_pos + 1)
        else:
            members, end = self.parse_container(brace_pos + 1, "type", True)
        close = self._at(end) or self.toks[-1]
        body = Node("type_body", LineSpan(brace_tok.line_start, close.line_end), members)
        end = end + 1 if end < len(self.toks) else end

        # absorb trailing declarators up to ';' (e.g. "} instance;")
        last_line = close.line_end
        while end < len(self.toks):
            t = self.toks[end]
            if t.type == "punct" and t.value == ";":
                last_line = t.line_end
                end += 1
                break
            if t.type == "punct" and t.value in "{}":
                break
            if t.type in ("comment", "preproc"):
                break
            last_line = t.line_end
            end += 1

        node = Node(kind, LineSpan(start_tok.line_start, last_line), [header, body])
        return node, end

    def _parse_enum_body(self, pos: int) -> tuple[list[Node], int]:
        members: list[Node] = []
        group: list[_CTok] = []
        d = 0

        def flush() -> None:
            idents = [t for t in group if t.type == "ident"]
            if idents:
                members.append(
                    Node(
                        "enumerator",
                        LineSpan(group[0].line_start, group[-1].line_end),
                    )
                )
            group.clear()

        while pos < len(self.toks):
            tok = self.toks[pos]
            leaf = _leaf(tok)
            if leaf is not None:
                members.append(leaf)
                pos += 1
                continue
            if tok.type == "punct":
                if tok.value == "}" and d == 0:
                    flush()
                    return members, pos
                if tok.value == ";" and d == 0:
                    # java: members follow the enumerator list
                    flush()
                    rest, pos = self.parse_container(pos + 1, "type", True)
                    members.extend(rest)
                    return members, pos
                if tok.value == "," and d == 0:
                    flush()
                    pos += 1
                    continue
                if tok.value in "([{":
                    d += 1
                elif tok.value in ")]}":
                    d = max(0, d - 1)
            group.append(tok)
            pos += 1
        flush()
        return members, pos

    def _function(
        self,
        head: list[_CTok],
        leaves: list[Node],
        start_tok: _CTok,
        brace_pos: int,
    ) -> tuple[Node, int]:
        toks = [t for t in head if t.type != "string"]
        header_end = toks[-1].line_end if toks else start_tok.line_end
        declarator = Node(
            "function_declarator", LineSpan(start_tok.line_start, header_end), leaves
        )
        brace_tok = self.toks[brace_pos]
        inner, end = self.parse_container(brace_pos + 1, "function", True)
        close = self._at(end) or self.toks[-1]
        body = Node(
            "function_body", LineSpan(brace_tok.line_start, close.line_end), inner
        )
        end = end + 1 if end < len(self.toks) else end
        node = Node(
            "function_definition",
            LineSpan(start_tok.line_start, close.line_end),
            [declarator, body],
        )
        return node, end

    def _generic_compound(
        self,
        head: list[_CTok],
        leaves: list[Node],
        start_tok: _CTok,
        brace_pos: int,
        scope: str,
    ) -> tuple[Node, int]:
        brace_tok = self.toks[brace_pos]
        inner_scope = "block" if scope in ("function", "block") else scope
        inner, end = self.parse_container(brace_pos + 1, inner_scope, True)
        close = self._at(end) or self.toks[-1]
        block = Node("block", LineSpan(brace_tok.line_start, close.line_end), inner)
        end = end + 1 if end < len(self.toks) else end
        children = leaves + [block]
        node = Node(
            "statement", LineSpan(start_tok.line_start, close.line_end), children
        )
        return node, end


def parse_clike(text: str, language: str) -> SyntaxTree:
    """Parse C/C++/Java source; tolerant of syntactically broken input."""
    tokens = _lex(text, language)
    total_lines = max(1, len(text.splitlines()))
    root = Node("translation_unit", LineSpan(1, total_lines))
    if tokens:
        parser = _Parser(tokens, language)
        children, _ = parser.parse_container(0, "file", False)
        root.children = children
    return SyntaxTree(language=language, root=root)
