"""Lightweight, error-tolerant syntax trees for C, C++, Java, and Python.

The parsers recognize only the structural shapes the coloring stage
cares about (type/function headers and bodies, imports and preprocessor
lines, declarations, comments, string literals); everything else becomes
an unmapped statement node. Broken input never raises: a virtual merge
resolved toward one side can be syntactically incomplete, and the
analysis must still see whatever structure remains.

Node kinds emitted per language:

  python: module, comment, string, import_statement, import_from_statement,
      function_definition > (function_header, function_body),
      class_definition > (class_header, class_body),
      binding_assignment, annotated_assignment, assignment, decorator,
      <kw>_statement (if/for/while/with/try/...) > block, expression_statement

  c / cpp / java: translation_unit, comment, string, preproc_include,
      preproc_def, preproc_directive (c/cpp), package_declaration,
      import_declaration, annotation (java),
      <kw>_specifier or <kw>_declaration > (type_header, type_body),
      enumerator, function_definition > (function_declarator, function_body),
      function_declarator (bare prototypes), declaration, field_declaration,
      type_definition, alias_declaration, using_declaration,
      namespace_definition, linkage_specification, access_label,
      statement > block, expression_statement
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..spans import LineSpan

LANGUAGES = ("c", "cpp", "java", "python")

EXTENSION_LANGUAGES = {
    ".c": "c",
    ".h": "c",
    ".cc": "cpp",
    ".cpp": "cpp",
    ".cxx": "cpp",
    ".hpp": "cpp",
    ".hh": "cpp",
    ".java": "java",
    ".py": "python",
}


class UnsupportedLanguageError(ValueError):
    """No grammar is available for the requested language."""


@dataclass
class Node:
    """A syntax node: a kind plus the inclusive line span it covers."""

    kind: str
    span: LineSpan
    children: list["Node"] = field(default_factory=list)

    def walk(self) -> Iterator["Node"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class SyntaxTree:
    language: str
    root: Node

    def walk_with_body_flag(self) -> Iterator[tuple[Node, bool]]:
        """Depth-first nodes paired with whether they sit inside a function body.

        The ``function_body`` node itself reports False (its own kind
        already denotes body content); everything beneath it reports True.
        """

        def _walk(node: Node, inside: bool) -> Iterator[tuple[Node, bool]]:
            yield node, inside
            child_inside = inside or node.kind == "function_body"
            for child in node.children:
                yield from _walk(child, child_inside)

        return _walk(self.root, False)


def language_for_path(path: str) -> str | None:
    """Map a file path to a supported language via its extension."""
    dot = path.rfind(".")
    if dot < 0:
        return None
    return EXTENSION_LANGUAGES.get(path[dot:].lower())


def parse_to_syntax_tree(text: str, language: str) -> SyntaxTree:
    """Parse source text into a lightweight tree for the given language."""
    if language == "python":
        from .python_parser import parse_python

        return parse_python(text)
    if language in ("c", "cpp", "java"):
        from .clike_parser import parse_clike

        return parse_clike(text, language)
    raise UnsupportedLanguageError(f"no grammar for language {language!r}")
