"""Text frontend for `.oks` model files.

One statement per line; `#` starts a comment; blank lines are ignored.
LF and CRLF are both accepted.  Statement forms:

    concept N [specializes P1, P2, ...]
    concept N = Type and FormalRole
    role N = data of R
    role N = result of R
    relation N [particularizes P] signature (C1[, C2...]) [temporal]
    disjoint A B
    label PRIMITIVE N at NAT
    annotate N rigidity rigid|anti-rigid|semi-rigid
    annotate N identity carries|none
    annotate N dependence dependent|independent
    instance i : C1[, C2...]
    fact R(a1, ..., an[, NAT])

Signature positions may be unions written `A|B`.  Identifiers are ASCII
letters, digits and underscores, starting with a letter, case-sensitive.
Parsing recovers at line boundaries, so one file can report several
syntax errors; every error carries the span of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

from .model import (
    ANNOTATION_AXES,
    ANNOTATION_VALUES,
    AnnotationDecl,
    ConceptDecl,
    Conjunction,
    Declaration,
    Diagnostic,
    DisjointDecl,
    Fact,
    InstanceDecl,
    MetaLabel,
    Ontology,
    PRIMITIVES,
    RelationDecl,
    RoleDefinition,
    Severity,
    SourceSpan,
    sort_diagnostics,
)

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(
    r"(?P<word>[A-Za-z][A-Za-z0-9_-]*)"
    r"|(?P<nat>[0-9]+)"
    r"|(?P<punct>[(),:=|])"
    r"|(?P<bad>[^\s(),:=|]+)"
)

_PUNCT_KIND = {"(": "lparen", ")": "rparen", ",": "comma", ":": "colon",
               "=": "equals", "|": "pipe"}


@dataclass(frozen=True)
class Token:
    kind: str  # word | nat | lparen | rparen | comma | colon | equals | pipe | bad | eol
    text: str
    line: int
    column: int

    def span(self, file: str) -> SourceSpan:
        return SourceSpan(file, self.line, self.column, max(len(self.text), 1))


class _SyntaxError(Exception):
    def __init__(self, message: str, token: Token):
        super().__init__(message)
        self.message = message
        self.token = token


def _tokenize_line(text: str, line_no: int) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch == "#":
            break
        if ch.isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # pragma: no cover - regex covers every non-space char
            tokens.append(Token("bad", ch, line_no, pos + 1))
            pos += 1
            continue
        text_match = m.group(0)
        if m.lastgroup == "word":
            kind = "word"
        elif m.lastgroup == "nat":
            kind = "nat"
        elif m.lastgroup == "punct":
            kind = _PUNCT_KIND[text_match]
        else:
            kind = "bad"
        tokens.append(Token(kind, text_match, line_no, pos + 1))
        pos = m.end()
    return tokens


class _LineParser:
    def __init__(self, tokens: list[Token], line_no: int, line_text: str):
        self.tokens = tokens
        self.pos = 0
        eol_col = (tokens[-1].column + len(tokens[-1].text)) if tokens else len(line_text) + 1
        self.eol = Token("eol", "", line_no, eol_col)

    def peek(self) -> Token:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else self.eol

    def next(self) -> Token:
        tok = self.peek()
        if self.pos < len(self.tokens):
            self.pos += 1
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def expect_keyword(self, word: str) -> Token:
        tok = self.next()
        if tok.kind != "word" or tok.text != word:
            raise _SyntaxError(f"expected '{word}'", tok)
        return tok

    def expect_identifier(self, what: str = "identifier") -> Token:
        tok = self.next()
        if tok.kind != "word" or not _IDENT_RE.match(tok.text):
            raise _SyntaxError(f"expected {what}", tok)
        return tok

    def expect_nat(self, what: str = "non-negative integer") -> tuple[int, Token]:
        tok = self.next()
        if tok.kind != "nat":
            raise _SyntaxError(f"expected {what}", tok)
        return int(tok.text), tok

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise _SyntaxError(f"expected {what}", tok)
        return tok

    def expect_end(self) -> None:
        if not self.at_end():
            raise _SyntaxError("unexpected trailing input", self.peek())

    def identifier_list(self) -> list[str]:
        names = [self.expect_identifier().text]
        while self.peek().kind == "comma":
            self.next()
            names.append(self.expect_identifier().text)
        return names


def _statement_span(tokens: list[Token], file: str) -> SourceSpan:
    first, last = tokens[0], tokens[-1]
    length = last.column + len(last.text) - first.column
    return SourceSpan(file, first.line, first.column, length)


def parse(text: str, filename: str) -> tuple[list[Declaration], list[Diagnostic]]:
    """Parse source text into declarations plus syntax diagnostics."""
    decls: list[Declaration] = []
    diags: list[Diagnostic] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = _tokenize_line(line, line_no)
        if not tokens:
            continue
        parser = _LineParser(tokens, line_no, line)
        span = _statement_span(tokens, filename)
        head = parser.next()
        try:
            handler = _STATEMENTS.get(head.text) if head.kind == "word" else None
            if handler is None:
                raise _SyntaxError("unknown statement keyword", head)
            decls.append(handler(parser, span))
        except _SyntaxError as err:
            diags.append(Diagnostic(
                Severity.ERROR, "P1", err.message, err.token.span(filename)))
    return decls, sort_diagnostics(diags)


# --- statement parsers -----------------------------------------------------


def _parse_concept(p: _LineParser, span: SourceSpan) -> ConceptDecl:
    name = p.expect_identifier("concept name").text
    tok = p.peek()
    if tok.kind == "word" and tok.text == "specializes":
        p.next()
        parents = tuple(p.identifier_list())
        p.expect_end()
        return ConceptDecl(name, parents, span=span)
    if tok.kind == "equals":
        p.next()
        type_concept = p.expect_identifier("type concept").text
        p.expect_keyword("and")
        formal_role = p.expect_identifier("formal role").text
        p.expect_end()
        return ConceptDecl(name, (), Conjunction(type_concept, formal_role), span=span)
    p.expect_end()
    return ConceptDecl(name, (), span=span)


def _parse_role(p: _LineParser, span: SourceSpan) -> ConceptDecl:
    name = p.expect_identifier("role name").text
    p.expect_kind("equals", "'='")
    mode_tok = p.next()
    if mode_tok.kind != "word" or mode_tok.text not in ("data", "result"):
        raise _SyntaxError("expected 'data' or 'result'", mode_tok)
    p.expect_keyword("of")
    reasoning = p.expect_identifier("reasoning concept").text
    p.expect_end()
    return ConceptDecl(name, (), RoleDefinition(mode_tok.text, reasoning), span=span)


def _parse_relation(p: _LineParser, span: SourceSpan) -> RelationDecl:
    name = p.expect_identifier("relation name").text
    particularizes = None
    if p.peek().kind == "word" and p.peek().text == "particularizes":
        p.next()
        particularizes = p.expect_identifier("parent relation").text
    p.expect_keyword("signature")
    p.expect_kind("lparen", "'('")
    signature: list[tuple[str, ...]] = []
    while True:
        union = [p.expect_identifier("concept").text]
        while p.peek().kind == "pipe":
            p.next()
            union.append(p.expect_identifier("concept").text)
        signature.append(tuple(sorted(union)))
        tok = p.next()
        if tok.kind == "rparen":
            break
        if tok.kind != "comma":
            raise _SyntaxError("expected ',' or ')'", tok)
    temporal = False
    if p.peek().kind == "word" and p.peek().text == "temporal":
        p.next()
        temporal = True
    p.expect_end()
    return RelationDecl(name, tuple(signature), temporal=temporal,
                        particularizes=particularizes, span=span)


def _parse_disjoint(p: _LineParser, span: SourceSpan) -> DisjointDecl:
    first = p.expect_identifier().text
    second = p.expect_identifier().text
    p.expect_end()
    return DisjointDecl(first, second, span=span)


def _parse_label(p: _LineParser, span: SourceSpan) -> MetaLabel:
    prim_tok = p.next()
    if prim_tok.kind != "word" or prim_tok.text not in PRIMITIVES:
        raise _SyntaxError("unknown modeling primitive", prim_tok)
    concept = p.expect_identifier("concept").text
    p.expect_keyword("at")
    time, _ = p.expect_nat("time point")
    p.expect_end()
    return MetaLabel(prim_tok.text, concept, time, span=span)


def _parse_annotate(p: _LineParser, span: SourceSpan) -> AnnotationDecl:
    concept = p.expect_identifier("concept").text
    axis_tok = p.next()
    if axis_tok.kind != "word" or axis_tok.text not in ANNOTATION_AXES:
        raise _SyntaxError("expected 'rigidity', 'identity' or 'dependence'", axis_tok)
    value_tok = p.next()
    if value_tok.kind != "word" or value_tok.text not in ANNOTATION_VALUES[axis_tok.text]:
        allowed = "|".join(ANNOTATION_VALUES[axis_tok.text])
        raise _SyntaxError(f"expected {allowed}", value_tok)
    p.expect_end()
    return AnnotationDecl(concept, axis_tok.text, value_tok.text, span=span)


def _parse_instance(p: _LineParser, span: SourceSpan) -> InstanceDecl:
    name = p.expect_identifier("instance name").text
    p.expect_kind("colon", "':'")
    concepts = tuple(p.identifier_list())
    p.expect_end()
    return InstanceDecl(name, concepts, span=span)


def _parse_fact(p: _LineParser, span: SourceSpan) -> Fact:
    relation = p.expect_identifier("relation name").text
    p.expect_kind("lparen", "'('")
    args: list[str] = []
    time: Optional[int] = None
    if p.peek().kind == "rparen":
        raise _SyntaxError("fact needs at least one argument", p.peek())
    while True:
        tok = p.next()
        if tok.kind == "nat":
            time = int(tok.text)
            p.expect_kind("rparen", "')' after time point")
            break
        if tok.kind != "word" or not _IDENT_RE.match(tok.text):
            raise _SyntaxError("expected instance name or time point", tok)
        args.append(tok.text)
        tok = p.next()
        if tok.kind == "rparen":
            break
        if tok.kind != "comma":
            raise _SyntaxError("expected ',' or ')'", tok)
    p.expect_end()
    return Fact(relation, tuple(args), time, span=span)


_STATEMENTS: dict[str, Callable[[_LineParser, SourceSpan], Declaration]] = {
    "concept": _parse_concept,
    "role": _parse_role,
    "relation": _parse_relation,
    "disjoint": _parse_disjoint,
    "label": _parse_label,
    "annotate": _parse_annotate,
    "instance": _parse_instance,
    "fact": _parse_fact,
}


# --- rendering --------------------------------------------------------------


def _render_concept(c: ConceptDecl) -> str:
    if isinstance(c.definition, RoleDefinition):
        return f"role {c.name} = {c.definition.mode} of {c.definition.reasoning_concept}"
    if isinstance(c.definition, Conjunction):
        return f"concept {c.name} = {c.definition.type_concept} and {c.definition.formal_role}"
    if c.parents:
        return f"concept {c.name} specializes {', '.join(sorted(c.parents))}"
    return f"concept {c.name}"


def _render_relation(r: RelationDecl) -> str:
    parts = [f"relation {r.name}"]
    if r.particularizes:
        parts.append(f"particularizes {r.particularizes}")
    positions = ", ".join("|".join(u) for u in r.signature)
    parts.append(f"signature ({positions})")
    if r.temporal:
        parts.append("temporal")
    return " ".join(parts)


def _render_fact(f: Fact) -> str:
    args = list(f.args) + ([str(f.time)] if f.time is not None else [])
    return f"fact {f.relation}({', '.join(args)})"


def render(ontology: Ontology) -> str:
    """Canonical text for an ontology; parse(render(o)) loads back to o."""
    sections: list[list[str]] = [
        sorted(_render_concept(c) for c in ontology.concepts.values()),
        sorted(_render_relation(r) for r in ontology.relations.values()),
        sorted(f"disjoint {a} {b}" for a, b in ontology.disjoints),
        sorted(f"annotate {a.concept} {a.axis} {a.value}"
               for per in ontology.annotations.values() for a in per.values()),
        sorted(f"instance {i.name} : {', '.join(sorted(i.concepts))}"
               for i in ontology.instances.values()),
        sorted(_render_fact(f) for f in ontology.facts.values()),
        sorted(f"label {lb.primitive} {lb.concept} at {lb.time}"
               for lb in ontology.labels.values()),
    ]
    lines = [line for section in sections if section for line in section + [""]]
    return "\n".join(lines) if lines else ""
