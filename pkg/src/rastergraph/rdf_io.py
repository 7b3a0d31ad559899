"""Reader and writer for the N-Triples-with-prefixes subset used for data files.

Accepted beyond plain N-Triples: ``@prefix p: <iri> .`` declarations,
prefixed names, the ``a`` keyword, ``;`` and ``,`` continuation lists,
bare numeric and boolean literals. Collections and blank-node property
lists are not supported.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .namespaces import RDF_LANGSTRING, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, XSD_STRING
from .rdf import BlankNode, Graph, Iri, Literal, MalformedTermError, Triple


class RdfSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<langtag>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dtsep>\^\^)
  | (?P<bnode>_:[A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?)
  | (?P<number>[+-]?(?:\d+\.\d+(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+))
  | (?P<pname>(?:[A-Za-z][\w\-]*(?:\.[\w\-]+)*)?:(?:[\w\-]|\.(?=[\w\-]))*)
  | (?P<keyword>[A-Za-z]+)
  | (?P<punct>[.;,])
    """,
    re.VERBOSE,
)

_UNESCAPE_RE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))")
_SIMPLE_UNESCAPES = {"t": "\t", "n": "\n", "r": "\r", "b": "\b", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def unescape_string(body: str) -> str:
    def repl(m: re.Match) -> str:
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        ch = m.group(3)
        if ch not in _SIMPLE_UNESCAPES:
            raise ValueError(f"invalid escape \\{ch}")
        return _SIMPLE_UNESCAPES[ch]

    return _UNESCAPE_RE.sub(repl, body)


@dataclass
class _Token:
    kind: str
    text: str
    line: int


def _tokenize(text: str) -> Iterator[_Token]:
    pos, line = 0, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise RdfSyntaxError(f"unexpected character {text[pos]!r}", line)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            yield _Token(kind, m.group(), line)
        line += m.group().count("\n")
        pos = m.end()


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1].line if self.tokens else 1
            raise RdfSyntaxError("unexpected end of input", last)
        self.pos += 1
        return tok

    def expect_punct(self, ch: str) -> None:
        tok = self.next()
        if tok.kind != "punct" or tok.text != ch:
            raise RdfSyntaxError(f"expected {ch!r}, found {tok.text!r}", tok.line)

    def parse(self) -> list[Triple]:
        while self.peek() is not None:
            tok = self.peek()
            if tok.kind == "langtag" and tok.text == "@prefix":
                self.next()
                self.prefix_decl(tok, sparql_style=False)
            elif tok.kind == "keyword" and tok.text.upper() == "PREFIX":
                self.next()
                self.prefix_decl(tok, sparql_style=True)
            else:
                self.statement()
        return self.triples

    def prefix_decl(self, start: _Token, sparql_style: bool) -> None:
        name = self.next()
        if name.kind != "pname" or not name.text.endswith(":"):
            raise RdfSyntaxError(f"expected prefix name, found {name.text!r}", name.line)
        iri = self.next()
        if iri.kind != "iri":
            raise RdfSyntaxError(f"expected IRI, found {iri.text!r}", iri.line)
        self.prefixes[name.text[:-1]] = iri.text[1:-1]
        if not sparql_style:
            self.expect_punct(".")

    def statement(self) -> None:
        subj_tok = self.peek()
        subject = self.term(self.next(), position="subject")
        while True:
            verb_tok = self.next()
            if verb_tok.kind == "keyword" and verb_tok.text == "a":
                predicate = Iri(RDF_TYPE)
            else:
                predicate = self.term(verb_tok, position="predicate")
            while True:
                obj = self.term(self.next(), position="object")
                try:
                    self.triples.append(Triple(subject, predicate, obj))
                except MalformedTermError as exc:
                    raise RdfSyntaxError(str(exc), subj_tok.line) from None
                sep = self.next()
                if sep.kind == "punct" and sep.text == ",":
                    continue
                break
            if sep.kind == "punct" and sep.text == ";":
                # a trailing ';' before '.' is allowed
                nxt = self.peek()
                if nxt is not None and nxt.kind == "punct" and nxt.text == ".":
                    self.next()
                    return
                continue
            if sep.kind == "punct" and sep.text == ".":
                return
            raise RdfSyntaxError(f"expected '.', ';' or ',', found {sep.text!r}", sep.line)

    def term(self, tok: _Token, position: str):
        kind = tok.kind
        if kind == "iri":
            return Iri(tok.text[1:-1])
        if kind == "pname":
            prefix, _, local = tok.text.partition(":")
            if prefix not in self.prefixes:
                raise RdfSyntaxError(f"unknown prefix {prefix!r}", tok.line)
            return Iri(self.prefixes[prefix] + local)
        if kind == "bnode":
            if position == "predicate":
                raise RdfSyntaxError("blank node as predicate", tok.line)
            return BlankNode(tok.text[2:])
        if position != "object":
            raise RdfSyntaxError(f"invalid {position} {tok.text!r}", tok.line)
        if kind == "string":
            try:
                lexical = unescape_string(tok.text[1:-1])
            except ValueError as exc:
                raise RdfSyntaxError(str(exc), tok.line) from None
            nxt = self.peek()
            if nxt is not None and nxt.kind == "langtag":
                self.next()
                return Literal(lexical, RDF_LANGSTRING, nxt.text[1:].lower())
            if nxt is not None and nxt.kind == "dtsep":
                self.next()
                dt_tok = self.next()
                if dt_tok.kind not in ("iri", "pname"):
                    raise RdfSyntaxError(f"expected datatype IRI, found {dt_tok.text!r}", dt_tok.line)
                return Literal(lexical, self.term(dt_tok, position="predicate").value)
            return Literal(lexical, XSD_STRING)
        if kind == "number":
            text = tok.text
            if "e" in text.lower():
                return Literal(text, XSD_DOUBLE)
            if "." in text:
                return Literal(text, XSD_DECIMAL)
            return Literal(text, XSD_INTEGER)
        if kind == "keyword" and tok.text in ("true", "false"):
            return Literal(tok.text, XSD_BOOLEAN)
        raise RdfSyntaxError(f"unexpected token {tok.text!r}", tok.line)


def parse_rdf(text: str) -> Graph:
    """Parse a data document into a new :class:`Graph`."""
    return Graph(parse_triples(text))


def parse_triples(text: str) -> list[Triple]:
    return _Parser(text).parse()


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    """Canonical N-Triples: full IRIs, one statement per line, sorted."""
    lines = sorted(t.n3() for t in triples)
    return "".join(line + "\n" for line in lines)
