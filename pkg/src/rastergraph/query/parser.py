"""Recursive-descent parser for the SELECT subset.

Grammar covered: PREFIX declarations, ``SELECT`` with variables, ``*`` or
one ``(MAX(?v) AS ?w)``, a ``WHERE`` group holding triple patterns with
``;``/``,`` lists and ``a``, nested groups, ``FILTER`` and ``BIND``.
Expressions support ``|| && !`` (plus the ``AND``/``OR`` keywords),
comparisons, arithmetic and function calls by IRI or prefixed name.

Number literals inside expressions become ``xsd:decimal`` constants; in
triple patterns they keep the usual integer/decimal/double typing so they
can match data. FILTERs constrain the whole enclosing group; a BIND
extends everything written before it in its group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..namespaces import (
    DEFAULT_PREFIXES,
    RDF_LANGSTRING,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
)
from ..rdf import Iri, Literal, TriplePattern, Variable
from ..rdf_io import unescape_string
from .ast import (
    Aggregate,
    Arith,
    Bind,
    Block,
    BoolOp,
    Call,
    Compare,
    Conj,
    Const,
    EmptyGroup,
    Filter,
    PatternNode,
    SelectQuery,
    VarRef,
)


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownPrefixError(QuerySyntaxError):
    pass


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<var>[?$][A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
  | (?P<langtag>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dtsep>\^\^)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<pname>(?:[A-Za-z][\w\-]*(?:\.[\w\-]+)*)?:(?:[\w\-]|\.(?=[\w\-]))*)
  | (?P<word>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>&&|\|\||!=|<=|>=|[=<>!+\-*/])
  | (?P<punct>[{}().;,])
    """,
    re.VERBOSE,
)

_OPERAND_END = {"var", "string", "number", "pname", "iri", "word", "langtag"}


def _tokenize(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    depth = 0
    while pos < len(text):
        col = pos - line_start + 1
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind, value = m.lastgroup, m.group()
        prev = tokens[-1] if tokens else None
        # inside an expression '<' right after an operand is less-than, not an IRI
        if kind == "iri" and depth > 0 and prev is not None and (
            prev.kind in _OPERAND_END or prev.text == ")"
        ):
            m2 = re.compile(r"<=|<").match(text, pos)
            kind, value = "op", m2.group()
        # a trailing '.' after digits is the statement terminator in patterns
        if kind == "number" and value.endswith(".") and "e" not in value.lower():
            value = value[:-1]
        if kind not in ("ws", "comment"):
            tokens.append(_Tok(kind, value, line, col))
            if value == "(":
                depth += 1
            elif value == ")":
                depth = max(0, depth - 1)
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rfind("\n") + 1
        pos += len(value)
    tokens.append(_Tok("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.declared: dict[str, str] = {}
        self.prefixes = dict(DEFAULT_PREFIXES)

    # -- token helpers -----------------------------------------------------------

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def take(self) -> _Tok:
        tok = self.peek()
        if tok.kind != "eof":
            self.i += 1
        return tok

    def error(self, message: str, tok: _Tok | None = None) -> QuerySyntaxError:
        tok = tok or self.peek()
        return QuerySyntaxError(message, tok.line, tok.col)

    def is_word(self, word: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok.kind == "word" and tok.text.upper() == word

    def is_sym(self, sym: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok.kind in ("punct", "op") and tok.text == sym

    def expect_sym(self, sym: str) -> _Tok:
        if not self.is_sym(sym):
            tok = self.peek()
            raise self.error(f"expected {sym!r}, found {tok.text or 'end of input'!r}")
        return self.take()

    def expect_word(self, word: str) -> _Tok:
        if not self.is_word(word):
            tok = self.peek()
            raise self.error(f"expected {word}, found {tok.text or 'end of input'!r}")
        return self.take()

    def variable(self) -> Variable:
        tok = self.take()
        if tok.kind != "var":
            raise self.error(f"expected variable, found {tok.text or 'end of input'!r}", tok)
        return Variable(tok.text[1:])

    def expand(self, tok: _Tok) -> str:
        prefix, _, local = tok.text.partition(":")
        if prefix not in self.prefixes:
            raise UnknownPrefixError(f"unknown prefix {prefix!r}", tok.line, tok.col)
        return self.prefixes[prefix] + local

    # -- query -------------------------------------------------------------------------

    def query(self) -> SelectQuery:
        while self.is_word("PREFIX"):
            self.take()
            tok = self.take()
            if tok.kind != "pname" or not tok.text.endswith(":"):
                raise self.error("expected prefix name like 'ex:'", tok)
            iri = self.take()
            if iri.kind != "iri":
                raise self.error("expected IRI in PREFIX declaration", iri)
            name = tok.text[:-1]
            self.declared[name] = iri.text[1:-1]
            self.prefixes[name] = iri.text[1:-1]
        self.expect_word("SELECT")
        projection = self.projection()
        if self.is_word("WHERE"):
            self.take()
        body = self.group()
        if self.peek().kind != "eof":
            raise self.error(f"unexpected {self.peek().text!r} after query")
        return SelectQuery(projection, body, dict(self.declared))

    def projection(self):
        if self.is_sym("*"):
            self.take()
            return None
        items: list = []
        while True:
            tok = self.peek()
            if tok.kind == "var":
                items.append(self.variable())
            elif self.is_sym("("):
                self.take()
                if not self.is_word("MAX"):
                    raise self.error(f"unsupported aggregate {self.peek().text!r}; only MAX is available")
                self.take()
                self.expect_sym("(")
                over = self.variable()
                self.expect_sym(")")
                self.expect_word("AS")
                alias = self.variable()
                self.expect_sym(")")
                if any(isinstance(it, Aggregate) for it in items):
                    raise self.error("only one aggregate is supported", tok)
                items.append(Aggregate("MAX", over, alias))
            else:
                break
        if not items:
            raise self.error("SELECT needs at least one variable or '*'")
        return tuple(items)

    def group(self):
        self.expect_sym("{")
        acc = None
        filters = []
        while not self.is_sym("}"):
            tok = self.peek()
            if tok.kind == "eof":
                raise self.error("unterminated group, expected '}'")
            if self.is_word("FILTER"):
                self.take()
                filters.append(self.filter_body())
            elif self.is_word("BIND"):
                self.take()
                self.expect_sym("(")
                expr = self.expression()
                self.expect_word("AS")
                var = self.variable()
                self.expect_sym(")")
                acc = Bind(acc if acc is not None else EmptyGroup(), expr, var)
            elif self.is_sym("{"):
                inner = Block(self.group())
                acc = inner if acc is None else Conj(acc, inner)
            elif self.is_sym("."):
                self.take()
            else:
                for pattern in self.triples_block():
                    node = PatternNode(pattern)
                    acc = node if acc is None else Conj(acc, node)
        self.take()
        body = acc if acc is not None else EmptyGroup()
        for cond in filters:
            body = Filter(body, cond)
        return body

    def filter_body(self):
        if self.is_sym("("):
            self.take()
            expr = self.expression()
            self.expect_sym(")")
            return expr
        tok = self.peek()
        if tok.kind in ("pname", "iri") and self.is_sym("(", 1):
            return self.primary()
        raise self.error("FILTER needs a parenthesized expression or a function call")

    # -- triple patterns ------------------------------------------------------------

    def triples_block(self) -> list[TriplePattern]:
        subject = self.pattern_term("subject")
        out: list[TriplePattern] = []
        while True:
            if self.is_word("A") and self.peek().text == "a":
                self.take()
                predicate = Iri(RDF_TYPE)
            else:
                predicate = self.pattern_term("predicate")
            while True:
                obj = self.pattern_term("object")
                out.append(TriplePattern(subject, predicate, obj))
                if self.is_sym(","):
                    self.take()
                    continue
                break
            if self.is_sym(";"):
                self.take()
                while self.is_sym(";"):
                    self.take()
                if self.is_sym(".") or self.is_sym("}"):
                    break
                continue
            break
        if self.is_sym("."):
            self.take()
        return out

    def pattern_term(self, position: str):
        tok = self.peek()
        if tok.kind == "var":
            return self.variable()
        if tok.kind == "iri":
            self.take()
            return Iri(tok.text[1:-1])
        if tok.kind == "pname":
            self.take()
            return Iri(self.expand(tok))
        if position == "object" or position == "subject":
            if tok.kind in ("string", "number") or self.is_word("TRUE") or self.is_word("FALSE"):
                term = self.literal(expression=False)
                if position == "subject":
                    raise self.error("literal in subject position", tok)
                return term
            if position == "object" and self.is_sym("-") and self.peek(1).kind == "number":
                return self.literal(expression=False)
        raise self.error(f"expected {position}, found {tok.text or 'end of input'!r}", tok)

    def literal(self, expression: bool) -> Literal:
        tok = self.take()
        if tok.kind == "op" and tok.text == "-":
            num = self.take()
            return self._number("-" + num.text, expression)
        if tok.kind == "number":
            return self._number(tok.text, expression)
        if tok.kind == "word":
            return Literal(tok.text.lower(), XSD_BOOLEAN)
        if tok.kind != "string":
            raise self.error("expected literal", tok)
        try:
            lexical = unescape_string(tok.text[1:-1])
        except ValueError as exc:
            raise self.error(str(exc), tok) from None
        if self.peek().kind == "langtag":
            lang = self.take().text[1:]
            return Literal(lexical, RDF_LANGSTRING, lang)
        if self.peek().kind == "dtsep":
            self.take()
            dt = self.take()
            if dt.kind == "iri":
                return Literal(lexical, dt.text[1:-1])
            if dt.kind == "pname":
                return Literal(lexical, self.expand(dt))
            raise self.error("expected datatype IRI after '^^'", dt)
        return Literal(lexical, XSD_STRING)

    def _number(self, text: str, expression: bool) -> Literal:
        if expression:
            return Literal(text, XSD_DECIMAL)
        if "e" in text.lower():
            return Literal(text, XSD_DOUBLE)
        if "." in text:
            return Literal(text, XSD_DECIMAL)
        return Literal(text, XSD_INTEGER)

    # -- expressions ---------------------------------------------------------------

    def expression(self):
        left = self.and_expr()
        while self.is_sym("||") or self.is_word("OR"):
            self.take()
            left = BoolOp("or", (left, self.and_expr()))
        return left

    def and_expr(self):
        left = self.relational()
        while self.is_sym("&&") or self.is_word("AND"):
            self.take()
            left = BoolOp("and", (left, self.relational()))
        return left

    def relational(self):
        left = self.additive()
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("=", "!=", "<", ">", "<=", ">="):
            self.take()
            return Compare(tok.text, left, self.additive())
        return left

    def additive(self):
        left = self.multiplicative()
        while self.is_sym("+") or self.is_sym("-"):
            op = self.take().text
            left = Arith(op, left, self.multiplicative())
        return left

    def multiplicative(self):
        left = self.unary()
        while self.is_sym("*") or self.is_sym("/"):
            op = self.take().text
            left = Arith(op, left, self.unary())
        return left

    def unary(self):
        if self.is_sym("!"):
            self.take()
            return BoolOp("not", (self.unary(),))
        if self.is_sym("-"):
            if self.peek(1).kind == "number":
                return Const(self.literal(expression=True))
            self.take()
            return Arith("-", Const(Literal("0", XSD_DECIMAL)), self.unary())
        if self.is_sym("+"):
            self.take()
            return self.unary()
        return self.primary()

    def primary(self):
        tok = self.peek()
        if self.is_sym("("):
            self.take()
            inner = self.expression()
            self.expect_sym(")")
            return inner
        if tok.kind == "var":
            return VarRef(self.variable())
        if tok.kind in ("iri", "pname"):
            self.take()
            iri = tok.text[1:-1] if tok.kind == "iri" else self.expand(tok)
            if self.is_sym("("):
                self.take()
                args = []
                if not self.is_sym(")"):
                    args.append(self.expression())
                    while self.is_sym(","):
                        self.take()
                        args.append(self.expression())
                self.expect_sym(")")
                return Call(iri, tuple(args))
            return Const(Iri(iri))
        if tok.kind in ("string", "number") or self.is_word("TRUE") or self.is_word("FALSE"):
            return Const(self.literal(expression=True))
        raise self.error(f"expected expression, found {tok.text or 'end of input'!r}")


def parse_query(text: str) -> SelectQuery:
    return _Parser(text).query()
