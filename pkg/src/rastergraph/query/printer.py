"""Render a query tree back to text that parses to the same tree."""

from __future__ import annotations

from ..rdf import Iri, Literal, Variable
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


def _term(t) -> str:
    if isinstance(t, Variable):
        return str(t)
    if isinstance(t, (Iri, Literal)):
        return t.n3()
    raise TypeError(f"cannot print term {t!r}")


def expr_text(e) -> str:
    if isinstance(e, VarRef):
        return str(e.var)
    if isinstance(e, Const):
        return _term(e.term)
    if isinstance(e, Call):
        return f"<{e.function}>(" + ", ".join(expr_text(a) for a in e.args) + ")"
    if isinstance(e, Compare):
        return f"({expr_text(e.lhs)} {e.op} {expr_text(e.rhs)})"
    if isinstance(e, Arith):
        return f"({expr_text(e.lhs)} {e.op} {expr_text(e.rhs)})"
    if isinstance(e, BoolOp):
        if e.op == "not":
            return f"!{expr_text(e.operands[0])}" if isinstance(
                e.operands[0], (VarRef, Call, Const)
            ) else f"!({expr_text(e.operands[0])})"
        joiner = " && " if e.op == "and" else " || "
        return "(" + joiner.join(expr_text(a) for a in e.operands) + ")"
    raise TypeError(f"cannot print expression {e!r}")


def _elements(node) -> list[str]:
    if isinstance(node, EmptyGroup):
        return []
    if isinstance(node, PatternNode):
        p = node.pattern
        return [f"{_term(p.subject)} {_term(p.predicate)} {_term(p.object)} ."]
    if isinstance(node, Conj):
        return _elements(node.left) + _nested(node.right)
    if isinstance(node, Bind):
        return _elements(node.body) + [f"BIND({expr_text(node.expr)} AS {node.var})"]
    if isinstance(node, Block):
        return ["{ " + " ".join(_group_items(node.body)) + " }"]
    # a FILTER below the top of a group needs its own braces to keep its scope
    return ["{ " + " ".join(_group_items(node)) + " }"]


def _nested(node) -> list[str]:
    if isinstance(node, (PatternNode, Block)):
        return _elements(node)
    return ["{ " + " ".join(_group_items(node)) + " }"]


def _group_items(node) -> list[str]:
    filters = []
    while isinstance(node, Filter):
        filters.insert(0, node.cond)
        node = node.body
    return _elements(node) + [f"FILTER({expr_text(c)})" for c in filters]


def query_text(q: SelectQuery) -> str:
    lines = [f"PREFIX {name}: <{iri}>" for name, iri in q.prefixes.items()]
    if q.projection is None:
        head = "*"
    else:
        head = " ".join(
            f"(MAX({it.over}) AS {it.alias})" if isinstance(it, Aggregate) else str(it)
            for it in q.projection
        )
    lines.append(f"SELECT {head} WHERE {{")
    lines += ["  " + item for item in _group_items(q.body)]
    lines.append("}")
    return "\n".join(lines)
