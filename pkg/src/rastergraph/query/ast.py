"""Syntax tree for SELECT queries with FILTER, BIND and a MAX aggregate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..rdf import Iri, Literal, TriplePattern, Variable

# -- expressions -----------------------------------------------------------------


@dataclass(frozen=True)
class VarRef:
    var: Variable


@dataclass(frozen=True)
class Const:
    term: Union[Iri, Literal]


@dataclass(frozen=True)
class Call:
    function: str
    args: tuple


@dataclass(frozen=True)
class Compare:
    op: str  # one of = != < > <= >=
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class BoolOp:
    op: str  # and | or | not
    operands: tuple


@dataclass(frozen=True)
class Arith:
    op: str  # + - * /
    lhs: "Expr"
    rhs: "Expr"


Expr = Union[VarRef, Const, Call, Compare, BoolOp, Arith]

COMPARISON_OPS = ("=", "!=", "<", ">", "<=", ">=")
ARITHMETIC_OPS = ("+", "-", "*", "/")

# -- graph patterns ----------------------------------------------------------------


@dataclass(frozen=True)
class EmptyGroup:
    pass


@dataclass(frozen=True)
class PatternNode:
    pattern: TriplePattern


@dataclass(frozen=True)
class Block:
    body: "Node"


@dataclass(frozen=True)
class Conj:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Filter:
    body: "Node"
    cond: Expr


@dataclass(frozen=True)
class Bind:
    body: "Node"
    expr: Expr
    var: Variable


Node = Union[EmptyGroup, PatternNode, Block, Conj, Filter, Bind]

# -- query -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Aggregate:
    function: str  # only MAX
    over: Variable
    alias: Variable


@dataclass(frozen=True)
class SelectQuery:
    # None projects every in-scope variable (SELECT *)
    projection: Optional[tuple]
    body: Node
    prefixes: dict = field(default_factory=dict, compare=True, hash=False)

    @property
    def aggregate(self) -> Optional[Aggregate]:
        for item in self.projection or ():
            if isinstance(item, Aggregate):
                return item
        return None

    @property
    def group_keys(self) -> tuple:
        return tuple(v for v in self.projection or () if isinstance(v, Variable))

    def output_variables(self) -> Optional[list[Variable]]:
        if self.projection is None:
            return None
        return [item.alias if isinstance(item, Aggregate) else item for item in self.projection]


def expr_variables(e: Expr) -> set[Variable]:
    if isinstance(e, VarRef):
        return {e.var}
    if isinstance(e, Const):
        return set()
    if isinstance(e, Call):
        return set().union(*(expr_variables(a) for a in e.args))
    if isinstance(e, BoolOp):
        return set().union(*(expr_variables(a) for a in e.operands))
    return expr_variables(e.lhs) | expr_variables(e.rhs)


def node_variables(n: Node) -> list[Variable]:
    """Variables a pattern can bind, in first-occurrence order."""
    out: list[Variable] = []

    def visit(node: Node):
        if isinstance(node, PatternNode):
            for v in node.pattern.variables():
                if v not in out:
                    out.append(v)
        elif isinstance(node, Block):
            visit(node.body)
        elif isinstance(node, Conj):
            visit(node.left)
            visit(node.right)
        elif isinstance(node, Filter):
            visit(node.body)
        elif isinstance(node, Bind):
            visit(node.body)
            if node.var not in out:
                out.append(node.var)

    visit(n)
    return out
