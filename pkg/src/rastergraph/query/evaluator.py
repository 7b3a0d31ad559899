"""Evaluation of query trees over a graph.

Patterns, groups and conjunctions evaluate to binding lists joined with a
hash join. FILTER keeps the bindings whose condition is true; a condition
that errors counts as false. BIND extends each binding whose target
variable is still unbound; a failing expression drops that binding, and a
list value (from ``cellval2``) yields one binding per element.

SELECT results are bags: duplicates survive projection. With a MAX
aggregate, rows are grouped on the plain projected variables.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime

from ..geometry import GeometryError
from ..raster import RasterError
from ..rdf import Binding, Graph, Literal, Variable, join, match_pattern, values_equal
from .ast import (
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
    node_variables,
)
from .functions import lookup
from .values import EvalError, is_number, native, to_term

_LOWER_ERRORS = (GeometryError, RasterError, ValueError, ZeroDivisionError, OverflowError)


@dataclass
class EvalContext:
    """Per-query state: a memo of builtin results keyed on hashable arguments."""

    memo: dict = field(default_factory=dict)
    memoize: bool = True

    def call(self, iri: str, args: list):
        builtin = lookup(iri)
        key = None
        if self.memoize:
            try:
                # type names keep 1, 1.0 and True apart
                key = (iri, tuple((type(a).__name__, a) for a in args))
                hash(key)
            except TypeError:
                key = None
            if key is not None and key in self.memo:
                result = self.memo[key]
                if isinstance(result, EvalError):
                    raise result
                return result
        try:
            result = builtin(*args)
        except EvalError as exc:
            if key is not None:
                self.memo[key] = exc
            raise
        except _LOWER_ERRORS as exc:
            err = EvalError(f"<{iri}>: {exc}")
            if key is not None:
                self.memo[key] = err
            raise err from None
        if key is not None:
            self.memo[key] = result
        return result


# -- expressions ---------------------------------------------------------------------


def _raw(e, mu: Binding, ctx: EvalContext):
    """Evaluate without coercing bound terms, so term equality stays available."""
    if isinstance(e, VarRef):
        if e.var not in mu:
            raise EvalError(f"unbound variable {e.var}")
        return mu[e.var]
    if isinstance(e, Const):
        return e.term
    return eval_expression(e, mu, ctx)


def effective_boolean(v) -> bool:
    if isinstance(v, bool):
        return v
    if is_number(v):
        return v != 0 and not math.isnan(v)
    if isinstance(v, str):
        return bool(v)
    raise EvalError(f"no truth value for {type(v).__name__}")


def _compare(op: str, a_raw, b_raw) -> bool:
    a, b = native(a_raw), native(b_raw)
    if is_number(a) and is_number(b) or (
        isinstance(a, bool) and isinstance(b, bool)
    ) or (isinstance(a, str) and isinstance(b, str)) or (
        isinstance(a, datetime) and isinstance(b, datetime)
    ):
        try:
            if op == "=":
                return a == b
            if op == "!=":
                return a != b
            if op == "<":
                return a < b
            if op == ">":
                return a > b
            if op == "<=":
                return a <= b
            if op == ">=":
                return a >= b
        except TypeError as exc:
            # e.g. timezone-aware against naive datetimes
            raise EvalError(str(exc)) from None
    if op == "=":
        return values_equal(a_raw, b_raw)
    if op == "!=":
        return not values_equal(a_raw, b_raw)
    raise EvalError(f"cannot order {type(a).__name__} against {type(b).__name__}")


def eval_expression(e, mu: Binding, ctx: EvalContext | None = None):
    """Value of ``e`` under ``mu``; raises :class:`EvalError` when undefined."""
    ctx = ctx or EvalContext(memoize=False)
    if isinstance(e, (VarRef, Const)):
        return native(_raw(e, mu, ctx))
    if isinstance(e, Call):
        args = [native(_raw(a, mu, ctx)) for a in e.args]
        return ctx.call(e.function, args)
    if isinstance(e, Compare):
        return _compare(e.op, _raw(e.lhs, mu, ctx), _raw(e.rhs, mu, ctx))
    if isinstance(e, Arith):
        a = eval_expression(e.lhs, mu, ctx)
        b = eval_expression(e.rhs, mu, ctx)
        if not (is_number(a) and is_number(b)):
            raise EvalError(f"arithmetic on {type(a).__name__} and {type(b).__name__}")
        if e.op == "+":
            out = a + b
        elif e.op == "-":
            out = a - b
        elif e.op == "*":
            out = a * b
        else:
            if b == 0:
                raise EvalError("division by zero")
            out = a / b
        return float(out)
    if isinstance(e, BoolOp):
        if e.op == "not":
            return not effective_boolean(eval_expression(e.operands[0], mu, ctx))
        # SPARQL three-valued logic: a decisive operand beats an error
        decisive = e.op == "or"
        error = None
        for operand in e.operands:
            try:
                if effective_boolean(eval_expression(operand, mu, ctx)) == decisive:
                    return decisive
            except EvalError as exc:
                error = exc
        if error is not None:
            raise error
        return not decisive
    raise EvalError(f"unknown expression node {e!r}")


def satisfies_filter(cond, mu: Binding, ctx: EvalContext | None = None) -> bool:
    try:
        return effective_boolean(eval_expression(cond, mu, ctx))
    except EvalError:
        return False


# -- graph patterns ----------------------------------------------------------------------


def eval_bgp(node, graph: Graph, ctx: EvalContext | None = None) -> list[Binding]:
    ctx = ctx or EvalContext()
    if isinstance(node, EmptyGroup):
        return [{}]
    if isinstance(node, PatternNode):
        return match_pattern(graph, node.pattern)
    if isinstance(node, Block):
        return eval_bgp(node.body, graph, ctx)
    if isinstance(node, Conj):
        return join(eval_bgp(node.left, graph, ctx), eval_bgp(node.right, graph, ctx))
    if isinstance(node, Filter):
        return [mu for mu in eval_bgp(node.body, graph, ctx) if satisfies_filter(node.cond, mu, ctx)]
    if isinstance(node, Bind):
        out: list[Binding] = []
        for mu in eval_bgp(node.body, graph, ctx):
            if node.var in mu:
                continue
            try:
                value = eval_expression(node.expr, mu, ctx)
            except EvalError:
                continue
            if isinstance(value, list):
                out.extend({**mu, node.var: v} for v in value)
            else:
                out.append({**mu, node.var: value})
        return out
    raise TypeError(f"unknown pattern node {node!r}")


# -- SELECT --------------------------------------------------------------------------------


@dataclass
class ResultTable:
    variables: list[Variable]
    rows: list[tuple]  # terms, None where unbound

    def to_tsv(self) -> str:
        lines = ["\t".join(str(v) for v in self.variables)]
        for row in self.rows:
            lines.append("\t".join("" if t is None else t.n3() for t in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "vars": [v.name for v in self.variables],
            "rows": [
                {v.name: t.n3() for v, t in zip(self.variables, row) if t is not None}
                for row in self.rows
            ],
        }
        return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"

    def column(self, name: str) -> list:
        idx = [v.name for v in self.variables].index(name)
        return [row[idx] for row in self.rows]


def _row_key(row: tuple):
    return tuple("" if t is None else t.n3() for t in row)


def _term_or_none(value):
    if value is None:
        return None
    try:
        return to_term(value)
    except EvalError:
        return None


def eval_select(q: SelectQuery, graph: Graph, ctx: EvalContext | None = None) -> ResultTable:
    ctx = ctx or EvalContext()
    solutions = eval_bgp(q.body, graph, ctx)
    variables = q.output_variables()
    if variables is None:
        variables = node_variables(q.body)
    agg = q.aggregate
    rows: list[tuple]
    if agg is None:
        rows = [tuple(_term_or_none(mu.get(v)) for v in variables) for mu in solutions]
    else:
        keys = q.group_keys
        groups: dict[tuple, list] = {}
        for mu in solutions:
            key = tuple(_term_or_none(mu.get(v)) for v in keys)
            bucket = groups.setdefault(key, [])
            if agg.over in mu:
                try:
                    value = native(mu[agg.over])
                except EvalError:
                    continue
                if is_number(value):
                    bucket.append(float(value))
        # an aggregate without group keys still yields one row over the whole solution set
        if not keys and not groups:
            groups[()] = []
        rows = []
        for key, values in groups.items():
            best = max(values) if values else None
            by_var = dict(zip(keys, key))
            by_var[agg.alias] = None if best is None else to_term(best)
            rows.append(tuple(by_var.get(v) for v in variables))
    rows.sort(key=_row_key)
    return ResultTable(list(variables), rows)


def run_query(text: str, graph: Graph) -> ResultTable:
    from .parser import parse_query

    return eval_select(parse_query(text), graph)


def numeric_value(term) -> float:
    """Float value of a numeric result term (test and CLI helper)."""
    if isinstance(term, Literal):
        v = native(term)
        if is_number(v):
            return float(v)
    raise EvalError(f"not a numeric term: {term!r}")
