"""RDF terms, an indexed in-memory graph and the binding algebra.

Bindings are plain dicts mapping :class:`Variable` to a value. Values are
usually RDF terms, but BIND may place computed values (geometries, rasters,
numbers) into a binding as well, so nothing here assumes a term.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Optional, Union

from .namespaces import RDF_LANGSTRING, XSD_STRING


class MalformedTermError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value:
            raise MalformedTermError("IRI must be non-empty")

    def n3(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def n3(self) -> str:
        return f"_:{self.label}"


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_string(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    language: Optional[str] = None

    def __post_init__(self):
        if self.language is not None and self.datatype != RDF_LANGSTRING:
            raise MalformedTermError("language tag requires rdf:langString datatype")
        if self.language is None and self.datatype == RDF_LANGSTRING:
            raise MalformedTermError("rdf:langString literal needs a language tag")

    def n3(self) -> str:
        body = f'"{escape_string(self.lexical)}"'
        if self.language is not None:
            return f"{body}@{self.language}"
        if self.datatype == XSD_STRING:
            return body
        return f"{body}^^<{self.datatype}>"


Term = Union[Iri, BlankNode, Literal]


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise MalformedTermError(f"literal in subject position: {self.subject.n3()}")
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise MalformedTermError(f"invalid subject {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise MalformedTermError(f"predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise MalformedTermError(f"invalid object {self.object!r}")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def __getitem__(self, pos: int) -> Term:
        return (self.subject, self.predicate, self.object)[pos]

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


PatternTerm = Union[Iri, BlankNode, Literal, Variable]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def variables(self) -> list[Variable]:
        seen: list[Variable] = []
        for t in self:
            if isinstance(t, Variable) and t not in seen:
                seen.append(t)
        return seen


Binding = dict  # Variable -> value


class Graph:
    """Set of triples with one hash index per position.

    The graph is meant to be filled once (``add`` / ``update``) and then only
    read, which makes it safe to share between concurrent query evaluations.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._index: tuple[dict, dict, dict] = (defaultdict(set), defaultdict(set), defaultdict(set))
        self.update(triples)

    def add(self, triple: Triple) -> bool:
        """Insert ``triple``; returns False when it was already present."""
        if not isinstance(triple, Triple):
            triple = Triple(*triple)
        if triple in self._triples:
            return False
        self._triples.add(triple)
        for pos, term in enumerate(triple):
            self._index[pos][term].add(triple)
        return True

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.add(t))

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: object) -> bool:
        return triple in self._triples

    def triples(self, s=None, p=None, o=None) -> Iterator[Triple]:
        """Triples matching the given fixed positions (None is a wildcard)."""
        fixed = [(pos, t) for pos, t in enumerate((s, p, o)) if t is not None]
        if not fixed:
            yield from self._triples
            return
        buckets = []
        for pos, term in fixed:
            bucket = self._index[pos].get(term)
            if not bucket:
                return
            buckets.append((pos, bucket))
        # scan the most selective bucket, check the remaining positions
        buckets.sort(key=lambda item: len(item[1]))
        _, smallest = buckets[0]
        for triple in smallest:
            if all(triple[pos] == term for pos, term in fixed):
                yield triple

    def match(self, pattern: TriplePattern) -> list[Binding]:
        return match_pattern(self, pattern)

    def index_consistent(self) -> bool:
        for pos in range(3):
            for term, bucket in self._index[pos].items():
                for t in bucket:
                    if t not in self._triples or t[pos] != term:
                        return False
        return all(t in self._index[pos].get(t[pos], ()) for t in self._triples for pos in range(3))


def match_pattern(graph: Graph, pattern: TriplePattern) -> list[Binding]:
    """All bindings ``mu`` with ``dom(mu) = var(tp)`` and ``mu(tp)`` in the graph."""
    fixed = [None if isinstance(t, Variable) else t for t in pattern]
    results = []
    for triple in graph.triples(*fixed):
        binding: Binding = {}
        ok = True
        for pterm, term in zip(pattern, triple):
            if isinstance(pterm, Variable):
                prev = binding.get(pterm)
                if prev is None:
                    binding[pterm] = term
                elif prev != term:
                    ok = False
                    break
        if ok:
            results.append(binding)
    return results


def compatible(mu1: Binding, mu2: Binding) -> bool:
    if len(mu2) < len(mu1):
        mu1, mu2 = mu2, mu1
    for var, value in mu1.items():
        if var in mu2 and not values_equal(mu2[var], value):
            return False
    return True


def values_equal(a: Any, b: Any) -> bool:
    if a is b:
        return True
    try:
        return bool(a == b)
    except (TypeError, ValueError):
        return False


def _join_key(binding: Binding, shared: list[Variable]):
    try:
        key = tuple(binding[v] for v in shared)
        hash(key)
        return key
    except TypeError:
        return None


def join(left: list[Binding], right: list[Binding]) -> list[Binding]:
    """Union of every compatible pair, hash-partitioned on always-bound shared variables."""
    if not left or not right:
        return []
    left_vars = set.intersection(*(set(b) for b in left))
    right_vars = set.intersection(*(set(b) for b in right))
    shared = sorted(left_vars & right_vars, key=lambda v: v.name)
    out: list[Binding] = []
    if not shared:
        for mu1 in left:
            for mu2 in right:
                if compatible(mu1, mu2):
                    out.append({**mu1, **mu2})
        return out
    table: dict = defaultdict(list)
    unhashable: list[Binding] = []
    for mu2 in right:
        key = _join_key(mu2, shared)
        if key is None:
            unhashable.append(mu2)
        else:
            table[key].append(mu2)
    for mu1 in left:
        key = _join_key(mu1, shared)
        candidates = table.get(key, []) if key is not None else [m for ms in table.values() for m in ms]
        for mu2 in [*candidates, *unhashable]:
            if compatible(mu1, mu2):
                out.append({**mu1, **mu2})
    return out
