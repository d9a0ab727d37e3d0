# coding: utf-8
"""Deduplicating store of Herbrand terms.

Terms are variables or applications of a function symbol to child terms.
Each distinct term is interned once and identified by an integer id, so
structural equality is id comparison and loop-generated terms whose tree
size grows exponentially stay polynomial in memory (a shared DAG).

Thread Safety:
    - intern(): lookup-or-insert under _lock, so concurrent callers interning
      the same structure always receive the same id
    - node()/render()/symbols_of(): read-only on append-only lists; memo
      tables are filled idempotently
"""

import threading
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple, Union

TermId = int


@dataclass(frozen=True)
class VarLeaf:
    """A variable used as a term (its value in the natural state)."""

    name: str


@dataclass(frozen=True)
class App:
    """Application of ``function`` to interned child terms."""

    function: str
    children: Tuple[TermId, ...] = ()


TermNode = Union[VarLeaf, App]


class TermStore:
    """Append-only hash-consing store for terms.

    Example:
        >>> store = TermStore()
        >>> u = store.var("u")
        >>> store.app("f", [store.app("h", [])]) == store.app("f", [store.app("h", [])])
        True
        >>> store.render(store.app("f", [u]))
        'f(u)'
    """

    def __init__(self) -> None:
        self._nodes: List[TermNode] = []
        self._ids: Dict[TermNode, TermId] = {}
        self._lock = threading.Lock()
        self._symbols: Dict[TermId, FrozenSet[str]] = {}

    def __len__(self) -> int:
        return len(self._nodes)

    def intern(self, node: TermNode) -> TermId:
        """Return the canonical id of ``node``, adding it if new."""
        existing = self._ids.get(node)
        if existing is not None:
            return existing
        with self._lock:
            existing = self._ids.get(node)
            if existing is not None:
                return existing
            if isinstance(node, App):
                for child in node.children:
                    if not 0 <= child < len(self._nodes):
                        raise ValueError(f"unknown child term id {child}")
            term_id = len(self._nodes)
            self._nodes.append(node)
            self._ids[node] = term_id
            return term_id

    def var(self, name: str) -> TermId:
        return self.intern(VarLeaf(name))

    def app(self, function: str, children: Sequence[TermId]) -> TermId:
        return self.intern(App(function, tuple(children)))

    def node(self, term_id: TermId) -> TermNode:
        return self._nodes[term_id]

    def render(self, term_id: TermId) -> str:
        """Render a term in fully parenthesised prefix form, e.g. ``f(g(),v)``.

        Output size is the tree size of the term, which may be exponential
        in the DAG size; use it for reports, not comparisons.
        """
        memo: Dict[TermId, str] = {}
        stack = [term_id]
        while stack:
            current = stack[-1]
            if current in memo:
                stack.pop()
                continue
            node = self._nodes[current]
            if isinstance(node, VarLeaf):
                memo[current] = node.name
                stack.pop()
                continue
            pending = [child for child in node.children if child not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[current] = f"{node.function}({','.join(memo[c] for c in node.children)})"
            stack.pop()
        return memo[term_id]

    def symbols_of(self, term_id: TermId) -> FrozenSet[str]:
        """Return the function symbols occurring in a term (memoised per id)."""
        stack = [term_id]
        while stack:
            current = stack[-1]
            if current in self._symbols:
                stack.pop()
                continue
            node = self._nodes[current]
            if isinstance(node, VarLeaf):
                self._symbols[current] = frozenset()
                stack.pop()
                continue
            pending = [child for child in node.children if child not in self._symbols]
            if pending:
                stack.extend(pending)
                continue
            merged = {node.function}
            for child in node.children:
                merged |= self._symbols[child]
            self._symbols[current] = frozenset(merged)
            stack.pop()
        return self._symbols[term_id]

    def depth(self, term_id: TermId, function: str) -> int:
        """Return the maximal nesting of ``function`` along any branch of a term."""
        memo: Dict[TermId, int] = {}
        stack = [term_id]
        while stack:
            current = stack[-1]
            if current in memo:
                stack.pop()
                continue
            node = self._nodes[current]
            if isinstance(node, VarLeaf):
                memo[current] = 0
                stack.pop()
                continue
            pending = [child for child in node.children if child not in memo]
            if pending:
                stack.extend(pending)
                continue
            below = max((memo[c] for c in node.children), default=0)
            memo[current] = below + (1 if node.function == function else 0)
            stack.pop()
        return memo[term_id]


# Shared store used when callers do not supply their own. It lives for the
# whole process and never shrinks; batch drivers (the CLI commands, round
# trips, the corpus runner, the scaling harness) pass a fresh TermStore per
# run so their terms are dropped with the run.
DEFAULT_STORE = TermStore()
