"""Rooted trees with named edges, planar vertex ordering, and elementary surgeries.

A tree is stored as its root edge plus, for every edge that carries a vertex
on its far side, the planar-ordered tuple of that vertex's input edges.
Vertices are identified by their output edge, so ``r(a,b)`` has a single
vertex named ``r``.  Edges that are nobody's output are leaves; the tree with
one edge and no vertices is the trivial tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class TreeError(ValueError):
    """Structural problem with a tree or a surgery's preconditions."""


class TreeSyntaxError(TreeError):
    """Bad tree term. ``position`` is the 0-based offset into the input."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Tree:
    """Immutable rooted tree with a planar order on each vertex's inputs.

    ``vertices`` maps an edge name to the inputs of the vertex whose output
    it is; edges absent from the mapping (other than via inputs) are leaves.
    Nullary vertices (stumps) are allowed: map the edge to ``()``.
    """

    __slots__ = ("root", "_vertices", "_edges", "_vertex_keys", "_parent")

    def __init__(self, root: str, vertices: Mapping[str, Iterable[str]]):
        self.root = root
        self._vertices = {v: tuple(ins) for v, ins in vertices.items()}
        self._edges, self._vertex_keys, self._parent = self._check()

    def _check(self) -> tuple[tuple[str, ...], tuple[str, ...], dict[str, tuple[str, int]]]:
        for name in [self.root, *self._vertices, *(e for ins in self._vertices.values() for e in ins)]:
            if not (isinstance(name, str) and IDENT.fullmatch(name)):
                raise TreeError(f"bad edge name {name!r}")
        seen: dict[str, None] = {}
        vertex_keys: list[str] = []
        parent: dict[str, tuple[str, int]] = {}
        # planar preorder walk from the root
        stack = [self.root]
        while stack:
            e = stack.pop()
            if e in seen:
                raise TreeError(f"edge {e!r} used twice")
            seen[e] = None
            if e in self._vertices:
                vertex_keys.append(e)
                ins = self._vertices[e]
                if len(set(ins)) != len(ins):
                    raise TreeError(f"vertex {e!r} repeats an input edge")
                for pos, child in enumerate(ins):
                    if child == self.root:
                        raise TreeError("root edge cannot be a vertex input")
                    parent[child] = (e, pos + 1)
                stack.extend(reversed(ins))
        if len(seen) != len(set(self._vertices) | {self.root} | {e for ins in self._vertices.values() for e in ins}):
            raise TreeError("tree is not connected to the root")
        return tuple(seen), tuple(vertex_keys), parent

    # -- queries ---------------------------------------------------------

    @property
    def edges(self) -> tuple[str, ...]:
        """All edges, in planar preorder from the root."""
        return self._edges

    @property
    def vertices(self) -> tuple[str, ...]:
        """Vertex identifiers (output edges), in planar preorder."""
        return self._vertex_keys

    def inputs(self, v: str) -> tuple[str, ...]:
        """Planar-ordered input edges of vertex ``v``."""
        try:
            return self._vertices[v]
        except KeyError:
            raise TreeError(f"no vertex with output edge {v!r}") from None

    def has_vertex(self, e: str) -> bool:
        return e in self._vertices

    def is_leaf(self, e: str) -> bool:
        if e not in self._edges:
            raise TreeError(f"no edge named {e!r}")
        return e not in self._vertices

    def leaves(self) -> tuple[str, ...]:
        return tuple(e for e in self._edges if e not in self._vertices)

    def inner_edges(self) -> tuple[str, ...]:
        """Edges that are neither the root nor a leaf."""
        return tuple(e for e in self._edges if e != self.root and e in self._vertices)

    def parent_of(self, e: str) -> tuple[str, int]:
        """Vertex having ``e`` among its inputs, with the 1-based slot."""
        try:
            return self._parent[e]
        except KeyError:
            raise TreeError(f"edge {e!r} has no parent vertex") from None

    def is_trivial(self) -> bool:
        return not self._vertices

    def is_corolla(self) -> bool:
        return len(self._vertices) == 1

    def is_linear(self) -> bool:
        return all(len(self.inputs(v)) == 1 for v in self._vertex_keys)

    def vertex_map(self) -> dict[str, tuple[str, ...]]:
        return dict(self._vertices)

    # -- equality / display ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Tree)
            and self.root == other.root
            and self._vertices == other._vertices
        )

    def __hash__(self) -> int:
        return hash((self.root, frozenset(self._vertices.items())))

    def __repr__(self) -> str:
        return f"Tree({format_tree(self)!r})"

    def __str__(self) -> str:
        return format_tree(self)


@dataclass(frozen=True)
class MergeRecord:
    """Bookkeeping for an inner-edge contraction.

    ``upper`` is the vertex whose output was the contracted edge, ``lower``
    the vertex that consumed it at 1-based input ``slot``; the merged vertex
    keeps ``lower``'s output edge.
    """

    upper: str
    lower: str
    slot: int


def trivial_tree(edge: str = "e") -> Tree:
    return Tree(edge, {})


def corolla(root: str, leaves: Iterable[str]) -> Tree:
    return Tree(root, {root: tuple(leaves)})


def linear_tree(k: int, prefix: str = "e") -> Tree:
    """Linear tree with ``k`` unary vertices: edges e0 (root) .. ek (leaf)."""
    if k < 0:
        raise TreeError("vertex count must be >= 0")
    names = [f"{prefix}{i}" for i in range(k + 1)]
    return Tree(names[0], {names[i]: (names[i + 1],) for i in range(k)})


# -- term grammar ----------------------------------------------------------
#
#   tree := IDENT | IDENT "(" [tree ("," tree)*] ")"
#
# Child order is the planar order; a bare identifier is a leaf; the top
# identifier is the root edge.  Whitespace between tokens is ignored.


def parse_tree(text: str) -> Tree:
    """Parse a tree term.  Raises :class:`TreeSyntaxError` with a position."""
    parser = _TermParser(text)
    root, vertices = parser.parse()
    return Tree(root, vertices)


class _TermParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.names: dict[str, int] = {}
        self.vertices: dict[str, tuple[str, ...]] = {}

    def parse(self) -> tuple[str, dict[str, tuple[str, ...]]]:
        root = self.term()
        self.skip_ws()
        if self.pos != len(self.text):
            raise TreeSyntaxError("trailing input after tree term", self.pos)
        return root, self.vertices

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def term(self) -> str:
        self.skip_ws()
        m = IDENT.match(self.text, self.pos)
        if m is None:
            raise TreeSyntaxError("expected an edge name", self.pos)
        name = m.group()
        if name in self.names:
            raise TreeSyntaxError(f"duplicate edge name {name!r}", self.pos)
        self.names[name] = self.pos
        self.pos = m.end()
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "(":
            self.pos += 1
            children: list[str] = []
            self.skip_ws()
            if self.pos < len(self.text) and self.text[self.pos] == ")":
                self.pos += 1
            else:
                while True:
                    children.append(self.term())
                    self.skip_ws()
                    if self.pos >= len(self.text):
                        raise TreeSyntaxError("unclosed '('", self.pos)
                    ch = self.text[self.pos]
                    self.pos += 1
                    if ch == ")":
                        break
                    if ch != ",":
                        raise TreeSyntaxError("expected ',' or ')'", self.pos - 1)
            self.vertices[name] = tuple(children)
        return name


def format_tree(tree: Tree) -> str:
    """Normalized term for ``tree``; inverse of :func:`parse_tree`."""

    def fmt(edge: str) -> str:
        if tree.has_vertex(edge):
            return edge + "(" + ",".join(fmt(c) for c in tree.inputs(edge)) + ")"
        return edge

    return fmt(tree.root)


# -- elementary surgeries ---------------------------------------------------


def contract_inner_edge(tree: Tree, edge: str) -> tuple[Tree, MergeRecord]:
    """Contract an inner edge, merging the two vertices it connects.

    The merged vertex keeps the lower vertex's output; its inputs are the
    lower vertex's inputs with the contracted slot replaced, in place, by the
    upper vertex's input list (planar splice).
    """
    if edge not in tree.edges:
        raise TreeError(f"no edge named {edge!r}")
    if edge == tree.root or not tree.has_vertex(edge):
        raise TreeError(f"edge {edge!r} is not inner")
    lower, slot = tree.parent_of(edge)
    upper_inputs = tree.inputs(edge)
    vertices = tree.vertex_map()
    del vertices[edge]
    ins = vertices[lower]
    vertices[lower] = ins[: slot - 1] + upper_inputs + ins[slot:]
    return Tree(tree.root, vertices), MergeRecord(upper=edge, lower=lower, slot=slot)


def chop_top_vertex(tree: Tree, v: str) -> Tree:
    """Remove a vertex all of whose inputs are leaves; its output becomes a leaf.

    On a corolla this yields the trivial tree on the output edge.
    """
    ins = tree.inputs(v)
    bad = [e for e in ins if tree.has_vertex(e)]
    if bad:
        raise TreeError(f"vertex {v!r} has non-leaf input {bad[0]!r}")
    vertices = tree.vertex_map()
    del vertices[v]
    return Tree(tree.root, vertices)


def chop_root_vertex(tree: Tree) -> Tree:
    """Remove the root vertex, its output edge, and its leaf inputs.

    Defined when the root vertex has exactly one non-leaf input; that input
    becomes the new root.
    """
    if tree.is_trivial():
        raise TreeError("trivial tree has no root vertex")
    ins = tree.inputs(tree.root)
    inner = [e for e in ins if tree.has_vertex(e)]
    if len(inner) != 1:
        raise TreeError(
            f"root vertex has {len(inner)} non-leaf inputs; root chop needs exactly 1"
        )
    new_root = inner[0]
    keep: dict[str, tuple[str, ...]] = {}
    stack = [new_root]
    while stack:
        e = stack.pop()
        if tree.has_vertex(e):
            keep[e] = tree.inputs(e)
            stack.extend(tree.inputs(e))
    return Tree(new_root, keep)
