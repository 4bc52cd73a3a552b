"""Elementary face maps and isomorphisms of trees, and their composites.

An elementary morphism embeds a smaller tree into a bigger one (or relabels
it).  Composites are stored as composable chains; the induced map on edge
names is what identifies a morphism: two chains with equal source, target,
and edge map denote the same morphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .trees import (
    MergeRecord,
    Tree,
    TreeError,
    chop_root_vertex,
    chop_top_vertex,
    contract_inner_edge,
    format_tree,
    parse_tree,
    trivial_tree,
)


class MorphismError(ValueError):
    """Ill-formed or non-composable morphism data."""


@dataclass(frozen=True)
class InnerFace:
    edge: str


@dataclass(frozen=True)
class OuterTopFace:
    vertex: str


@dataclass(frozen=True)
class OuterRootFace:
    pass


@dataclass(frozen=True)
class EdgeInclusion:
    edge: str


@dataclass(frozen=True)
class Iso:
    # source edge -> target edge, stored sorted for hashability
    pairs: tuple[tuple[str, str], ...]


Kind = InnerFace | OuterTopFace | OuterRootFace | EdgeInclusion | Iso


@dataclass(frozen=True)
class ElementaryMorphism:
    """One face map or isomorphism, from ``source`` into ``target``."""

    kind: Kind
    source: Tree
    target: Tree
    merge: MergeRecord | None = field(default=None, compare=False)

    def edge_map(self) -> dict[str, str]:
        """Induced map on edge names, source edge -> target edge."""
        if isinstance(self.kind, Iso):
            return dict(self.kind.pairs)
        if isinstance(self.kind, EdgeInclusion):
            return {self.source.root: self.kind.edge}
        return {e: e for e in self.source.edges}

    def vertex_images(self) -> dict[str, frozenset[str]]:
        """Vertices of the source -> the target vertices they cover."""
        if isinstance(self.kind, InnerFace):
            assert self.merge is not None
            out: dict[str, frozenset[str]] = {
                v: frozenset({v}) for v in self.source.vertices
            }
            out[self.merge.lower] = frozenset({self.merge.lower, self.merge.upper})
            return out
        if isinstance(self.kind, Iso):
            m = dict(self.kind.pairs)
            return {v: frozenset({m[v]}) for v in self.source.vertices}
        return {v: frozenset({v}) for v in self.source.vertices}


def inner_face(target: Tree, edge: str) -> ElementaryMorphism:
    source, merge = contract_inner_edge(target, edge)
    return ElementaryMorphism(InnerFace(edge), source, target, merge)


def outer_top_face(target: Tree, vertex: str) -> ElementaryMorphism:
    return ElementaryMorphism(OuterTopFace(vertex), chop_top_vertex(target, vertex), target)


def outer_root_face(target: Tree) -> ElementaryMorphism:
    return ElementaryMorphism(OuterRootFace(), chop_root_vertex(target), target)


def edge_inclusion(target: Tree, edge: str) -> ElementaryMorphism:
    if edge not in target.edges:
        raise TreeError(f"no edge named {edge!r}")
    return ElementaryMorphism(EdgeInclusion(edge), trivial_tree(edge), target)


def iso(source: Tree, target: Tree, mapping: dict[str, str]) -> ElementaryMorphism:
    """Isomorphism given by an edge bijection.

    Must send root to root and respect vertex incidences; planar input
    orders need not be preserved.
    """
    if sorted(mapping) != sorted(source.edges) or sorted(mapping.values()) != sorted(target.edges):
        raise MorphismError("mapping is not a bijection between the edge sets")
    if mapping[source.root] != target.root:
        raise MorphismError("isomorphism must send root to root")
    if len(source.vertices) != len(target.vertices):
        raise MorphismError("trees have different vertex counts")
    for v in source.vertices:
        w = mapping[v]
        if not target.has_vertex(w):
            raise MorphismError(f"vertex {v!r} must map to a vertex, got leaf {w!r}")
        if {mapping[e] for e in source.inputs(v)} != set(target.inputs(w)):
            raise MorphismError(f"isomorphism breaks the inputs of vertex {v!r}")
    return ElementaryMorphism(Iso(tuple(sorted(mapping.items()))), source, target)


class OmegaInjMorphism:
    """Composable chain of elementary morphisms, from ``source`` to ``target``.

    The empty chain is the identity.  Equality is (source, target, edge map).
    """

    __slots__ = ("source", "target", "steps", "_edge_map")

    def __init__(self, source: Tree, target: Tree, steps: Iterable[ElementaryMorphism]):
        self.steps = tuple(steps)
        self.source = source
        self.target = target
        prev = source
        for step in self.steps:
            if step.source != prev:
                raise MorphismError(
                    f"non-composable chain: expected source {format_tree(prev)}, "
                    f"got {format_tree(step.source)}"
                )
            prev = step.target
        if prev != target:
            raise MorphismError("chain does not end at the stated target")
        emap: dict[str, str] = {e: e for e in source.edges}
        for step in self.steps:
            stepmap = step.edge_map()
            emap = {e: stepmap[img] for e, img in emap.items()}
        if len(set(emap.values())) != len(emap):
            raise MorphismError("induced edge map is not injective")
        self._edge_map = emap

    @classmethod
    def identity(cls, tree: Tree) -> OmegaInjMorphism:
        return cls(tree, tree, ())

    @classmethod
    def of(cls, step: ElementaryMorphism) -> OmegaInjMorphism:
        return cls(step.source, step.target, (step,))

    def edge_map(self) -> dict[str, str]:
        return dict(self._edge_map)

    def vertex_images(self) -> dict[str, frozenset[str]]:
        images: dict[str, frozenset[str]] = {v: frozenset({v}) for v in self.source.vertices}
        for step in self.steps:
            stepimg = step.vertex_images()
            images = {
                v: frozenset().union(*(stepimg[w] for w in img)) if img else frozenset()
                for v, img in images.items()
            }
        return images

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OmegaInjMorphism)
            and self.source == other.source
            and self.target == other.target
            and self._edge_map == other._edge_map
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, frozenset(self._edge_map.items())))

    def __repr__(self) -> str:
        return (
            f"OmegaInjMorphism({format_tree(self.source)} -> {format_tree(self.target)}: "
            f"{describe_morphism(self)!r})"
        )


def compose_morphisms(outer: OmegaInjMorphism, inner: OmegaInjMorphism) -> OmegaInjMorphism:
    """Composite running ``inner`` first; requires inner.target = outer.source."""
    if inner.target != outer.source:
        raise MorphismError("endpoints do not match: inner.target != outer.source")
    return OmegaInjMorphism(inner.source, outer.target, inner.steps + outer.steps)


def enumerate_elementary_faces(tree: Tree) -> list[ElementaryMorphism]:
    """All elementary faces into ``tree``.

    Inner faces (one per inner edge), then outer top faces (vertices whose
    inputs are all leaves), then the outer root face when the root vertex has
    exactly one non-leaf input.  A corolla instead has one edge inclusion per
    edge, root first; the trivial tree has none.
    """
    if tree.is_trivial():
        return []
    if tree.is_corolla():
        return [edge_inclusion(tree, e) for e in tree.edges]
    faces = [inner_face(tree, e) for e in tree.inner_edges()]
    faces.extend(
        outer_top_face(tree, v)
        for v in tree.vertices
        if all(not tree.has_vertex(e) for e in tree.inputs(v))
    )
    root_inner = [e for e in tree.inputs(tree.root) if tree.has_vertex(e)]
    if len(root_inner) == 1:
        faces.append(outer_root_face(tree))
    return faces


class MorphismPredicates(NamedTuple):
    leaf_bijective: bool
    star: bool


def morphism_predicates(alpha: OmegaInjMorphism) -> MorphismPredicates:
    """Leaf bijectivity of the edge map, and the no-vertex-to-leaf property.

    ``star`` holds for every face/iso composite; it is computed, not assumed.
    """
    emap = alpha._edge_map
    images = {emap[e] for e in alpha.source.leaves()}
    leaf_bijective = images == set(alpha.target.leaves())
    star = all(img for img in alpha.vertex_images().values())
    return MorphismPredicates(leaf_bijective=leaf_bijective, star=star)


def maps_leaves_to_leaves(alpha: OmegaInjMorphism) -> bool:
    """True when every source leaf lands on a target leaf (no surjectivity)."""
    target_leaves = set(alpha.target.leaves())
    return all(alpha._edge_map[e] in target_leaves for e in alpha.source.leaves())


# -- corolla inclusions ------------------------------------------------------


def corolla_inclusion(tree: Tree, v: str) -> OmegaInjMorphism:
    """The inclusion of the corolla spanned by vertex ``v`` into ``tree``.

    Built as a chain of outer faces: chop everything away from the star of
    ``v`` top-down, then chop root vertices until ``v``'s output is the root.
    On a corolla this is the identity.
    """
    if v not in tree.vertices:
        raise TreeError(f"no vertex with output edge {v!r}")
    steps: list[ElementaryMorphism] = []
    current = tree
    # vertices not in the root-to-v path die by top chops, deepest first
    keep = {v}
    e = v
    while e != current.root:
        parent, _ = current.parent_of(e)
        keep.add(parent)
        e = parent
    for w in reversed(_depth_order(current)):
        if w in keep:
            continue
        step = outer_top_face(current, w)
        steps.append(step)
        current = step.source
    while current.root != v:
        step = outer_root_face(current)
        steps.append(step)
        current = step.source
    steps.reverse()
    return OmegaInjMorphism(current, tree, steps)


def _depth_order(tree: Tree) -> list[str]:
    """Vertices ordered by depth (root vertex first)."""
    depth: dict[str, int] = {}
    order: list[str] = []
    for v in tree.vertices:
        if v == tree.root:
            depth[v] = 0
        else:
            parent, _ = tree.parent_of(v)
            depth[v] = depth[parent] + 1
        order.append(v)
    order.sort(key=lambda w: depth[w])
    return order


# -- text descriptions -------------------------------------------------------
#
# Semicolon-separated steps applied target-to-source:
#   inner:<edge> | outer-top:<vertex> | outer-root | edge:<edge>
#   | iso:<tgt>=<src>,...[@<source-term>]
# The denoted morphism runs from the final tree back to the original.


def parse_morphism(target: Tree, description: str) -> OmegaInjMorphism:
    steps: list[ElementaryMorphism] = []
    current = target
    text = description.strip()
    if text:
        for raw in text.split(";"):
            step = _parse_step(current, raw.strip())
            steps.append(step)
            current = step.source
    steps.reverse()
    return OmegaInjMorphism(current, target, steps)


def _parse_step(current: Tree, token: str) -> ElementaryMorphism:
    if token == "outer-root":
        return outer_root_face(current)
    op, sep, arg = token.partition(":")
    if not sep or not arg:
        raise MorphismError(f"bad morphism step {token!r}")
    if op == "inner":
        return inner_face(current, arg)
    if op == "outer-top":
        return outer_top_face(current, arg)
    if op == "edge":
        return edge_inclusion(current, arg)
    if op == "iso":
        pairs_text, _, source_term = arg.partition("@")
        renames: dict[str, str] = {}
        for pair in pairs_text.split(","):
            tgt, eq, src = pair.partition("=")
            if not eq:
                raise MorphismError(f"bad iso pair {pair!r}")
            renames[tgt.strip()] = src.strip()
        mapping = {renames.get(e, e): e for e in current.edges}
        if source_term:
            source = parse_tree(source_term)
        else:
            source = _relabel(current, {e: s for s, e in mapping.items()})
        return iso(source, current, mapping)
    raise MorphismError(f"unknown morphism step {op!r}")


def _relabel(tree: Tree, renames: dict[str, str]) -> Tree:
    name = lambda e: renames.get(e, e)
    return Tree(
        name(tree.root),
        {name(v): tuple(name(e) for e in tree.inputs(v)) for v in tree.vertices},
    )


def describe_step(step: ElementaryMorphism) -> str:
    kind = step.kind
    if isinstance(kind, InnerFace):
        return f"inner:{kind.edge}"
    if isinstance(kind, OuterTopFace):
        return f"outer-top:{kind.vertex}"
    if isinstance(kind, OuterRootFace):
        return "outer-root"
    if isinstance(kind, EdgeInclusion):
        return f"edge:{kind.edge}"
    pairs = ",".join(f"{tgt}={src}" for src, tgt in kind.pairs)
    return f"iso:{pairs}@{format_tree(step.source)}"


def describe_morphism(alpha: OmegaInjMorphism) -> str:
    return ";".join(describe_step(step) for step in reversed(alpha.steps))
