"""Tree-indexed configuration data and the operators acting on it.

A nerve point over a tree colors every edge 1 (disk) or 2 (point) and hangs
a configuration on every vertex whose entry colors match its input edges.
The distinguished subspace X asks for leaves colored 2 and the root and all
internal edges colored 1; over the trivial tree X is a single point.

Pulling back along a face map restricts the data (inner faces compose the
two merged vertices' configurations); the shift operator recolors all leaves
to 2 and forgets the affected disks to their centers.  The hat operator is
pullback followed by that shift, and it is what makes X a presheaf on the
face-and-iso category.  The tail of the module works over linear trees: an
explicit list encoding, the simplicial-style face formulas, candidate
degeneracies, and a numeric certificate that no bounded continuous
degeneracy can commute with the faces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .morphisms import (
    EdgeInclusion,
    ElementaryMorphism,
    InnerFace,
    Iso,
    OmegaInjMorphism,
    OuterRootFace,
    OuterTopFace,
    corolla_inclusion,
)
from .operad import (
    DISK,
    POINT,
    Configuration,
    Disk,
    Point,
    Scalar,
    Vector,
    all_points,
    compose_at,
    shift,
    sigma_act,
    validate_configuration,
)
from .trees import Tree


class NerveError(ValueError):
    """Inconsistent nerve-point data or an operator's precondition failure."""


class NervePoint:
    """Pair of an edge coloring and vertex-indexed configurations over a tree.

    ``f1`` maps a vertex (its output edge name) to its configuration, or to
    None for the unit value forced when the output edge is colored 2.
    """

    __slots__ = ("tree", "f0", "f1", "dim")

    def __init__(
        self,
        tree: Tree,
        f0: Mapping[str, int],
        f1: Mapping[str, Configuration | None],
        dim: int,
        validate: bool = True,
    ):
        self.tree = tree
        self.f0 = dict(f0)
        self.f1 = dict(f1)
        self.dim = dim
        if validate:
            self.check()

    def check(self, tol: float = 0.0) -> None:
        tree = self.tree
        if set(self.f0) != set(tree.edges):
            raise NerveError("edge coloring does not cover the edge set exactly")
        if any(c not in (DISK, POINT) for c in self.f0.values()):
            raise NerveError("edge colors must be 1 or 2")
        if set(self.f1) != set(tree.vertices):
            raise NerveError("vertex data does not cover the vertex set exactly")
        for v in tree.vertices:
            in_colors = tuple(self.f0[e] for e in tree.inputs(v))
            cfg = self.f1[v]
            if self.f0[v] == POINT:
                if in_colors != (POINT,):
                    raise NerveError(
                        f"vertex {v!r} outputs color 2, so its input list must be (2,)"
                    )
                if cfg is not None:
                    raise NerveError(f"vertex {v!r} outputs color 2 and carries no data")
                continue
            if cfg is None:
                raise NerveError(f"vertex {v!r} is missing its configuration")
            if cfg.dim != self.dim:
                raise NerveError(f"vertex {v!r} has dimension {cfg.dim}, expected {self.dim}")
            if cfg.colors != in_colors:
                raise NerveError(
                    f"vertex {v!r}: entry colors {cfg.colors} != edge colors {in_colors}"
                )
            violations = validate_configuration(cfg, tol)
            if violations:
                raise NerveError(f"vertex {v!r}: " + "; ".join(map(str, violations)))

    def configuration(self, v: str) -> Configuration:
        cfg = self.f1[v]
        if cfg is None:
            raise NerveError(f"vertex {v!r} carries the unit value, not a configuration")
        return cfg

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, NervePoint)
            and self.tree == other.tree
            and self.dim == other.dim
            and self.f0 == other.f0
            and self.f1 == other.f1
        )

    def __hash__(self) -> int:
        return hash((self.tree, self.dim, frozenset(self.f0.items())))

    def __repr__(self) -> str:
        return f"NervePoint(tree={self.tree!s}, f0={self.f0}, f1={self.f1})"


def trivial_point(tree: Tree, dim: int) -> NervePoint:
    """The canonical point over a trivial tree (the whole space there)."""
    if not tree.is_trivial():
        raise NerveError("trivial points live over one-edge trees")
    return NervePoint(tree, {tree.root: DISK}, {}, dim, validate=False)


def x_coloring(tree: Tree) -> dict[str, int]:
    """Leaves to 2, root and internal edges to 1 (non-trivial trees)."""
    return {e: POINT if tree.is_leaf(e) else DISK for e in tree.edges}


@dataclass(frozen=True)
class XMembership:
    in_XL: bool
    in_XIR: bool
    in_X: bool


def membership(p: NervePoint) -> XMembership:
    """Flags for the all-leaves-2 and root-and-internal-1 subspaces.

    Over the trivial tree the intersection is declared to be the one-point
    space, so ``in_X`` is unconditionally true there.
    """
    tree = p.tree
    if tree.is_trivial():
        color = p.f0[tree.root]
        return XMembership(in_XL=color == POINT, in_XIR=color == DISK, in_X=True)
    leaves = set(tree.leaves())
    in_xl = all(p.f0[e] == POINT for e in leaves)
    in_xir = all(p.f0[e] == DISK for e in tree.edges if e not in leaves)
    return XMembership(in_XL=in_xl, in_XIR=in_xir, in_X=in_xl and in_xir)


# -- pullback -----------------------------------------------------------------


def pullback(alpha: OmegaInjMorphism | ElementaryMorphism, p: NervePoint) -> NervePoint:
    """Restrict ``p`` along a morphism into its tree.

    Elementary rules: an inner face composes the two merged vertices'
    configurations at the merge slot; outer faces and edge inclusions plainly
    restrict; isomorphisms relabel and permute each vertex's entries to the
    source planar order.  A composite applies its steps target-to-source, and
    the result is independent of the factorization.
    """
    if isinstance(alpha, ElementaryMorphism):
        steps: Sequence[ElementaryMorphism] = (alpha,)
        source = alpha.source
    else:
        steps = alpha.steps
        source = alpha.source
    current = p
    for step in reversed(steps):
        if step.target != current.tree:
            raise NerveError("morphism target does not match the point's tree")
        current = _pullback_step(step, current)
    assert current.tree == source
    return current


def _pullback_step(step: ElementaryMorphism, p: NervePoint) -> NervePoint:
    kind = step.kind
    tree = step.source
    if isinstance(kind, InnerFace):
        merge = step.merge
        assert merge is not None
        upper_cfg = p.f1[merge.upper]
        lower_cfg = p.f1[merge.lower]
        if p.f0[kind.edge] == POINT:
            # the contracted edge carries the unit value; nothing to compose
            merged = lower_cfg
        else:
            assert lower_cfg is not None and upper_cfg is not None
            merged = compose_at(lower_cfg, merge.slot, upper_cfg)
        f0 = {e: p.f0[e] for e in tree.edges}
        f1 = {v: p.f1[v] for v in tree.vertices}
        f1[merge.lower] = merged
        return NervePoint(tree, f0, f1, p.dim, validate=False)
    if isinstance(kind, (OuterTopFace, OuterRootFace, EdgeInclusion)):
        f0 = {e: p.f0[e] for e in tree.edges}
        f1 = {v: p.f1[v] for v in tree.vertices}
        return NervePoint(tree, f0, f1, p.dim, validate=False)
    assert isinstance(kind, Iso)
    emap = dict(kind.pairs)
    f0 = {e: p.f0[emap[e]] for e in tree.edges}
    f1 = {}
    for v in tree.vertices:
        cfg = p.f1[emap[v]]
        if cfg is None:
            f1[v] = None
            continue
        target_inputs = p.tree.inputs(emap[v])
        perm = tuple(target_inputs.index(emap[e]) + 1 for e in tree.inputs(v))
        f1[v] = sigma_act(cfg, perm)
    return NervePoint(tree, f0, f1, p.dim, validate=False)


# -- shift operator and hat ----------------------------------------------------


def shift_operator(p: NervePoint) -> NervePoint:
    """Recolor all leaves to 2 and forget the affected disks to their centers.

    Idempotent, and the identity on points whose leaves are already colored 2.
    Undefined over the trivial tree.
    """
    tree = p.tree
    if tree.is_trivial():
        raise NerveError("the shift operator is undefined over the trivial tree")
    leaves = set(tree.leaves())
    f0 = {e: POINT if e in leaves else p.f0[e] for e in tree.edges}
    f1: dict[str, Configuration | None] = {}
    for v in tree.vertices:
        cfg = p.f1[v]
        if cfg is None:
            f1[v] = None
            continue
        f1[v] = shift(cfg, tuple(f0[e] for e in tree.inputs(v)))
    return NervePoint(tree, f0, f1, p.dim, validate=False)


def hat(alpha: OmegaInjMorphism, x: NervePoint) -> NervePoint:
    """Pull back along ``alpha`` and shift the leaves; the induced operator on X.

    With a trivial source tree this is the unique map to the one-point space.
    The result is asserted to land back in X.
    """
    if not membership(x).in_X:
        raise NerveError("hat is only defined on points of X")
    if alpha.source.is_trivial():
        return trivial_point(alpha.source, x.dim)
    result = shift_operator(pullback(alpha, x))
    if not membership(result).in_X:
        raise NerveError("hat output left X; this should be impossible")
    return result


# -- Segal decomposition ---------------------------------------------------------


@dataclass(frozen=True)
class SegalDecomposition:
    """Per-vertex corolla components of an X-point, with the factored oracle.

    ``components[i]`` is the hat image along the corolla inclusion at
    ``vertices[i]``; ``oracle[i]`` is the same computed directly by shifting
    that vertex's configuration all the way to points.
    """

    vertices: tuple[str, ...]
    components: tuple[NervePoint, ...]
    oracle: tuple[Configuration, ...]

    def agree(self) -> bool:
        return all(
            comp.configuration(v) == cfg
            for v, comp, cfg in zip(self.vertices, self.components, self.oracle)
        )


def segal_map(x: NervePoint) -> SegalDecomposition:
    """Evaluate the corolla inclusions at every vertex of an X-point."""
    tree = x.tree
    if tree.is_trivial():
        raise NerveError("the Segal map is not defined over the trivial tree")
    if not membership(x).in_X:
        raise NerveError("the Segal map is only evaluated on points of X")
    vertices = tree.vertices
    components = tuple(hat(corolla_inclusion(tree, v), x) for v in vertices)
    oracle = tuple(
        shift(x.configuration(v), all_points(len(tree.inputs(v)))) for v in vertices
    )
    return SegalDecomposition(vertices, components, oracle)


# -- linear trees: list encoding and face formulas --------------------------------


def encode_linear(x: NervePoint) -> list[Disk | Point]:
    """Encode an X-point over a linear tree as its unary entries, root upward.

    The first k-1 entries are disks, the last is the point at the top vertex;
    the trivial tree encodes to the empty list.
    """
    tree = x.tree
    if tree.is_trivial():
        return []
    if not tree.is_linear():
        raise NerveError("list encoding requires a linear tree")
    if not membership(x).in_X:
        raise NerveError("list encoding requires a point of X")
    out: list[Disk | Point] = []
    edge = tree.root
    while tree.has_vertex(edge):
        out.append(x.configuration(edge).entry(1))
        edge = tree.inputs(edge)[0]
    return out


def decode_linear(tree: Tree, entries: Sequence[Disk | Point], dim: int) -> NervePoint:
    """Rebuild the X-point over ``tree`` from its list encoding."""
    if tree.is_trivial():
        if entries:
            raise NerveError("the trivial tree encodes the empty list only")
        return trivial_point(tree, dim)
    if not tree.is_linear():
        raise NerveError("list decoding requires a linear tree")
    if len(entries) != len(tree.vertices):
        raise NerveError(f"expected {len(tree.vertices)} entries, got {len(entries)}")
    f1: dict[str, Configuration | None] = {}
    for v, entry in zip(tree.vertices, entries):
        f1[v] = Configuration((entry,), dim)
    return NervePoint(tree, x_coloring(tree), f1, dim)


def face_d(i: int, k: int, entries: Sequence[Disk | Point]) -> list[Disk | Point]:
    """Face ``d_i`` on a length-k list encoding, 0 <= i <= k.

    d_0 drops the first disk; a middle d_i composes the i-th disk with the
    next entry's embedding; d_{k-1} applies the last disk to the point;
    d_k applies the last disk to the origin.  For k = 1 every face lands in
    the one-point space, encoded as the empty list.
    """
    if k < 1:
        raise NerveError("face maps need k >= 1")
    if not 0 <= i <= k:
        raise NerveError(f"face index {i} out of range 0..{k}")
    if len(entries) != k:
        raise NerveError(f"expected a length-{k} encoding, got {len(entries)}")
    pt = entries[-1]
    if not isinstance(pt, Point) or any(not isinstance(a, Disk) for a in entries[:-1]):
        raise NerveError("encoding must be disks followed by one point")
    if k == 1:
        return []
    disks = list(entries[:-1])
    if i == 0:
        return disks[1:] + [pt]
    if i <= k - 2:
        merged = Disk(
            disks[i - 1].radius * disks[i].radius, disks[i - 1](disks[i].center)
        )
        return disks[: i - 1] + [merged] + disks[i + 1 :] + [pt]
    last = disks[-1]
    if i == k - 1:
        return disks[:-1] + [Point(last(pt.coords))]
    return disks[:-1] + [Point(last((0,) * len(last.center)))]


def linear_face_morphism(tree: Tree, i: int) -> OmegaInjMorphism:
    """The elementary face of a linear tree matching the list-level ``d_i``.

    d_0 is the root chop, middle indices contract the i-th internal edge,
    and d_k chops the top vertex; a single-vertex tree uses edge inclusions.
    """
    from .morphisms import (
        edge_inclusion,
        inner_face,
        outer_root_face,
        outer_top_face,
    )

    if not tree.is_linear() or tree.is_trivial():
        raise NerveError("expected a non-trivial linear tree")
    k = len(tree.vertices)
    if not 0 <= i <= k:
        raise NerveError(f"face index {i} out of range 0..{k}")
    if k == 1:
        step = edge_inclusion(tree, tree.edges[i])
    elif i == 0:
        step = outer_root_face(tree)
    elif i <= k - 1:
        step = inner_face(tree, tree.vertices[i])
    else:
        step = outer_top_face(tree, tree.vertices[k - 1])
    return OmegaInjMorphism.of(step)


# -- degeneracy candidates and the obstruction --------------------------------


def degeneracy_s0(dim: int) -> list[Disk | Point]:
    """Insert the basepoint: the only degeneracy the identities allow."""
    return [Point((0,) * dim)]


def degeneracy_s1(entries: Sequence[Disk | Point], r_value: Scalar) -> list[Disk | Point]:
    """Candidate s1: grow the point into a disk of radius ``r_value`` around
    itself and append the basepoint."""
    (pt,) = entries
    if not isinstance(pt, Point) or r_value <= 0:
        raise NerveError("s1 needs a single point and a positive radius")
    return [Disk(r_value, pt.coords), Point((0,) * len(pt.coords))]


def degeneracy_s2(entries: Sequence[Disk | Point], big_r: Scalar) -> list[Disk | Point]:
    """Candidate s2: keep the disk, grow the point with radius ``big_r``,
    append the basepoint."""
    a, pt = entries
    if not isinstance(a, Disk) or not isinstance(pt, Point) or big_r <= 0:
        raise NerveError("s2 needs (disk, point) and a positive radius")
    return [a, Disk(big_r, pt.coords), Point((0,) * len(pt.coords))]


class RadiusCandidate:
    """Continuous radius function on the ball, from a representable family.

    ``const:v`` is the constant v; ``radial:c0,c1,...`` evaluates the
    polynomial c0 + c1*|y| + c2*|y|^2 + ... at the input's norm.  Values are
    expected to stay in (0, 1] on the ball; evaluation checks positivity.
    """

    def __init__(self, kind: str, coefficients: tuple[Scalar, ...]):
        if kind not in ("const", "radial"):
            raise NerveError(f"unknown radius family {kind!r}")
        if kind == "const" and len(coefficients) != 1:
            raise NerveError("const needs exactly one value")
        self.kind = kind
        self.coefficients = tuple(coefficients)

    @classmethod
    def parse(cls, text: str) -> RadiusCandidate:
        kind, sep, rest = text.partition(":")
        if not sep:
            raise NerveError(f"bad radius candidate {text!r}; use const:v or radial:c0,c1,...")
        coeffs = tuple(_parse_scalar(tok) for tok in rest.split(","))
        return cls(kind, coeffs)

    def __call__(self, y: Vector) -> Scalar:
        if self.kind == "const":
            value: Scalar = self.coefficients[0]
        else:
            norm = math.sqrt(sum(float(u) * float(u) for u in y))
            value = sum(c * norm**k for k, c in enumerate(self.coefficients))
        if value <= 0:
            raise NerveError(f"radius candidate is not positive at {y!r}")
        return value

    def is_exact(self) -> bool:
        return self.kind == "const" and isinstance(self.coefficients[0], (Fraction, int))

    def describe(self) -> str:
        from .formats import format_scalar

        return f"{self.kind}:" + ",".join(format_scalar(c) for c in self.coefficients)


def _parse_scalar(tok: str) -> Scalar:
    from .formats import parse_scalar

    return parse_scalar(tok)


@dataclass(frozen=True)
class ObstructionReport:
    """Violation lower bounds along a shrinking-scale grid.

    At scale t the embedding u -> t*u + center is fed to the candidate
    degeneracies; ``bounds[i]`` is r(t*P + center) - t, a floor on how badly
    the face-degeneracy exchange fails for *every* radius function bounded
    by 1.  A positive floor certifies the failure at that scale.
    """

    candidate: str
    center: Vector
    point: Vector
    ts: tuple[Scalar, ...]
    bounds: tuple[Scalar, ...]

    @property
    def positive(self) -> tuple[bool, ...]:
        return tuple(b > 0 for b in self.bounds)

    def floor(self, t_max: Scalar | None = None) -> Scalar:
        selected = [
            b for t, b in zip(self.ts, self.bounds) if t_max is None or t <= t_max
        ]
        if not selected:
            raise NerveError("no grid points at or below the requested scale")
        return min(selected)


def obstruction_scan(
    candidate: RadiusCandidate | Callable[[Vector], Scalar],
    center: Vector,
    point: Vector,
    ts: Sequence[Scalar],
) -> ObstructionReport:
    """Lower-bound the face-degeneracy mismatch at small embedding scales.

    For the embedding a_t(u) = t*u + center, every degeneracy radius R bounded
    by 1 leaves a residual of at least r(a_t(P)) - t between the two composite
    routes, so a positive bound at small t rules out all such R at once.
    Scales must satisfy 0 < t <= 1 - |center| so a_t stays inside the ball.
    """
    limit_sq = _one_minus_norm_sq(center)
    for t in ts:
        if t <= 0:
            raise NerveError(f"scale t = {t!r} must be positive")
        if float(t) ** 2 > limit_sq + 1e-12 or t > 1:
            raise NerveError(f"scale t = {t!r} leaves the embedding's domain")
    bounds = []
    for t in ts:
        at_p = tuple(t * u + c for u, c in zip(point, center))
        bounds.append(candidate(at_p) - t)
    name = candidate.describe() if isinstance(candidate, RadiusCandidate) else "custom"
    return ObstructionReport(name, tuple(center), tuple(point), tuple(ts), tuple(bounds))


def _one_minus_norm_sq(center: Vector) -> float:
    norm = math.sqrt(sum(float(u) * float(u) for u in center))
    return (1.0 - norm) ** 2
