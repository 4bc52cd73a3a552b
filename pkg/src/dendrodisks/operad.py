"""The two-colored operad of points and little disks in the unit n-ball.

A configuration is an ordered list of entries, each either an affine disk
embedding (color 1, kept as radius + center) or a point (color 2), subject
to disjointness inside the open unit ball.  Composition re-embeds one
configuration inside a disk slot of another; shifts forget disks down to
their centers, one color list above another in the entrywise order.

Scalars may be exact :class:`~fractions.Fraction` values or floats; all
validity tests compare squared distances so exact inputs stay exact.  Only
the clearance radius ``epsilon`` (and everything built on it) needs real
square roots and is computed in float.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

Scalar = Union[Fraction, float, int]
Vector = tuple[Scalar, ...]

DISK = 1
POINT = 2


class ConfigurationError(ValueError):
    """Entry/color mismatch or an operation applied to the wrong entry kind."""


# -- color lists -------------------------------------------------------------


def all_disks(p: int) -> tuple[int, ...]:
    return (DISK,) * p


def all_points(p: int) -> tuple[int, ...]:
    return (POINT,) * p


def splice_colors(colors: Sequence[int], slot: int, inner: Sequence[int]) -> tuple[int, ...]:
    """Replace entry ``slot`` (1-based) of ``colors`` by the list ``inner``."""
    if not 1 <= slot <= len(colors):
        raise ConfigurationError(f"slot {slot} out of range 1..{len(colors)}")
    return tuple(colors[: slot - 1]) + tuple(inner) + tuple(colors[slot:])


def colors_leq(lo: Sequence[int], hi: Sequence[int]) -> bool:
    """Entrywise order on equal-length color lists."""
    return len(lo) == len(hi) and all(a <= b for a, b in zip(lo, hi))


def permute_colors(colors: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    return tuple(colors[s - 1] for s in perm)


# -- permutations (1-based images; entry i of the result is entry perm[i-1]) --


def identity_perm(p: int) -> tuple[int, ...]:
    return tuple(range(1, p + 1))


def compose_perms(sigma: Sequence[int], tau: Sequence[int]) -> tuple[int, ...]:
    """Permutation whose action is: act by ``tau``, then by ``sigma``."""
    return tuple(tau[s - 1] for s in sigma)


def splice_perms(sigma: Sequence[int], slot: int, tau: Sequence[int]) -> tuple[int, ...]:
    """Block permutation for equivariant composition at ``slot`` (1-based).

    Acting by this on ``x composed_at sigma(slot) y`` matches composing the
    permuted configurations at ``slot``.
    """
    p, q = len(sigma), len(tau)
    s0 = sigma[slot - 1]
    shifted = lambda s: s if s < s0 else s + q - 1
    out: list[int] = []
    for j in range(1, p + q):
        if j < slot:
            out.append(shifted(sigma[j - 1]))
        elif j < slot + q:
            out.append(s0 - 1 + tau[j - slot])
        else:
            out.append(shifted(sigma[j - q]))
    return tuple(out)


# -- configurations ----------------------------------------------------------


@dataclass(frozen=True)
class Disk:
    """Affine embedding u -> radius*u + center of the open unit ball into itself."""

    radius: Scalar
    center: Vector

    def __call__(self, v: Vector) -> Vector:
        return tuple(self.radius * u + c for u, c in zip(v, self.center))

    def apply(self, entry: Entry) -> Entry:
        if isinstance(entry, Disk):
            return Disk(self.radius * entry.radius, self(entry.center))
        return Point(self(entry.coords))


@dataclass(frozen=True)
class Point:
    coords: Vector


Entry = Union[Disk, Point]


@dataclass(frozen=True)
class Configuration:
    """Ordered disks and points in the open unit n-ball."""

    entries: tuple[Entry, ...]
    dim: int

    def __post_init__(self):
        for entry in self.entries:
            vec = entry.center if isinstance(entry, Disk) else entry.coords
            if len(vec) != self.dim:
                raise ConfigurationError(
                    f"entry {entry!r} does not have dimension {self.dim}"
                )

    @property
    def colors(self) -> tuple[int, ...]:
        return tuple(DISK if isinstance(e, Disk) else POINT for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, slot: int) -> Entry:
        if not 1 <= slot <= len(self.entries):
            raise ConfigurationError(f"slot {slot} out of range 1..{len(self.entries)}")
        return self.entries[slot - 1]

    def replacing(self, slot: int, entry: Entry) -> Configuration:
        es = list(self.entries)
        es[slot - 1] = entry
        return Configuration(tuple(es), self.dim)


def empty_configuration(dim: int) -> Configuration:
    return Configuration((), dim)


def unit_disk(dim: int) -> Configuration:
    """The operad unit: the identity embedding as a one-disk configuration."""
    return Configuration((Disk(1, (0,) * dim),), dim)


# -- vector helpers (work on Fraction and float alike) ------------------------


def _norm_sq(v: Vector) -> Scalar:
    return sum(u * u for u in v)


def _diff(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def _fnorm(v: Vector) -> float:
    return math.sqrt(sum(float(u) * float(u) for u in v))


# -- validity -----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """One failed disjointness/containment condition, with the slots involved."""

    condition: str
    slots: tuple[int, ...]

    def __str__(self) -> str:
        where = ",".join(str(s) for s in self.slots)
        return f"{self.condition} at entries ({where})"


def validate_configuration(x: Configuration, tol: float = 0.0) -> list[Violation]:
    """All violated validity conditions; an empty list means the value is valid.

    Containment allows tangency with the boundary and disks may be mutually
    tangent (open images stay disjoint); points must be strictly inside the
    ball, pairwise distinct, and strictly outside every closed disk.  With a
    positive ``tol``, squared-distance margins may undershoot by that much
    (for float-mode outputs of the homotopy machinery).
    """
    out: list[Violation] = []
    es = x.entries
    for i, e in enumerate(es, start=1):
        if isinstance(e, Disk):
            if e.radius <= 0:
                out.append(Violation("disk radius must be positive", (i,)))
            elif e.radius > 1 + tol or _norm_sq(e.center) > _sq(1 - e.radius) + tol:
                out.append(Violation("disk leaves the unit ball", (i,)))
        elif _norm_sq(e.coords) >= 1 + tol:
            out.append(Violation("point outside the open unit ball", (i,)))
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            a, b = es[i], es[j]
            slots = (i + 1, j + 1)
            if isinstance(a, Disk) and isinstance(b, Disk):
                if _norm_sq(_diff(a.center, b.center)) < _sq(a.radius + b.radius) - tol:
                    out.append(Violation("open disks overlap", slots))
            elif isinstance(a, Point) and isinstance(b, Point):
                if _norm_sq(_diff(a.coords, b.coords)) <= 0:
                    out.append(Violation("points coincide", slots))
            else:
                disk, pt = (a, b) if isinstance(a, Disk) else (b, a)
                if _norm_sq(_diff(pt.coords, disk.center)) <= _sq(disk.radius) - tol:
                    out.append(Violation("point inside a closed disk", slots))
    return out


def _sq(s: Scalar) -> Scalar:
    return s * s


def is_valid(x: Configuration, tol: float = 0.0) -> bool:
    return not validate_configuration(x, tol)


def require_valid(x: Configuration, tol: float = 0.0) -> Configuration:
    violations = validate_configuration(x, tol)
    if violations:
        raise ConfigurationError("; ".join(str(v) for v in violations))
    return x


# -- operad structure ----------------------------------------------------------


def compose_at(x: Configuration, slot: int, y: Configuration) -> Configuration:
    """Insert ``y`` into the disk at ``slot`` (1-based) of ``x``.

    The disk's affine map is applied to every entry of ``y``; the transformed
    entries replace the slot in place.
    """
    if x.dim != y.dim:
        raise ConfigurationError("dimension mismatch")
    a = x.entry(slot)
    if not isinstance(a, Disk):
        raise ConfigurationError(f"entry {slot} is a point; composition needs a disk")
    es = x.entries[: slot - 1] + tuple(a.apply(e) for e in y.entries) + x.entries[slot:]
    return Configuration(es, x.dim)


def sigma_act(x: Configuration, perm: Sequence[int]) -> Configuration:
    """Permutation action: entry i of the result is entry perm(i) of ``x``."""
    if sorted(perm) != list(range(1, len(x) + 1)):
        raise ConfigurationError(f"not a permutation of 1..{len(x)}: {perm!r}")
    return Configuration(tuple(x.entries[s - 1] for s in perm), x.dim)


def shift(x: Configuration, colors: Sequence[int]) -> Configuration:
    """Forget disks down to their centers wherever ``colors`` asks for a point.

    ``colors`` must dominate the colors of ``x`` entrywise; entries whose
    color is unchanged are kept as they are.
    """
    own = x.colors
    if not colors_leq(own, colors):
        raise ConfigurationError(f"{tuple(colors)!r} does not dominate {own!r}")
    es = list(x.entries)
    for i, (lo, hi) in enumerate(zip(own, colors)):
        if lo == DISK and hi == POINT:
            disk = es[i]
            assert isinstance(disk, Disk)
            es[i] = Point(disk.center)
    return Configuration(tuple(es), x.dim)


def shift_at(x: Configuration, slot: int) -> Configuration:
    """Shift that forgets only the disk at ``slot`` (1-based)."""
    target = list(x.colors)
    target[slot - 1] = POINT
    return shift(x, target)


def epsilon(y: Configuration, slot: int) -> float:
    """Clearance of the point at ``slot``: its distance to the other points,
    to the disks, and to the boundary sphere.  Always computed in float."""
    p = y.entry(slot)
    if not isinstance(p, Point):
        raise ConfigurationError(f"entry {slot} is a disk; clearance needs a point")
    d = p.coords
    best = 1.0 - _fnorm(d)
    for j, e in enumerate(y.entries, start=1):
        if j == slot:
            continue
        if isinstance(e, Disk):
            best = min(best, _fnorm(_diff(d, e.center)) - float(e.radius))
        else:
            best = min(best, _fnorm(_diff(d, e.coords)))
    return best


def g_inverse(y: Configuration, slot: int) -> Configuration:
    """Grow the point at ``slot`` back into a disk of half its clearance.

    Right inverse to the shift that forgets this slot: shifting the result
    returns ``y`` on the nose.
    """
    p = y.entry(slot)
    if not isinstance(p, Point):
        raise ConfigurationError(f"entry {slot} is a disk; expected a point")
    return y.replacing(slot, Disk(0.5 * epsilon(y, slot), p.coords))


def homotopy_H(x: Configuration, slot: int, t: Scalar) -> Configuration:
    """Straight-line homotopy between ``g_inverse(shift_at(x, slot), slot)``
    (t = 0) and ``x`` itself (t = 1), moving only the radius at ``slot``."""
    if not 0 <= t <= 1:
        raise ConfigurationError(f"t = {t!r} outside [0, 1]")
    a = x.entry(slot)
    if not isinstance(a, Disk):
        raise ConfigurationError(f"entry {slot} is a point; expected a disk")
    half_eps = 0.5 * epsilon(shift_at(x, slot), slot)
    return x.replacing(slot, Disk(t * a.radius + (1 - t) * half_eps, a.center))


# -- random generation ---------------------------------------------------------


class GenerationError(RuntimeError):
    """The rejection sampler ran out of retries."""


def random_configuration(
    colors: Sequence[int],
    dim: int,
    rng: random.Random | int,
    exact: bool = True,
    max_retries: int = 200,
) -> Configuration:
    """A valid configuration with the requested colors, deterministic per seed.

    Entries are placed one at a time: centers are rejection-sampled in the
    ball, and each disk takes a radius of at most half its clearance from
    everything placed before it, so validity holds by construction (and is
    re-checked exactly before returning).
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    denom = 64
    placed: list[Entry] = []
    for color in colors:
        for attempt in range(max_retries):
            center = _random_ball_vector(rng, dim, denom, exact)
            clearance = _clearance(center, placed)
            if color == DISK:
                if clearance <= 1e-3:
                    continue
                frac = rng.randint(1, denom) / (2 * denom)
                radius = frac * clearance
                if exact:
                    radius = Fraction(max(1, math.floor(radius * 4096)), 4096)
                entry: Entry = Disk(radius, center)
            else:
                if clearance <= 1e-6:
                    continue
                entry = Point(center)
            candidate = placed + [entry]
            if not validate_configuration(Configuration(tuple(candidate), dim)):
                placed.append(entry)
                break
        else:
            raise GenerationError(
                f"could not place entry of color {color} after {max_retries} tries"
            )
    return Configuration(tuple(placed), dim)


def _random_ball_vector(
    rng: random.Random, dim: int, denom: int, exact: bool
) -> Vector:
    for _ in range(1000):
        if exact:
            v: Vector = tuple(Fraction(rng.randint(-denom, denom), denom + 1) for _ in range(dim))
        else:
            v = tuple(rng.uniform(-1, 1) for _ in range(dim))
        if _norm_sq(v) < 1:
            return v
    raise GenerationError("ball sampling failed")


def _clearance(center: Vector, placed: Sequence[Entry]) -> float:
    best = 1.0 - _fnorm(center)
    for e in placed:
        if isinstance(e, Disk):
            best = min(best, _fnorm(_diff(center, e.center)) - float(e.radius))
        else:
            best = min(best, _fnorm(_diff(center, e.coords)))
    return best


# -- comparison helpers ---------------------------------------------------------


def configuration_residual(x: Configuration, y: Configuration) -> float:
    """Max absolute scalar difference, or +inf on a shape mismatch."""
    if x.dim != y.dim or x.colors != y.colors:
        return math.inf
    worst = 0.0
    for a, b in zip(x.entries, y.entries):
        if isinstance(a, Disk) and isinstance(b, Disk):
            worst = max(worst, abs(float(a.radius) - float(b.radius)))
            vec_a, vec_b = a.center, b.center
        else:
            vec_a, vec_b = a.coords, b.coords
        for u, v in zip(vec_a, vec_b):
            worst = max(worst, abs(float(u) - float(v)))
    return worst


def configurations_equal(
    x: Configuration, y: Configuration, tol: float | None = None
) -> bool:
    """Exact equality when ``tol`` is None, residual comparison otherwise."""
    if tol is None:
        return x == y
    return configuration_residual(x, y) <= tol
