"""Incidence structures over GF(q): projective and affine planes, the two
elliptic semiplanes obtained from an affine plane, and the truncation that
turns the pencil semiplane into a k-regular square 1-design.

Affine directions are integer labels: slope ``a`` in ``0..q-1`` is the field
element with code ``a`` and label ``q`` stands for the vertical direction
(slope infinity).  Affine point ``(x, y)`` has id ``x * q + y``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Hashable

from .errors import BadEll, NotPrimePower, UnknownClass, UnknownPoint
from .finitefield import field_tables, is_prime_power
from .graphcore import Graph

PROJECTIVE_PLANE = "projective_plane"
AFFINE_PLANE = "affine_plane"
SEMIPLANE_PARALLEL = "semiplane_parallel"
SEMIPLANE_PENCIL = "semiplane_pencil"
TRUNCATED = "truncated"


@dataclass(frozen=True)
class Point:
    id: int
    label: Hashable | None = None
    coords: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Block:
    id: int
    label: Hashable | None = None
    coords: tuple[int, ...] | None = None


@dataclass(frozen=True)
class IncidenceStructure:
    points: tuple[Point, ...]
    blocks: tuple[Block, ...]
    flags: frozenset[tuple[int, int]]
    family: str
    params: dict[str, Any] = field(default_factory=dict, compare=False)

    def block_points(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {b.id: set() for b in self.blocks}
        for p, b in self.flags:
            out[b].add(p)
        return out

    def point_blocks(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {p.id: set() for p in self.points}
        for p, b in self.flags:
            out[p].add(b)
        return out

    def classes(self, which: str = "blocks") -> dict[Hashable, list[int]]:
        items = self.blocks if which == "blocks" else self.points
        out: dict[Hashable, list[int]] = defaultdict(list)
        for it in items:
            out[it.label].append(it.id)
        return dict(out)

    def max_common_blocks(self) -> int:
        """Largest number of blocks shared by two distinct points."""
        pb = self.point_blocks()
        ids = sorted(pb)
        return max((len(pb[a] & pb[b]) for a, b in itertools.combinations(ids, 2)), default=0)


def _order(q: int) -> None:
    if is_prime_power(q) is None:
        raise NotPrimePower(f"{q} is not a prime power")


def _normalized_vectors(q: int) -> list[tuple[int, int, int]]:
    # first nonzero coordinate equal to 1 (code 1 is the field's one)
    out = []
    for lead in range(3):
        for rest in itertools.product(range(q), repeat=2 - lead):
            out.append((0,) * lead + (1,) + rest)
    return out


def projective_plane(q: int) -> IncidenceStructure:
    """PG(2, q): points and lines are normalised vectors of GF(q)^3, a point
    lies on a line when their dot product vanishes."""
    _order(q)
    t = field_tables(q)
    vecs = _normalized_vectors(q)
    points = tuple(Point(i, coords=v) for i, v in enumerate(vecs))
    blocks = tuple(Block(i, coords=v) for i, v in enumerate(vecs))
    flags = set()
    for i, x in enumerate(vecs):
        for j, u in enumerate(vecs):
            s = t.add[t.add[t.mul[x[0], u[0]], t.mul[x[1], u[1]]], t.mul[x[2], u[2]]]
            if s == 0:
                flags.add((i, j))
    return IncidenceStructure(points, blocks, frozenset(flags), PROJECTIVE_PLANE, {"q": q})


def affine_plane(q: int) -> IncidenceStructure:
    """AG(2, q) with lines ``y = a x + b`` (class a) and ``x = c`` (class q)."""
    _order(q)
    t = field_tables(q)
    points = tuple(Point(x * q + y, coords=(x, y)) for x in range(q) for y in range(q))
    blocks = []
    flags = set()
    for a in range(q):
        for b in range(q):
            bid = len(blocks)
            blocks.append(Block(bid, label=a, coords=(a, b)))
            for x in range(q):
                flags.add((x * q + t.add[t.mul[a, x], b], bid))
    for c in range(q):
        bid = len(blocks)
        blocks.append(Block(bid, label=q, coords=(q, c)))
        for y in range(q):
            flags.add((c * q + y, bid))
    return IncidenceStructure(points, tuple(blocks), frozenset(flags), AFFINE_PLANE, {"q": q})


def _require(s: IncidenceStructure, family: str) -> None:
    if s.family != family:
        raise ValueError(f"expected a {family} structure, got {s.family}")


def remove_parallel_class(ag: IncidenceStructure, class_label: int) -> IncidenceStructure:
    """Elliptic semiplane S(q^2, q, q).  Points are labelled by the deleted
    line through them, which makes the point classes explicit."""
    _require(ag, AFFINE_PLANE)
    q = ag.params["q"]
    classes = ag.classes("blocks")
    if class_label not in classes:
        raise UnknownClass(class_label)
    removed = set(classes[class_label])
    bp = ag.block_points()
    point_label = {p: b for b in removed for p in bp[b]}
    points = tuple(Point(p.id, label=point_label[p.id], coords=p.coords) for p in ag.points)
    blocks = tuple(b for b in ag.blocks if b.id not in removed)
    flags = frozenset(f for f in ag.flags if f[1] not in removed)
    return IncidenceStructure(points, blocks, flags, SEMIPLANE_PARALLEL, {"q": q, "removed_class": class_label})


def _direction(q: int, t, a: tuple[int, int], b: tuple[int, int]) -> int:
    """Direction label of the line through distinct affine points a and b."""
    dx = t.add[b[0], t.neg[a[0]]]
    dy = t.add[b[1], t.neg[a[1]]]
    if dx == 0:
        return q
    return int(t.mul[dy, t.inv[dx]])


def remove_pencil(ag: IncidenceStructure, x: int = 0) -> IncidenceStructure:
    """Elliptic semiplane S(q^2-1, q, q-1): delete point x and every line on it.

    Point classes are the punctured lines through x, labelled by direction;
    block classes are the remaining lines of each direction.
    """
    _require(ag, AFFINE_PLANE)
    q = ag.params["q"]
    t = field_tables(q)
    by_id = {p.id: p for p in ag.points}
    if x not in by_id:
        raise UnknownPoint(x)
    xc = by_id[x].coords
    through_x = {b for p, b in ag.flags if p == x}
    points = tuple(
        Point(p.id, label=_direction(q, t, xc, p.coords), coords=p.coords) for p in ag.points if p.id != x
    )
    blocks = tuple(b for b in ag.blocks if b.id not in through_x)
    flags = frozenset(f for f in ag.flags if f[0] != x and f[1] not in through_x)
    return IncidenceStructure(points, blocks, flags, SEMIPLANE_PENCIL, {"q": q, "deleted_point": x})


def truncate_semiplane(sp: IncidenceStructure, ell: int) -> IncidenceStructure:
    """Delete ``ell`` directions (point class and block class together),
    leaving a (q - ell)-regular square 1-design.  The deleted directions are
    the last ``ell`` labels, vertical first."""
    _require(sp, SEMIPLANE_PENCIL)
    q = sp.params["q"]
    if not 0 <= ell <= q - 2:
        raise BadEll(f"ell must lie in [0, {q - 2}], got {ell}")
    gone = set(range(q + 1 - ell, q + 1))
    points = tuple(p for p in sp.points if p.label not in gone)
    blocks = tuple(b for b in sp.blocks if b.label not in gone)
    keep_p = {p.id for p in points}
    keep_b = {b.id for b in blocks}
    flags = frozenset(f for f in sp.flags if f[0] in keep_p and f[1] in keep_b)
    params = dict(sp.params, ell=ell, k=q - ell, deleted_directions=sorted(gone))
    return IncidenceStructure(points, blocks, flags, TRUNCATED, params)


def incidence_graph(s: IncidenceStructure) -> Graph:
    """Points (sorted by id) become vertices ``0..P-1``, blocks follow."""
    pidx = {pid: i for i, pid in enumerate(sorted(p.id for p in s.points))}
    off = len(pidx)
    bidx = {bid: off + i for i, bid in enumerate(sorted(b.id for b in s.blocks))}
    return Graph(off + len(bidx), frozenset((pidx[p], bidx[b]) for p, b in s.flags))


def construct(family: str, q: int, ell: int = 0) -> IncidenceStructure:
    """One-call builder using the canonical choices (class q, origin, last ell)."""
    if family == PROJECTIVE_PLANE:
        return projective_plane(q)
    if family == AFFINE_PLANE:
        return affine_plane(q)
    if family == SEMIPLANE_PARALLEL:
        return remove_parallel_class(affine_plane(q), q)
    if family == SEMIPLANE_PENCIL:
        return remove_pencil(affine_plane(q), 0)
    if family == TRUNCATED:
        return truncate_semiplane(remove_pencil(affine_plane(q), 0), ell)
    raise ValueError(f"unknown family {family!r}")
