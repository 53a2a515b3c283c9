"""Standard 2-complexes of presentations viewed as bicomplexes.

Edges are referenced by integer id; a signed edge is a pair
``(edge_id, sign)`` with ``sign`` in ``{+1, -1}``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .presentation import HORIZONTAL, VERTICAL


class BicomplexError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: int
    cls: str
    src: int
    dst: int
    label: str = ""


@dataclass(frozen=True)
class Polygon:
    attaching: tuple  # tuple of signed edges
    classes: tuple  # class of each attaching edge
    origin_relator: int
    rotation: int = 0  # offset of index 0 in the original relator

    def __len__(self):
        return len(self.attaching)


@dataclass(frozen=True)
class SideDecomposition:
    runs: tuple  # ((cls, length), ...) alternating, starting with V
    classes: tuple  # class of every boundary position

    @property
    def r(self):
        return len(self.runs) // 2

    @property
    def vertical_lengths(self):
        return tuple(n for c, n in self.runs if c == VERTICAL)

    @property
    def horizontal_lengths(self):
        return tuple(n for c, n in self.runs if c == HORIZONTAL)

    @property
    def num_sides(self):
        return len(self.runs)

    def lengths(self, cls):
        return self.vertical_lengths if cls == VERTICAL else self.horizontal_lengths

    def sides(self, cls):
        """Boundary indices of every side of class ``cls``, in boundary order."""
        out, start = [], 0
        for c, n in self.runs:
            if c == cls:
                out.append(tuple(range(start, start + n)))
            start += n
        return out

    def __len__(self):
        return len(self.classes)


@dataclass(frozen=True)
class CornerKey:
    vertical: tuple  # signed edge
    horizontal: tuple


@dataclass(frozen=True)
class Bicomplex:
    vertices: tuple
    edges: tuple
    polygons: tuple
    subdivided: bool = False

    def __post_init__(self):
        ids = {e.id for e in self.edges}
        vs = set(self.vertices)
        for e in self.edges:
            if e.cls not in (VERTICAL, HORIZONTAL):
                raise BicomplexError(f"edge {e.id} has no V/H label")
            if e.src not in vs or e.dst not in vs:
                raise BicomplexError(f"edge {e.id} has unresolved endpoints")
        for k, poly in enumerate(self.polygons):
            path = poly.attaching
            if any(eid not in ids for eid, _ in path):
                raise BicomplexError(f"polygon {k} references unknown edges")
            for i in range(len(path)):
                if self.head(path[i]) != self.tail(path[(i + 1) % len(path)]):
                    raise BicomplexError(f"polygon {k} attaching path is not closed")
            if tuple(self.edge(eid).cls for eid, _ in path) != poly.classes:
                raise BicomplexError(f"polygon {k} class labels disagree with its edges")
            if set(poly.classes) != {VERTICAL, HORIZONTAL}:
                raise BicomplexError(
                    f"polygon {k} (relator {poly.origin_relator}) must use both vertical and horizontal edges"
                )

    def edge(self, eid):
        return self._edge_map()[eid]

    def _edge_map(self):
        try:
            return self.__dict__["_emap"]
        except KeyError:
            emap = {e.id: e for e in self.edges}
            object.__setattr__(self, "_emap", emap)
            return emap

    def tail(self, se):
        e = self.edge(se[0])
        return e.src if se[1] > 0 else e.dst

    def head(self, se):
        e = self.edge(se[0])
        return e.dst if se[1] > 0 else e.src

    def cls(self, se):
        return self.edge(se[0]).cls

    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.polygons)

    def free_edges(self):
        """Edges that lie on no polygon."""
        used = {eid for p in self.polygons for eid, _ in p.attaching}
        return [e.id for e in self.edges if e.id not in used]


def _rotate_to_vertical_start(classes):
    n = len(classes)
    for i in range(n):
        if classes[i] == VERTICAL and classes[i - 1] == HORIZONTAL:
            return i
    raise BicomplexError("attaching map must use both vertical and horizontal edges")


def build_standard_2complex(p):
    """One vertex, one loop per generator, one polygon per relator."""
    orient = p.orientation
    edges = tuple(Edge(i, g.orientation, 0, 0, g.name) for i, g in enumerate(p.generators))
    index = {g.name: i for i, g in enumerate(p.generators)}
    polys = []
    for k, rel in enumerate(p.relators):
        classes = [orient[x.gen] for x in rel]
        if len(set(classes)) < 2:
            kind = "vertical" if classes[0] == VERTICAL else "horizontal"
            raise BicomplexError(f"relator {k} is entirely {kind}; not a bicomplex")
        s = _rotate_to_vertical_start(classes)
        path = tuple((index[x.gen], x.sign) for x in rel[s:] + rel[:s])
        polys.append(Polygon(path, tuple(classes[s:] + classes[:s]), k, s))
    return Bicomplex((0,), edges, tuple(polys))


def side_decompose(poly):
    classes = poly.classes
    if classes[0] != VERTICAL or classes[-1] != HORIZONTAL:
        raise BicomplexError("polygon must start at the beginning of a vertical run")
    runs = []
    for c in classes:
        if runs and runs[-1][0] == c:
            runs[-1][1] += 1
        else:
            runs.append([c, 1])
    return SideDecomposition(tuple((c, n) for c, n in runs), classes)


def triangle_holds(lengths):
    total = sum(lengths)
    return all(2 * n <= total for n in lengths)


def check_triangle(sd):
    """|V_i| <= sum of the other |V_j|, and likewise for the horizontal sides."""
    return triangle_holds(sd.vertical_lengths) and triangle_holds(sd.horizontal_lengths)


def corner_key(x, first, second):
    """Canonical key of the length-2 path ``first·second``, or None if not a VH corner."""
    c1, c2 = x.cls(first), x.cls(second)
    if c1 == c2:
        return None
    if c1 == VERTICAL:
        return CornerKey(first, second)
    return CornerKey((second[0], -second[1]), (first[0], -first[1]))


def corner_occurrences(x):
    """Map each corner key to its list of ``(polygon index, position)`` occurrences.

    Position ``i`` denotes the corner between attaching letters ``i`` and ``i+1``.
    """
    occ = defaultdict(list)
    for k, poly in enumerate(x.polygons):
        path = poly.attaching
        for i in range(len(path)):
            key = corner_key(x, path[i], path[(i + 1) % len(path)])
            if key is not None:
                occ[key].append((k, i))
    return dict(occ)


def find_repeated_corners(x):
    occ = corner_occurrences(x)
    return [(key, occ[key]) for key in sorted(occ, key=_key_order) if len(occ[key]) >= 2]


def _key_order(key):
    return (key.vertical, key.horizontal)


def needs_parity_subdivision(x):
    for poly in x.polygons:
        sd = side_decompose(poly)
        if sum(sd.vertical_lengths) % 2 or sum(sd.horizontal_lengths) % 2:
            return True
    return False


def parity_subdivide(x):
    """Double every 1-cell if some polygon has an odd vertical or horizontal total."""
    if not needs_parity_subdivision(x):
        return x
    return double_edges(x)


def double_edges(x):
    """Split every 1-cell at a new midpoint; edge ``e`` becomes ``2e`` then ``2e+1``."""
    next_vertex = max(x.vertices) + 1
    vertices = list(x.vertices)
    edges = []
    halves = {}
    for e in x.edges:
        mid = next_vertex
        next_vertex += 1
        vertices.append(mid)
        first, second = 2 * e.id, 2 * e.id + 1
        edges.append(Edge(first, e.cls, e.src, mid, f"{e.label}.0"))
        edges.append(Edge(second, e.cls, mid, e.dst, f"{e.label}.1"))
        halves[e.id] = (first, second)
    polys = []
    for poly in x.polygons:
        path = []
        for eid, s in poly.attaching:
            first, second = halves[eid]
            path.extend([(first, 1), (second, 1)] if s > 0 else [(second, -1), (first, -1)])
        classes = tuple(c for c in poly.classes for _ in (0, 1))
        polys.append(Polygon(tuple(path), classes, poly.origin_relator, poly.rotation))
    return Bicomplex(tuple(vertices), tuple(edges), tuple(polys), subdivided=True)


def is_proper_power(word):
    n = len(word)
    return any(n % d == 0 and word == word[d:] + word[:d] for d in range(1, n))
