"""Dual-curve subdivision of polygons into VH square disks, and gluing.

Each pair of an admissible pairing becomes a chord joining the midpoints of
two boundary edges.  Vertical chords are pairwise disjoint, as are
horizontal ones, and a vertical and a horizontal chord cross exactly when
their endpoints interleave.  The square disk is the dual of this chord
arrangement: one vertex per region, one edge per chord segment, one square
per crossing.

Everything is combinatorial.  A region is identified by the vector of sides
it lies on with respect to every chord; the position of a crossing relative
to a third chord is read off the crossing order along one of its chords.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

from .bicomplex import Edge, side_decompose
from .pairing import (Pairing, PairingError, chords_cross, greedy_pairing, noncrossing_matchings,
                      verify_admissible)
from .presentation import HORIZONTAL, VERTICAL


class SubdivisionError(ValueError):
    pass


@dataclass(frozen=True)
class Chord:
    cls: str
    endpoints: tuple  # (p, q), p < q
    crossings: tuple  # indices of crossing chords, ordered from p to q

    def inside(self, position):
        """True iff boundary position lies strictly within the arc (p, q)."""
        p, q = self.endpoints
        return p < position < q


@dataclass(frozen=True)
class ArrangementDisk:
    sd: object  # SideDecomposition
    chords: tuple
    crossings: tuple  # (vertical chord index, horizontal chord index)
    chord_at: tuple  # chord index of every boundary position

    @property
    def length(self):
        return len(self.sd)


@dataclass(frozen=True)
class DiskEdge:
    id: int
    cls: str
    src: int
    dst: int
    chord: int
    segment: int


@dataclass(frozen=True)
class DiskComplex:
    num_vertices: int
    interior: tuple  # bool per vertex
    edges: tuple
    squares: tuple  # each a 4-tuple of signed local edges, V H V H
    boundary: tuple  # signed local edge for each boundary position
    classes: tuple  # class of each boundary position
    num_crossings: int

    def tail(self, se):
        e = self.edges[se[0]]
        return e.src if se[1] > 0 else e.dst

    def head(self, se):
        e = self.edges[se[0]]
        return e.dst if se[1] > 0 else e.src

    def boundary_vertices(self):
        """Vertex at the start of each boundary edge."""
        return tuple(self.tail(se) for se in self.boundary)

    def euler_characteristic(self):
        return self.num_vertices - len(self.edges) + len(self.squares)


@dataclass(frozen=True)
class SquareComplexGlobal:
    vertices: tuple
    edges: tuple  # Edge records; ids start at 1 so signed ids are unambiguous
    squares: tuple  # each a 4-tuple of signed global edges
    square_polygon: tuple  # polygon index of every square
    boundary_maps: tuple  # per polygon: tuple of signed global edges along its boundary
    subdivided: bool = False

    def edge(self, eid):
        return self.edges[eid - 1]

    def tail(self, se):
        e = self.edge(se[0])
        return e.src if se[1] > 0 else e.dst

    def head(self, se):
        e = self.edge(se[0])
        return e.dst if se[1] > 0 else e.src

    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.squares)


def build_chords(sd, vp, hp):
    for p, cls in ((vp, VERTICAL), (hp, HORIZONTAL)):
        if p.cls != cls:
            raise SubdivisionError(f"expected a {cls} pairing, got {p.cls}")
        verdict = verify_admissible(sd, p)
        if not verdict:
            raise SubdivisionError(f"inadmissible {cls} pairing: {verdict.reason} {verdict.witness}")
    ends = [(VERTICAL, pair) for pair in vp.sorted_pairs()] + [(HORIZONTAL, pair) for pair in hp.sorted_pairs()]
    crossing_lists = [[] for _ in ends]
    crossings = []
    for a, (ca, pa) in enumerate(ends):
        if ca != VERTICAL:
            continue
        for b, (cb, pb) in enumerate(ends):
            if cb == HORIZONTAL and chords_cross(pa, pb):
                crossings.append((a, b))
                crossing_lists[a].append(b)
                crossing_lists[b].append(a)
    chords = []
    for a, (c, (p, q)) in enumerate(ends):
        # each crossing chord has exactly one endpoint inside (p, q); order by it
        def inner_end(b):
            x, y = ends[b][1]
            return x if p < x < q else y
        chords.append(Chord(c, (p, q), tuple(sorted(crossing_lists[a], key=inner_end))))
    chord_at = [None] * len(sd)
    for a, ch in enumerate(chords):
        for i in ch.endpoints:
            chord_at[i] = a
    return ArrangementDisk(sd, tuple(chords), tuple(crossings), tuple(chord_at))


def _point_sides(arr, c, location):
    """Side vector of the point at ``location`` along chord ``c``.

    Locations count along the chord from its lower endpoint: segment ``i``
    is ``2*i`` and crossing ``k`` is ``2*k + 1``.  The entry for ``c`` is
    left as None.
    """
    chord = arr.chords[c]
    p = chord.endpoints[0]
    along = {b: 2 * k + 1 for k, b in enumerate(chord.crossings)}
    out = []
    for e, other in enumerate(arr.chords):
        if e == c:
            out.append(None)
            continue
        side = other.inside(p)
        if e in along and location > along[e]:
            side = not side
        out.append(side)
    return out


def _arc_sides(arr, j):
    return tuple(ch.endpoints[0] <= j < ch.endpoints[1] for ch in arr.chords)


def dualize_polygon(arr):
    chords = arr.chords
    L = arr.length
    face_id = {}

    def face(vec):
        vec = tuple(vec)
        if vec not in face_id:
            face_id[vec] = len(face_id)
        return face_id[vec]

    arc_faces = [face(_arc_sides(arr, j)) for j in range(L)]
    if len(set(arc_faces)) != L:
        raise SubdivisionError("two boundary corners fall in one region; the disk boundary would not embed")
    num_boundary = len(face_id)

    edges = []
    seg_edge = {}
    for c, ch in enumerate(chords):
        for i in range(len(ch.crossings) + 1):
            vec = _point_sides(arr, c, 2 * i)
            vec[c] = False
            src = face(vec)
            vec[c] = True
            dst = face(vec)
            seg_edge[c, i] = len(edges)
            edges.append(DiskEdge(len(edges), ch.cls, src, dst, c, i))

    squares = []
    for c, d in arr.crossings:
        k = chords[c].crossings.index(d)
        l = chords[d].crossings.index(c)
        base = _point_sides(arr, c, 2 * k + 1)
        corners = {}
        for sc in (False, True):
            for sd_ in (False, True):
                vec = list(base)
                vec[c], vec[d] = sc, sd_
                corners[sc, sd_] = face(vec)
        # segment of c on d's "True" side, and of d on c's "True" side
        c_first_true = chords[d].inside(chords[c].endpoints[0])
        c_seg = {c_first_true: seg_edge[c, k], not c_first_true: seg_edge[c, k + 1]}
        d_first_true = chords[c].inside(chords[d].endpoints[0])
        d_seg = {d_first_true: seg_edge[d, l], not d_first_true: seg_edge[d, l + 1]}
        sq = ((c_seg[False], 1), (d_seg[True], 1), (c_seg[True], -1), (d_seg[False], -1))
        squares.append(sq)

    boundary = []
    for j in range(L):
        c = arr.chord_at[j]
        p, q = chords[c].endpoints
        if j == p:
            boundary.append((seg_edge[c, 0], 1))
        else:
            boundary.append((seg_edge[c, len(chords[c].crossings)], -1))

    n_faces = len(face_id)
    interior = tuple(v >= num_boundary for v in range(n_faces))
    disk = DiskComplex(n_faces, interior, tuple(edges), tuple(squares), tuple(boundary), arr.sd.classes, len(arr.crossings))
    _check_disk(arr, disk, arc_faces)
    return disk


def _check_disk(arr, disk, arc_faces):
    n_chords, n_cross = len(arr.chords), len(arr.crossings)
    # independent count: every chord adds one region, every crossing one more
    if disk.num_vertices != 1 + n_chords + n_cross:
        raise SubdivisionError(
            f"face count {disk.num_vertices} != 1 + {n_chords} chords + {n_cross} crossings; face identification is broken"
        )
    L = len(disk.boundary)
    for j, se in enumerate(disk.boundary):
        if disk.tail(se) != arc_faces[j - 1] or disk.head(se) != arc_faces[j]:
            raise SubdivisionError(f"boundary edge {j} does not join its corner regions")
        if disk.edges[se[0]].cls != disk.classes[j]:
            raise SubdivisionError(f"boundary edge {j} has the wrong class")
    if len({se[0] for se in disk.boundary}) != L:
        raise SubdivisionError("a chord without crossings makes two boundary edges coincide")
    for sq in disk.squares:
        for i in range(4):
            if disk.head(sq[i]) != disk.tail(sq[(i + 1) % 4]):
                raise SubdivisionError("square boundary is not a closed path")
        if [disk.edges[e].cls for e, _ in sq] != [VERTICAL, HORIZONTAL, VERTICAL, HORIZONTAL]:
            raise SubdivisionError("square boundary does not alternate V/H")
    if disk.euler_characteristic() != 1:
        raise SubdivisionError(f"disk has Euler characteristic {disk.euler_characteristic()}")


def chord_components(pairs):
    """Connected components of the crossing graph of a set of chords."""
    pairs = list(pairs)
    parent = list(range(len(pairs)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            if chords_cross(pairs[a], pairs[b]):
                parent[find(a)] = find(b)
    comps = {}
    for a in range(len(pairs)):
        comps.setdefault(find(a), []).append(pairs[a])
    return sorted(comps.values())


def closed_interval(vp, hp, length):
    """A proper cyclic interval of boundary positions closed under both pairings.

    Returns ``(start, stop)`` (positions ``start..stop`` inclusive, cyclically)
    or None.  The dual of the chords is a disk bounded by the polygon exactly
    when there is none, i.e. when the crossing graph is connected.
    """
    comps = chord_components(vp.sorted_pairs() + hp.sorted_pairs())
    if len(comps) <= 1:
        return None
    ends = sorted(i for pair in comps[0] for i in pair)
    # positions strictly between two consecutive endpoints of one component
    # are closed under the pairing; pick the first nonempty gap
    for a, b in zip(ends, ends[1:] + [ends[0] + length]):
        if b - a > 1:
            return ((a + 1) % length, (b - 1) % length)
    raise SubdivisionError("disconnected chords without a closed gap; this is a bug")


def uncut_corners(sd, vp, hp):
    """VH corners whose two boundary chords do not cross.

    A cut corner becomes a boundary vertex of the square disk lying in a
    single square.
    """
    partner = {**vp.partner(), **hp.partner()}
    L = len(sd)
    out = []
    for j in range(L):
        k = (j + 1) % L
        if sd.classes[j] != sd.classes[k] and not chords_cross((j, partner[j]), (k, partner[k])):
            out.append(j)
    return out


@dataclass(frozen=True)
class Configuration:
    vertical: Pairing
    horizontal: Pairing
    method: str  # "greedy", "search" or "explicit"
    uncut: tuple


SEARCH_LIMIT = 200_000
MATCHING_LIMIT = 2_000


def _admissible_matchings(sd, cls):
    sides = sd.sides(cls)
    side_of = {i: s for s, side in enumerate(sides) for i in side}
    for m in noncrossing_matchings([i for side in sides for i in side], side_of):
        yield Pairing.from_pairs(cls, m)


def choose_pairings(sd, limit=SEARCH_LIMIT):
    """Pick vertical and horizontal pairings whose dual is a disk.

    The greedy pairings are used when their chords are connected and cut
    every VH corner.  Otherwise admissible pairings are searched in a fixed
    order, taking the first connected choice that cuts every corner, else
    the first connected one.  Raises SubdivisionError when no connected
    choice is found within ``limit`` candidate pairs.
    """
    vp, hp = greedy_pairing(sd, VERTICAL), greedy_pairing(sd, HORIZONTAL)
    greedy_ok = closed_interval(vp, hp, len(sd)) is None
    if greedy_ok:
        uncut = uncut_corners(sd, vp, hp)
        if not uncut:
            return Configuration(vp, hp, "greedy", ())
    fallback = Configuration(vp, hp, "greedy", tuple(uncut)) if greedy_ok else None
    horizontals = list(islice(_admissible_matchings(sd, HORIZONTAL), MATCHING_LIMIT))
    tried = 0
    for v in islice(_admissible_matchings(sd, VERTICAL), MATCHING_LIMIT):
        for h in horizontals:
            tried += 1
            if closed_interval(v, h, len(sd)) is not None:
                continue
            uncut = uncut_corners(sd, v, h)
            if not uncut:
                return Configuration(v, h, "search", ())
            if fallback is None:
                fallback = Configuration(v, h, "search", tuple(uncut))
        if tried >= limit:
            break
    if fallback is not None:
        return fallback
    gap = closed_interval(vp, hp, len(sd))
    raise SubdivisionError(
        f"no admissible pairings give a disk (greedy chords leave positions {gap[0]}..{gap[1]} closed"
        f"{'; search limit reached' if tried >= limit else ''})"
    )


def subdivide_polygon(poly, pairings=None):
    """Pair, build chords, and dualize one polygon of a bicomplex.

    ``pairings`` may give explicit ``(vertical, horizontal)`` pairings;
    otherwise ``choose_pairings`` decides.  Returns
    ``(configuration, arrangement, disk)``.
    """
    sd = side_decompose(poly)
    if pairings is None:
        config = choose_pairings(sd)
        arr = build_chords(sd, config.vertical, config.horizontal)
    else:
        vp, hp = pairings
        arr = build_chords(sd, vp, hp)
        gap = closed_interval(vp, hp, len(sd))
        if gap is not None:
            raise SubdivisionError(f"explicit pairings leave positions {gap[0]}..{gap[1]} closed; the dual is not a disk")
        config = Configuration(vp, hp, "explicit", tuple(uncut_corners(sd, vp, hp)))
    return config, arr, dualize_polygon(arr)


def assemble(x, disks):
    """Glue one square disk into each polygon of ``x`` along its boundary."""
    if len(disks) != len(x.polygons):
        raise SubdivisionError(f"{len(disks)} disks for {len(x.polygons)} polygons")
    gid = {e.id: k + 1 for k, e in enumerate(x.edges)}
    edges = [Edge(k + 1, e.cls, e.src, e.dst, e.label) for k, e in enumerate(x.edges)]
    vertices = list(x.vertices)
    next_vertex = max(vertices) + 1
    squares, square_polygon, boundary_maps = [], [], []
    for pi, (poly, disk) in enumerate(zip(x.polygons, disks)):
        if len(disk.boundary) != len(poly.attaching) or disk.classes != poly.classes:
            raise SubdivisionError(f"disk {pi} boundary does not match polygon {pi}")
        local_edge = {}
        local_vertex = {}
        for j, ((le, sigma), (eid, s)) in enumerate(zip(disk.boundary, poly.attaching)):
            if disk.edges[le].cls != x.edge(eid).cls:
                raise SubdivisionError(f"disk {pi} boundary edge {j} has the wrong class")
            local_edge[le] = (gid[eid], sigma * s)
            for lv, gv in ((disk.tail((le, sigma)), x.tail((eid, s))), (disk.head((le, sigma)), x.head((eid, s)))):
                if local_vertex.setdefault(lv, gv) != gv:
                    raise SubdivisionError(f"disk {pi} boundary vertex {lv} glued to two vertices")
        for lv in range(disk.num_vertices):
            if lv not in local_vertex:
                if not disk.interior[lv]:
                    raise SubdivisionError(f"disk {pi} boundary vertex {lv} is not on the boundary path")
                local_vertex[lv] = next_vertex
                vertices.append(next_vertex)
                next_vertex += 1
        for e in disk.edges:
            if e.id not in local_edge:
                g = len(edges) + 1
                edges.append(Edge(g, e.cls, local_vertex[e.src], local_vertex[e.dst], f"p{pi}.c{e.chord}.s{e.segment}"))
                local_edge[e.id] = (g, 1)
        for sq in disk.squares:
            squares.append(tuple((local_edge[le][0], sigma * local_edge[le][1]) for le, sigma in sq))
            square_polygon.append(pi)
        boundary_maps.append(tuple((local_edge[le][0], sigma * local_edge[le][1]) for le, sigma in disk.boundary))
    return SquareComplexGlobal(tuple(vertices), tuple(edges), tuple(squares), tuple(square_polygon),
                               tuple(boundary_maps), x.subdivided)


def subdivide_complex(x, pairings=None):
    """Subdivide every polygon of a (parity-subdivided) bicomplex and glue.

    Returns ``(configurations, arrangements, disks, complex)``.  ``pairings`` optionally maps
    polygon index to explicit ``(vertical, horizontal)`` pairings.
    """
    pairings = pairings or {}
    configs, arrangements, disks = [], [], []
    for k, poly in enumerate(x.polygons):
        try:
            config, arr, disk = subdivide_polygon(poly, pairings.get(k))
        except (PairingError, SubdivisionError) as exc:
            raise SubdivisionError(f"polygon {k}: {exc}") from exc
        configs.append(config)
        arrangements.append(arr)
        disks.append(disk)
    return configs, arrangements, disks, assemble(x, disks)
