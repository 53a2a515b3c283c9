"""Verification of square complexes: links, curvature, hyperbolicity, C'(1/6)."""
from __future__ import annotations

import hashlib
import json
from collections import defaultdict, deque
from dataclasses import dataclass, field

from .bicomplex import side_decompose
from .presentation import VERTICAL, inverse_word

INFINITY = float("inf")


class VerificationError(RuntimeError):
    """An internal consistency check failed; this signals a construction bug."""


@dataclass
class Verdict:
    status: str  # "pass", "fail" or "n/a"
    witness: object = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"

    def to_json(self):
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        out.update(self.detail)
        return out


@dataclass(frozen=True)
class LinkGraph:
    vertex: int
    nodes: tuple  # (edge id, end) with end "src" or "dst"
    node_cls: tuple
    arcs: tuple  # (node a, node b, square index, corner index)

    def adjacency(self):
        adj = defaultdict(list)
        for k, (a, b, _, _) in enumerate(self.arcs):
            adj[a].append((b, k))
            adj[b].append((a, k))
        return adj

    def is_bipartite(self):
        return all(self.node_cls[a] != self.node_cls[b] for a, b, _, _ in self.arcs)


def _start_node(se):
    return (se[0], "src" if se[1] > 0 else "dst")


def _end_node(se):
    return (se[0], "dst" if se[1] > 0 else "src")


def vertex_link(x, v):
    if v not in set(x.vertices):
        raise KeyError(f"unknown vertex {v}")
    nodes, cls = [], []
    index = {}
    for e in x.edges:
        for end, w in (("src", e.src), ("dst", e.dst)):
            if w == v:
                index[e.id, end] = len(nodes)
                nodes.append((e.id, end))
                cls.append(e.cls)
    arcs = []
    for s, sq in enumerate(x.squares):
        for i in range(4):
            a, b = sq[i], sq[(i + 1) % 4]
            if x.head(a) == v:
                arcs.append((index[_end_node(a)], index[_start_node(b)], s, (i + 1) % 4))
    return LinkGraph(v, tuple(nodes), tuple(cls), tuple(arcs))


def all_links(x):
    """Links of every vertex, built in one pass over the squares."""
    nodes = defaultdict(list)
    cls = defaultdict(list)
    index = {}
    for e in x.edges:
        for end, w in (("src", e.src), ("dst", e.dst)):
            index[e.id, end] = len(nodes[w])
            nodes[w].append((e.id, end))
            cls[w].append(e.cls)
    arcs = defaultdict(list)
    for s, sq in enumerate(x.squares):
        for i in range(4):
            a, b = sq[i], sq[(i + 1) % 4]
            arcs[x.head(a)].append((index[_end_node(a)], index[_start_node(b)], s, (i + 1) % 4))
    return {v: LinkGraph(v, tuple(nodes[v]), tuple(cls[v]), tuple(arcs[v])) for v in x.vertices}


def shortest_cycle(g):
    """Return ``(length, arc indices)`` of a shortest cycle, or ``(inf, ())``."""
    adj = g.adjacency()
    best, best_cycle = INFINITY, ()
    seen_pairs = {}
    for k, (a, b, _, _) in enumerate(g.arcs):
        if a == b:
            return 1, (k,)
        pair = (min(a, b), max(a, b))
        if pair in seen_pairs:
            return 2, (seen_pairs[pair], k)
        seen_pairs[pair] = k
    for k, (a, b, _, _) in enumerate(g.arcs):
        # BFS from a to b without arc k
        prev = {a: None}
        queue = deque([a])
        while queue and b not in prev:
            u = queue.popleft()
            for w, arc in adj[u]:
                if arc != k and w not in prev:
                    prev[w] = (u, arc)
                    queue.append(w)
        if b in prev:
            path = []
            w = b
            while prev[w] is not None:
                w, arc = prev[w]
                path.append(arc)
            if len(path) + 1 < best:
                best, best_cycle = len(path) + 1, tuple(sorted(path + [k]))
    return best, best_cycle


def link_girth(g):
    return shortest_cycle(g)[0]


def npc_check(x):
    """Nonpositive curvature: every vertex link has girth at least 4."""
    girths = {}
    failures = []
    for v, g in all_links(x).items():
        if not g.is_bipartite():
            raise VerificationError(f"link of vertex {v} is not bipartite; V/H labels are inconsistent")
        length, cycle = shortest_cycle(g)
        girths[v] = length
        if length < 4:
            failures.append({"vertex": v, "cycle_length": length, "squares": sorted({g.arcs[k][2] for k in cycle})})
    detail = {
        "min_girth": _jsonable(min(girths.values(), default=INFINITY)),
        "link_girth": {str(v): _jsonable(n) for v, n in girths.items()},
    }
    if failures:
        return Verdict("fail", failures[0], {**detail, "failing_vertices": len(failures)})
    return Verdict("pass", None, detail)


def _jsonable(value):
    return "inf" if value == INFINITY else value


@dataclass(frozen=True)
class CurvatureLedger:
    curvature: tuple  # per vertex, in quarter turns
    interior: tuple

    @property
    def total(self):
        return sum(self.curvature)


def gauss_bonnet_disk(c):
    """Curvature of every vertex of a square disk in units of a right angle.

    An interior vertex with ``s`` square corners has curvature ``4 - s``,
    a boundary vertex ``2 - s``; the total over a disk is always 4.
    """
    if c.euler_characteristic() != 1:
        raise ValueError(f"not a disk: Euler characteristic {c.euler_characteristic()}")
    corners = [0] * c.num_vertices
    for sq in c.squares:
        for se in sq:
            corners[c.head(se)] += 1
    kappa = tuple((4 if c.interior[v] else 2) - corners[v] for v in range(c.num_vertices))
    ledger = CurvatureLedger(kappa, c.interior)
    if ledger.total != 4:
        raise VerificationError(f"curvature sums to {ledger.total} quarter turns, expected 4")
    return ledger


def hyperbolicity_criterion(x):
    """Every polygon has at least 6 sides; a sufficient condition only."""
    offending = []
    for k, poly in enumerate(x.polygons):
        sides = side_decompose(poly).num_sides
        if sides < 6:
            offending.append({"polygon": k, "relator": poly.origin_relator, "sides": sides})
    if offending:
        return Verdict("fail", offending)
    return Verdict("pass")


def _cyclic_readings(p):
    out = []
    for i, rel in enumerate(p.relators):
        for sign, word in ((1, rel), (-1, inverse_word(rel))):
            for k in range(len(word)):
                out.append(((i, sign, k), word[k:] + word[:k]))
    return out


def _lcp(u, v):
    n = min(len(u), len(v))
    k = 0
    while k < n and u[k] == v[k]:
        k += 1
    return k


def small_cancellation_check(p, lambda_den=6):
    """Metric small cancellation C'(1/lambda_den).

    A piece is a common prefix of two cyclic readings of relators or their
    inverses starting at different positions.  Every piece that is a prefix
    of a reading of ``R`` must be shorter than ``|R| / lambda_den``.
    """
    readings = _cyclic_readings(p)
    keyed = sorted(range(len(readings)), key=lambda k: [(x.gen, x.sign) for x in readings[k][1]])
    longest = [0] * len(readings)
    for a, b in zip(keyed, keyed[1:]):
        n = _lcp(readings[a][1], readings[b][1])
        longest[a] = max(longest[a], n)
        longest[b] = max(longest[b], n)
    max_piece = max(longest, default=0)
    worst = None
    for k, (site, word) in enumerate(readings):
        if longest[k] * lambda_den >= len(word):
            if worst is None or longest[k] * len(readings[worst][1]) > longest[worst] * len(word):
                worst = k
    detail = {"max_piece": max_piece, "lambda": f"1/{lambda_den}"}
    if worst is not None:
        (i, sign, k), word = readings[worst]
        piece = word[:longest[worst]]
        witness = {"relator": i, "inverse": sign < 0, "offset": k,
                   "piece": " ".join(str(x) for x in piece), "piece_length": len(piece), "relator_length": len(word)}
        return Verdict("fail", witness, detail)
    return Verdict("pass", None, detail)


# -- exports ----------------------------------------------------------------

def presentation_hash(p):
    return hashlib.sha256(p.to_text().encode()).hexdigest()


def complex_to_json(x, presentation=None):
    data = {
        "vertices": list(x.vertices),
        "edges": [{"id": e.id, "class": e.cls, "src": e.src, "dst": e.dst} for e in x.edges],
        "squares": [{"id": k, "boundary": [eid * s for eid, s in sq]} for k, sq in enumerate(x.squares)],
        "meta": {
            "source_presentation_hash": presentation_hash(presentation) if presentation is not None else None,
            "subdivided": x.subdivided,
            "euler_characteristic": x.euler_characteristic(),
        },
    }
    return data


def dumps_complex(x, presentation=None):
    return json.dumps(complex_to_json(x, presentation), indent=1, sort_keys=True) + "\n"


def bicomplex_to_json(x):
    return {
        "vertices": list(x.vertices),
        "edges": [{"id": e.id, "class": e.cls, "src": e.src, "dst": e.dst, "label": e.label} for e in x.edges],
        "polygons": [{"relator": poly.origin_relator, "attaching": [[eid, s] for eid, s in poly.attaching]}
                     for poly in x.polygons],
        "meta": {"subdivided": x.subdivided},
    }


def link_to_dot(x, g):
    lines = [f'graph "link_{g.vertex}" {{']
    for k, (eid, end) in enumerate(g.nodes):
        cls = g.node_cls[k]
        shape = "box" if cls == VERTICAL else "ellipse"
        label = f"{x.edge(eid).label or eid}:{end} ({cls})"
        lines.append(f'  n{k} [label="{label}", shape={shape}];')
    for a, b, s, i in g.arcs:
        lines.append(f'  n{a} -- n{b} [label="sq{s}.{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

