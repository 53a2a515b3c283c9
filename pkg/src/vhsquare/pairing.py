"""Admissible pairings of same-class boundary edges of a polygon.

An admissible pairing matches the boundary edges of one class so that
matched edges lie in different sides and the chords joining their
midpoints are pairwise non-crossing.  Such a pairing exists iff the total
is even and every side is at most the sum of the others; ``greedy_pairing``
builds one by repeatedly peeling an edge off the end of a largest side.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .bicomplex import SideDecomposition, triangle_holds
from .presentation import HORIZONTAL, VERTICAL

logger = logging.getLogger(__name__)

ORACLE_LIMIT = 20


class PairingError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class BoundaryPosition:
    index: int
    cls: str = field(compare=False)
    side: int = field(compare=False)


@dataclass(frozen=True)
class Pairing:
    cls: str
    pairs: frozenset  # frozenset of (i, j) index tuples with i < j

    @classmethod
    def from_pairs(cls_, cls, pairs):
        return cls_(cls, frozenset(tuple(sorted(p)) for p in pairs))

    def sorted_pairs(self):
        return sorted(self.pairs)

    def partner(self):
        out = {}
        for i, j in self.pairs:
            out[i] = j
            out[j] = i
        return out


@dataclass
class Verdict:
    ok: bool
    condition: int = 0
    reason: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def chords_cross(p, q):
    """True iff chords with endpoint index pairs ``p`` and ``q`` interleave."""
    a, b = sorted(p)
    c, d = sorted(q)
    return (a < c < b) != (a < d < b) and len({a, b, c, d}) == 4


def positions(sd, cls):
    """BoundaryPosition for every boundary edge of class ``cls``."""
    return [BoundaryPosition(i, cls, s) for s, side in enumerate(sd.sides(cls)) for i in side]


def abstract_decomposition(lengths, cls=VERTICAL):
    """A side decomposition whose ``cls`` sides are consecutive runs of ``lengths``.

    Each side of the other class has length 1, so ``cls`` positions keep
    their cyclic order; only that order matters for pairings.
    """
    other = HORIZONTAL if cls == VERTICAL else VERTICAL
    runs = []
    for n in lengths:
        runs += [(cls, n), (other, 1)]
    if cls == HORIZONTAL:
        runs = runs[-1:] + runs[:-1]
    classes = tuple(c for c, n in runs for _ in range(n))
    return SideDecomposition(tuple(runs), classes)


def pairing_exists(lengths):
    lengths = list(lengths)
    if not lengths or any(n <= 0 for n in lengths):
        raise PairingError("lengths must be a nonempty sequence of positive integers")
    if sum(lengths) % 2:
        logger.debug("no pairing for %s: odd total %d", lengths, sum(lengths))
        return False
    return triangle_holds(lengths)


def greedy_pairing(sd, cls):
    """Pair the ``cls`` edges of a polygon by repeatedly peeling a largest side.

    Each step takes the largest side (lowest index on ties) and the unpaired
    edge of it nearest to an end of the side (the lower end on ties), and
    pairs it with the nearest unpaired edge of another side for which the
    chord between them cuts off no unpaired edge.  The result is checked with
    ``verify_admissible`` before it is returned.
    """
    lengths = sd.lengths(cls)
    if not pairing_exists(lengths):
        raise PairingError(f"no admissible pairing for {cls} side lengths {lengths}")
    sides = sd.sides(cls)
    L = len(sd)
    side_of = {i: s for s, side in enumerate(sides) for i in side}
    order = [i for side in sides for i in side]
    unpaired = list(order)
    lo = [side[0] for side in sides]
    hi = [side[-1] for side in sides]
    counts = [len(side) for side in sides]
    pairs = []

    def dist(i, j):
        d = (j - i) % L
        return min(d, L - d)

    while unpaired:
        s = max(range(len(counts)), key=lambda k: (counts[k], -k))
        side = sides[s]
        if lo[s] == hi[s]:
            v = lo[s]
        elif lo[s] - side[0] <= side[-1] - hi[s]:
            v = lo[s]
        else:
            v = hi[s]
        k = unpaired.index(v)
        prev_u = unpaired[k - 1]
        next_u = unpaired[(k + 1) % len(unpaired)]
        candidates = []
        # lower end may only look backwards, upper end forwards; a lone edge may look both ways
        if v == lo[s] and side_of[prev_u] != s:
            candidates.append((dist(v, prev_u), 1, prev_u))
        if v == hi[s] and side_of[next_u] != s:
            candidates.append((dist(v, next_u), 0, next_u))
        if not candidates:
            raise PairingError(f"greedy step found no partner for position {v}; this is a bug")
        u = min(candidates)[2]
        t = side_of[u]
        pairs.append((v, u))
        unpaired.remove(v)
        unpaired.remove(u)
        for side_idx, pos in ((s, v), (t, u)):
            counts[side_idx] -= 1
            if counts[side_idx]:
                if pos == lo[side_idx]:
                    lo[side_idx] = _next_in_side(sides[side_idx], pos)
                else:
                    hi[side_idx] = _prev_in_side(sides[side_idx], pos)
        residual = [c for c in counts if c]
        if residual and not triangle_holds(residual):
            raise PairingError(f"residual vector {counts} violates the triangle inequality; this is a bug")
    result = Pairing.from_pairs(cls, pairs)
    verdict = verify_admissible(sd, result)
    if not verdict:
        raise PairingError(f"greedy pairing is not admissible ({verdict.reason}); this is a bug")
    return result


def _next_in_side(side, pos):
    return side[side.index(pos) + 1]


def _prev_in_side(side, pos):
    return side[side.index(pos) - 1]


def verify_admissible(sd, p):
    """Check the three admissibility conditions; report the first violation."""
    sides = sd.sides(p.cls)
    side_of = {i: s for s, side in enumerate(sides) for i in side}
    seen = {}
    for pair in p.sorted_pairs():
        for i in pair:
            if i not in side_of:
                return Verdict(False, 3, f"position {i} is not a {p.cls} edge", (pair,))
            if i in seen:
                return Verdict(False, 3, f"position {i} is paired twice", (seen[i], pair))
            seen[i] = pair
    for pair in p.sorted_pairs():
        i, j = pair
        if side_of[i] == side_of[j]:
            return Verdict(False, 1, f"positions {i} and {j} lie in the same side", (pair,))
    pairs = p.sorted_pairs()
    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            if chords_cross(pairs[a], pairs[b]):
                return Verdict(False, 2, "chords cross", (pairs[a], pairs[b]))
    missing = sorted(set(side_of) - set(seen))
    if missing:
        return Verdict(False, 3, f"positions {missing} are unpaired", tuple(missing))
    return Verdict(True)


@dataclass
class OracleResult:
    pairing: Pairing | None
    count: int

    @property
    def found(self):
        return self.pairing is not None


def noncrossing_matchings(items, side_of):
    """Yield every non-crossing perfect matching of ``items`` (in cyclic order)
    whose pairs join different sides."""
    if not items:
        yield []
        return
    first = items[0]
    for k in range(1, len(items), 2):
        partner = items[k]
        if side_of[first] == side_of[partner]:
            continue
        for inner in noncrossing_matchings(items[1:k], side_of):
            for outer in noncrossing_matchings(items[k + 1:], side_of):
                yield [(first, partner)] + inner + outer


def brute_force_pairing(lengths, count=True, cls=VERTICAL):
    """Exhaustively search for an admissible pairing of abstract sides.

    Positions ``0..sum(lengths)-1`` are laid out side after side.  With
    ``count=False`` the search stops at the first admissible matching and the
    reported count is 0 or 1.
    """
    lengths = list(lengths)
    total = sum(lengths)
    if total > ORACLE_LIMIT:
        raise PairingError(f"exhaustive search limited to {ORACLE_LIMIT} positions, got {total}")
    side_of = {}
    pos = 0
    for s, n in enumerate(lengths):
        for _ in range(n):
            side_of[pos] = s
            pos += 1
    if total % 2:
        return OracleResult(None, 0)
    first, n = None, 0
    for m in noncrossing_matchings(list(range(total)), side_of):
        if first is None:
            first = m
        n += 1
        if not count:
            break
    pairing = None if first is None else Pairing.from_pairs(cls, first)
    return OracleResult(pairing, n)
