"""Group presentations with a vertical/horizontal split of the generators.

Text format (one directive per line, ``#`` starts a comment)::

    vertical: a c e
    horizontal: b d f
    relator: a b^-1 c^2 f^-1 e^2 d^-1

Repeated ``vertical:``/``horizontal:`` lines accumulate.  A term ``g^k``
expands to ``|k|`` copies of ``g`` (inverted when ``k < 0``).
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

VERTICAL = "V"
HORIZONTAL = "H"

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TERM = re.compile(r"(?P<name>[A-Za-z][A-Za-z0-9_]*)(?:\^(?P<exp>[+-]?\d+))?")


class PresentationError(ValueError):
    """Raised for semantically invalid presentations."""


class PresentationSyntaxError(PresentationError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Generator:
    name: str
    orientation: str  # VERTICAL or HORIZONTAL

    def __post_init__(self):
        if not _IDENT.fullmatch(self.name):
            raise PresentationError(f"invalid generator name {self.name!r}")
        if self.orientation not in (VERTICAL, HORIZONTAL):
            raise PresentationError(f"orientation must be 'V' or 'H', got {self.orientation!r}")


@dataclass(frozen=True, order=True)
class Letter:
    gen: str
    sign: int = 1

    def inverse(self):
        return Letter(self.gen, -self.sign)

    def __str__(self):
        return self.gen if self.sign > 0 else f"{self.gen}^-1"


Word = tuple  # tuple[Letter, ...]


def inverse_word(word):
    return tuple(x.inverse() for x in reversed(word))


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1].gen == x.gen and out[-1].sign == -x.sign:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    word = free_reduce(word)
    lo, hi = 0, len(word)
    while hi - lo >= 2 and word[lo].gen == word[hi - 1].gen and word[lo].sign == -word[hi - 1].sign:
        lo += 1
        hi -= 1
    return word[lo:hi]


def is_cyclically_reduced(word):
    n = len(word)
    for i in range(n):
        a, b = word[i], word[(i + 1) % n]
        if n > 1 and a.gen == b.gen and a.sign == -b.sign:
            return False
    return True


def format_word(word):
    """Render a word with exponent notation, e.g. ``a b^-1 c^2``."""
    terms = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        k = (j - i) * word[i].sign
        terms.append(word[i].gen if k == 1 else f"{word[i].gen}^{k}")
        i = j
    return " ".join(terms)


def parse_word(text):
    """Parse whitespace-separated terms into a (not yet reduced) word."""
    letters = []
    for term in text.split():
        m = _TERM.fullmatch(term)
        if m is None:
            raise PresentationError(f"bad term {term!r}")
        k = int(m.group("exp") or 1)
        if k == 0:
            raise PresentationError(f"zero exponent in {term!r}")
        letters.extend([Letter(m.group("name"), 1 if k > 0 else -1)] * abs(k))
    return tuple(letters)


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple
    diagnostics: tuple = field(default=(), compare=False)

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("generator names must be unique")
        known = set(names)
        for i, rel in enumerate(self.relators):
            if not rel:
                raise PresentationError(f"relator {i} is empty")
            for x in rel:
                if x.gen not in known:
                    raise PresentationError(f"relator {i} uses unknown generator {x.gen!r}")

    @property
    def orientation(self):
        return {g.name: g.orientation for g in self.generators}

    def generator_index(self, name):
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(name)

    def vertical(self):
        return [g.name for g in self.generators if g.orientation == VERTICAL]

    def horizontal(self):
        return [g.name for g in self.generators if g.orientation == HORIZONTAL]

    def to_text(self):
        lines = []
        if self.vertical():
            lines.append("vertical: " + " ".join(self.vertical()))
        if self.horizontal():
            lines.append("horizontal: " + " ".join(self.horizontal()))
        lines.extend("relator: " + format_word(r) for r in self.relators)
        return "\n".join(lines) + "\n"


def make_presentation(vertical, horizontal, relators):
    """Build a presentation from generator name lists and relator strings.

    Relators are given in the text term syntax and are freely and
    cyclically reduced; any change is recorded in ``diagnostics``.
    """
    both = set(vertical) & set(horizontal)
    if both:
        raise PresentationError(f"generators declared both vertical and horizontal: {sorted(both)}")
    gens = tuple(Generator(n, VERTICAL) for n in vertical) + tuple(Generator(n, HORIZONTAL) for n in horizontal)
    words = []
    diagnostics = []
    for i, rel in enumerate(relators):
        raw = parse_word(rel) if isinstance(rel, str) else tuple(rel)
        reduced = cyclic_reduce(raw)
        if not reduced:
            raise PresentationError(f"relator {i} is empty after reduction")
        if reduced != raw:
            msg = f"relator {i} reduced from length {len(raw)} to {len(reduced)}"
            logger.warning(msg)
            diagnostics.append(msg)
        words.append(reduced)
    return Presentation(gens, tuple(words), tuple(diagnostics))


def parse_presentation(text):
    vertical, horizontal, relators = [], [], []
    declared = {}
    relator_sites = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        key, sep, rest = line.strip().partition(":")
        if not sep or key.strip() not in ("vertical", "horizontal", "relator"):
            raise PresentationSyntaxError("expected 'vertical:', 'horizontal:' or 'relator:'", lineno, col)
        key = key.strip()
        rest_col = line.index(":") + 2
        tokens = [(m.group(), m.start() + rest_col) for m in re.finditer(r"\S+", rest)]
        if not tokens:
            raise PresentationSyntaxError(f"'{key}:' needs at least one entry", lineno, rest_col)
        if key == "relator":
            for tok, tcol in tokens:
                m = _TERM.fullmatch(tok)
                if m is None:
                    raise PresentationSyntaxError(f"bad term {tok!r}", lineno, tcol)
                if m.group("exp") is not None and int(m.group("exp")) == 0:
                    raise PresentationSyntaxError(f"zero exponent in {tok!r}", lineno, tcol)
            relators.append(" ".join(t for t, _ in tokens))
            relator_sites.append((lineno, tokens))
            continue
        for tok, tcol in tokens:
            if not _IDENT.fullmatch(tok):
                raise PresentationSyntaxError(f"bad generator name {tok!r}", lineno, tcol)
            if tok in declared:
                if declared[tok] != key:
                    raise PresentationError(f"generator {tok!r} declared both vertical and horizontal")
                raise PresentationSyntaxError(f"generator {tok!r} declared twice", lineno, tcol)
            declared[tok] = key
            (vertical if key == "vertical" else horizontal).append(tok)
    for lineno, tokens in relator_sites:
        for tok, tcol in tokens:
            name = _TERM.fullmatch(tok).group("name")
            if name not in declared:
                raise PresentationSyntaxError(f"unknown generator {name!r}", lineno, tcol)
    return make_presentation(vertical, horizontal, relators)


# -- built-in presentations -------------------------------------------------

def leary_presentation():
    return make_presentation(
        ["a", "c", "e"],
        ["b", "d", "f"],
        [
            "a b c d e f",
            "a b^-1 c^2 f^-1 e^2 d^-1",
            "a^2 f c^2 b e d",
            "a d^-2 c b^-2 e f^-1",
            "a f^-2 c d^-1 e b^-2",
            "a d^2 c f^2 e b^2",
        ],
    )


def leary_family(n):
    """Presentation with generators a_i (vertical), b_i (horizontal), i mod n.

    For each i there are two relators built from the blocks
    A_i = a_i a_{i+2} a_i^-2 a_{i+2}^-1 a_i and the analogous B_i.
    """
    if n < 4:
        raise PresentationError(f"leary_family needs n >= 4, got {n}")

    def block(ch, i):
        x, y = f"{ch}_{i % n}", f"{ch}_{(i + 2) % n}"
        return (Letter(x), Letter(y), Letter(x, -1), Letter(x, -1), Letter(y, -1), Letter(x))

    relators = []
    for i in range(n):
        a_i, b_i = Letter(f"a_{i}"), Letter(f"b_{i}")
        B = block("b", i)
        first = (a_i,) + block("a", i) + B
        second = (b_i,) + B + inverse_word(block("a", i)) + B
        for k in range(1, 4):
            first += block("a", i + k) + B
            second += inverse_word(block("a", i + k)) + (B if k < 3 else ())
        relators.append(first)
        relators.append(second)
    return make_presentation([f"a_{i}" for i in range(n)], [f"b_{i}" for i in range(n)], relators)


def torus_presentation():
    return make_presentation(["v"], ["h"], ["v h v^-1 h^-1"])


def counterexample(k, m=2, n=3):
    """The four presentations that fail to subdivide without the triangle inequality."""
    if k == 1:
        return make_presentation(["v"], ["h"], [f"v^{m} h^{n}"])
    if k == 2:
        return make_presentation(["v"], ["h"], [f"v^{m} h^{n}", f"v^{-m} h^{n}"])
    if k == 3:
        return make_presentation(["v"], ["h"], [f"h v^{m} h^-1 v^{n}"])
    if k == 4:
        return make_presentation(["u", "v"], ["h"], ["h^-1 u h v^-1 u^-1", "h^-1 v h u^-1 v^-1"])
    raise PresentationError(f"no counterexample {k}")


BUILTINS = {
    "leary1": "Leary's 6-generator, 6-relator presentation",
    "leary-family": "Leary's family with words A_i, B_i (--n N, N >= 4)",
    "torus": "<v, h | v h v^-1 h^-1>",
    "counterexample1": "<v, h | v^m h^n> (--m M --n N)",
    "counterexample2": "<v, h | v^m h^n, v^-m h^n> (--m M --n N)",
    "counterexample3": "<v, h | h v^m h^-1 v^n> (--m M --n N)",
    "counterexample4": "<u, v, h | h^-1 u h v^-1 u^-1, h^-1 v h u^-1 v^-1>",
}


def builtin(name, n=None, m=None):
    if name == "leary1":
        return leary_presentation()
    if name == "leary-family":
        return leary_family(4 if n is None else n)
    if name == "torus":
        return torus_presentation()
    if name.startswith("counterexample") and name[len("counterexample"):].isdigit():
        return counterexample(int(name[len("counterexample"):]), 2 if m is None else m, 3 if n is None else n)
    raise PresentationError(f"unknown builtin {name!r}")
