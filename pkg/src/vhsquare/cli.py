"""Command-line front end: check, subdivide, fixtures, pairing, link.

Exit codes: 0 success, 1 a criterion failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .bicomplex import (BicomplexError, build_standard_2complex, find_repeated_corners, is_proper_power,
                        needs_parity_subdivision, parity_subdivide, side_decompose, triangle_holds)
from .pairing import (ORACLE_LIMIT, Pairing, PairingError, abstract_decomposition, brute_force_pairing,
                      greedy_pairing, pairing_exists)
from .presentation import BUILTINS, HORIZONTAL, VERTICAL, PresentationError, builtin, parse_presentation
from .squarecomplex import (VerificationError, Verdict, all_links, bicomplex_to_json, dumps_complex,
                            gauss_bonnet_disk, hyperbolicity_criterion, link_to_dot, npc_check,
                            presentation_hash, small_cancellation_check, vertex_link)
from .subdivision import SubdivisionError, subdivide_complex

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# stages whose failure makes the run fail; the rest are informational
GATING = ("triangle", "corners", "subdivision", "gauss_bonnet", "npc")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    source: str  # file path, "-" for stdin, or "builtin:NAME"
    n: int | None = None
    m: int | None = None
    fmt: str = "text"
    out: Path | None = None
    dot_links: bool = False
    oracle: bool = False
    pairing_file: Path | None = None
    skip_assembly: bool = False


@dataclass
class VerificationReport:
    source: str
    presentation_hash: str
    stages: dict = field(default_factory=dict)  # name -> Verdict, in pipeline order
    counts: dict = field(default_factory=dict)

    def add(self, name, verdict):
        self.stages[name] = verdict
        return verdict

    def failed_stages(self):
        return [k for k in GATING if k in self.stages and self.stages[k].status == "fail"]

    @property
    def exit_code(self):
        return EXIT_FAIL if self.failed_stages() else EXIT_OK

    def to_json(self):
        return {
            "source": self.source,
            "presentation_hash": self.presentation_hash,
            "stages": {k: v.to_json() for k, v in self.stages.items()},
            "stage_order": list(self.stages),
            "counts": self.counts,
            "failed": self.failed_stages(),
            "exit_code": self.exit_code,
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"

    def to_text(self):
        lines = [f"source: {self.source}", f"presentation sha256: {self.presentation_hash}"]
        for name, v in self.stages.items():
            tag = "" if name in GATING else "  (informational)"
            lines.append(f"{name:<20} {v.status}{tag}")
            for line in _summary(name, v):
                lines.append("    " + line)
        if self.counts:
            lines.append("counts: " + ", ".join(f"{k}={v}" for k, v in self.counts.items()))
        failed = self.failed_stages()
        lines.append("result: " + ("FAIL (" + ", ".join(failed) + ")" if failed else "PASS"))
        return "\n".join(lines) + "\n"


def _summary(name, v):
    if name == "triangle":
        if isinstance(v.witness, str):
            yield v.witness
        for row in v.detail["polygons"]:
            mark = "pass" if row["pass"] else "FAIL"
            yield (f"relator {row['polygon'] + 1}: {mark}  r={row['r']}  "
                   f"vertical runs {tuple(row['vertical'])}  horizontal runs {tuple(row['horizontal'])}")
    elif name == "corners":
        if v.witness:
            for w in v.witness:
                at = ", ".join(f"relator {k + 1} position {i}" for k, i in w["occurrences"])
                yield f"repeated corner {w['corner']} at {at}"
        else:
            yield "no repeated VH-corners"
        if v.detail["proper_power_polygons"]:
            yield "proper powers: relators " + ", ".join(str(k + 1) for k in v.detail["proper_power_polygons"])
        if v.detail["free_edges"]:
            yield "edges on no polygon: " + ", ".join(map(str, v.detail["free_edges"]))
    elif name == "parity":
        yield v.detail["action"]
        if v.detail["odd_polygons"]:
            yield "odd class totals in relators " + ", ".join(str(k + 1) for k in v.detail["odd_polygons"])
    elif name in ("subdivision", "gauss_bonnet", "small_cancellation", "npc") and v.status == "fail":
        yield str(v.witness)
    elif name == "npc" and v.status == "pass":
        yield f"minimum link girth {v.detail['min_girth']}"
    elif name == "hyperbolicity" and v.witness:
        for w in v.witness:
            yield f"relator {w['polygon'] + 1} has only {w['sides']} sides"
    elif name == "pairing_oracle" and v.status == "fail":
        yield str(v.witness)
    if name == "small_cancellation":
        yield f"longest piece {v.detail['max_piece']}, lambda {v.detail['lambda']}"


# -- input ------------------------------------------------------------------

def load_presentation(cfg):
    try:
        if cfg.source.startswith("builtin:"):
            return builtin(cfg.source[len("builtin:"):], n=cfg.n, m=cfg.m)
        text = sys.stdin.read() if cfg.source == "-" else Path(cfg.source).read_text()
        return parse_presentation(text)
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.source}: {exc.strerror}") from exc
    except PresentationError as exc:
        raise UsageError(str(exc)) from exc


def load_pairing_file(path):
    """JSON object: polygon index -> {"V": [[i, j], ...], "H": [[i, j], ...]}.

    Positions index the boundary of the (parity-subdivided) polygon.
    """
    try:
        data = json.loads(Path(path).read_text())
        return {int(k): (Pairing.from_pairs(VERTICAL, map(tuple, v["V"])),
                         Pairing.from_pairs(HORIZONTAL, map(tuple, v["H"]))) for k, v in data.items()}
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad pairing file {path}: {exc}") from exc


# -- pipeline ---------------------------------------------------------------

@dataclass
class PipelineResult:
    report: VerificationReport
    presentation: object
    x: object = None
    subdivided: object = None
    disks: tuple = ()
    complex: object = None


def run_pipeline(p, source, oracle=False, pairings=None, skip_assembly=False):
    report = VerificationReport(source, presentation_hash(p))
    res = PipelineResult(report, p)
    try:
        x = build_standard_2complex(p)
    except BicomplexError as exc:
        # a relator using one class only has a single side
        report.add("triangle", Verdict("fail", str(exc), {"polygons": []}))
        return res
    res.x = x

    rows = []
    for k, poly in enumerate(x.polygons):
        sd = side_decompose(poly)
        rows.append({"polygon": k, "r": sd.r, "vertical": list(sd.vertical_lengths),
                     "horizontal": list(sd.horizontal_lengths),
                     "pass": triangle_holds(sd.vertical_lengths) and triangle_holds(sd.horizontal_lengths)})
    bad = [row["polygon"] for row in rows if not row["pass"]]
    report.add("triangle", Verdict("fail" if bad else "pass", bad or None, {"polygons": rows}))

    repeated = find_repeated_corners(x)
    witness = [{"corner": _corner_text(x, key), "occurrences": [list(o) for o in occ]} for key, occ in repeated]
    report.add("corners", Verdict("fail" if repeated else "pass", witness or None, {
        "repeated": len(repeated),
        "proper_power_polygons": [k for k, r in enumerate(p.relators) if is_proper_power(r)],
        "free_edges": x.free_edges(),
    }))

    odd = [k for k, poly in enumerate(x.polygons)
           if sum(side_decompose(poly).vertical_lengths) % 2 or sum(side_decompose(poly).horizontal_lengths) % 2]
    y = parity_subdivide(x)
    report.add("parity", Verdict("pass", None, {
        "action": "every 1-cell doubled" if needs_parity_subdivision(x) else "no subdivision needed",
        "odd_polygons": odd}))
    res.subdivided = y

    if oracle:
        report.add("pairing_oracle", _oracle_stage(x))

    if bad:
        for name in ("subdivision", "gauss_bonnet", "npc"):
            report.add(name, Verdict("n/a", None, {"reason": "triangle inequality fails"}))
        _informational(report, x, p)
        return res

    try:
        configs, _, disks, X = subdivide_complex(y, pairings)
    except SubdivisionError as exc:
        report.add("subdivision", Verdict("fail", str(exc)))
        for name in ("gauss_bonnet", "npc"):
            report.add(name, Verdict("n/a", None, {"reason": "no square disks"}))
        _informational(report, x, p)
        return res
    res.disks = disks
    report.add("subdivision", Verdict("pass", None, {
        "disks": [{"polygon": k, "method": c.method, "uncut_corners": list(c.uncut),
                   "squares": len(d.squares), "crossings": d.num_crossings}
                  for k, (c, d) in enumerate(zip(configs, disks))]}))

    totals = []
    try:
        for d in disks:
            totals.append(gauss_bonnet_disk(d).total)
        report.add("gauss_bonnet", Verdict("pass", None, {"totals": totals}))
    except (ValueError, VerificationError) as exc:
        report.add("gauss_bonnet", Verdict("fail", f"disk {len(totals)}: {exc}", {"totals": totals}))

    if skip_assembly:
        report.add("npc", Verdict("n/a", None, {"reason": "assembly skipped"}))
    else:
        res.complex = X
        try:
            report.add("npc", npc_check(X))
        except VerificationError as exc:
            report.add("npc", Verdict("fail", str(exc)))
        report.counts = {"vertices": len(X.vertices), "edges": len(X.edges), "squares": len(X.squares),
                         "euler_characteristic": X.euler_characteristic()}
    _informational(report, x, p)
    return res


def _informational(report, x, p):
    report.add("hyperbolicity", hyperbolicity_criterion(x))
    report.add("small_cancellation", small_cancellation_check(p))


def _corner_text(x, key):
    def signed(se):
        label = x.edge(se[0]).label
        return label if se[1] > 0 else f"{label}^-1"
    return f"{signed(key.vertical)} {signed(key.horizontal)}"


def _oracle_stage(x):
    """Compare the pairing criterion with exhaustive search on every class vector."""
    checked, skipped, mismatches = 0, 0, []
    for k, poly in enumerate(parity_subdivide(x).polygons):
        sd = side_decompose(poly)
        for cls in (VERTICAL, HORIZONTAL):
            lengths = sd.lengths(cls)
            if sum(lengths) > ORACLE_LIMIT:
                skipped += 1
                continue
            checked += 1
            if brute_force_pairing(lengths, count=False).found != pairing_exists(lengths):
                mismatches.append({"polygon": k, "class": cls, "lengths": list(lengths)})
    detail = {"checked": checked, "skipped_over_limit": skipped}
    if mismatches:
        return Verdict("fail", mismatches, detail)
    return Verdict("pass" if checked else "n/a", None, detail)


# -- commands ---------------------------------------------------------------

def _emit(cfg, report, stream):
    stream.write(report.dumps() if cfg.fmt == "json" else report.to_text())


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_check(cfg, stream=sys.stdout):
    p = load_presentation(cfg)
    pairings = load_pairing_file(cfg.pairing_file) if cfg.pairing_file else None
    res = run_pipeline(p, cfg.source, cfg.oracle, pairings, cfg.skip_assembly)
    _emit(cfg, res.report, stream)
    if cfg.out:
        _write(cfg.out / "report.json", res.report.dumps())
        if res.complex is not None:
            _write(cfg.out / "complex.json", dumps_complex(res.complex, p))
        if res.x is not None:
            _write(cfg.out / "bicomplex.json", json.dumps(bicomplex_to_json(res.x), indent=1, sort_keys=True) + "\n")
        if cfg.dot_links and res.complex is not None:
            for v, g in all_links(res.complex).items():
                _write(cfg.out / "links" / f"link_{v}.dot", link_to_dot(res.complex, g))
    return res.report.exit_code


def cmd_subdivide(cfg, stream=sys.stdout):
    p = load_presentation(cfg)
    pairings = load_pairing_file(cfg.pairing_file) if cfg.pairing_file else None
    res = run_pipeline(p, cfg.source, cfg.oracle, pairings)
    failed = [k for k in ("triangle", "corners", "subdivision") if res.report.stages.get(k, Verdict("n/a")).status == "fail"]
    if failed:
        print(f"cannot subdivide: {', '.join(failed)} failed", file=sys.stderr)
        for name in failed:
            print(f"  {name}: {res.report.stages[name].witness}", file=sys.stderr)
        return EXIT_FAIL
    text = dumps_complex(res.complex, p)
    if cfg.out:
        _write(cfg.out / "complex.json", text)
        _write(cfg.out / "report.json", res.report.dumps())
    else:
        stream.write(text)
    return res.report.exit_code


def cmd_fixtures(stream=sys.stdout):
    params = {"leary-family": " n", "counterexample1": " m n", "counterexample2": " m n", "counterexample3": " m n"}
    for name, desc in BUILTINS.items():
        stream.write(f"{name + params.get(name, ''):<22} {desc}\n")
    return EXIT_OK


def cmd_pairing(lengths, cls, oracle, stream=sys.stdout):
    if not lengths or any(n <= 0 for n in lengths):
        raise UsageError("--lengths needs positive integers")
    exists = pairing_exists(lengths)
    stream.write(f"lengths {tuple(lengths)}: {'admissible pairing exists' if exists else 'no admissible pairing'}\n")
    code = EXIT_OK if exists else EXIT_FAIL
    if exists:
        sd = abstract_decomposition(lengths, cls)
        pos = [i for side in sd.sides(cls) for i in side]
        rank = {i: k for k, i in enumerate(pos)}
        pairs = sorted(tuple(sorted((rank[i], rank[j]))) for i, j in greedy_pairing(sd, cls).pairs)
        stream.write("greedy pairs: " + " ".join(f"{i}-{j}" for i, j in pairs) + "\n")
    if oracle:
        if sum(lengths) > ORACLE_LIMIT:
            stream.write(f"oracle skipped: more than {ORACLE_LIMIT} positions\n")
        else:
            res = brute_force_pairing(lengths)
            agree = res.found == exists
            stream.write(f"oracle: {res.count} admissible pairings; {'agrees' if agree else 'DISAGREES'}\n")
            if not agree:
                code = EXIT_FAIL
    return code


def cmd_link(cfg, vertex, dot, stream=sys.stdout):
    p = load_presentation(cfg)
    res = run_pipeline(p, cfg.source)
    if res.complex is None:
        print("cannot build the subdivided complex: " + ", ".join(res.report.failed_stages()), file=sys.stderr)
        return EXIT_FAIL
    try:
        g = vertex_link(res.complex, vertex)
    except KeyError as exc:
        raise UsageError(f"no vertex {vertex}") from exc
    if dot:
        stream.write(link_to_dot(res.complex, g))
    else:
        girth = res.report.stages["npc"].detail["link_girth"][str(vertex)]
        stream.write(f"vertex {vertex}: {len(g.nodes)} nodes, {len(g.arcs)} arcs, girth {girth}\n")
    return EXIT_OK


# -- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _input_args(sp):
    sp.add_argument("input", nargs="?", help="presentation file ('-' for stdin)")
    sp.add_argument("--builtin", metavar="NAME", help="use a built-in presentation (see 'fixtures')")
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)


def build_parser():
    parser = _Parser(prog="vhsquare", description="Check and build nonpositively curved VH-subdivisions.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("check", "subdivide"):
        sp = sub.add_parser(name)
        _input_args(sp)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--out", type=Path, metavar="DIR")
        sp.add_argument("--oracle", action="store_true", help="cross-check pairings by exhaustive search")
        sp.add_argument("--pairing-file", type=Path, metavar="PATH")
        if name == "check":
            sp.add_argument("--dot-links", action="store_true")
            sp.add_argument("--skip-assembly", action="store_true")
    sub.add_parser("fixtures")
    sp = sub.add_parser("pairing")
    sp.add_argument("--lengths", type=int, nargs="+", required=True)
    sp.add_argument("--class", dest="cls", choices=(VERTICAL, HORIZONTAL), default=VERTICAL)
    sp.add_argument("--oracle", action="store_true")
    sp = sub.add_parser("link")
    _input_args(sp)
    sp.add_argument("--vertex", type=int, default=0)
    sp.add_argument("--dot", action="store_true")
    return parser


def _config(args):
    if (args.input is None) == (args.builtin is None):
        raise UsageError("give exactly one of a presentation file or --builtin")
    return RunConfig(
        source=f"builtin:{args.builtin}" if args.builtin else args.input,
        n=args.n, m=args.m,
        fmt=getattr(args, "format", "text"),
        out=getattr(args, "out", None),
        dot_links=getattr(args, "dot_links", False),
        oracle=getattr(args, "oracle", False),
        pairing_file=getattr(args, "pairing_file", None),
        skip_assembly=getattr(args, "skip_assembly", False),
    )


def main(argv=None, stream=None):
    stream = stream or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR, format="%(levelname)s %(name)s: %(message)s")
        if args.command == "fixtures":
            return cmd_fixtures(stream)
        if args.command == "pairing":
            return cmd_pairing(args.lengths, args.cls, args.oracle, stream)
        cfg = _config(args)
        if args.command == "check":
            return cmd_check(cfg, stream)
        if args.command == "subdivide":
            return cmd_subdivide(cfg, stream)
        return cmd_link(cfg, args.vertex, args.dot, stream)
    except UsageError as exc:
        print(f"vhsquare: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PairingError as exc:
        print(f"vhsquare: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
