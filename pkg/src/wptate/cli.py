"""Command-line front end.

    wptate regularity  JOB
    wptate cohomology  JOB --twists LO..HI [--imax K] [--r R] [--json]
    wptate tate        JOB --steps K [--r R] [--json]
    wptate hilbert     JOB --range LO..HI

JOB is a path to a JSON job file or the name of a bundled corpus job
(``elliptic-p112``, ``rational-p11122``, ``structure-sheaf-p112``,
``p2-standard``, ``p1-standard``).  Exit status: 0 on success, 2 for
malformed input, 3 when a resource limit is hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import __version__
from .dmod import DEFAULT_CAP, ResourceLimitError
from .field import PrimeField
from .polyring import InhomogeneousError, ModulePresentation, ParseError, WeightedRing, parse_polynomial
from .resolution import ZeroModuleError, h0m_vanishes, hilbert, regularity
from .tate import CohomologyQuery, choose_r, sheaf_cohomology, tate_window

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3

PROVENANCE_CODES = {
    "dimension-count": "d",
    "regularity-vanishing": "v",
    "resolution-socle": "s",
    "above-dimension": "a",
}


class SpecError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        super().__init__(message)


@dataclass
class JobSpec:
    ring: WeightedRing
    module: ModulePresentation
    permutation: tuple  # sorted position k holds input variable permutation[k]
    defaults: dict = field(default_factory=dict)
    source: str = ""


def corpus_names() -> list:
    root = resources.files("wptate") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _read_job_text(job: str) -> tuple[str, str]:
    path = Path(job)
    if path.is_file():
        return path.read_text(), str(path)
    if job in corpus_names():
        return (resources.files("wptate") / "corpus" / f"{job}.json").read_text(), job
    raise SpecError(f"no such job file or corpus entry: {job!r}")


def _locate(text: str, needle: str, offset: int) -> tuple[int, int] | tuple[None, None]:
    """Line/column (1-based) of character ``offset`` of string ``needle`` in
    the raw JSON text, if the literal can be found."""
    lit = json.dumps(needle)
    k = text.find(lit)
    if k < 0:
        return None, None
    k += 1 + offset
    line = text.count("\n", 0, k) + 1
    col = k - (text.rfind("\n", 0, k) + 1) + 1
    return line, col


def _poly(s, R: WeightedRing, text: str):
    if not isinstance(s, str):
        raise SpecError(f"polynomial entries must be strings, got {s!r}")
    try:
        return parse_polynomial(s, R)
    except ParseError as e:
        line, col = _locate(text, s, e.pos)
        raise SpecError(f"in {s!r}: {e}", line, col) from None


def load_job(job: str, char: int | None = None) -> JobSpec:
    text, _name = _read_job_text(job)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(e.msg, e.lineno, e.colno) from None
    if not isinstance(doc, dict):
        raise SpecError("job file must be a JSON object")
    weights = doc.get("weights")
    if not isinstance(weights, list) or not weights or not all(isinstance(w, int) for w in weights):
        raise SpecError("'weights' must be a nonempty list of integers")
    if any(w < 1 for w in weights):
        raise SpecError("weights must be positive")
    names = doc.get("vars") or [f"x{i}" for i in range(len(weights))]
    if len(names) != len(weights):
        raise SpecError("'vars' must name every variable")
    perm = tuple(sorted(range(len(weights)), key=lambda i: weights[i]))
    p = char if char is not None else doc.get("char", 32003)
    try:
        R = WeightedRing(tuple(weights[i] for i in perm), tuple(names[i] for i in perm), PrimeField(p))
    except ValueError as e:
        raise SpecError(str(e)) from None
    mod = doc.get("module")
    if not isinstance(mod, dict):
        raise SpecError("'module' section missing")
    kind = mod.get("kind")
    try:
        if kind in ("quotient", "quotient-by-ideal"):
            gens = mod.get("ideal", [])
            M = ModulePresentation.quotient(R, [_poly(g, R, text) for g in gens])
        elif kind == "cokernel":
            degrees = mod.get("degrees")
            rows = mod.get("matrix", [])
            if not isinstance(degrees, list) or not all(isinstance(d, int) for d in degrees):
                raise SpecError("'degrees' must be a list of integers")
            rows = [[_poly(f, R, text) for f in row] for row in rows]
            M = ModulePresentation.cokernel(R, degrees, rows)
        else:
            raise SpecError(f"unknown module kind {kind!r} (use 'quotient' or 'cokernel')")
    except InhomogeneousError as e:
        raise SpecError(str(e)) from None
    except SpecError:
        raise
    except ValueError as e:
        raise SpecError(str(e)) from None
    return JobSpec(R, M, perm, dict(doc.get("defaults", {})), text)


def parse_range(s: str) -> tuple[int, int]:
    try:
        lo, hi = s.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise SpecError(f"range must look like LO..HI, got {s!r}") from None
    if lo > hi:
        raise SpecError(f"empty range {s!r}")
    return lo, hi


def _header(job: JobSpec) -> dict:
    return {
        "weights": list(job.ring.weights),
        "char": job.ring.p,
        "variables": list(job.ring.var_names),
    }


# ---------------------------------------------------------------- cohomology


def cohomology_document(job: JobSpec, lo: int, hi: int, imax: int | None, r: int | None, cap: int) -> dict:
    T = sheaf_cohomology(CohomologyQuery(job.module, lo, hi, imax, r), cap=cap)
    doc = _header(job)
    doc["r_used"] = T.r_used
    doc["table"] = {}
    doc["provenance"] = {}
    for i in range(T.i_max + 1):
        doc["table"][f"h{i}"] = {str(j): T.entries[(i, j)] for j in range(hi, lo - 1, -1)}
        doc["provenance"][f"h{i}"] = {str(j): T.provenance[(i, j)] for j in range(hi, lo - 1, -1)}
    return doc


def render_cohomology(doc: dict) -> str:
    rows = list(doc["table"])
    cols = list(doc["table"][rows[0]]) if rows else []
    width = max([5] + [len(c) + 1 for c in cols] + [len(str(v)) + 1 for r in rows for v in doc["table"][r].values()])
    lines = [
        f"weights: {' '.join(map(str, doc['weights']))}  char: {doc['char']}  r_used: {doc['r_used']}",
        f"variables: {' '.join(doc['variables'])}",
        "       j" + "".join(f"{c:>{width}}" for c in cols),
    ]
    for r in rows:
        label = "h^" + r[1:]
        lines.append(f"{label:>8}" + "".join(f"{doc['table'][r][c]:>{width}}" for c in cols))
    lines.append("provenance (d = dimension-count, v = regularity-vanishing, s = resolution-socle, a = above-dimension)")
    for r in rows:
        label = "h^" + r[1:]
        codes = (PROVENANCE_CODES[doc["provenance"][r][c]] for c in cols)
        lines.append(f"{label:>8}" + "".join(f"{x:>{width}}" for x in codes))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- tate


def tate_document(job: JobSpec, steps: int, r: int | None, cap: int) -> dict:
    W = tate_window(job.module, steps, r=r, cap=cap)
    doc = _header(job)
    doc["r_used"] = W.r
    doc["sigma"] = W.sigma
    doc["steps"] = steps
    pieces = {}
    for ell in sorted(W.pieces, reverse=True):
        cnt = W.pieces[ell]
        summands = sorted(cnt.items(), key=lambda t: (t[0][0] - t[0][1], t[0][0]), reverse=True)
        pieces[str(ell)] = {
            "kind": "resolution" if ell in W.resolution_flags else "bgg",
            "summands": [[c, s, m] for (c, s), m in summands],
        }
    doc["pieces"] = pieces
    doc["jumps"] = sorted(W.jumps())
    return doc


def _fmt_piece(summands) -> str:
    return " + ".join(f"w_E({c};{s})^{m}" for c, s, m in summands) or "0"


def render_tate(doc: dict) -> str:
    lines = [
        f"weights: {' '.join(map(str, doc['weights']))}  char: {doc['char']}  r_used: {doc['r_used']}  sigma: {doc['sigma']}",
        " -> ".join(_fmt_piece(p["summands"]) for p in doc["pieces"].values()),
    ]
    for ell, p in doc["pieces"].items():
        lines.append(f"l={ell}: {_fmt_piece(p['summands'])}  [{p['kind']}]")
    lines.append("jumps: " + " ".join(map(str, doc["jumps"])))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- driver


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wptate", description="Sheaf cohomology on weighted projective stacks.")
    ap.add_argument("--version", action="version", version=f"wptate {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("job", help="job file or corpus name")
        p.add_argument("--char", type=int, default=None, help="override the characteristic")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max basis vectors in the resolution")

    p = sub.add_parser("regularity", help="regularity, Symonds constant and the chosen r")
    common(p)
    p.add_argument("--json", action="store_true")
    p = sub.add_parser("cohomology", help="table of h^i(F(j))")
    common(p)
    p.add_argument("--twists", default=None, help="LO..HI")
    p.add_argument("--imax", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p = sub.add_parser("tate", help="a window of the Tate resolution")
    common(p)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p = sub.add_parser("hilbert", help="dim M_d over a range of degrees")
    common(p)
    p.add_argument("--range", dest="range_", default=None, help="LO..HI")
    return ap


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def execute(args) -> str:
    job = load_job(args.job, args.char)
    d = job.defaults
    if args.command == "regularity":
        doc = _header(job)
        doc.update(
            {
                "regularity": regularity(job.module),
                "sigma": job.ring.sigma,
                "h0m_vanishes": h0m_vanishes(job.module),
                "r": choose_r(job.module),
            }
        )
        if args.json:
            return _dump(doc)
        return (
            f"reg: {doc['regularity']}\nsigma: {doc['sigma']}\n"
            f"h0m_vanishes: {str(doc['h0m_vanishes']).lower()}\nr: {doc['r']}\n"
        )
    if args.command == "cohomology":
        twists = args.twists or d.get("twists")
        if twists is None:
            raise SpecError("--twists LO..HI is required")
        lo, hi = parse_range(twists)
        imax = args.imax if args.imax is not None else d.get("imax")
        doc = cohomology_document(job, lo, hi, imax, args.r, args.cap)
        return _dump(doc) if args.json else render_cohomology(doc)
    if args.command == "tate":
        steps = args.steps if args.steps is not None else d.get("steps")
        if steps is None:
            raise SpecError("--steps K is required")
        doc = tate_document(job, int(steps), args.r, args.cap)
        return _dump(doc) if args.json else render_tate(doc)
    if args.command == "hilbert":
        rng = args.range_ or d.get("range")
        if rng is None:
            raise SpecError("--range LO..HI is required")
        lo, hi = parse_range(rng)
        return " ".join(str(hilbert(job.module, k)) for k in range(lo, hi + 1)) + "\n"
    raise SpecError(f"unknown command {args.command!r}")


def _join_ranges(argv: list) -> list:
    # let "--twists -2..2" through argparse, which would read -2..2 as a flag
    out = []
    k = 0
    while k < len(argv):
        tok = argv[k]
        if tok in ("--twists", "--range") and k + 1 < len(argv):
            out.append(f"{tok}={argv[k + 1]}")
            k += 2
            continue
        out.append(tok)
        k += 1
    return out


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = _build_parser()
    try:
        args = ap.parse_args(_join_ranges(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        out.write(execute(args))
    except SpecError as e:
        where = f"{args.job}:{e.line}:{e.col}: " if e.line is not None else f"{args.job}: "
        err.write(f"error: {where}{e}\n")
        return EXIT_INPUT
    except (ZeroModuleError, InhomogeneousError, ValueError) as e:
        err.write(f"error: {args.job}: {e}\n")
        return EXIT_INPUT
    except ResourceLimitError as e:
        err.write(f"error: resource limit: {e}\n")
        return EXIT_RESOURCE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
