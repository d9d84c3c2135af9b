"""``mldeg`` command line: ML degrees, face reports, data-zero counts and the
t-deformed systems, driven by JSON model specs."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import __version__
from .lattice_core import validate_design_matrix
from .likelihood import (GenericityFailure, Timeout, count_solutions, flag_report, ml_degree,
                         monotonicity_report, random_data, time_limit)
from .models import (SCHEMA_VERSION, SpecError, format_rational, load_spec, model_from_spec,
                     parse_rational, scaling_preset)
from .polytope import face_lattice, lattice_normalized_volume
from .tropical import (TropicalWeights, cayley_subdivision_check, tropical_eliminant,
                       tropical_solution_count, tropical_system)

EXIT_SPEC = 1
EXIT_GENERICITY = 2
EXIT_TIMEOUT = 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec_path: str
    seed: int = 0
    output_format: str = "md"
    modular_gb: bool = True
    timeout: float = 3600.0
    timing: bool = True


# --- output ---------------------------------------------------------------------

def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, float):
        return f"{x:.2f}"
    return str(x)


def render(header: Sequence[str], rows: Sequence[Sequence], fmt: str, meta: dict | None = None) -> str:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, **(meta or {}),
               "rows": [dict(zip(header, (_json_value(v) for v in r))) for r in rows]}
        return json.dumps(doc, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(v) for v in r])
        return buf.getvalue().rstrip("\n")
    lines = []
    if meta:
        lines.append(" ".join(f"{k}={_cell(v)}" for k, v in meta.items()))
        lines.append("")
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "|".join("---" for _ in header) + "|")
    for r in rows:
        lines.append("| " + " | ".join(_cell(v) for v in r) + " |")
    return "\n".join(lines)


def _json_value(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


def face_label(members: Sequence[int]) -> str:
    """``conv(a1, ..., a16)`` style label with 1-based column names."""
    names = [f"a{j + 1}" for j in members]
    consecutive = list(members) == list(range(members[0], members[0] + len(members))) if members else False
    if len(names) > 3 and consecutive:
        return f"conv({names[0]}, ..., {names[-1]})"
    return f"conv({', '.join(names)})"


# --- commands -------------------------------------------------------------------

def _load(cfg: RunConfig):
    spec = load_spec(cfg.spec_path)
    return spec, model_from_spec(spec, cfg.seed)


def cmd_compute(cfg: RunConfig) -> tuple[str, int]:
    spec, M = _load(cfg)
    t0 = time.perf_counter()
    with time_limit(cfg.timeout):
        m = ml_degree(M, cfg.seed, modular=cfg.modular_gb)
        deg = lattice_normalized_volume(M.configuration())
    header = ["model", "mldeg", "degree", "seed"]
    row = [M.provenance, m, deg, cfg.seed]
    if cfg.timing:
        header.append("seconds")
        row.append(round(time.perf_counter() - t0, 3))
    return render(header, [row], cfg.output_format, {"mldeg": m, "degree": deg}), 0


def _report_rows(report, cfg: RunConfig, rows):
    header = ["face", "dimension", "members", "mldeg", "degree", "error"]
    out = []
    for r in rows:
        line = [face_label(r.members), r.dimension, " ".join(str(j + 1) for j in r.members),
                r.ml_degree, r.degree, r.error or ""]
        if cfg.timing:
            line.append(round(r.seconds, 3))
        out.append(line)
    if cfg.timing:
        header.append("seconds")
    return header, out


def cmd_facets(cfg: RunConfig, depth: int = 1) -> tuple[str, int]:
    spec, M = _load(cfg)
    rep = monotonicity_report(M, depth, cfg.seed, modular=cfg.modular_gb, timeout=cfg.timeout)
    header, rows = _report_rows(rep, cfg, rep.rows[1:])
    meta = {"mldeg": rep.ml_degree, "degree": rep.rows[0].degree,
            "monotone": "yes" if rep.monotone else "no"}
    code = 0 if any(r.ml_degree is not None for r in rep.rows) else EXIT_GENERICITY
    return render(header, rows, cfg.output_format, meta), code


def cmd_flag(cfg: RunConfig, flag: Sequence[Sequence[int]] | None = None) -> tuple[str, int]:
    spec, M = _load(cfg)
    flag = flag if flag is not None else spec.get("flag")
    if not flag:
        raise SpecError("no flag given (spec field 'flag' or --flag)")
    rep = flag_report(M, flag, cfg.seed, modular=cfg.modular_gb, timeout=cfg.timeout)
    header = ["Dimension", "Face", "ML Degree", "Degree"]
    rows = []
    for r in rep.rows:
        line = [r.dimension, face_label(r.members), r.ml_degree if r.error is None else r.error, r.degree]
        if cfg.timing:
            line.append(round(r.seconds, 3))
        rows.append(line)
    if cfg.timing:
        header.append("seconds")
    code = 0 if any(r.ml_degree is not None for r in rep.rows) else EXIT_GENERICITY
    return render(header, rows, cfg.output_format), code


def parse_pattern(text: str, n: int) -> list[bool]:
    """``"u u 0 u"``, ``"u,u,0,u"`` or ``"uu0u"`` -> which entries carry data."""
    toks = text.replace(",", " ").split()
    if len(toks) == 1:
        toks = list(toks[0])
    if len(toks) != n:
        raise SpecError(f"pattern has {len(toks)} entries, the model has {n} columns")
    bad = [t for t in toks if t not in ("0", "u")]
    if bad:
        raise SpecError(f"pattern entries must be '0' or 'u', got {bad}")
    return [t == "u" for t in toks]


def cmd_zeros(cfg: RunConfig, pattern: str, scalings: Sequence[str] | None = None) -> tuple[str, int]:
    import random

    spec, M = _load(cfg)
    mask = parse_pattern(pattern, M.n)
    names = list(scalings) if scalings else list(spec.get("scalings", [])) or ["model"]
    rng = random.Random(f"zeros:{cfg.seed}")
    vals = random_data(M.n, rng)
    u = [v if keep else Fraction(0) for v, keep in zip(vals, mask)]
    row = [" ".join("u" if k else "0" for k in mask)]
    with time_limit(cfg.timeout):
        for name in names:
            Mc = M if name == "model" else M.with_scaling(scaling_preset(name), name)
            row.append(str(count_solutions(Mc, u, cfg.seed, modular=cfg.modular_gb)))
    return render(["data"] + names, [row], cfg.output_format), 0


def _tropical_block(spec: dict) -> dict:
    block = spec.get("tropical")
    if not isinstance(block, dict) or "face" not in block:
        raise SpecError("spec has no 'tropical' block with a 'face'")
    return block


def _weights(block: dict, M, face, seed: int) -> TropicalWeights:
    w = block.get("weights")
    if isinstance(w, dict) and "random" in w:
        lo, hi = w["random"]
        return TropicalWeights.random(M, face, seed, int(lo), int(hi))
    try:
        return TropicalWeights(block["w"], block["w_prime"], face)
    except KeyError as exc:
        raise SpecError(f"tropical block lacks {exc.args[0]!r}") from None


def _face(M, members):
    target = tuple(sorted(int(j) for j in members))
    for F in face_lattice(M.configuration()):
        if F.member_indices == target:
            return F
    raise SpecError(f"columns {list(target)} are not a face")


def cmd_tropical_eliminate(cfg: RunConfig) -> tuple[str, int]:
    spec, M = _load(cfg)
    block = _tropical_block(spec)
    F = _face(M, block["face"])
    W = _weights(block, M, F, cfg.seed)
    u = [parse_rational(x) for x in block.get("data", ["1"] * M.n)]
    S = tropical_system(M, u, F, W)
    keep = block.get("keep", S.vars[-1])
    order = block.get("order")
    with time_limit(cfg.timeout):
        E = tropical_eliminant(S, keep, order)
        count = tropical_solution_count(S, cfg.seed)
        lim_eqs, lim_vars = S.facial_limit()
        lim = []
        for v in lim_vars:
            e = tropical_eliminant(lim_eqs, v)
            lim.append(f"{v}: {e.to_str()}")
    rows = [["eliminant", E.to_str()], ["solutions", str(count)], ["t-substitution", f"t -> t^{S.scale}"]]
    rows += [["t=0 eliminant", x] for x in lim]
    return render(["quantity", "value"], rows, cfg.output_format), 0


def cmd_tropical_subdivide(cfg: RunConfig) -> tuple[str, int]:
    spec, M = _load(cfg)
    block = _tropical_block(spec)
    F = _face(M, block["face"])
    W = _weights(block, M, F, cfg.seed)
    with time_limit(cfg.timeout):
        r = cayley_subdivision_check(M, F, W, block.get("data"))
    rows = [["points", len(r.configuration.points)], ["cells", len(r.cells)],
            ["largest cell", r.max_cell_size], ["triangulation", "yes" if r.is_triangulation else "no"]]
    return render(["quantity", "value"], rows, cfg.output_format), 0


def cmd_validate(cfg: RunConfig) -> tuple[str, int]:
    spec, M = _load(cfg)
    rep = validate_design_matrix(M.A)
    rows = [["first row all ones", rep.first_row_ones], ["full rank", rep.full_rank],
            ["lattice index one", rep.lattice_index_one], ["columns", M.n], ["d", M.d]]
    code = 0 if rep.ok else EXIT_SPEC
    return render(["check", "value"], rows, cfg.output_format), code


# --- entry point ----------------------------------------------------------------

def _parse_flag(text: str) -> list[list[int]]:
    """``"1-16;1-12;1"`` (1-based, inclusive ranges) -> 0-based column lists."""
    out = []
    for part in text.split(";"):
        cols: list[int] = []
        for tok in part.replace(",", " ").split():
            if "-" in tok:
                a, b = tok.split("-")
                cols.extend(range(int(a) - 1, int(b)))
            else:
                cols.append(int(tok) - 1)
        out.append(cols)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", required=True, help="model spec JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("md", "csv", "json"), default="md")
    gb = common.add_mutually_exclusive_group()
    gb.add_argument("--modular-gb", dest="modular", action="store_true", default=True,
                    help="count with Groebner bases over Z/p (default)")
    gb.add_argument("--exact-gb", dest="modular", action="store_false",
                    help="count with Groebner bases over Q")
    common.add_argument("--timeout", type=float, default=3600.0, help="seconds per computation")
    common.add_argument("--no-timing", action="store_true", help="omit wall times")

    p = argparse.ArgumentParser(prog="mldeg", description="ML degrees of scaled toric models")
    p.add_argument("--version", action="version", version=f"mldeg {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("compute", parents=[common], help="ML degree and degree of a model")
    fp = sub.add_parser("facets", parents=[common], help="ML degrees of all facets")
    fp.add_argument("--depth", type=int, default=1, help="face codimension to go down to")
    fl = sub.add_parser("flag", parents=[common], help="ML degrees along a flag of faces")
    fl.add_argument("--flag", help="e.g. '1-16;1-12;1' (1-based columns); default: spec field")
    z = sub.add_parser("zeros", parents=[common], help="solution counts for data with zeros")
    z.add_argument("--pattern", required=True, help="'u'/'0' per column, e.g. 'u u u u 0 0 0 0 0'")
    z.add_argument("--scalings", help="comma separated presets, default: spec field 'scalings'")
    model = sub.add_parser("model", help="model spec utilities")
    msub = model.add_subparsers(dest="action", required=True)
    msub.add_parser("validate", parents=[common], help="check the design matrix assumptions")
    trop = sub.add_parser("tropical", help="t-deformed likelihood equations")
    tsub = trop.add_subparsers(dest="action", required=True)
    tsub.add_parser("eliminate", parents=[common], help="eliminants over Q(t)")
    tsub.add_parser("subdivide", parents=[common], help="Cayley subdivision criterion")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    cfg = RunConfig(command, args.spec, args.seed, args.format, args.modular, args.timeout,
                    not args.no_timing)
    try:
        if command == "compute":
            text, code = cmd_compute(cfg)
        elif command == "facets":
            text, code = cmd_facets(cfg, args.depth)
        elif command == "flag":
            text, code = cmd_flag(cfg, _parse_flag(args.flag) if args.flag else None)
        elif command == "zeros":
            scal = [s.strip() for s in args.scalings.split(",")] if args.scalings else None
            text, code = cmd_zeros(cfg, args.pattern, scal)
        elif command == "model validate":
            text, code = cmd_validate(cfg)
        elif command == "tropical eliminate":
            text, code = cmd_tropical_eliminate(cfg)
        else:
            text, code = cmd_tropical_subdivide(cfg)
    except (SpecError, OSError) as exc:
        if isinstance(exc, Timeout):
            print(f"mldeg: timeout: {exc}", file=sys.stderr)
            return EXIT_TIMEOUT
        print(f"mldeg: spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except GenericityFailure as exc:
        print(f"mldeg: genericity failure: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    print(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
