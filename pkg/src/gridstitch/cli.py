"""Command-line interface.

Exit codes: 0 success, 2 validation failure, 3 infeasible decomposition,
4 solver time budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import document, layout, mesh, templates
from .cover import ModuleSupply, solve_cover
from .cover import bench as benchmod
from .errors import Infeasible, PatternError
from .pattern import validate_pattern

EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_TIMEOUT = 4


def _load_pattern(path):
    try:
        return document.load(path)
    except (PatternError, OSError) as exc:
        print(f"error: cannot load {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION) from None


def _load_supply(path):
    if path is None:
        return None
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return ModuleSupply.from_dict(data.get("sizes", data))


def cmd_validate(args):
    pattern = _load_pattern(args.file)
    problems = validate_pattern(pattern)
    if problems:
        for p in problems:
            print(f"invalid: {p}")
        return EXIT_VALIDATION
    print(f"ok: phase={pattern.phase} panels={len(pattern.panels)} "
          f"seams={len(pattern.seams)} revision={pattern.revision}")
    return 0


def cmd_decompose(args):
    pattern = _load_pattern(args.file)
    supply = _load_supply(args.supply)
    try:
        asm = solve_cover(pattern, supply, args.budget, args.backend)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    doc = asm.to_dict()
    doc["pattern_revision"] = pattern.revision
    text = document.canonical_json(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    counts = asm.foundation_counts()
    summary = ", ".join(f"{n}x {s}x{s}" for s, n in sorted(counts.items()))
    print(f"modules: {asm.module_count} ({summary or 'no foundation modules'}); "
          f"optimal: {asm.optimal}; "
          f"runtime: {asm.stats['runtime_s']:.2f}s", file=sys.stderr)
    if not asm.optimal:
        print(f"time budget exceeded; lower bound {asm.lower_bound}",
              file=sys.stderr)
        return EXIT_TIMEOUT
    return 0


def cmd_export_svg(args):
    pattern = _load_pattern(args.file)
    supply = _load_supply(args.supply)
    try:
        asm = solve_cover(pattern, supply, args.budget)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if not asm.optimal:
        print("time budget exceeded", file=sys.stderr)
        return EXIT_TIMEOUT
    lay = layout.pack_layout(asm, pattern, args.sheet_width)
    svg = layout.render_svg(lay, pattern.config, revision=pattern.revision)
    os.makedirs(args.output, exist_ok=True)
    svg_path = os.path.join(args.output, "cutting-guide.svg")
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(svg)
    instr = layout.assembly_instructions(pattern, asm)
    md_path = os.path.join(args.output, "instructions.md")
    with open(md_path, "w", encoding="utf-8") as fh:
        fh.write(layout.instructions_markdown(instr))
    json_path = os.path.join(args.output, "instructions.json")
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(document.canonical_json(instr))
    print(f"wrote {svg_path} ({lay.utilization:.1%} utilization), "
          f"{md_path}, {json_path}")
    return 0


def cmd_export_mesh(args):
    pattern = _load_pattern(args.file)
    with open(args.alignment, encoding="utf-8") as fh:
        data = json.load(fh)
    offsets = {int(k): tuple(v) for k, v in data.get("offsets", data).items()}
    bundle = mesh.build_bundle(pattern, offsets, args.spacing)
    written = mesh.export_bundle(bundle, args.output)
    print(f"wrote {len(written)} files to {args.output} "
          f"({len(bundle.threads)} threads)")
    return 0


def _parse_sizes(text):
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",") if t]


def cmd_bench(args):
    sizes = _parse_sizes(args.sizes)
    removals = [float(t) for t in args.removal.split(",") if t]
    seeds = list(range(args.seeds))
    rows = benchmod.benchmark_suite(sizes, removals, seeds,
                                    budget_s=args.budget, backend=args.backend)
    sys.stdout.write(benchmod.format_table(rows))
    if args.kernels:
        comparison = benchmod.kernel_comparison()
        sys.stdout.write("\nkernel comparison (pure vs compiled):\n")
        sys.stdout.write(benchmod.format_table(comparison))
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(benchmod.render_report_svg(rows))
        print(f"wrote {args.svg}", file=sys.stderr)
    return 0


def cmd_template(args):
    if args.action == "list":
        for name in templates.names():
            print(name)
        return 0
    pattern = templates.build(args.name)
    text = document.dumps(pattern)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args):
    from . import server

    server.serve(args.root, args.host, args.port)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gridstitch",
        description="Modular garment pattern engine: validate, decompose, export.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a pattern file's invariants")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("decompose", help="solve the minimal module cover")
    p.add_argument("file")
    p.add_argument("--supply", help="JSON supply file: {size: count|null}")
    p.add_argument("--budget", type=float, default=60.0, help="seconds per solve")
    p.add_argument("--backend", default="auto",
                   choices=["auto", "bb", "bb-py", "bb-c", "milp"])
    p.add_argument("-o", "--output", help="write the assembly JSON here")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("export-svg", help="cutting guide and instructions")
    p.add_argument("file")
    p.add_argument("--sheet-width", type=float, required=True, help="cm")
    p.add_argument("--supply")
    p.add_argument("--budget", type=float, default=60.0)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(fn=cmd_export_svg)

    p = sub.add_parser("export-mesh", help="simulation mesh bundle")
    p.add_argument("file")
    p.add_argument("--alignment", required=True,
                   help='JSON: {"offsets": {panel_id: [x_cm, y_cm]}}')
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(fn=cmd_export_mesh)

    p = sub.add_parser("bench", help="decomposition benchmark suite")
    p.add_argument("--sizes", default="10..25", help="e.g. 10..25 or 10,15,20")
    p.add_argument("--removal", default="0,0.01,0.1")
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--budget", type=float, default=120.0)
    p.add_argument("--backend", default="auto")
    p.add_argument("--kernels", action="store_true",
                   help="also compare the pure and compiled kernels")
    p.add_argument("--svg", help="write an SVG chart here")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("template", help="built-in template patterns")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_template)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--root", default="./patterns")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8777)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as exc:
        return exc.code
    except PatternError as exc:
        print(f"error: {exc.reason}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
