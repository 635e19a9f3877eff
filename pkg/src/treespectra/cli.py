"""Command-line front end: spectrum, graph, correspondence, verify.

Exit codes: 0 success, 1 usage or configuration error, 2 verification
failure, 3 internal numerical failure.  Set TREESPECTRA_THREADS to cap the
BLAS thread count (honored when the process has not yet imported numpy).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _resolve_group(args):
    from .automata import BUILTIN_NAMES, builtin_group, load_group

    if args.group_file:
        return load_group(args.group_file), False
    if args.group is None:
        raise ValueError("a group name or --group-file is required")
    if args.group not in BUILTIN_NAMES:
        raise ValueError(f"unknown group {args.group!r}; built-ins: {', '.join(BUILTIN_NAMES)}")
    return builtin_group(args.group), True


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_spectrum(args) -> int:
    from . import _kernels
    from .eigen import symmetric_eigenvalues
    from .levelrep import MAX_DENSE_DIM, uniform_hecke_operator
    from .spectra import hausdorff_to_set, predicted_spectrum, set_distance

    group, is_builtin = _resolve_group(args)
    if group.d**args.level > MAX_DENSE_DIM:
        raise ValueError(f"dimension {group.d ** args.level} exceeds the dense bound {MAX_DENSE_DIM}")
    op = uniform_hecke_operator(group, args.level)
    sp = symmetric_eigenvalues(op)
    sset = predicted_spectrum(group.name, depth=args.depth) if is_builtin else None
    tol = args.tol
    if tol is None:
        tol = 1e-9 if group.name.startswith("grigorchuk") else 1e-6
    rows = []
    for value, mult in zip(sp.eigenvalues, sp.multiplicities):
        dist = set_distance(sset, value) if sset is not None else None
        rows.append((value, mult, dist))
    import numpy as np

    hausdorff = float(hausdorff_to_set(sset, np.asarray(sp.flatten()))) if sset is not None else None
    meta = {
        "group": group.name,
        "level": args.level,
        "julia_depth": args.depth,
        "tolerance": tol,
        "backend": _kernels.BACKEND,
        "hausdorff": hausdorff,
    }
    if args.format == "json":
        payload = dict(meta)
        payload["eigenvalues"] = [
            {
                "value": value,
                "multiplicity": mult,
                "distance": dist,
                "within_tolerance": None if dist is None else dist <= tol,
            }
            for value, mult, dist in rows
        ]
        _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        lines = [
            f"# group={group.name} level={args.level} julia_depth={args.depth} tolerance={tol!r}",
            f"# hausdorff={'' if hausdorff is None else repr(hausdorff)}",
            "eigenvalue,multiplicity,distance,within_tolerance",
        ]
        for value, mult, dist in rows:
            if dist is None:
                lines.append(f"{value!r},{mult},,")
            else:
                lines.append(f"{value!r},{mult},{dist!r},{str(dist <= tol).lower()}")
        _write("\n".join(lines) + "\n", args.out)
    return 0


def _growth_lines(graph, comment: str) -> list[str]:
    from .schreier import ball_growth, growth_exponent

    rmax = 200
    series = ball_growth(graph, rmax)
    rhi = 0
    for r in range(len(series.values)):
        if series.values[r] < 0.5 * series.total_vertices:
            rhi = r
    rhi = min(rhi, rmax)
    lines = [f"{comment} growth", f"{comment} r,count"]
    for r, count in enumerate(series.values[: rhi + 1]):
        lines.append(f"{comment} {r},{count}")
    if rhi > 8:
        exponent = growth_exponent(series, (8, rhi))
        lines.append(f"{comment} exponent={exponent!r} window=(8,{rhi})")
    else:
        lines.append(f"{comment} exponent unavailable: graph saturates before r=8")
    return lines


def _cmd_graph(args) -> int:
    from .schreier import action_graph, to_csv, to_dot

    group, _ = _resolve_group(args)
    if group.d**args.level > 2_000_000:
        raise ValueError("graph level too large")
    graph = action_graph(group, args.level)
    if args.format == "csv":
        text = to_csv(graph)
        comment = "#"
    else:
        text = to_dot(graph, name=f"{group.name}-{args.level}")
        comment = "//"
    if args.growth:
        text += "\n".join(_growth_lines(graph, comment)) + "\n"
    _write(text, args.out)
    return 0


def _svg_scatter(points: list[tuple[float, float]], xlabel: str, ylabel: str) -> str:
    width, height, margin = 800, 600, 50
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    xspan = (xmax - xmin) or 1.0
    yspan = (ymax - ymin) or 1.0

    def sx(x: float) -> float:
        return margin + (x - xmin) / xspan * (width - 2 * margin)

    def sy(y: float) -> float:
        return height - margin - (y - ymin) / yspan * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width - margin}" y="{height - margin + 30}" font-size="14">{xlabel}</text>',
        f'<text x="{margin - 35}" y="{margin}" font-size="14">{ylabel}</text>',
        f'<text x="{margin}" y="{height - margin + 30}" font-size="12">{xmin:.3f}</text>',
        f'<text x="{width - margin - 40}" y="{height - margin + 15}" font-size="12">{xmax:.3f}</text>',
        f'<text x="{margin - 45}" y="{height - margin}" font-size="12">{ymin:.3f}</text>',
        f'<text x="{margin - 45}" y="{margin + 12}" font-size="12">{ymax:.3f}</text>',
    ]
    for x, y in points:
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="1" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _cmd_correspondence(args) -> int:
    from .charpoly import spectral_correspondence

    group, _ = _resolve_group(args)
    if group.d != 3:
        raise ValueError("the correspondence scan needs a ternary group")
    if args.level > 7:
        raise ValueError("correspondence level is capped at 7")
    if args.alpha_step <= 0 or args.alpha_max < args.alpha_min:
        raise ValueError("bad alpha grid")
    alphas = []
    k = 0
    while True:
        alpha = args.alpha_min + k * args.alpha_step
        if alpha > args.alpha_max + 1e-12:
            break
        alphas.append(round(alpha, 12))
        k += 1
    columns = spectral_correspondence(group, args.level, alphas)
    if args.format == "svg":
        points = [(alpha, float(v)) for alpha, values in columns for v in values]
        _write(_svg_scatter(points, "alpha", "lambda"), args.out)
    else:
        lines = [
            f"# group={group.name} level={args.level} "
            f"alpha_min={args.alpha_min!r} alpha_max={args.alpha_max!r} alpha_step={args.alpha_step!r}",
            "alpha,lambda",
        ]
        for alpha, values in columns:
            for v in values:
                lines.append(f"{alpha!r},{float(v)!r}")
        _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    from .checks import run_verification

    only = args.only.split(",") if args.only else None
    report = run_verification(
        only=only,
        max_level=args.max_level,
        julia_depth=args.depth,
        seed=args.seed,
        progress=lambda line: print(line, flush=True),
    )
    payload = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    print(f"{'PASS' if report.passed else 'FAIL'} ({report.elapsed:.1f}s total)", flush=True)
    return 0 if report.passed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treespectra", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common_group = argparse.ArgumentParser(add_help=False)
    common_group.add_argument("group", nargs="?", help="built-in group name")
    common_group.add_argument("--group-file", help="group definition file (overrides the name)")
    common_group.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser(
        "spectrum",
        parents=[common_group],
        help="level-n eigenvalues with distances to the predicted limit set",
        description="Eigenvalues of the uniform averaged operator; dimension d^n is capped at 8192.",
    )
    p.add_argument("--level", "-n", type=int, required=True)
    p.add_argument("--depth", type=int, default=14, help="Julia approximation depth (default 14)")
    p.add_argument("--tol", type=float, default=None, help="membership tolerance (default 1e-9 intervals, 1e-6 Julia sets)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser(
        "graph",
        parents=[common_group],
        help="action graph as DOT or edge-list CSV, optionally with ball growth",
        description="Basepointed labeled action graph; growth appends a commented section.",
    )
    p.add_argument("--level", "-n", type=int, required=True)
    p.add_argument("--format", choices=("dot", "csv"), default="dot")
    p.add_argument("--growth", action="store_true", help="append growth series and exponent estimate")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser(
        "correspondence",
        parents=[common_group],
        help="eigenvalues of alpha(A + A^t) + (X + X^t) over an alpha grid",
        description="Vanishing set of the two-parameter characteristic polynomial; level capped at 7.",
    )
    p.add_argument("--level", "-n", type=int, required=True)
    p.add_argument("--alpha-min", type=float, default=-2.0)
    p.add_argument("--alpha-max", type=float, default=2.0)
    p.add_argument("--alpha-step", type=float, default=0.05)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.set_defaults(func=_cmd_correspondence)

    p = sub.add_parser(
        "verify",
        help="run the verification suite and emit a JSON report",
        description="Exit code 2 when any check fails.",
    )
    p.add_argument("--only", help="comma-separated check names (default: all)")
    p.add_argument("--max-level", type=int, default=None, help="override the level bound of level-sweep checks")
    p.add_argument("--depth", type=int, default=14, help="Julia approximation depth (default 14)")
    p.add_argument("--seed", type=int, default=7121, help="sampling seed for the factor-product check")
    p.add_argument("--out", help="write the JSON report to this path")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (ArithmeticError, RuntimeError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
