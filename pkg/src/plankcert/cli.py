"""Command-line interface.

Exit codes: 0 success (covered / verified), 1 negative verdict (uncovered,
no peeling order, verification failed), 2 error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import certifier, configurations, coverage, documents, svg
from .errors import (
    BudgetExceeded,
    DimensionError,
    DocumentError,
    InvalidOrder,
    NoOrder,
    NotCovered,
    PlankError,
)
from .geometry import ConvexBody, Direction, width
from .numeric import format_scalar, get_backend
from .planks import INF, bang_ratio

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


def _fmt(x) -> str:
    if x == INF:
        return "inf"
    v = format_scalar(x)
    return repr(v) if isinstance(v, float) else v


def _parse_ints(text):
    if text is None:
        return None
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise DocumentError(f"expected a comma-separated list of integers, got {text!r}") from exc


def _backend(args):
    return get_backend(args.backend, args.tol)


def _load_scene(args):
    try:
        text = Path(args.scene).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {args.scene}: {exc}") from exc
    return documents.parse_scene(text, _backend(args))


def cmd_check(args) -> int:
    scene = _load_scene(args)
    cells = coverage.residual_cells(scene.body, scene.planks, args.cell_budget)
    eps = scene.backend.eps
    for c in cells:
        state = "empty" if c.strict_radius <= eps else "NONEMPTY"
        print(f"cell {','.join(c.signs) or '-'}: strict_radius={_fmt(c.strict_radius)} {state}")
    worst = max(cells, key=lambda c: c.strict_radius)
    if worst.strict_radius <= eps:
        print("covered")
        return EXIT_OK
    print("uncovered")
    print("witness: " + " ".join(_fmt(x) for x in worst.witness))
    return EXIT_NEGATIVE


def cmd_sum(args) -> int:
    scene = _load_scene(args)
    for i, p in enumerate(scene.planks):
        w = scene.backend.coerce(p.width)
        wc = width(scene.body, p.normal.unit)
        r = bang_ratio(p, scene.body)
        print(f"plank {i}: w={_fmt(w)} width={_fmt(wc)} ratio={_fmt(r)}")
    print(f"bang_sum: {_fmt(certifier.bang_sum(scene.body, scene.planks))}")
    return EXIT_OK


def cmd_certify(args) -> int:
    scene = _load_scene(args)
    order = _parse_ints(args.order)
    if order is None:
        try:
            order = certifier.find_peeling_order(scene.body, scene.planks, args.search_budget, args.cell_budget)
        except NotCovered as exc:
            print(f"error: not covered: {exc}", file=sys.stderr)
            return EXIT_ERROR
        except NoOrder as exc:
            print(f"no peeling order: {exc}")
            return EXIT_NEGATIVE
        except BudgetExceeded as exc:
            print(f"search budget exhausted before an order was found: {exc}")
            return EXIT_NEGATIVE
    elif not coverage.covers(scene.body, scene.planks, args.cell_budget):
        print("error: not covered: the planks do not cover the body", file=sys.stderr)
        return EXIT_ERROR
    try:
        cert = certifier.certify(scene.body, scene.planks, order, sample_seed=args.seed)
    except InvalidOrder as exc:
        print(f"error: invalid order: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out = Path(args.output) if args.output else Path(str(args.scene) + ".cert.json")
    out.write_text(documents.emit_certificate(cert, scene), encoding="utf-8")
    print(f"order: {','.join(map(str, cert.order))}")
    print(f"chain_bound: {_fmt(cert.chain_bound)}")
    print(f"bang_sum: {_fmt(cert.bang_sum)}")
    print(f"certificate: {out}")
    if cert.verified:
        print("verified")
        return EXIT_OK
    for d in cert.diagnostics:
        print(f"violation: {d}")
    print("not verified")
    return EXIT_NEGATIVE


def cmd_verify(args) -> int:
    scene = _load_scene(args)
    try:
        text = Path(args.certificate).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {args.certificate}: {exc}") from exc
    result = documents.verify_certificate_document(text, scene)
    for d in result.diagnostics:
        print(f"violation: {d}")
    print("verified" if result.ok else "not verified")
    return EXIT_OK if result.ok else EXIT_NEGATIVE


def cmd_render(args) -> int:
    scene = _load_scene(args)
    if scene.dim != 2:
        raise DimensionError(f"cannot render a {scene.dim}-dimensional scene")
    step = None
    if args.certificate:
        text = Path(args.certificate).read_text(encoding="utf-8")
        cert, _ = documents.parse_certificate(text, scene.backend, scene.dim)
        if not 0 <= args.step < len(cert.steps):
            raise DocumentError(f"certificate has no step {args.step}")
        step = cert.steps[args.step]
    image = svg.render_scene(scene, peel=_parse_ints(args.peel), step=step)
    out = Path(args.output) if args.output else Path(str(args.scene) + ".svg")
    out.write_text(image, encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_generate(args) -> int:
    backend = _backend(args)
    if args.kind == "hunter":
        scene = configurations.hunter_triangle(backend)
    elif args.kind == "slabs":
        body = ConvexBody.box((0, 0), (1, 1), backend)
        direction = Direction(backend.vector(args.direction.split(",")), backend)
        if args.cuts is not None:
            cuts = [backend.coerce(c) for c in args.cuts.split(",") if c.strip()]
            k = len(cuts) + 1 if args.k is None else args.k
        else:
            k = 2 if args.k is None else args.k
            cuts = [backend.coerce(Fraction(i, k)) for i in range(1, k)]
        planks = configurations.slab_partition(body, direction, k, cuts)
        scene = configurations.Scene(body, planks, f"slabs k={k}")
    else:
        scene = configurations.random_peelable_scene(args.seed, args.dim, args.planks, backend)
    text = documents.emit_scene(scene)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=("rational", "float"), default="float")
    common.add_argument("--tol", type=float, default=None, help="float-backend tolerance (default 1e-9)")
    common.add_argument("--cell-budget", type=int, default=coverage.DEFAULT_CELL_BUDGET)
    common.add_argument("--search-budget", type=int, default=certifier.DEFAULT_SEARCH_BUDGET)
    common.add_argument("--seed", type=int, default=None)

    parser = argparse.ArgumentParser(prog="plankcert", description="Plank covers and peeling certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide whether the planks cover the body")
    p.add_argument("scene")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sum", parents=[common], help="print the plank ratios and their sum")
    p.add_argument("scene")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("certify", parents=[common], help="find a peeling order and write a certificate")
    p.add_argument("scene")
    p.add_argument("--order", help="comma-separated plank indices; searched for when omitted")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate file against its scene")
    p.add_argument("scene")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", parents=[common], help="draw a planar scene as SVG")
    p.add_argument("scene")
    p.add_argument("--certificate")
    p.add_argument("--step", type=int, default=0)
    p.add_argument("--peel", help="comma-separated plank indices whose residual is shaded")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("generate", parents=[common], help="emit a canned or random scene")
    p.add_argument("kind", choices=("hunter", "slabs", "random"))
    p.add_argument("--k", type=int, default=None, help="number of slabs")
    p.add_argument("--cuts", help="comma-separated cut fractions for slabs (default: equal spacing)")
    p.add_argument("--direction", default="1,0", help="unit normal of the slabs")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--planks", type=int, default=4)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = 42 if args.command == "generate" else certifier.DEFAULT_SAMPLE_SEED
    try:
        return args.func(args)
    except (PlankError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
