"""Command-line front end.

Four commands over schema-1 JSON documents (see schema.py):

  jumps       the finite set of rates where the invariants can change
  invariants  presentation + homology at one rate, or the whole filtration
  bcone       invariants of the rate-b cone over a link, probed at b_query
  thicken     subdivision pieces, point location, and data extension

All output is deterministic byte-for-byte: text mode uses fixed layouts,
JSON mode uses the canonical serialization. Exit codes: 0 success, 2 bad
input, 3 a query outside its domain, 4 a failed internal consistency
check (which would indicate a bug, not bad data).
"""

import argparse
import json
import sys
from fractions import Fraction

from . import schema
from .errors import ConsistencyError, DomainError, ValidationError
from .model import BFiltration, LinkComplex, bcone_invariant, build_model
from .rates import Rate
from .thickening import decompose, extend, locate


def _read_input(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ValidationError("cannot read input: %s" % exc) from None


def _format_presentation(presentation):
    return "<%s | %s>" % (
        ", ".join(presentation.generators),
        ", ".join(presentation.relator_strs()),
    )


def _compact(rows):
    return json.dumps(rows, separators=(",", ":"))


def _parse_cli_rational(text, flag):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValidationError("%s: not a rational: %r" % (flag, text)) from None


def _parse_point(text):
    return tuple(
        _parse_cli_rational(part.strip(), "--point") for part in text.split(",")
    )


def _level_json(model, max_degree, b_lo=None, b_hi=None):
    out = {
        "pi1": schema.presentation_json(model.pi1()),
        "homology": [
            schema.group_json(model.homology(n)) for n in range(max_degree + 1)
        ],
    }
    if b_hi is None:
        out["b"] = schema.rational_str(model.b)
    else:
        out["b_lo"] = schema.rational_str(b_lo)
        out["b_hi"] = schema.rational_str(b_hi)
    return out


def _level_row(label, model, max_degree, checks):
    cells = [label, _format_presentation(model.pi1())]
    cells += [str(model.homology(n)) for n in range(max_degree + 1)]
    cells.append(checks)
    return " | ".join(cells)


def _table_header(max_degree):
    return " | ".join(
        ["b", "pi1"] + ["H%d" % n for n in range(max_degree + 1)] + ["checks"]
    )


def cmd_jumps(document, args):
    graph = document.require_graph()
    jumps = graph.jump_set()
    if args.format == "json":
        return schema.dumps(
            {
                "schema_version": schema.SCHEMA_VERSION,
                "jumps": [schema.rational_str(b) for b in jumps],
            }
        )
    return "".join("%s\n" % b for b in jumps)


def cmd_invariants(document, args):
    graph = document.require_graph()
    checks = "-"
    if args.b == "all":
        filtration = BFiltration(graph)
        if args.check:
            for level in filtration.levels:
                level.model.check()
            checks = "ok"
        levels = [
            _level_json(level.model, args.max_degree, level.b_lo, level.b_hi)
            for level in filtration.levels
        ]
        maps = []
        for i, eta in enumerate(filtration.maps):
            maps.append(
                {
                    "source": schema.rational_str(filtration.levels[i + 1].b_lo),
                    "target": schema.rational_str(filtration.levels[i].b_lo),
                    "homology": [
                        eta.induced(n).to_lists() for n in range(args.max_degree + 1)
                    ],
                }
            )
        if args.format == "json":
            return schema.dumps(
                {
                    "schema_version": schema.SCHEMA_VERSION,
                    "jumps": [schema.rational_str(b) for b in filtration.jumps],
                    "levels": levels,
                    "maps": maps,
                    "checks": checks,
                }
            )
        lines = [_table_header(args.max_degree)]
        for level in filtration.levels:
            label = "[%s, %s%s" % (
                level.b_lo,
                level.b_hi,
                "]" if level.b_hi.is_infinite else ")",
            )
            lines.append(_level_row(label, level.model, args.max_degree, checks))
        for i, eta in enumerate(filtration.maps):
            lines.append(
                "eta %s -> %s:"
                % (filtration.levels[i + 1].b_lo, filtration.levels[i].b_lo)
            )
            for n in range(args.max_degree + 1):
                lines.append("  H%d: %s" % (n, _compact(eta.induced(n).to_lists())))
        return "".join(line + "\n" for line in lines)

    model = build_model(graph, Rate(args.b))
    if args.check:
        model.check()
        checks = "ok"
    if args.format == "json":
        return schema.dumps(
            {
                "schema_version": schema.SCHEMA_VERSION,
                "levels": [_level_json(model, args.max_degree)],
                "checks": checks,
            }
        )
    lines = [_table_header(args.max_degree)]
    lines.append(_level_row(str(model.b), model, args.max_degree, checks))
    return "".join(line + "\n" for line in lines)


def cmd_bcone(document, args):
    space = document.require_space()
    b = Rate(args.b)
    b_query = Rate(args.b_query)
    if args.check:
        if isinstance(space, LinkComplex):
            space.check()
        elif b_query >= b:
            build_model(space, b_query).check()
    presentation, group = bcone_invariant(space, b, b_query, args.degree)
    if args.format == "json":
        out = {
            "schema_version": schema.SCHEMA_VERSION,
            "b": schema.rational_str(b),
            "b_query": schema.rational_str(b_query),
            "degree": args.degree,
            "group": schema.group_json(group),
        }
        if presentation is not None:
            out["pi1"] = schema.presentation_json(presentation)
        return schema.dumps(out)
    lines = [
        "b: %s" % b,
        "b_query: %s" % b_query,
        "degree: %d" % args.degree,
    ]
    if presentation is not None:
        lines.append("pi1: %s" % _format_presentation(presentation))
    lines.append("group: %s" % group)
    return "".join(line + "\n" for line in lines)


class _Sampler:
    """A tiny fixed linear congruential generator, so that --sample output
    is byte-identical on every platform and Python version."""

    def __init__(self, seed=1):
        self.state = seed & 0xFFFFFFFF

    def next_digit(self):
        self.state = (1664525 * self.state + 1013904223) & 0xFFFFFFFF
        return self.state >> 16 & 0xFF


def _sample_points(complex_, count):
    sampler = _Sampler()
    points = []
    for i in range(count):
        si = i % len(complex_.simplices)
        raw = [1 + sampler.next_digit() % 9 for _ in range(complex_.dim + 1)]
        total = sum(raw)
        lam = tuple(Fraction(r, total) for r in raw)
        points.append(complex_.to_ambient(si, lam))
    return points


def _point_str(point):
    return "(%s)" % ", ".join(schema.rational_str(x) for x in point)


def _piece_label(piece):
    if piece.is_core:
        return "simplex %d core" % piece.simplex
    return "simplex %d collar %s" % (
        piece.simplex,
        ",".join(str(v) for v in piece.face),
    )


def _query_json(complex_, data, pieces, point):
    loc = locate(complex_, point, pieces)
    value, weights = extend(complex_, data, point, pieces)
    return {
        "point": [schema.rational_str(x) for x in point],
        "simplex": loc.piece.simplex,
        "face": list(loc.piece.face),
        "core": loc.piece.is_core,
        "value": [schema.rational_str(x) for x in value],
        "weights": {
            str(m): schema.rational_str(w) for m, w in sorted(weights.items())
        },
    }


def _query_text(complex_, data, pieces, point):
    loc = locate(complex_, point, pieces)
    value, weights = extend(complex_, data, point, pieces)
    weights = sorted(weights.items())
    return [
        "point: %s" % _point_str(point),
        "piece: %s" % _piece_label(loc.piece),
        "value: %s" % _point_str(value),
        "weights: %s" % ", ".join("%d: %s" % (m, schema.rational_str(w)) for m, w in weights),
        "weights sum: %s" % schema.rational_str(sum(w for _, w in weights)),
    ]


def cmd_thicken(document, args):
    complex_, data = document.require_thickening()
    pieces = decompose(complex_)
    if args.check:
        from math import factorial

        for si in range(len(complex_.simplices)):
            total = sum(p.volume(complex_) for p in pieces if p.simplex == si)
            expected = (
                abs(complex_.edge_determinant(si)) / factorial(complex_.dim)
                if complex_.ambient_dim == complex_.dim
                else Fraction(1, factorial(complex_.dim))
            )
            if total != expected:
                raise ConsistencyError(
                    "piece volumes of simplex %d sum to %s, expected %s"
                    % (si, total, expected)
                )
    points = []
    if args.point is not None:
        points.append(_parse_point(args.point))
    if args.sample:
        points.extend(_sample_points(complex_, args.sample))
    if args.check:
        for point in points:
            _, weights = extend(complex_, data, point, pieces)
            if sum(weights.values()) != 1:
                raise ConsistencyError("weights at %s do not sum to 1" % (point,))

    if args.format == "json":
        return schema.dumps(
            {
                "schema_version": schema.SCHEMA_VERSION,
                "pieces": [
                    {
                        "simplex": p.simplex,
                        "face": list(p.face),
                        "core": p.is_core,
                        "volume": schema.rational_str(p.volume(complex_)),
                        "vertices": [
                            [schema.rational_str(x) for x in v]
                            for v in p.vertices_ambient(complex_)
                        ],
                    }
                    for p in pieces
                ],
                "queries": [_query_json(complex_, data, pieces, pt) for pt in points],
            }
        )
    lines = ["pieces: %d" % len(pieces)]
    for p in pieces:
        lines.append(
            "%s: volume %s, vertices %s"
            % (
                _piece_label(p),
                schema.rational_str(p.volume(complex_)),
                " ".join(_point_str(v) for v in p.vertices_ambient(complex_)),
            )
        )
    for point in points:
        lines.extend(_query_text(complex_, data, pieces, point))
    return "".join(line + "\n" for line in lines)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ratedhomotopy",
        description="rate-filtered invariants of glued decompositions, "
        "and exact simplicial thickening",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--input", default="-", help="input JSON path, or - for stdin")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--check", action="store_true",
                       help="run the internal consistency checks (exit 4 on failure)")
        p.add_argument("--quiet", action="store_true", help="suppress output")

    p_jumps = sub.add_parser("jumps", help="list the rates where invariants can change")
    add_common(p_jumps)

    p_inv = sub.add_parser("invariants", help="presentation and homology at a rate")
    add_common(p_inv)
    p_inv.add_argument("--b", default="all",
                       help='a rational like 3/2, "inf", or "all" (default)')
    p_inv.add_argument("--max-degree", type=int, default=3, dest="max_degree")

    p_cone = sub.add_parser("bcone", help="invariants of a cone over a link")
    add_common(p_cone)
    p_cone.add_argument("--b", required=True, help="cone rate")
    p_cone.add_argument("--b-query", required=True, dest="b_query", help="probe rate")
    p_cone.add_argument("--degree", type=int, default=1)

    p_thick = sub.add_parser("thicken", help="subdivision pieces and data extension")
    add_common(p_thick)
    p_thick.add_argument("--point", help="comma-separated rational coordinates")
    p_thick.add_argument("--sample", type=int, default=0,
                         help="evaluate at N deterministic sample points")
    return parser


_COMMANDS = {
    "jumps": cmd_jumps,
    "invariants": cmd_invariants,
    "bcone": cmd_bcone,
    "thicken": cmd_thicken,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "invariants" and args.max_degree < 0:
            raise ValidationError("--max-degree must be >= 0")
        if args.command == "thicken" and args.sample < 0:
            raise ValidationError("--sample must be >= 0")
        document = schema.parse_document(_read_input(args.input))
        output = _COMMANDS[args.command](document, args)
    except ValidationError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except DomainError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print("consistency failure: %s" % exc, file=sys.stderr)
        return 4
    if not args.quiet:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
