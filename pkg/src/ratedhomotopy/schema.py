"""Strict JSON input documents and the canonical output serialization.

Schema version "1". A document is an object with "schema_version" and any
of three payload sections:

  nodes + edges   a rated graph (decomposition pieces and gluing tori)
  link_complex    a bare presentation + chain complex for cone queries
  thickening      a simplicial complex with per-simplex vertex values

Unknown fields are rejected, and every error names the JSON path it came
from. Rationals travel as strings "p/q" (or plain integers); floats are
rejected everywhere — all downstream arithmetic is exact, so an inexact
input would be a silent lie.

Output documents are plain dicts of strings, integers and lists; dumps()
fixes the byte-level form (sorted keys, two-space indent, trailing
newline), so identical results serialize identically.
"""

import json
from fractions import Fraction

from .chains import ChainComplex
from .errors import ValidationError
from .groups import Presentation, parse_word
from .model import (
    ConicalNode,
    Edge,
    EdgeEnd,
    FiberedNode,
    LinkComplex,
    RatedGraph,
)
from .rates import Rate
from .thickening import SimplicialComplex, VertexData

SCHEMA_VERSION = "1"


def _fail(message, path):
    raise ValidationError(message, path=path)


def _expect_object(value, path, required, optional=()):
    if not isinstance(value, dict):
        _fail("expected an object", path)
    for key in value:
        if key not in required and key not in optional:
            _fail("unknown field %r" % key, path)
    for key in required:
        if key not in value:
            _fail("missing field %r" % key, path)
    return value


def _expect_list(value, path):
    if not isinstance(value, list):
        _fail("expected an array", path)
    return value


def _expect_str(value, path):
    if not isinstance(value, str):
        _fail("expected a string", path)
    return value


def _expect_int(value, path):
    # bool is an int subtype in Python; JSON true/false is still not a number here
    if isinstance(value, bool) or not isinstance(value, int):
        _fail("expected an integer", path)
    return value


def _parse_rational(value, path):
    if isinstance(value, bool) or isinstance(value, float):
        _fail("rationals must be strings like \"3/2\" or integers, got %r" % value, path)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            _fail("not a rational: %r" % value, path)
    _fail("expected a rational", path)


def _parse_rate(value, path):
    if isinstance(value, bool) or isinstance(value, float):
        _fail("rates must be strings like \"3/2\" or integers, got %r" % value, path)
    if not isinstance(value, (str, int)):
        _fail("expected a rate", path)
    try:
        return Rate(value)
    except ValidationError as exc:
        _fail(str(exc), path)


def _parse_word(value, names, path):
    _expect_str(value, path)
    try:
        return parse_word(value, names)
    except ValidationError as exc:
        _fail(str(exc), path)


def _parse_chain(value, path):
    return tuple(
        _expect_int(entry, "%s[%d]" % (path, i))
        for i, entry in enumerate(_expect_list(value, path))
    )


def _parse_presentation(value, path):
    _expect_object(value, path, ("generators", "relators"))
    generators = [
        _expect_str(name, "%s.generators[%d]" % (path, i))
        for i, name in enumerate(_expect_list(value["generators"], path + ".generators"))
    ]
    relators = []
    for i, text in enumerate(_expect_list(value["relators"], path + ".relators")):
        relators.append(_parse_word(text, generators, "%s.relators[%d]" % (path, i)))
    try:
        return Presentation(generators, relators)
    except ValidationError as exc:
        _fail(str(exc), path)


def _parse_complex(value, path):
    _expect_object(value, path, ("degrees", "boundaries"))
    degrees = [
        _expect_int(d, "%s.degrees[%d]" % (path, i))
        for i, d in enumerate(_expect_list(value["degrees"], path + ".degrees"))
    ]
    boundaries = []
    for n, rows in enumerate(_expect_list(value["boundaries"], path + ".boundaries")):
        where = "%s.boundaries[%d]" % (path, n)
        parsed = []
        for r, row in enumerate(_expect_list(rows, where)):
            parsed.append(
                [
                    _expect_int(x, "%s[%d][%d]" % (where, r, c))
                    for c, x in enumerate(_expect_list(row, "%s[%d]" % (where, r)))
                ]
            )
        boundaries.append(parsed)
    try:
        return ChainComplex(degrees, boundaries)
    except ValidationError as exc:
        _fail(str(exc), path)


def _parse_node(value, path):
    if not isinstance(value, dict):
        _fail("expected an object", path)
    kind = value.get("kind")
    if kind == "conical":
        _expect_object(
            value, path, ("id", "kind", "rate", "presentation", "complex"), ("base_vertex",)
        )
        node_id = _expect_int(value["id"], path + ".id")
        rate = _parse_rate(value["rate"], path + ".rate")
        presentation = _parse_presentation(value["presentation"], path + ".presentation")
        complex_ = _parse_complex(value["complex"], path + ".complex")
        base_vertex = _expect_int(value.get("base_vertex", 0), path + ".base_vertex")
        try:
            return ConicalNode(node_id, rate, presentation, complex_, base_vertex)
        except ValidationError as exc:
            _fail(str(exc), path)
    if kind == "fibered":
        _expect_object(value, path, ("id", "kind", "rate", "fiber_rank", "monodromy"))
        node_id = _expect_int(value["id"], path + ".id")
        rate = _parse_rate(value["rate"], path + ".rate")
        rank = _expect_int(value["fiber_rank"], path + ".fiber_rank")
        if rank < 1:
            _fail("fiber_rank must be >= 1", path + ".fiber_rank")
        names = ["x%d" % (i + 1) for i in range(rank)]
        monodromy = [
            _parse_word(text, names, "%s.monodromy[%d]" % (path, i))
            for i, text in enumerate(_expect_list(value["monodromy"], path + ".monodromy"))
        ]
        try:
            return FiberedNode(node_id, rate, rank, monodromy)
        except ValidationError as exc:
            _fail(str(exc), path)
    _fail("kind must be \"conical\" or \"fibered\"", path + ".kind")


def _node_names(node):
    if isinstance(node, FiberedNode):
        return ["x%d" % (i + 1) for i in range(node.fiber_rank)] + ["t"]
    return list(node.presentation.generators)


def _parse_end(value, path, node_map):
    _expect_object(
        value, path, ("node", "mu_word", "mu_chain", "lambda_word", "lambda_chain")
    )
    nid = _expect_int(value["node"], path + ".node")
    if nid not in node_map:
        _fail("unknown node id %d" % nid, path + ".node")
    names = _node_names(node_map[nid])
    return EdgeEnd(
        nid,
        _parse_word(value["mu_word"], names, path + ".mu_word"),
        _parse_chain(value["mu_chain"], path + ".mu_chain"),
        _parse_word(value["lambda_word"], names, path + ".lambda_word"),
        _parse_chain(value["lambda_chain"], path + ".lambda_chain"),
    )


def _parse_graph(nodes_value, edges_value):
    nodes = [
        _parse_node(v, "nodes[%d]" % i)
        for i, v in enumerate(_expect_list(nodes_value, "nodes"))
    ]
    node_map = {node.id: node for node in nodes}
    edges = []
    for i, v in enumerate(_expect_list(edges_value, "edges")):
        path = "edges[%d]" % i
        _expect_object(v, path, ("id", "ends"))
        eid = _expect_int(v["id"], path + ".id")
        ends = _expect_list(v["ends"], path + ".ends")
        if len(ends) != 2:
            _fail("an edge has exactly two ends", path + ".ends")
        end0 = _parse_end(ends[0], path + ".ends[0]", node_map)
        end1 = _parse_end(ends[1], path + ".ends[1]", node_map)
        try:
            edges.append(Edge(eid, end0, end1))
        except ValidationError as exc:
            _fail(str(exc), path)
    return RatedGraph(nodes, edges)


def _parse_link(value):
    _expect_object(value, "link_complex", ("presentation", "complex"))
    presentation = _parse_presentation(value["presentation"], "link_complex.presentation")
    complex_ = _parse_complex(value["complex"], "link_complex.complex")
    return LinkComplex(presentation, complex_)


def _parse_thickening(value):
    _expect_object(value, "thickening", ("vertices", "simplices", "values"))
    vertices = []
    for i, coords in enumerate(_expect_list(value["vertices"], "thickening.vertices")):
        where = "thickening.vertices[%d]" % i
        vertices.append(
            [
                _parse_rational(x, "%s[%d]" % (where, c))
                for c, x in enumerate(_expect_list(coords, where))
            ]
        )
    simplices = []
    for i, ids in enumerate(_expect_list(value["simplices"], "thickening.simplices")):
        where = "thickening.simplices[%d]" % i
        ids = [
            _expect_int(x, "%s[%d]" % (where, j))
            for j, x in enumerate(_expect_list(ids, where))
        ]
        if ids != sorted(ids):
            _fail("simplex vertex ids must be strictly increasing", where)
        simplices.append(tuple(ids))
    try:
        complex_ = SimplicialComplex(vertices, simplices)
    except ValidationError as exc:
        _fail(str(exc), "thickening")

    values_obj = value["values"]
    if not isinstance(values_obj, dict):
        _fail("expected an object keyed by simplex index", "thickening.values")
    expected_keys = {str(i) for i in range(len(simplices))}
    if set(values_obj) != expected_keys:
        _fail(
            "values must have one entry per simplex (keys %s)"
            % sorted(expected_keys),
            "thickening.values",
        )
    per_simplex = []
    for i in range(len(simplices)):
        where = "thickening.values.%d" % i
        rows = _expect_list(values_obj[str(i)], where)
        parsed = []
        for j, vec in enumerate(rows):
            parsed.append(
                [
                    _parse_rational(x, "%s[%d][%d]" % (where, j, c))
                    for c, x in enumerate(_expect_list(vec, "%s[%d]" % (where, j)))
                ]
            )
        per_simplex.append(parsed)
    try:
        data = VertexData(complex_, per_simplex)
    except ValidationError as exc:
        _fail(str(exc), "thickening.values")
    return complex_, data


class InputDocument:
    """A parsed schema-1 document; each section is present or None."""

    __slots__ = ("graph", "link", "thickening")

    def __init__(self, graph=None, link=None, thickening=None):
        self.graph = graph
        self.link = link
        self.thickening = thickening

    def require_graph(self):
        if self.graph is None:
            raise ValidationError("this command needs the nodes/edges sections")
        return self.graph

    def require_space(self):
        """The space for cone queries: the link complex when present,
        otherwise the rated graph."""
        if self.link is not None:
            return self.link
        if self.graph is not None:
            return self.graph
        raise ValidationError("this command needs a link_complex or nodes/edges section")

    def require_thickening(self):
        if self.thickening is None:
            raise ValidationError("this command needs the thickening section")
        return self.thickening


def parse_document(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("invalid JSON: %s" % exc) from None
    _expect_object(
        raw,
        "$",
        ("schema_version",),
        ("nodes", "edges", "link_complex", "thickening"),
    )
    version = raw["schema_version"]
    if version != SCHEMA_VERSION:
        _fail("unsupported schema_version %r (expected %r)" % (version, SCHEMA_VERSION),
              "schema_version")
    if ("nodes" in raw) != ("edges" in raw):
        _fail("nodes and edges must appear together", "$")
    graph = _parse_graph(raw["nodes"], raw["edges"]) if "nodes" in raw else None
    link = _parse_link(raw["link_complex"]) if "link_complex" in raw else None
    thickening = _parse_thickening(raw["thickening"]) if "thickening" in raw else None
    if graph is None and link is None and thickening is None:
        _fail("document has no payload section", "$")
    return InputDocument(graph, link, thickening)


# --- output -----------------------------------------------------------------


def rational_str(value):
    """Canonical reduced form: "p", "p/q", or "inf"."""
    if isinstance(value, Rate):
        return str(value)
    frac = Fraction(value)
    return str(frac)


def presentation_json(presentation):
    return {
        "generators": list(presentation.generators),
        "relators": presentation.relator_strs(),
    }


def group_json(group):
    return group.to_json()


def dumps(document):
    """The one serialized form: sorted keys, two-space indent, newline."""
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=True) + "\n"
