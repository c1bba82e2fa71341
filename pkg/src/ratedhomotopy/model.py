"""Rated graph decompositions, their collapse models, and the invariants
indexed by a rate threshold b.

A rated graph has nodes carrying group/chain data for the pieces of a
space and edges carrying the torus gluing data between pieces: for each
edge end, a meridian word/1-chain and a longitude word/1-chain in that
node's piece. For a threshold b, every node whose rate exceeds b is
collapsed (its fiber directions become trivial); the surviving data is
glued into one presentation (fundamental group) and one chain complex
(homology) for the whole space at that threshold. Raising or lowering b
across a node rate changes the result; in between, nothing moves.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .chains import (
    AbelianGroup,
    ChainComplex,
    ChainMap,
    HomologyBasis,
    IntMatrix,
    homology,
    induced_map,
    verify_complex,
)
from .errors import ConsistencyError, DomainError, ValidationError
from .groups import (
    GroupHom,
    Presentation,
    apply_images,
    exponent_vector,
    free_reduce,
    graph_of_groups,
    mapping_torus,
    spanning_tree,
    tietze_simplify,
)
from .rates import Rate

_USER_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

_TORUS_RANKS = (1, 2, 1)  # cells of the gluing torus, by degree


def _check_user_names(names, where):
    for name in names:
        if not _USER_NAME.match(name):
            raise ValidationError(
                "generator name %r is not allowed (letters, digits and _ only; @ is reserved)" % name,
                path=where,
            )


def _is_connected(complex_):
    return homology(complex_, 0) == AbelianGroup(1)


class ConicalNode:
    """A piece that never collapses: explicit presentation and chain
    complex, plus the vertex where gluing tori attach."""

    kind = "conical"

    __slots__ = ("id", "rate", "presentation", "complex", "base_vertex")

    def __init__(self, node_id, rate, presentation, complex_, base_vertex=0):
        self.id = int(node_id)
        self.rate = Rate(rate)
        where = "nodes[%d]" % self.id
        if self.rate != 1:
            raise ValidationError("conical nodes have rate 1, got %s" % self.rate, path=where)
        _check_user_names(presentation.generators, where)
        if complex_.top_degree > 2:
            raise ValidationError("piece complexes may only have cells in degrees 0..2", path=where)
        if complex_.rank(0) < 1:
            raise ValidationError("piece complex has no vertices", path=where)
        if not _is_connected(complex_):
            raise ValidationError("piece complex is not connected", path=where)
        if not 0 <= int(base_vertex) < complex_.rank(0):
            raise ValidationError("base_vertex %d out of range" % base_vertex, path=where)
        self.presentation = presentation
        self.complex = complex_
        self.base_vertex = int(base_vertex)

    def signature(self):
        return (
            "conical",
            self.id,
            str(self.rate),
            self.presentation.generators,
            self.presentation.relators,
            self.complex.degrees,
            tuple(b.data for b in self.complex.boundaries),
            self.base_vertex,
        )


class FiberedNode:
    """A circle-fibered piece: free fiber group of the given rank with a
    monodromy, modeled by its mapping torus. Collapsible.

    The cell model is fixed: one vertex, one edge per fiber generator
    plus one for the circle direction t, and one 2-cell per fiber
    generator glued along t x_i t^-1 phi(x_i)^-1.
    """

    kind = "fibered"

    __slots__ = ("id", "rate", "fiber_rank", "monodromy", "presentation", "complex", "base_vertex")

    def __init__(self, node_id, rate, fiber_rank, monodromy):
        self.id = int(node_id)
        self.rate = Rate(rate)
        where = "nodes[%d]" % self.id
        r = int(fiber_rank)
        if r < 1:
            raise ValidationError("fiber_rank must be at least 1", path=where)
        self.fiber_rank = r
        try:
            self.presentation = mapping_torus(r, monodromy)
        except ValidationError as exc:
            raise ValidationError(str(exc), path=where) from None
        self.monodromy = tuple(free_reduce(w) for w in monodromy)
        self.complex = ChainComplex(
            [1, r + 1, r],
            [IntMatrix.zero(1, r + 1), self.presentation.exponent_matrix()],
        )
        self.base_vertex = 0

    def signature(self):
        return ("fibered", self.id, str(self.rate), self.fiber_rank, self.monodromy)


class EdgeEnd:
    """One end of a gluing torus: which node it lands in, and the
    meridian/longitude as both words and 1-chains there."""

    __slots__ = ("node", "mu_word", "mu_chain", "lambda_word", "lambda_chain")

    def __init__(self, node, mu_word, mu_chain, lambda_word, lambda_chain):
        self.node = int(node)
        self.mu_word = free_reduce(mu_word)
        self.mu_chain = tuple(int(x) for x in mu_chain)
        self.lambda_word = free_reduce(lambda_word)
        self.lambda_chain = tuple(int(x) for x in lambda_chain)

    def signature(self):
        return (self.node, self.mu_word, self.mu_chain, self.lambda_word, self.lambda_chain)


class Edge:
    __slots__ = ("id", "ends")

    def __init__(self, edge_id, end0, end1):
        self.id = int(edge_id)
        # orient every stored edge from the smaller node id; self-edges
        # keep their declared order
        if end1.node < end0.node:
            end0, end1 = end1, end0
        self.ends = (end0, end1)

    def signature(self):
        return (self.id, self.ends[0].signature(), self.ends[1].signature())


class RatedGraph:
    """A validated rated decomposition. Nodes keyed by id, edges sorted
    by id; must be connected."""

    __slots__ = ("nodes", "edges")

    def __init__(self, nodes, edges):
        node_map = {}
        for node in nodes:
            if node.id in node_map:
                raise ValidationError("duplicate node id %d" % node.id)
            node_map[node.id] = node
        if not node_map:
            raise ValidationError("graph has no nodes")
        edge_list = sorted(edges, key=lambda e: e.id)
        seen = set()
        for e in edge_list:
            if e.id in seen:
                raise ValidationError("duplicate edge id %d" % e.id)
            seen.add(e.id)
            for which, end in zip(("ends[0]", "ends[1]"), e.ends):
                self._validate_end(node_map, end, "edges[%d].%s" % (e.id, which))
        self.nodes = node_map
        self.edges = tuple(edge_list)
        # connectivity check (shares the deterministic tree construction)
        spanning_tree(list(node_map), {e.id: (e.ends[0].node, e.ends[1].node) for e in edge_list})

    @staticmethod
    def _validate_end(node_map, end, where):
        if end.node not in node_map:
            raise ValidationError("references unknown node %d" % end.node, path=where)
        node = node_map[end.node]
        if node.kind == "fibered":
            rank = node.fiber_rank + 1
        else:
            rank = node.presentation.rank
        c1 = node.complex.rank(1)
        for label, word, chain in (
            ("mu", end.mu_word, end.mu_chain),
            ("lambda", end.lambda_word, end.lambda_chain),
        ):
            try:
                exps = exponent_vector(word, rank)
            except ValidationError as exc:
                raise ValidationError("%s word: %s" % (label, exc), path=where) from None
            if len(chain) != c1:
                raise ValidationError(
                    "%s chain has %d entries, piece has %d 1-cells" % (label, len(chain), c1),
                    path=where,
                )
            if any(x != 0 for x in node.complex.boundary(1).apply(chain)):
                raise ValidationError("%s chain is not a cycle" % label, path=where)
            if node.kind == "fibered":
                # fiber cells correspond one-to-one with generators, so
                # the declared chain must be the word's exponent vector
                if chain != exps:
                    raise ValidationError(
                        "%s chain %s does not match the word's exponent vector %s"
                        % (label, list(chain), list(exps)),
                        path=where,
                    )
        if node.kind == "fibered":
            lam_exps = exponent_vector(end.lambda_word, node.fiber_rank + 1)
            if lam_exps[-1] != 0:
                raise ValidationError(
                    "lambda word must lie in the fiber (zero exponent on t)", path=where
                )

    def jump_set(self):
        """Thresholds where the model can change: 1 and every node rate."""
        rates = {Rate(1)}
        rates.update(node.rate for node in self.nodes.values())
        return sorted(rates)

    def signature(self):
        return (
            tuple(self.nodes[n].signature() for n in sorted(self.nodes)),
            tuple(e.signature() for e in self.edges),
        )

    def __eq__(self, other):
        return isinstance(other, RatedGraph) and self.signature() == other.signature()


def _layout(node_complexes, edge_ids):
    """Index layout of the glued complex: per degree, node cells first
    (by node id), then torus cells (by edge id) shifted up one degree."""
    ids = sorted(node_complexes)
    degrees = []
    node_off = {}
    edge_off = {}
    for deg in range(4):
        count = 0
        for n in ids:
            node_off[(n, deg)] = count
            count += node_complexes[n].rank(deg)
        t2deg = deg - 1
        if 0 <= t2deg <= 2:
            for e in edge_ids:
                edge_off[(e, deg)] = count
                count += _TORUS_RANKS[t2deg]
        degrees.append(count)
    return degrees, node_off, edge_off


class BModel:
    """Everything the decomposition yields at one threshold b: the glued
    presentation, the glued chain complex, and canonical homology."""

    __slots__ = (
        "graph",
        "b",
        "collapsed",
        "node_presentations",
        "node_complexes",
        "base_vertex",
        "proc_edges",
        "assembled",
        "total",
        "node_off",
        "edge_off",
        "_homology",
        "_pi1",
    )

    def __init__(self, graph, b):
        self.graph = graph
        self.b = Rate(b)
        self.collapsed = frozenset(
            n for n, node in graph.nodes.items() if node.rate > self.b
        )

        pres = {}
        cx = {}
        base = {}
        word_maps = {}
        chain_maps = {}
        for nid in sorted(graph.nodes):
            node = graph.nodes[nid]
            base[nid] = node.base_vertex
            if nid in self.collapsed:
                r = node.fiber_rank
                pres[nid] = node.presentation.quotient_killing(range(1, r + 1))
                cx[nid] = ChainComplex([1, 1], [IntMatrix.zero(1, 1)])
                word_maps[nid] = tuple([() for _ in range(r)] + [(r + 1,)])
                chain_maps[nid] = IntMatrix([[0] * r + [1]])
                base[nid] = 0
            else:
                pres[nid] = node.presentation
                cx[nid] = node.complex
                word_maps[nid] = None
                chain_maps[nid] = None
        self.node_presentations = pres
        self.node_complexes = cx
        self.base_vertex = base

        proc = []
        for e in graph.edges:
            ends = []
            for end in e.ends:
                mu_w, lam_w = end.mu_word, end.lambda_word
                mu_c, lam_c = end.mu_chain, end.lambda_chain
                if word_maps[end.node] is not None:
                    mu_w = apply_images(word_maps[end.node], mu_w)
                    lam_w = apply_images(word_maps[end.node], lam_w)
                    mu_c = chain_maps[end.node].apply(mu_c)
                    lam_c = chain_maps[end.node].apply(lam_c)
                ends.append((end.node, mu_w, lam_w, mu_c, lam_c))
            proc.append((e.id, tuple(ends)))
        self.proc_edges = tuple(proc)

        self.assembled = graph_of_groups(
            pres,
            [
                (eid, (e0[0], e0[1], e0[2]), (e1[0], e1[1], e1[2]))
                for eid, (e0, e1) in proc
            ],
        )
        self.total, self.node_off, self.edge_off = self._glue_complex()
        self._homology = {}
        self._pi1 = None

    def _glue_complex(self):
        edge_ids = [eid for eid, _ in self.proc_edges]
        degrees, node_off, edge_off = _layout(self.node_complexes, edge_ids)
        D = [
            [[0] * degrees[d] for _ in range(degrees[d - 1])] for d in range(1, 4)
        ]

        for nid in sorted(self.node_complexes):
            comp = self.node_complexes[nid]
            for d in range(1, 4):
                block = comp.boundary(d)
                ro, co = node_off[(nid, d - 1)], node_off[(nid, d)]
                for i in range(block.rows):
                    for j in range(block.cols):
                        D[d - 1][ro + i][co + j] = block[i, j]

        for eid, (end0, end1) in self.proc_edges:
            n0, _, _, mu0, lam0 = end0
            n1, _, _, mu1, lam1 = end1
            # torus vertex: runs from one attaching point to the other
            col = edge_off[(eid, 1)]
            D[0][node_off[(n0, 0)] + self.base_vertex[n0]][col] += 1
            D[0][node_off[(n1, 0)] + self.base_vertex[n1]][col] -= 1
            # torus 1-cells: difference of the declared chains at each end
            for k, (c0, c1) in enumerate(((mu0, mu1), (lam0, lam1))):
                col = edge_off[(eid, 2)] + k
                for i, a in enumerate(c0):
                    D[1][node_off[(n0, 1)] + i][col] += a
                for i, a in enumerate(c1):
                    D[1][node_off[(n1, 1)] + i][col] -= a
            # torus 2-cell: its own boundary vanishes and no 2-chain data
            # exists in the pieces, so its column is zero

        total = ChainComplex(degrees, D, check=False)
        bad = verify_complex(total)
        if bad:
            raise ConsistencyError("glued complex is not a complex in degrees %s" % bad)
        return total, node_off, edge_off

    # --- invariants ---------------------------------------------------

    def pi1(self):
        """The glued fundamental-group presentation, Tietze-simplified."""
        if self._pi1 is None:
            self._pi1 = tietze_simplify(self.assembled.presentation)
        return self._pi1

    def homology_basis(self, n):
        if n not in self._homology:
            self._homology[n] = HomologyBasis(self.total, n)
        return self._homology[n]

    def homology(self, n):
        if n < 0:
            raise DomainError("negative homology degree %d" % n)
        return self.homology_basis(n).group

    def euler_characteristic(self):
        return self.total.euler_characteristic()

    def hurewicz_pair(self):
        """(abelianized glued group, degree-1 homology) — equal whenever
        the input data is consistent."""
        return self.assembled.presentation.abelianized(), self.homology(1)

    def check(self):
        """Raise ConsistencyError if any guaranteed property fails."""
        ab, h1 = self.hurewicz_pair()
        if ab != h1:
            raise ConsistencyError(
                "abelianized fundamental group %s disagrees with H_1 = %s "
                "(inconsistent piece or gluing data)" % (ab, h1)
            )
        if self.homology(0) != AbelianGroup(1):
            raise ConsistencyError("glued space is not connected: H_0 = %s" % self.homology(0))

    # --- helpers for talking about classes ------------------------------

    def embed_node_chain(self, nid, degree, coeffs):
        """A chain supported on one piece, as a vector in the glued complex."""
        comp = self.node_complexes[nid]
        if len(coeffs) != comp.rank(degree):
            raise ValidationError(
                "expected %d coefficients for node %d in degree %d"
                % (comp.rank(degree), nid, degree)
            )
        out = [0] * self.total.rank(degree)
        off = self.node_off[(nid, degree)]
        for i, a in enumerate(coeffs):
            out[off + i] = int(a)
        return tuple(out)

    def embed_edge_chain(self, eid, torus_degree, coeffs):
        """A chain supported on one gluing torus (torus_degree 0..2)."""
        if not 0 <= torus_degree <= 2:
            raise ValidationError("torus cells live in degrees 0..2")
        if len(coeffs) != _TORUS_RANKS[torus_degree]:
            raise ValidationError("expected %d coefficients" % _TORUS_RANKS[torus_degree])
        degree = torus_degree + 1
        out = [0] * self.total.rank(degree)
        off = self.edge_off[(eid, degree)]
        for i, a in enumerate(coeffs):
            out[off + i] = int(a)
        return tuple(out)

    # --- canonical form -------------------------------------------------

    def canonical_state(self):
        """Everything the threshold determines, excluding the threshold
        itself (thresholds in the same jump interval give equal states)."""
        simplified = self.pi1()
        return {
            "collapsed": sorted(self.collapsed),
            "pi1": {
                "generators": list(simplified.generators),
                "relators": simplified.relator_strs(),
            },
            "assembled": {
                "generators": list(self.assembled.presentation.generators),
                "relators": self.assembled.presentation.relator_strs(),
            },
            "complex": {
                "degrees": list(self.total.degrees),
                "boundaries": [b.to_lists() for b in self.total.boundaries],
            },
            "homology": [self.homology(n).to_json() for n in range(4)],
        }

    def canonical_bytes(self):
        return json.dumps(
            self.canonical_state(), sort_keys=True, separators=(",", ":")
        ).encode("ascii")


def build_model(graph, b):
    return BModel(graph, b)


class StructureMap:
    """The comparison map from the model at a higher threshold to the
    model at a lower one (more pieces collapsed downstairs)."""

    __slots__ = ("source", "target", "hom", "chain_map", "_induced")

    def __init__(self, source, target):
        if source.graph != target.graph:
            raise ValidationError("structure maps need models of the same graph")
        if not source.b >= target.b:
            raise DomainError(
                "structure maps go from higher to lower thresholds (%s < %s)"
                % (source.b, target.b)
            )
        self.source = source
        self.target = target
        self.hom = self._build_hom()
        self.chain_map = self._build_chain_map()
        self._induced = {}

    def _build_hom(self):
        src = self.source.assembled.presentation
        tgt = self.target.assembled.presentation
        if src.generators != tgt.generators:
            raise ConsistencyError("models of one graph must share generator lists")
        images = [(i + 1,) for i in range(src.rank)]
        for nid in self.target.collapsed:
            node = self.source.graph.nodes[nid]
            off = self.source.assembled.node_offset[nid]
            for j in range(node.fiber_rank):
                images[off + j] = ()
        return GroupHom(src, tgt, images)

    def _build_chain_map(self):
        mats = []
        newly = self.target.collapsed - self.source.collapsed
        for deg in range(4):
            rows = self.target.total.rank(deg)
            cols = self.source.total.rank(deg)
            m = [[0] * cols for _ in range(rows)]

            def put(block, ro, co):
                for i in range(block.rows):
                    for j in range(block.cols):
                        m[ro + i][co + j] = block[i, j]

            for nid in sorted(self.source.node_complexes):
                ro = self.target.node_off[(nid, deg)]
                co = self.source.node_off[(nid, deg)]
                if nid in newly:
                    node = self.source.graph.nodes[nid]
                    r = node.fiber_rank
                    if deg == 0:
                        put(IntMatrix([[1]]), ro, co)
                    elif deg == 1:
                        put(IntMatrix([[0] * r + [1]]), ro, co)
                    # degree 2 of the fiber piece dies (the circle has no
                    # 2-cells), so nothing to write
                else:
                    put(
                        IntMatrix.identity(self.source.node_complexes[nid].rank(deg)),
                        ro,
                        co,
                    )
            t2deg = deg - 1
            if 0 <= t2deg <= 2:
                for eid, _ in self.source.proc_edges:
                    put(
                        IntMatrix.identity(_TORUS_RANKS[t2deg]),
                        self.target.edge_off[(eid, deg)],
                        self.source.edge_off[(eid, deg)],
                    )
            mats.append(IntMatrix(m, rows=rows, cols=cols))
        return ChainMap(self.source.total, self.target.total, mats)

    def induced(self, n):
        """Matrix of the map on H_n: row i is the image of the i-th
        source generator over the target generators."""
        if n not in self._induced:
            self._induced[n] = induced_map(self.chain_map, n)
        return self._induced[n]


def structure_map(source, target):
    return StructureMap(source, target)


class Level:
    """One constancy interval [b_lo, b_hi) of the filtration, with the
    model valid throughout. The last level's b_hi is infinite (closed)."""

    __slots__ = ("b_lo", "b_hi", "model")

    def __init__(self, b_lo, b_hi, model):
        self.b_lo = b_lo
        self.b_hi = b_hi
        self.model = model


class BFiltration:
    """All levels of a graph's collapse filtration, plus the comparison
    maps between consecutive levels (maps[i]: levels[i+1] -> levels[i])."""

    __slots__ = ("graph", "jumps", "levels", "maps")

    def __init__(self, graph):
        self.graph = graph
        self.jumps = graph.jump_set()
        self.levels = []
        for i, bj in enumerate(self.jumps):
            if i + 1 < len(self.jumps):
                b_hi = self.jumps[i + 1]
                sample = Rate((bj.fraction + b_hi.fraction) / 2)
            else:
                b_hi = Rate.infinity()
                sample = Rate(bj.fraction + 1)
            model = build_model(graph, bj)
            probe = build_model(graph, sample)
            if probe.canonical_bytes() != model.canonical_bytes():
                raise ConsistencyError(
                    "model is not constant on [%s, %s): differs at %s" % (bj, b_hi, sample)
                )
            self.levels.append(Level(bj, b_hi, model))
        top = build_model(graph, Rate.infinity())
        if top.canonical_bytes() != self.levels[-1].model.canonical_bytes():
            raise ConsistencyError("model at infinity differs from the last level")
        self.maps = [
            StructureMap(self.levels[i + 1].model, self.levels[i].model)
            for i in range(len(self.levels) - 1)
        ]

    def level_at(self, b):
        b = Rate(b)
        for level in reversed(self.levels):
            if level.b_lo <= b:
                return level
        raise DomainError("no level contains %s" % b)


class LinkComplex:
    """A plain space given directly by a presentation and a chain
    complex, for cone queries that need no decomposition."""

    __slots__ = ("presentation", "complex")

    def __init__(self, presentation, complex_):
        _check_user_names(presentation.generators, "link_complex")
        if complex_.rank(0) < 1:
            raise ValidationError("complex has no vertices", path="link_complex")
        if not _is_connected(complex_):
            raise ValidationError("complex is not connected", path="link_complex")
        self.presentation = presentation
        self.complex = complex_

    def check(self):
        ab = self.presentation.abelianized()
        h1 = homology(self.complex, 1)
        if ab != h1:
            raise ConsistencyError(
                "abelianized group %s disagrees with H_1 = %s" % (ab, h1)
            )


def bcone_invariant(link, b, b_query, degree):
    """Invariants of the rate-b cone over a link, probed at rate b_query.

    Below the cone rate everything is trivial; at or above it, the cone
    looks like the link itself. Returns (presentation or None, group):
    the presentation accompanies degree 1 only.
    """
    b = Rate(b)
    b_query = Rate(b_query)
    if degree < 0:
        raise DomainError("negative degree %d" % degree)
    if b_query < b:
        pres = Presentation([], []) if degree == 1 else None
        return pres, AbelianGroup.trivial()
    if isinstance(link, RatedGraph):
        model = build_model(link, b_query)
        pres = model.pi1() if degree == 1 else None
        return pres, model.homology(degree)
    pres = tietze_simplify(link.presentation) if degree == 1 else None
    return pres, homology(link.complex, degree)
