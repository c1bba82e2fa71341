"""Finitely presented groups: free words, presentations, assembly of a
group from a graph of vertex groups glued along torus boundaries, and
Tietze simplification.

A word in a free group of rank n is a tuple of nonzero integers; the
letter g with 1 <= |g| <= n means the |g|-th generator, negated for its
inverse. Words are kept freely reduced.
"""

from __future__ import annotations

import re

from .chains import AbelianGroup, IntMatrix, cokernel
from .errors import ValidationError


def free_reduce(word):
    out = []
    for g in word:
        g = int(g)
        if g == 0:
            raise ValidationError("0 is not a letter")
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def invert(word):
    return tuple(-g for g in reversed(word))


def exponent_vector(word, rank):
    out = [0] * rank
    for g in word:
        if abs(g) > rank:
            raise ValidationError("letter %d outside rank %d" % (g, rank))
        out[abs(g) - 1] += 1 if g > 0 else -1
    return tuple(out)


def apply_images(images, word):
    """Substitute images[i-1] for generator i throughout the word."""
    out = []
    for g in word:
        if not 1 <= abs(g) <= len(images):
            raise ValidationError("letter %d has no image" % g)
        image = images[abs(g) - 1]
        out.extend(image if g > 0 else invert(image))
    return free_reduce(out)


_TOKEN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_@]*)(?:\^(-?\d+))?$")


def parse_word(text, names):
    """Parse "c*d^-1*c" style notation into a word over the given
    generator names. "1" and "" denote the empty word."""
    if not isinstance(text, str):
        raise ValidationError("word must be a string, got %r" % (text,))
    text = text.strip()
    if text in ("", "1"):
        return ()
    index = {name: i + 1 for i, name in enumerate(names)}
    letters = []
    for raw in text.split("*"):
        token = raw.strip()
        m = _TOKEN_RE.match(token)
        if not m:
            raise ValidationError("bad word token %r" % token)
        base, power = m.group(1), int(m.group(2)) if m.group(2) else 1
        if base not in index:
            raise ValidationError("unknown generator %r" % base)
        g = index[base]
        letters.extend([g if power > 0 else -g] * abs(power))
    return free_reduce(letters)


def word_to_str(word, names):
    if not word:
        return "1"
    parts = []
    for g in word:
        if not 1 <= abs(g) <= len(names):
            raise ValidationError("letter %d outside the generator list" % g)
        name = names[abs(g) - 1]
        parts.append(name if g > 0 else name + "^-1")
    return "*".join(parts)


class Presentation:
    """A finite group presentation: generator names plus relator words.

    >>> p = Presentation(["a", "b"], [(1, 2, -1, -2)])
    >>> str(p.abelianized())
    'Z^2'
    """

    __slots__ = ("generators", "relators")

    def __init__(self, generators, relators):
        gens = tuple(generators)
        for name in gens:
            if not isinstance(name, str) or not name:
                raise ValidationError("generator names must be nonempty strings")
        if len(set(gens)) != len(gens):
            raise ValidationError("duplicate generator names")
        rels = tuple(free_reduce(r) for r in relators)
        for r in rels:
            for g in r:
                if abs(g) > len(gens):
                    raise ValidationError("relator letter %d outside rank %d" % (g, len(gens)))
        self.generators = gens
        self.relators = rels

    @property
    def rank(self):
        return len(self.generators)

    def __eq__(self, other):
        return (
            isinstance(other, Presentation)
            and self.generators == other.generators
            and self.relators == other.relators
        )

    def __repr__(self):
        return "Presentation(%r, %r)" % (list(self.generators), list(self.relators))

    def relator_strs(self):
        return [word_to_str(r, self.generators) for r in self.relators]

    def exponent_matrix(self):
        """Generators x relators matrix of exponent sums (the abelianized
        relation matrix, which is also the top boundary map of the
        presentation 2-complex)."""
        cols = [exponent_vector(r, self.rank) for r in self.relators]
        return IntMatrix.from_columns(cols, self.rank)

    def abelianized(self):
        return cokernel(self.exponent_matrix())

    def quotient_killing(self, letters):
        """Add the relators g = 1 for each listed generator index."""
        extra = []
        for g in letters:
            if not 1 <= g <= self.rank:
                raise ValidationError("no generator with index %d" % g)
            extra.append((g,))
        return Presentation(self.generators, list(self.relators) + extra)


def mapping_torus(rank, images):
    """The presentation <x_1..x_rank, t | t x_i t^-1 = images[i]>.

    The images are words over x_1..x_rank only; checking that they define
    an automorphism of the free group is out of scope, so only arity and
    letter ranges are validated.
    """
    if len(images) != rank:
        raise ValidationError("expected %d monodromy images, got %d" % (rank, len(images)))
    reduced = []
    for i, w in enumerate(images):
        w = free_reduce(w)
        for g in w:
            if abs(g) > rank:
                raise ValidationError("monodromy image %d uses letter %d outside the fiber" % (i + 1, g))
        reduced.append(w)
    t = rank + 1
    names = ["x%d" % (i + 1) for i in range(rank)] + ["t"]
    relators = [
        free_reduce((t, i + 1, -t) + invert(reduced[i])) for i in range(rank)
    ]
    return Presentation(names, relators)


class GroupHom:
    """A homomorphism given on generators. Only arity and letter ranges
    are validated; relator preservation is the caller's claim."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images):
        if len(images) != source.rank:
            raise ValidationError(
                "expected %d generator images, got %d" % (source.rank, len(images))
            )
        imgs = []
        for w in images:
            w = free_reduce(w)
            for g in w:
                if abs(g) > target.rank:
                    raise ValidationError("image letter %d outside the target rank" % g)
            imgs.append(w)
        self.source = source
        self.target = target
        self.images = tuple(imgs)

    def apply(self, word):
        return apply_images(self.images, word)

    def compose(self, other):
        """self . other (apply other first)."""
        if other.target != self.source:
            raise ValidationError("homomorphisms are not composable")
        return GroupHom(other.source, self.target, [self.apply(w) for w in other.images])

    @classmethod
    def identity(cls, p):
        return cls(p, p, [(i + 1,) for i in range(p.rank)])

    def abelianized_matrix(self):
        """Exponent matrix of the images: rows = source generators,
        columns = target generators."""
        rows = [exponent_vector(w, self.target.rank) for w in self.images]
        return IntMatrix(rows, rows=self.source.rank, cols=self.target.rank)


class AssembledPresentation:
    """Result of gluing vertex groups along the edges of a graph: the
    combined presentation plus the bookkeeping needed to talk about it.

    node_offset[n] is the 0-based position of node n's first generator;
    stable_index[e] the 1-based letter of the stable generator of the
    non-tree edge e; tree_edges the edges of the chosen spanning tree.
    """

    __slots__ = ("presentation", "node_offset", "stable_index", "tree_edges")

    def __init__(self, presentation, node_offset, stable_index, tree_edges):
        self.presentation = presentation
        self.node_offset = dict(node_offset)
        self.stable_index = dict(stable_index)
        self.tree_edges = frozenset(tree_edges)

    def shift(self, node, word):
        off = self.node_offset[node]
        return tuple(g + off if g > 0 else g - off for g in word)


def spanning_tree(node_ids, edge_ends):
    """Breadth-first spanning tree rooted at the smallest node id.

    edge_ends maps edge id -> (node0, node1). Returns the set of tree
    edge ids; raises if the graph is disconnected. Deterministic: from
    each dequeued node, candidate edges are taken in (neighbor id,
    edge id) order.
    """
    nodes = sorted(node_ids)
    if not nodes:
        raise ValidationError("graph has no nodes")
    root = nodes[0]
    discovered = {root}
    tree = set()
    queue = [root]
    while queue:
        u = queue.pop(0)
        candidates = []
        for eid in sorted(edge_ends):
            a, b = edge_ends[eid]
            if a == u and b not in discovered:
                candidates.append((b, eid))
            elif b == u and a not in discovered:
                candidates.append((a, eid))
        for w, eid in sorted(candidates):
            if w not in discovered:
                discovered.add(w)
                tree.add(eid)
                queue.append(w)
    if discovered != set(nodes):
        missing = sorted(set(nodes) - discovered)
        raise ValidationError("graph is not connected; unreachable nodes %s" % missing)
    return tree


def graph_of_groups(node_presentations, edges):
    """Fundamental group of a graph of groups with torus edge groups.

    node_presentations maps node id -> Presentation. Each edge is
    (edge_id, (node0, mu0, lambda0), (node1, mu1, lambda1)) with the mu
    and lambda words written over the local generators of their node.

    Spanning-tree edges identify the two boundary words directly; every
    other edge contributes a stable letter s conjugating one side to the
    other. Generators are renamed name@n<id>, stable letters s@e<id>.
    """
    ids = sorted(node_presentations)
    offsets = {}
    names = []
    for n in ids:
        offsets[n] = len(names)
        names.extend("%s@n%d" % (g, n) for g in node_presentations[n].generators)

    edge_ends = {e[0]: (e[1][0], e[2][0]) for e in edges}
    if len(edge_ends) != len(edges):
        raise ValidationError("duplicate edge ids")
    for eid, (a, b) in edge_ends.items():
        if a not in offsets or b not in offsets:
            raise ValidationError("edge %d touches an unknown node" % eid)
    tree = spanning_tree(ids, edge_ends)

    stable_index = {}
    for e in sorted(e[0] for e in edges):
        if e not in tree:
            stable_index[e] = len(names) + 1
            names.append("s@e%d" % e)

    def shift(node, word):
        off = offsets[node]
        return tuple(g + off if g > 0 else g - off for g in word)

    relators = []
    for n in ids:
        for r in node_presentations[n].relators:
            relators.append(shift(n, r))
    for eid, end0, end1 in sorted(edges, key=lambda e: e[0]):
        n0, mu0, lam0 = end0
        n1, mu1, lam1 = end1
        for w0, w1 in ((mu0, mu1), (lam0, lam1)):
            a = shift(n0, w0)
            b = shift(n1, w1)
            if eid in tree:
                relators.append(free_reduce(a + invert(b)))
            else:
                s = stable_index[eid]
                relators.append(free_reduce((s,) + a + (-s,) + invert(b)))

    assembled = Presentation(names, relators)
    return AssembledPresentation(assembled, offsets, stable_index, tree)


def _substitute(words, k, replacement):
    out = []
    for w in words:
        expanded = []
        for g in w:
            if abs(g) == k:
                expanded.extend(replacement if g > 0 else invert(replacement))
            else:
                expanded.append(g)
        out.append(free_reduce(expanded))
    return out


def _drop_letter(words, k):
    def renumber(g):
        a = abs(g) - 1 if abs(g) > k else abs(g)
        return a if g > 0 else -a

    return [tuple(renumber(g) for g in w) for w in words]


def tietze_simplify(p):
    """Shrink a presentation without changing the group it presents.

    Repeats until nothing applies: drop empty relators, drop duplicate
    relators, and eliminate a generator that occurs exactly once in some
    relator (solving that relator for it and substituting everywhere).
    The scan order is fixed, so the result is deterministic. Generator
    names of survivors are preserved.
    """
    names = list(p.generators)
    rels = [free_reduce(r) for r in p.relators]
    while True:
        rels = [r for r in rels if r]
        seen = set()
        deduped = []
        for r in rels:
            if r not in seen:
                seen.add(r)
                deduped.append(r)
        rels = deduped

        target = None
        for i, r in enumerate(rels):
            counts = {}
            for g in r:
                counts[abs(g)] = counts.get(abs(g), 0) + 1
            for pos, g in enumerate(r):
                if counts[abs(g)] == 1:
                    target = (i, pos)
                    break
            if target:
                break
        if target is None:
            break
        i, pos = target
        r = rels[i]
        g = r[pos]
        k = abs(g)
        before, after = r[:pos], r[pos + 1 :]
        if g > 0:
            replacement = free_reduce(invert(before) + invert(after))
        else:
            replacement = free_reduce(after + before)
        rest = rels[:i] + rels[i + 1 :]
        rels = _drop_letter(_substitute(rest, k, replacement), k)
        del names[k - 1]
    return Presentation(names, rels)
