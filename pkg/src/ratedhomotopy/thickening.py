"""Skeleton thickening of a simplicial complex: the canonical subdivision
of every maximal simplex into a central core plus collar pieces around
each proper face, with exact coordinates, and the interpolation operator
that extends per-simplex data across the collars.

All arithmetic is over Fraction. Inside a maximal simplex T of dimension
k (barycentric coordinates lambda, one per vertex), the piece attached
to a nonempty face f (s = dim f, W = T minus f) is cut out by

    sum_{v in f} lambda_v - (s+1) * lambda_w >= 1/2   for w in W,
    (s+1) * lambda_v - sum_{v' in f} lambda_v' >= -1/2  for v in f,
    lambda_w >= 0                                       for w in W.

The piece for f = T is the core, a half-scale copy of T. The collar of
f is a product of the shrunk face with a cube: its vertices are the
points (b_g + v) / 2 where f is contained in g and v runs over f, b_g
the barycenter of g. Each collar point carries cube coordinates u_w in
[0, 1] per w in W, computed by the fixed linear-fractional formula

    u_w = 2 (s+1) lambda_w / ((s+1) lambda_w + sum_{v in f} lambda_v - 1/2),

which is affine on segment fibers, exact on cube corners, and makes the
blended weights below continuous across all piece boundaries.

Data to interpolate is one value vector per vertex per maximal simplex
(so neighboring simplices may disagree along shared faces). On the core
of T the extension is the simplex's own data read through the half-scale
map; on the collar of f it is the weighted average of every simplex
containing f, evaluated at the projected base point on f, with weight
proportional to prod(1 - u_w) over the w that the contributing simplex
is missing.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import DomainError, ValidationError


def _frac(x):
    if isinstance(x, float):
        raise ValidationError("coordinates must be exact rationals, not floats: %r" % (x,))
    try:
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ValidationError("not a rational number: %r" % (x,)) from None


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _affine_rank(points):
    """Dimension of the affine span of a list of rational points."""
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    rank = 0
    cols = len(base)
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pivot = rows[r][c]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c] / pivot
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        rank += 1
        r += 1
        if r == len(rows):
            break
    return rank


def _det(rows):
    n = len(rows)
    a = [list(r) for r in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                factor = a[i][c] / inv
                a[i] = [x - factor * y for x, y in zip(a[i], a[c])]
    return det


def _solve_affine(columns, target):
    """Solve sum_j x_j * columns[j] = target with sum_j x_j = 1, exactly.

    Returns the unique solution when the columns are affinely independent
    and the target lies in their affine hull, else None.
    """
    n = len(columns)
    rows = [[col[i] for col in columns] for i in range(len(target))]
    rhs = list(target)
    rows.append([Fraction(1)] * n)
    rhs.append(Fraction(1))
    aug = [row + [b] for row, b in zip(rows, rhs)]
    m = len(aug)
    r = 0
    pivots = []
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            return None  # affinely dependent; rejected at validation
        aug[r], aug[piv] = aug[piv], aug[r]
        pivot = aug[r][c]
        aug[r] = [x / pivot for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if aug[i][n] != 0:
            return None  # target outside the affine hull
    return tuple(aug[i][n] for i in range(n))


class SimplicialComplex:
    """A finite geometric simplicial complex of pure dimension, given by
    rational vertex coordinates and its maximal simplices.

    The simplices must all have the same dimension and be affinely
    independent; that they overlap only along shared faces is the
    caller's responsibility (it cannot be seen from this data cheaply,
    and everything downstream is exact either way).
    """

    __slots__ = ("vertices", "simplices", "dim", "ambient_dim")

    def __init__(self, vertices, simplices):
        verts = [tuple(_frac(x) for x in v) for v in vertices]
        if not verts:
            raise ValidationError("complex has no vertices")
        ambient = {len(v) for v in verts}
        if len(ambient) != 1:
            raise ValidationError("vertex coordinates have mixed dimensions")
        self.ambient_dim = ambient.pop()
        if self.ambient_dim < 1:
            raise ValidationError("ambient dimension must be at least 1")

        simps = []
        sizes = set()
        seen = set()
        for idx, s in enumerate(simplices):
            ids = tuple(sorted(int(i) for i in s))
            where = "simplices[%d]" % idx
            if len(set(ids)) != len(ids):
                raise ValidationError("repeated vertex", path=where)
            if any(i < 0 or i >= len(verts) for i in ids):
                raise ValidationError("vertex id out of range", path=where)
            if ids in seen:
                raise ValidationError("duplicate simplex", path=where)
            seen.add(ids)
            sizes.add(len(ids))
            simps.append(ids)
        if not simps:
            raise ValidationError("complex has no simplices")
        if len(sizes) != 1:
            raise ValidationError("simplices have mixed dimensions; the complex must be pure")
        self.dim = sizes.pop() - 1
        if self.dim < 1:
            raise ValidationError("simplex dimension must be at least 1")
        for idx, ids in enumerate(simps):
            points = [verts[i] for i in ids]
            if _affine_rank(points) != self.dim:
                raise ValidationError("degenerate simplex", path="simplices[%d]" % idx)
        used = {i for ids in simps for i in ids}
        if used != set(range(len(verts))):
            raise ValidationError("unused vertices: %s" % sorted(set(range(len(verts))) - used))
        self.vertices = tuple(verts)
        self.simplices = tuple(simps)

    def barycentric(self, simplex_index, point):
        """Barycentric coordinates of the point in the given simplex, or
        None when the point lies outside it."""
        ids = self.simplices[simplex_index]
        sol = _solve_affine([self.vertices[i] for i in ids], point)
        if sol is None or any(x < 0 for x in sol):
            return None
        return sol

    def to_ambient(self, simplex_index, lam):
        ids = self.simplices[simplex_index]
        return tuple(
            sum(lam[j] * self.vertices[ids[j]][c] for j in range(len(ids)))
            for c in range(self.ambient_dim)
        )

    def edge_determinant(self, simplex_index):
        """det of the edge matrix; defined when ambient dim == dim."""
        if self.ambient_dim != self.dim:
            raise DomainError("edge determinant needs ambient dimension == simplex dimension")
        ids = self.simplices[simplex_index]
        base = self.vertices[ids[0]]
        rows = [
            [self.vertices[i][c] - base[c] for c in range(self.ambient_dim)]
            for i in ids[1:]
        ]
        return _det(rows)


class Piece:
    """One cell of the thickening subdivision: the core of a maximal
    simplex, or the collar of one of its proper faces."""

    __slots__ = ("simplex", "face", "face_positions", "constraints", "vertices_barycentric")

    def __init__(self, complex_, simplex_index, face_positions):
        ids = complex_.simplices[simplex_index]
        k = complex_.dim
        f = tuple(face_positions)
        s = len(f) - 1
        w_positions = tuple(j for j in range(k + 1) if j not in f)
        self.simplex = simplex_index
        self.face = tuple(ids[j] for j in f)
        self.face_positions = f

        cons = []
        chi_f = [Fraction(1) if j in f else Fraction(0) for j in range(k + 1)]
        for w in w_positions:
            coeff = list(chi_f)
            coeff[w] -= s + 1
            cons.append((tuple(coeff), Fraction(1, 2)))
        for v in f:
            coeff = [-x for x in chi_f]
            coeff[v] += s + 1
            cons.append((tuple(coeff), Fraction(-1, 2)))
        for j in range(k + 1):
            coeff = [Fraction(0)] * (k + 1)
            coeff[j] = Fraction(1)
            cons.append((tuple(coeff), Fraction(0)))
        self.constraints = tuple(cons)

        corners = []
        for mask in range(1 << len(w_positions)):
            g = set(f)
            for bit, w in enumerate(w_positions):
                if mask >> bit & 1:
                    g.add(w)
            size = len(g)
            for v in f:
                lam = [
                    Fraction(1, 2 * size) if j in g else Fraction(0)
                    for j in range(k + 1)
                ]
                lam[v] += Fraction(1, 2)
                corners.append(tuple(lam))
        # distinct (g, v) pairs give distinct points; dedup is defensive
        unique = []
        seen = set()
        for lam in corners:
            if lam not in seen:
                seen.add(lam)
                unique.append(lam)
        self.vertices_barycentric = tuple(unique)

    @property
    def is_core(self):
        return len(self.face_positions) == len(self.vertices_barycentric[0])

    def contains(self, lam):
        return all(_dot(coeff, lam) >= rhs for coeff, rhs in self.constraints)

    def vertices_ambient(self, complex_):
        return tuple(
            complex_.to_ambient(self.simplex, lam) for lam in self.vertices_barycentric
        )

    def _triangulate(self, vertices=None):
        if vertices is None:
            vertices = list(self.vertices_barycentric)
        d = _affine_rank(vertices)
        if len(vertices) == d + 1:
            return [tuple(vertices)]
        apex = min(vertices)
        out = []
        for coeff, rhs in self.constraints:
            tight = [p for p in vertices if _dot(coeff, p) == rhs]
            if len(tight) < d or apex in tight or _affine_rank(tight) != d - 1:
                continue
            for facet in self._triangulate(tight):
                out.append((apex,) + facet)
        return out

    def volume_chart(self):
        """Volume in the barycentric chart (whole simplex -> 1/k!)."""
        k = len(self.vertices_barycentric[0]) - 1
        if k > 3:
            raise DomainError("exact volumes are implemented for dimensions up to 3")
        total = Fraction(0)
        for simp in self._triangulate():
            rows = [
                [simp[i][c] - simp[0][c] for c in range(1, k + 1)]
                for i in range(1, k + 1)
            ]
            total += abs(_det(rows))
        return total / factorial(k)

    def volume(self, complex_):
        """Absolute volume when the complex fills its ambient space,
        otherwise the chart volume."""
        chart = self.volume_chart()
        if complex_.ambient_dim == complex_.dim:
            return chart * abs(complex_.edge_determinant(self.simplex))
        return chart


def decompose(complex_):
    """All pieces of the thickening subdivision, 2^(k+1) - 1 per maximal
    simplex, in a fixed order (by simplex, then face size, then face)."""
    pieces = []
    k = complex_.dim
    for si in range(len(complex_.simplices)):
        faces = []
        for mask in range(1, 1 << (k + 1)):
            f = tuple(j for j in range(k + 1) if mask >> j & 1)
            faces.append(f)
        faces.sort(key=lambda f: (len(f), f))
        for f in faces:
            pieces.append(Piece(complex_, si, f))
    return pieces


class Location:
    """Where a point sits in the subdivision: the chosen piece, the
    barycentric coordinates, and the fiber data of its collar (the base
    point on the face and the cube coordinates), or the half-scale
    preimage when the point is in a core."""

    __slots__ = ("complex", "point", "piece", "barycentric", "face_base", "cube", "tau")

    def __init__(self, complex_, point, piece, lam):
        self.complex = complex_
        self.point = point
        self.piece = piece
        self.barycentric = lam
        k = complex_.dim
        f = piece.face_positions
        s = len(f) - 1
        if piece.is_core:
            self.tau = tuple(2 * lam[j] - Fraction(1, k + 1) for j in range(k + 1))
            self.face_base = None
            self.cube = None
        else:
            self.tau = None
            w_positions = [j for j in range(k + 1) if j not in f]
            sum_f = sum(lam[j] for j in f)
            sum_w = sum(lam[j] for j in w_positions)
            self.face_base = tuple(
                2 * (lam[j] + sum_w / (s + 1)) - Fraction(1, s + 1) for j in f
            )
            cube = {}
            for w in w_positions:
                denom = (s + 1) * lam[w] + sum_f - Fraction(1, 2)
                cube[complex_.simplices[piece.simplex][w]] = (
                    2 * (s + 1) * lam[w] / denom
                )
            self.cube = cube

    def anchor_ambient(self):
        """The point of the thickened skeleton this location projects to:
        for a collar, the half-scale image of the base point; for a core,
        the point itself."""
        if self.piece.is_core:
            return self.point
        ids = self.complex.simplices[self.piece.simplex]
        k = self.complex.dim
        lam = [Fraction(1, 2 * (k + 1))] * (k + 1)
        for pos, j in enumerate(self.piece.face_positions):
            lam[j] += self.face_base[pos] / 2
        return self.complex.to_ambient(self.piece.simplex, tuple(lam))


def locate(complex_, point, pieces=None):
    """Find the piece containing a point. Ties on piece boundaries are
    broken deterministically: cores first, then smaller faces, then
    vertex ids, then simplex order."""
    point = tuple(_frac(x) for x in point)
    if len(point) != complex_.ambient_dim:
        raise ValidationError(
            "point has %d coordinates, ambient dimension is %d"
            % (len(point), complex_.ambient_dim)
        )
    if pieces is None:
        pieces = decompose(complex_)
    candidates = []
    lams = {}
    for si in range(len(complex_.simplices)):
        lam = complex_.barycentric(si, point)
        if lam is not None:
            lams[si] = lam
    if not lams:
        raise DomainError("point is not in the complex")
    for piece in pieces:
        lam = lams.get(piece.simplex)
        if lam is not None and piece.contains(lam):
            key = (
                0 if piece.is_core else 1,
                len(piece.face),
                piece.face,
                piece.simplex,
            )
            candidates.append((key, piece, lam))
    if not candidates:
        raise DomainError("point is not covered by any piece")  # pragma: no cover
    _, piece, lam = min(candidates, key=lambda c: c[0])
    return Location(complex_, point, piece, lam)


class VertexData:
    """One value vector per vertex per maximal simplex. Vectors over one
    complex share a single length; simplices may disagree on shared
    vertices — that disagreement is what the extension blends."""

    __slots__ = ("values", "width")

    def __init__(self, complex_, values):
        if len(values) != len(complex_.simplices):
            raise ValidationError(
                "expected values for %d simplices, got %d"
                % (len(complex_.simplices), len(values))
            )
        width = None
        out = []
        for si, per_vertex in enumerate(values):
            where = "values[%d]" % si
            if len(per_vertex) != complex_.dim + 1:
                raise ValidationError(
                    "expected %d vertex values" % (complex_.dim + 1), path=where
                )
            vecs = []
            for vec in per_vertex:
                vec = tuple(_frac(x) for x in vec)
                if width is None:
                    width = len(vec)
                if len(vec) != width:
                    raise ValidationError("value vectors have mixed lengths", path=where)
                vecs.append(vec)
            out.append(tuple(vecs))
        if width is None or width < 1:
            raise ValidationError("value vectors are empty")
        self.values = tuple(out)
        self.width = width

    def evaluate(self, complex_, simplex_index, lam):
        """Affine evaluation of simplex data at barycentric coordinates."""
        vecs = self.values[simplex_index]
        return tuple(
            sum(lam[j] * vecs[j][c] for j in range(len(vecs)))
            for c in range(self.width)
        )


def extend(complex_, data, point, pieces=None):
    """Evaluate the thickening extension at a point.

    Returns (value, weights): the value vector and the convex weights
    {simplex index: weight} of the simplices that contributed. On a core
    only the owning simplex contributes; on the collar of a face f every
    simplex containing f does, and the weights vary continuously across
    all piece boundaries.
    """
    loc = locate(complex_, point, pieces)
    piece = loc.piece
    si = piece.simplex
    if piece.is_core:
        return data.evaluate(complex_, si, loc.tau), {si: Fraction(1)}

    face_ids = set(piece.face)
    contributors = [
        m
        for m in range(len(complex_.simplices))
        if face_ids.issubset(complex_.simplices[m])
    ]
    weights = {}
    for m in contributors:
        beta = Fraction(1)
        member = set(complex_.simplices[m])
        for w_id, u in loc.cube.items():
            if w_id not in member:
                beta *= 1 - u
        weights[m] = beta
    total = sum(weights.values())
    # the owning simplex always has weight 1, so the sum is at least 1
    value = [Fraction(0)] * data.width
    for m, beta in weights.items():
        if beta == 0:
            continue
        lam_m = [Fraction(0)] * (complex_.dim + 1)
        for pos, v_id in enumerate(piece.face):
            lam_m[complex_.simplices[m].index(v_id)] = loc.face_base[pos]
        contribution = data.evaluate(complex_, m, tuple(lam_m))
        for c in range(data.width):
            value[c] += beta * contribution[c]
    return (
        tuple(x / total for x in value),
        {m: beta / total for m, beta in weights.items()},
    )
