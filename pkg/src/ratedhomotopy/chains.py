"""Exact integer linear algebra: matrices, Smith normal form, chain
complexes and their homology.

Everything is arbitrary-precision and deterministic. Smith normal form
returns the full unimodular transforms, which is what lets homology come
with a canonical generating set and lets chain maps induce canonical
integer matrices on homology.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ConsistencyError, ValidationError


class IntMatrix:
    """An immutable integer matrix stored as a tuple of row tuples.

    >>> m = IntMatrix([[2, 4], [6, 8]])
    >>> (m * IntMatrix.identity(2)) == m
    True
    >>> m.det()
    -8
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows_data, rows=None, cols=None):
        data = tuple(tuple(int(x) for x in row) for row in rows_data)
        self.rows = len(data) if rows is None else rows
        if data:
            widths = {len(r) for r in data}
            if len(widths) != 1:
                raise ValidationError("ragged matrix rows")
            self.cols = widths.pop() if cols is None else cols
        else:
            if cols is None:
                raise ValidationError("empty matrix needs an explicit column count")
            self.cols = cols
        if self.rows != len(data) or any(len(r) != self.cols for r in data):
            raise ValidationError("matrix shape mismatch")
        self.data = data

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, columns, rows):
        return cls([[col[i] for col in columns] for i in range(rows)], cols=len(columns))

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __mul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValidationError(
                    "cannot multiply %dx%d by %dx%d" % (self.rows, self.cols, other.rows, other.cols)
                )
            ocols = list(zip(*other.data)) if other.data else [()] * other.cols
            out = [
                [sum(a * b for a, b in zip(row, col)) for col in ocols]
                for row in self.data
            ]
            return IntMatrix(out, rows=self.rows, cols=other.cols)
        return NotImplemented

    def __neg__(self):
        return IntMatrix([[-x for x in row] for row in self.data], rows=self.rows, cols=self.cols)

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValidationError("shape mismatch in matrix sum")
        return IntMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            rows=self.rows,
            cols=self.cols,
        )

    def __sub__(self, other):
        return self + (-other)

    def transpose(self):
        return IntMatrix(
            [self.column(j) for j in range(self.cols)], rows=self.cols, cols=self.rows
        )

    def column(self, j):
        return tuple(row[j] for row in self.data)

    def apply(self, vector):
        """Matrix times column vector, returned as a tuple."""
        if len(vector) != self.cols:
            raise ValidationError("vector length %d does not match %d columns" % (len(vector), self.cols))
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.data)

    def is_zero(self):
        return all(x == 0 for row in self.data for x in row)

    def det(self):
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValidationError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(row) for row in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def inverse_unimodular(self):
        """Exact inverse of a matrix with determinant +-1."""
        if self.rows != self.cols:
            raise ValidationError("inverse of a non-square matrix")
        n = self.rows
        aug = [
            [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(self.data)
        ]
        for col in range(n):
            piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
            if piv is None:
                raise ValidationError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            p = aug[col][col]
            aug[col] = [x / p for x in aug[col]]
            for i in range(n):
                if i != col and aug[i][col] != 0:
                    f = aug[i][col]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
        out = [row[n:] for row in aug]
        if any(x.denominator != 1 for row in out for x in row):
            raise ValidationError("matrix is not unimodular")
        return IntMatrix([[int(x) for x in row] for row in out], rows=n, cols=n)

    def to_lists(self):
        return [list(row) for row in self.data]

    def __repr__(self):
        return "IntMatrix(%r)" % (self.to_lists(),)


def _pivot(a, t, rows, cols):
    # Nonzero entry of minimal absolute value in the block a[t:][t:];
    # row-major scan with strict improvement keeps the lowest row, then
    # the lowest column, on ties.
    best = None
    best_val = None
    for i in range(t, rows):
        for j in range(t, cols):
            v = a[i][j]
            if v != 0 and (best is None or abs(v) < best_val):
                best = (i, j)
                best_val = abs(v)
    return best


def smith_normal_form(m):
    """Decompose m as U * m * V = D with U, V unimodular and D diagonal
    with nonnegative entries d1 | d2 | ... .

    >>> u, d, v = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
    >>> [d[0, 0], d[1, 1]]
    [2, 4]
    >>> (u * IntMatrix([[2, 4], [6, 8]]) * v) == d
    True
    """
    rows, cols = m.rows, m.cols
    a = m.to_lists()
    u = IntMatrix.identity(rows).to_lists()
    v = IntMatrix.identity(cols).to_lists()

    def row_op(i, k, q):  # row i -= q * row k
        a[i] = [x - q * y for x, y in zip(a[i], a[k])]
        u[i] = [x - q * y for x, y in zip(u[i], u[k])]

    def col_op(j, k, q):  # col j -= q * col k
        for r in range(rows):
            a[r][j] -= q * a[r][k]
        for r in range(cols):
            v[r][j] -= q * v[r][k]

    def swap_rows(i, k):
        if i != k:
            a[i], a[k] = a[k], a[i]
            u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        if j != k:
            for r in range(rows):
                a[r][j], a[r][k] = a[r][k], a[r][j]
            for r in range(cols):
                v[r][j], v[r][k] = v[r][k], v[r][j]

    t = 0
    while t < min(rows, cols):
        loc = _pivot(a, t, rows, cols)
        if loc is None:
            break
        swap_rows(t, loc[0])
        swap_cols(t, loc[1])
        while True:
            # Euclidean passes shrink entries until the pivot divides its
            # whole row and column; any leftover remainder becomes the new,
            # strictly smaller pivot on the next sweep.
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    row_op(i, t, a[i][t] // p)
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    col_op(j, t, a[t][j] // p)
                    dirty = dirty or a[t][j] != 0
            if dirty:
                loc = _pivot(a, t, rows, cols)
                swap_rows(t, loc[0])
                swap_cols(t, loc[1])
                continue
            # Pivot clears its row and column. Make it divide the rest of
            # the block, folding an offending row in and reducing again.
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(t, offender, -1)  # adds the offending row to row t
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return (
        IntMatrix(u, rows=rows, cols=rows),
        IntMatrix(a, rows=rows, cols=cols),
        IntMatrix(v, rows=cols, cols=cols),
    )


def invariant_factors(m):
    """The positive diagonal entries of the Smith normal form of m."""
    _, d, _ = smith_normal_form(m)
    return [d[i, i] for i in range(min(d.rows, d.cols)) if d[i, i] != 0]


class AbelianGroup:
    """A finitely generated abelian group: free rank plus a divisibility
    chain of torsion orders (each > 1, each dividing the next).

    >>> str(AbelianGroup(2, (2, 4)))
    'Z^2 + Z/2 + Z/4'
    >>> str(AbelianGroup(0, ()))
    '0'
    """

    __slots__ = ("free_rank", "torsion")

    def __init__(self, free_rank, torsion=()):
        free_rank = int(free_rank)
        torsion = tuple(int(t) for t in torsion)
        if free_rank < 0:
            raise ValidationError("negative free rank")
        for i, t in enumerate(torsion):
            if t <= 1:
                raise ValidationError("torsion orders must exceed 1")
            if i and t % torsion[i - 1] != 0:
                raise ValidationError("torsion orders must form a divisibility chain")
        self.free_rank = free_rank
        self.torsion = torsion

    @classmethod
    def trivial(cls):
        return cls(0, ())

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def __eq__(self, other):
        return (
            isinstance(other, AbelianGroup)
            and self.free_rank == other.free_rank
            and self.torsion == other.torsion
        )

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append("Z^%d" % self.free_rank)
        parts.extend("Z/%d" % t for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "AbelianGroup(%d, %r)" % (self.free_rank, self.torsion)

    def to_json(self):
        return {"rank": self.free_rank, "torsion": list(self.torsion)}


def cokernel(m):
    """Z^rows / (column span of m) as an AbelianGroup."""
    facs = invariant_factors(m)
    return AbelianGroup(m.rows - len(facs), tuple(f for f in facs if f > 1))


class ChainComplex:
    """A bounded chain complex of finitely generated free Z-modules.

    degrees[n] is the rank in degree n; boundaries[n-1] is the matrix of
    d_n (shape degrees[n-1] x degrees[n]).
    """

    __slots__ = ("degrees", "boundaries")

    def __init__(self, degrees, boundaries, check=True):
        self.degrees = tuple(int(c) for c in degrees)
        if any(c < 0 for c in self.degrees):
            raise ValidationError("negative rank in chain complex")
        bnds = []
        for n, b in enumerate(boundaries, start=1):
            if not isinstance(b, IntMatrix):
                b = IntMatrix(b, cols=self.degrees[n] if not b else None)
            if b.rows != self.degrees[n - 1] or b.cols != self.degrees[n]:
                raise ValidationError(
                    "boundary %d has shape %dx%d, expected %dx%d"
                    % (n, b.rows, b.cols, self.degrees[n - 1], self.degrees[n])
                )
            bnds.append(b)
        if len(bnds) != max(len(self.degrees) - 1, 0):
            raise ValidationError(
                "expected %d boundary maps, got %d" % (max(len(self.degrees) - 1, 0), len(bnds))
            )
        self.boundaries = tuple(bnds)
        if check:
            bad = verify_complex(self)
            if bad:
                raise ValidationError("d.d != 0 in degrees %s" % (bad,))

    def rank(self, n):
        if 0 <= n < len(self.degrees):
            return self.degrees[n]
        return 0

    def boundary(self, n):
        """The matrix of d_n, with zero maps outside the stored range."""
        if 1 <= n <= len(self.boundaries):
            return self.boundaries[n - 1]
        return IntMatrix.zero(self.rank(n - 1), self.rank(n))

    @property
    def top_degree(self):
        return len(self.degrees) - 1

    def euler_characteristic(self):
        return sum((-1) ** n * c for n, c in enumerate(self.degrees))

    def __eq__(self, other):
        return (
            isinstance(other, ChainComplex)
            and self.degrees == other.degrees
            and self.boundaries == other.boundaries
        )

    def __repr__(self):
        return "ChainComplex(degrees=%r)" % (list(self.degrees),)


def verify_complex(c):
    """Degrees n where d_n . d_(n+1) != 0 (empty list for a true complex)."""
    bad = []
    for n in range(1, len(c.degrees)):
        if not (c.boundary(n) * c.boundary(n + 1)).is_zero():
            bad.append(n)
    return bad


class HomologyBasis:
    """Homology in one degree together with canonical cycle generators.

    gens[i] is a cycle (column vector over the degree-n basis) whose class
    generates the i-th summand; orders[i] is its order (0 means infinite).
    Torsion generators come first, in increasing order, then the free ones.
    """

    __slots__ = ("group", "gens", "orders", "_vinv", "_rank", "_u2", "_all_orders", "_dn")

    def __init__(self, complex_, n):
        dn = complex_.boundary(n)
        dn1 = complex_.boundary(n + 1)
        u1, d1, v1 = smith_normal_form(dn)
        rank = sum(1 for i in range(min(d1.rows, d1.cols)) if d1[i, i] != 0)
        k = dn.cols - rank
        v1inv = v1.inverse_unimodular()
        lifted = v1inv * dn1
        for i in range(rank):
            if any(lifted[i, j] != 0 for j in range(lifted.cols)):
                raise ConsistencyError("image of d_%d is not contained in the kernel of d_%d" % (n + 1, n))
        b = IntMatrix([lifted.data[i] for i in range(rank, dn.cols)], rows=k, cols=dn1.cols)
        u2, d2, _ = smith_normal_form(b)
        orders = [d2[i, i] if i < min(d2.rows, d2.cols) else 0 for i in range(k)]
        u2inv = u2.inverse_unimodular()
        kernel = [v1.column(j) for j in range(rank, dn.cols)]

        gens = []
        kept_orders = []
        for i in range(k):
            if orders[i] == 1:
                continue
            coeffs = u2inv.column(i)
            gen = tuple(
                sum(coeffs[j] * kernel[j][r] for j in range(k)) for r in range(dn.cols)
            )
            gens.append(gen)
            kept_orders.append(orders[i])
        self.group = AbelianGroup(
            sum(1 for o in kept_orders if o == 0),
            tuple(o for o in kept_orders if o > 1),
        )
        self.gens = tuple(gens)
        self.orders = tuple(kept_orders)
        self._vinv = v1inv
        self._rank = rank
        self._u2 = u2
        self._all_orders = orders
        self._dn = dn

    def coordinates(self, cycle):
        """Coordinates of a cycle's class over the canonical generators,
        torsion entries reduced into [0, order)."""
        if any(x != 0 for x in self._dn.apply(cycle)):
            raise ValidationError("vector is not a cycle")
        w = self._vinv.apply(cycle)[self._rank:]
        h = self._u2.apply(w)
        out = []
        for coeff, order in zip(h, self._all_orders):
            if order == 1:
                continue
            out.append(coeff % order if order > 1 else coeff)
        return tuple(out)


def homology(complex_, n):
    """H_n of the complex as an AbelianGroup."""
    return HomologyBasis(complex_, n).group


class ChainMap:
    """A degree-preserving map of chain complexes, one matrix per degree.

    matrices[n] has shape target.rank(n) x source.rank(n); missing degrees
    are zero maps. The commuting squares are checked on construction.
    """

    __slots__ = ("source", "target", "matrices")

    def __init__(self, source, target, matrices, check=True):
        self.source = source
        self.target = target
        mats = []
        top = max(len(source.degrees), len(target.degrees))
        for n in range(top):
            m = matrices[n] if n < len(matrices) else None
            if m is None:
                m = IntMatrix.zero(target.rank(n), source.rank(n))
            elif not isinstance(m, IntMatrix):
                m = IntMatrix(m, rows=target.rank(n), cols=source.rank(n))
            if m.rows != target.rank(n) or m.cols != source.rank(n):
                raise ValidationError(
                    "degree-%d matrix has shape %dx%d, expected %dx%d"
                    % (n, m.rows, m.cols, target.rank(n), source.rank(n))
                )
            mats.append(m)
        self.matrices = tuple(mats)
        if check and not self.commutes():
            raise ValidationError("matrices do not commute with the boundary maps")

    def matrix(self, n):
        if 0 <= n < len(self.matrices):
            return self.matrices[n]
        return IntMatrix.zero(self.target.rank(n), self.source.rank(n))

    def commutes(self):
        top = max(len(self.source.degrees), len(self.target.degrees))
        for n in range(1, top + 1):
            left = self.target.boundary(n) * self.matrix(n)
            right = self.matrix(n - 1) * self.source.boundary(n)
            if left != right:
                return False
        return True

    @classmethod
    def identity(cls, complex_):
        return cls(
            complex_,
            complex_,
            [IntMatrix.identity(c) for c in complex_.degrees],
            check=False,
        )

    def compose(self, other):
        """self . other (apply other first)."""
        if other.target is not self.source and other.target != self.source:
            raise ValidationError("chain maps are not composable")
        top = max(len(self.matrices), len(other.matrices))
        mats = [self.matrix(n) * other.matrix(n) for n in range(top)]
        return ChainMap(other.source, self.target, mats, check=False)


def induced_map(f, n):
    """The matrix of H_n(f) over canonical generators.

    Row i is the image of the i-th source generator written in the target
    generators, torsion coordinates reduced mod their orders. (So composing
    maps multiplies matrices in application order: M_(g.f) = M_f * M_g.)
    """
    src = HomologyBasis(f.source, n)
    tgt = HomologyBasis(f.target, n)
    fn = f.matrix(n)
    rows = [list(tgt.coordinates(fn.apply(g))) for g in src.gens]
    return IntMatrix(rows, rows=len(src.gens), cols=len(tgt.gens))
