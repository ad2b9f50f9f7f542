"""Exact dense linear algebra over the rationals and prime fields.

Everything downstream of this module compares matrices for *equality*, so no
floating point is allowed anywhere.  Rational arithmetic uses gmpy2.mpq when
available (fractions.Fraction otherwise, same results), prime fields use ints
reduced mod p.  Dense prime-field elimination is routed through the kernels in
:mod:`bictrace._kernels` (numba-jitted with a numpy fallback).
"""

from __future__ import annotations

from dataclasses import dataclass

try:
    from gmpy2 import mpq as _RAT
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _RAT

from . import _kernels


class FieldMismatchError(ValueError):
    """Raised when values from different fields are combined."""


class DimensionError(ValueError):
    """Raised on shape mismatches."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """The rationals or a prime field F_p.

    Elements of the rationals are gmpy2.mpq / Fraction values; elements of
    F_p are plain ints in [0, p).  A Field instance owns the arithmetic so
    matrices can stay agnostic about representation.
    """

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @staticmethod
    def rationals() -> "Field":
        return _QQ

    @staticmethod
    def prime(p: int) -> "Field":
        return Field(p)

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    # -- element arithmetic ------------------------------------------------

    def of(self, n) -> object:
        """Coerce an int (or 'a/b' string over QQ) into a field element."""
        if self.p is None:
            if isinstance(n, str):
                if "/" in n:
                    num, den = n.split("/")
                    return _RAT(int(num), int(den))
                return _RAT(int(n))
            return _RAT(n)
        if isinstance(n, str):
            n = int(n)
        return n % self.p

    @property
    def zero(self):
        return self.of(0)

    @property
    def one(self):
        return self.of(1)

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if self.p is None:
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return 1 / _RAT(a)
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a) -> str:
        """Exact rendering: 'p/q' over QQ, 'r mod p' over a prime field."""
        if self.p is None:
            return str(a)
        return f"{a % self.p} mod {self.p}"


_QQ = Field(None)


def _check_same_field(a: "Matrix", b: "Matrix"):
    if a.field != b.field:
        raise FieldMismatchError(f"fields differ: {a.field} vs {b.field}")


class Matrix:
    """Dense row-major matrix over a fixed Field.  Treated as immutable.

    Zero-row / zero-column matrices are legal (0-dimensional spaces do occur,
    e.g. vanishing tensor products), so the shape is tracked explicitly.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: list[list], shape: tuple[int, int] | None = None):
        self.field = field
        self.data = [list(r) for r in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if shape is not None:
            if self.data and (self.rows, self.cols) != shape:
                raise DimensionError("shape hint contradicts data")
            self.rows, self.cols = shape
            if not self.data and self.rows:
                z = field.zero
                self.data = [[z] * self.cols for _ in range(self.rows)]
        for r in self.data:
            if len(r) != self.cols:
                raise DimensionError("ragged rows")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int_rows(field: Field, data: list[list[int]]) -> "Matrix":
        return Matrix(field, [[field.of(x) for x in row] for row in data])

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return Matrix(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return Matrix(field, [[z] * cols for _ in range(rows)], shape=(rows, cols))

    @staticmethod
    def from_columns(field: Field, cols: list[list], nrows: int | None = None) -> "Matrix":
        if not cols:
            return Matrix(field, [], shape=(nrows or 0, 0))
        n = len(cols[0])
        return Matrix(field, [[c[i] for c in cols] for i in range(n)])

    @staticmethod
    def column(field: Field, vec: list) -> "Matrix":
        return Matrix(field, [[x] for x in vec])

    # -- basics ------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i) -> list:
        return list(self.data[i])

    def col(self, j) -> list:
        return [self.data[i][j] for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and all(self.data[i] == other.data[i] for i in range(self.rows))
        )

    def __hash__(self):  # identity hashing; equality above is structural
        return id(self)

    def __repr__(self):
        body = "; ".join(
            " ".join(self.field.format(x) for x in row) for row in self.data
        )
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for row in self.data for x in row)

    def copy_data(self) -> list[list]:
        return [list(r) for r in self.data]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch in add")
        add = self.field.add
        return Matrix(
            self.field,
            [
                [add(self.data[i][j], other.data[i][j]) for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch in sub")
        sub = self.field.sub
        return Matrix(
            self.field,
            [
                [sub(self.data[i][j], other.data[i][j]) for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, [[neg(x) for x in row] for row in self.data])

    def scale(self, c) -> "Matrix":
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, x) for x in row] for row in self.data])

    def __mul__(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        f = self.field
        z = f.zero
        ocols = other.cols
        out = [[z] * ocols for _ in range(self.rows)]
        for i in range(self.rows):
            arow = self.data[i]
            orow = out[i]
            for k in range(self.cols):
                a = arow[k]
                if a == z:
                    continue
                brow = other.data[k]
                if f.p is None:
                    for j in range(ocols):
                        b = brow[j]
                        if b != z:
                            orow[j] += a * b
                else:
                    p = f.p
                    for j in range(ocols):
                        b = brow[j]
                        if b != z:
                            orow[j] = (orow[j] + a * b) % p
        return Matrix(f, out, shape=(self.rows, ocols))

    def apply(self, vec: list) -> list:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise DimensionError("vector length mismatch")
        f = self.field
        z = f.zero
        out = [z] * self.rows
        for j, v in enumerate(vec):
            if v == z:
                continue
            for i in range(self.rows):
                a = self.data[i][j]
                if a != z:
                    out[i] = f.add(out[i], f.mul(a, v))
        return out

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            shape=(self.cols, self.rows),
        )

    def trace(self):
        if self.rows != self.cols:
            raise DimensionError("trace of non-square matrix")
        t = self.field.zero
        for i in range(self.rows):
            t = self.field.add(t, self.data[i][i])
        return t

    def hstack(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if self.rows != other.rows:
            raise DimensionError("hstack row mismatch")
        return Matrix(
            self.field,
            [self.data[i] + other.data[i] for i in range(self.rows)],
            shape=(self.rows, self.cols + other.cols),
        )


def kron(f: Matrix, g: Matrix) -> Matrix:
    """Kronecker product, left factor index major: (i,k),(j,l) -> f[i,j]*g[k,l]."""
    _check_same_field(f, g)
    fld = f.field
    z = fld.zero
    out = [[z] * (f.cols * g.cols) for _ in range(f.rows * g.rows)]
    shape = (f.rows * g.rows, f.cols * g.cols)
    for i in range(f.rows):
        for j in range(f.cols):
            a = f.data[i][j]
            if a == z:
                continue
            for k in range(g.rows):
                grow = g.data[k]
                orow = out[i * g.rows + k]
                base = j * g.cols
                for l in range(g.cols):
                    b = grow[l]
                    if b != z:
                        orow[base + l] = fld.mul(a, b)
    return Matrix(fld, out, shape=shape)


# -- elimination -------------------------------------------------------------


def _rref_generic(field: Field, data: list[list]) -> tuple[list[list], list[int]]:
    """In-place reduced row echelon form, first-nonzero pivoting. Returns pivots."""
    rows = len(data)
    cols = len(data[0]) if rows else 0
    z = field.zero
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = None
        for i in range(r, rows):
            if data[i][c] != z:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            data[r], data[pr] = data[pr], data[r]
        # normalize pivot row
        pv = data[r][c]
        if pv != field.one:
            inv = field.inv(pv)
            row = data[r]
            for j in range(c, cols):
                if row[j] != z:
                    row[j] = field.mul(inv, row[j])
        prow = data[r]
        for i in range(rows):
            if i == r:
                continue
            fac = data[i][c]
            if fac == z:
                continue
            row = data[i]
            if field.p is None:
                for j in range(c, cols):
                    pj = prow[j]
                    if pj != z:
                        row[j] -= fac * pj
            else:
                p = field.p
                for j in range(c, cols):
                    pj = prow[j]
                    if pj != z:
                        row[j] = (row[j] - fac * pj) % p
        pivots.append(c)
        r += 1
    return data, pivots


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Unique reduced row-echelon form, its pivot columns, and the rank."""
    if m.rows == 0 or m.cols == 0:
        return m, [], 0
    if m.field.p is not None and m.rows * m.cols >= _kernels.MODP_DENSE_MIN:
        red, pivots = _kernels.rref_modp(m.copy_data(), m.field.p)
        return Matrix(m.field, red), pivots, len(pivots)
    data, pivots = _rref_generic(m.field, m.copy_data())
    return Matrix(m.field, data), pivots, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


def kernel_basis(m: Matrix) -> list[list]:
    """Canonical basis of the null space (free variables set to unit vectors,
    in increasing column order)."""
    red, pivots, rk = rref(m)
    f = m.field
    z, o = f.zero, f.one
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for fc in free:
        v = [z] * m.cols
        v[fc] = o
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(red.data[r][fc])
        basis.append(v)
    return basis


def solve(m: Matrix, b: list) -> list | None:
    """One solution of m x = b with free coordinates zero, or None."""
    if len(b) != m.rows:
        raise DimensionError("rhs length mismatch")
    aug = Matrix(m.field, [m.data[i] + [b[i]] for i in range(m.rows)])
    red, pivots, rk = rref(aug)
    f = m.field
    z = f.zero
    if pivots and pivots[-1] == m.cols:
        return None  # pivot in the augmented column: inconsistent
    x = [z] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = red.data[r][m.cols]
    return x


def solve_matrix(m: Matrix, b: Matrix) -> Matrix | None:
    """Solve m X = b column-by-column (free coordinates zero)."""
    _check_same_field(m, b)
    cols = []
    for j in range(b.cols):
        x = solve(m, b.col(j))
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_columns(m.field, cols, nrows=m.cols)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionError("inverse of non-square matrix")
    inv = solve_matrix(m, Matrix.identity(m.field, m.rows))
    if inv is None or (m * inv) != Matrix.identity(m.field, m.rows):
        raise ValueError("matrix is not invertible")
    return inv


class SparseEchelon:
    """Incremental echelon basis for a span of sparse vectors.

    Rows are kept as {column: value} dicts with pivot value 1.  The final
    rref rows (unique for the span, whatever the insertion order) are
    produced by inter-reduction.
    """

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.rows: dict[int, dict[int, object]] = {}  # pivot col -> row

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict[int, object]) -> dict[int, object]:
        """Residual of vec after reduction against the current rows."""
        f = self.field
        z = f.zero
        v = {c: x for c, x in vec.items() if x != z}
        while v:
            c = min(v)
            row = self.rows.get(c)
            if row is None:
                return v
            fac = v[c]
            for cc, x in row.items():
                nv = f.sub(v.get(cc, z), f.mul(fac, x))
                if nv == z:
                    v.pop(cc, None)
                else:
                    v[cc] = nv
        return v

    def add(self, vec: dict[int, object]) -> bool:
        """Insert vec into the span; True if the rank grew."""
        v = self.reduce(vec)
        if not v:
            return False
        f = self.field
        c = min(v)
        inv = f.inv(v[c])
        self.rows[c] = {cc: f.mul(inv, x) for cc, x in v.items()}
        return True

    def rref_rows(self) -> list[dict[int, object]]:
        """Canonical rref rows of the span, ordered by pivot column."""
        f = self.field
        z = f.zero
        pivots = sorted(self.rows)
        # clear entries above each pivot, working bottom-up
        reduced: dict[int, dict[int, object]] = {}
        for p in reversed(pivots):
            row = dict(self.rows[p])
            for q in pivots:
                if q <= p:
                    continue
                fac = row.get(q, z)
                if fac == z:
                    continue
                qrow = reduced[q]
                for cc, x in qrow.items():
                    nv = f.sub(row.get(cc, z), f.mul(fac, x))
                    if nv == z:
                        row.pop(cc, None)
                    else:
                        row[cc] = nv
            reduced[p] = row
        return [reduced[p] for p in pivots]

    def pivots(self) -> list[int]:
        return sorted(self.rows)


def span_rank(field: Field, ncols: int, vectors) -> int:
    """Rank of the span of (possibly sparse dict) vectors."""
    ech = SparseEchelon(field, ncols)
    for v in vectors:
        if not isinstance(v, dict):
            v = {i: x for i, x in enumerate(v) if x != field.zero}
        ech.add(v)
    return ech.rank


@dataclass(frozen=True)
class QuotientSpace:
    """Ambient space modulo a subspace, with a chosen retraction.

    projection . section = identity on the quotient and
    kernel(projection) = the subspace.  The quotient basis is the set of
    non-pivot standard coordinates of the subspace's rref.
    """

    ambient_dim: int
    dim: int
    projection: Matrix
    section: Matrix


def quotient(field: Field, ambient_dim: int, subspace: list) -> QuotientSpace:
    """Quotient of k^ambient_dim by the span of the given vectors."""
    ech = SparseEchelon(field, ambient_dim)
    for v in subspace:
        if not isinstance(v, dict):
            if len(v) != ambient_dim:
                raise DimensionError("subspace vector has wrong length")
            v = {i: x for i, x in enumerate(v) if x != field.zero}
        ech.add(v)
    rows = ech.rref_rows()
    pivots = ech.pivots()
    pivot_set = set(pivots)
    free = [j for j in range(ambient_dim) if j not in pivot_set]
    z, o = field.zero, field.one
    # projection: reduce x by the rref rows, then read off free coordinates
    proj = [[z] * ambient_dim for _ in free]
    for qi, fc in enumerate(free):
        proj[qi][fc] = o
        for r, pc in zip(rows, pivots):
            coeff = r.get(fc, z)
            if coeff != z:
                proj[qi][pc] = field.neg(coeff)
    sect = [[z] * len(free) for _ in range(ambient_dim)]
    for qi, fc in enumerate(free):
        sect[fc][qi] = o
    return QuotientSpace(
        ambient_dim,
        len(free),
        Matrix(field, proj) if free else Matrix.zeros(field, 0, ambient_dim),
        Matrix(field, sect) if free else Matrix.zeros(field, ambient_dim, 0),
    )


def unit_vector(field: Field, n: int, i: int) -> list:
    v = [field.zero] * n
    v[i] = field.one
    return v
