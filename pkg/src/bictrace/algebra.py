"""Finite-dimensional unital associative algebras given by structure constants.

An algebra is a field, a dimension, structure constants c[i][j] (the vector
e_i * e_j) and a unit vector.  Constructors check associativity on every basis
triple and the two-sided unit law on every basis element; anything accepted
here can be trusted downstream.
"""

from __future__ import annotations

from .exactlin import (
    Field,
    FieldMismatchError,
    Matrix,
    kernel_basis,
    solve,
)


class AlgebraError(ValueError):
    """Raised when proposed structure constants fail the algebra laws."""


class Algebra:
    """Unital associative algebra over an exact field.

    mult[i][j] is the coordinate vector of e_i * e_j; unit is the coordinate
    vector of 1.  Instances are immutable and hash by identity.
    """

    __slots__ = ("field", "dim", "mult", "unit", "name", "_lmats", "_rmats", "_gens", "_env")

    def __init__(self, field: Field, mult, unit, name: str = "A", _skip_check: bool = False):
        self.field = field
        self.dim = len(mult)
        self.mult = [[list(v) for v in row] for row in mult]
        self.unit = list(unit)
        self.name = name
        self._lmats = None
        self._rmats = None
        self._gens = None
        self._env = None
        if len(self.unit) != self.dim or any(len(row) != self.dim for row in self.mult):
            raise AlgebraError("structure constant shapes are inconsistent")
        for row in self.mult:
            for v in row:
                if len(v) != self.dim:
                    raise AlgebraError("structure constant shapes are inconsistent")
        if not _skip_check:
            self._validate()

    # -- vector helpers ----------------------------------------------------

    def mul_vec(self, u: list, v: list) -> list:
        """Product of two coordinate vectors."""
        f = self.field
        z = f.zero
        out = [z] * self.dim
        for i, a in enumerate(u):
            if a == z:
                continue
            for j, b in enumerate(v):
                if b == z:
                    continue
                ab = f.mul(a, b)
                for k, c in enumerate(self.mult[i][j]):
                    if c != z:
                        out[k] = f.add(out[k], f.mul(ab, c))
        return out

    def basis_product(self, i: int, j: int) -> list:
        return list(self.mult[i][j])

    def left_mult_matrix(self, i: int) -> Matrix:
        """Matrix of x -> e_i * x in the chosen basis."""
        if self._lmats is None:
            self._lmats = [
                Matrix(self.field, [[self.mult[a][j][k] for j in range(self.dim)] for k in range(self.dim)])
                for a in range(self.dim)
            ]
        return self._lmats[i]

    def right_mult_matrix(self, i: int) -> Matrix:
        """Matrix of x -> x * e_i."""
        if self._rmats is None:
            self._rmats = [
                Matrix(self.field, [[self.mult[j][a][k] for j in range(self.dim)] for k in range(self.dim)])
                for a in range(self.dim)
            ]
        return self._rmats[i]

    def left_mult_of(self, vec: list) -> Matrix:
        f = self.field
        out = Matrix.zeros(f, self.dim, self.dim)
        for i, a in enumerate(vec):
            if a != f.zero:
                out = out + self.left_mult_matrix(i).scale(a)
        return out

    def right_mult_of(self, vec: list) -> Matrix:
        f = self.field
        out = Matrix.zeros(f, self.dim, self.dim)
        for i, a in enumerate(vec):
            if a != f.zero:
                out = out + self.right_mult_matrix(i).scale(a)
        return out

    # -- validation ----------------------------------------------------------

    def _validate(self):
        f = self.field
        dim = self.dim
        for i in range(dim):
            e = [f.zero] * dim
            e[i] = f.one
            if self.mul_vec(self.unit, e) != e:
                raise AlgebraError(f"unit fails on the left of basis element {i}")
            if self.mul_vec(e, self.unit) != e:
                raise AlgebraError(f"unit fails on the right of basis element {i}")
        for i in range(dim):
            for j in range(dim):
                vij = self.mult[i][j]
                for k in range(dim):
                    lhs = self._mul_vec_basis(vij, k)
                    rhs = self._mul_basis_vec(i, self.mult[j][k])
                    if lhs != rhs:
                        raise AlgebraError(
                            f"associativity fails on basis triple ({i}, {j}, {k})"
                        )

    def _mul_vec_basis(self, v: list, k: int) -> list:
        f = self.field
        z = f.zero
        out = [z] * self.dim
        for l, a in enumerate(v):
            if a == z:
                continue
            for m, c in enumerate(self.mult[l][k]):
                if c != z:
                    out[m] = f.add(out[m], f.mul(a, c))
        return out

    def _mul_basis_vec(self, i: int, v: list) -> list:
        f = self.field
        z = f.zero
        out = [z] * self.dim
        for l, a in enumerate(v):
            if a == z:
                continue
            for m, c in enumerate(self.mult[i][l]):
                if c != z:
                    out[m] = f.add(out[m], f.mul(a, c))
        return out

    # -- misc ----------------------------------------------------------------

    def generators(self) -> list[int]:
        """Indices of a (greedy, deterministic) generating set of basis elements.

        The unital subalgebra generated by the returned elements is the whole
        algebra; used to shrink balancing-relation and commutator generator
        sets (products of generators span everything).
        """
        if self._gens is not None:
            return self._gens
        from .exactlin import SparseEchelon

        f = self.field
        ech = SparseEchelon(f, self.dim)
        ech.add({i: x for i, x in enumerate(self.unit) if x != f.zero})
        gens: list[int] = []
        basis_vecs = []
        for i in range(self.dim):
            v = [f.zero] * self.dim
            v[i] = f.one
            basis_vecs.append(v)

        def close():
            # close the current span under products with generator basis vecs
            grew = True
            while grew:
                grew = False
                rows = [dict(r) for r in ech.rows.values()]
                for row in rows:
                    vec = [f.zero] * self.dim
                    for c, x in row.items():
                        vec[c] = x
                    for g in gens:
                        for prod in (self.mul_vec(vec, basis_vecs[g]), self.mul_vec(basis_vecs[g], vec)):
                            if ech.add({i: x for i, x in enumerate(prod) if x != f.zero}):
                                grew = True

        for i in range(self.dim):
            if ech.reduce({j: x for j, x in enumerate(basis_vecs[i]) if x != f.zero}):
                gens.append(i)
                ech.add({j: x for j, x in enumerate(basis_vecs[i]) if x != f.zero})
                close()
            if ech.rank == self.dim:
                break
        self._gens = gens
        return gens

    def __repr__(self):
        return f"Algebra({self.name}, dim={self.dim}, {self.field})"


def new_algebra(field: Field, mult, unit, name: str = "A") -> Algebra:
    """Validated algebra from raw structure constants (ints allowed)."""
    coerced = [[[field.of(x) for x in vec] for vec in row] for row in mult]
    u = [field.of(x) for x in unit]
    return Algebra(field, coerced, u, name=name)


def field_algebra(field: Field, name: str = "k") -> Algebra:
    """The ground field as a one-dimensional algebra."""
    return new_algebra(field, [[[1]]], [1], name=name)


def product_field_algebra(field: Field, n: int, name: str | None = None) -> Algebra:
    """k x k x ... x k (n factors), componentwise multiplication."""
    mult = [
        [[1 if (i == j and k == i) else 0 for k in range(n)] for j in range(n)]
        for i in range(n)
    ]
    return new_algebra(field, mult, [1] * n, name=name or f"k^{n}")


def group_algebra(field: Field, table: list[list[int]], name: str | None = None) -> Algebra:
    """Group algebra from a multiplication table table[i][j] = index of g_i g_j.

    The table is checked to be a group (associativity, two-sided identity,
    inverses) before the algebra is built.
    """
    n = len(table)
    for row in table:
        if len(row) != n or any(not (0 <= x < n) for x in row):
            raise AlgebraError("multiplication table is not square over {0..n-1}")
    ident = None
    for e in range(n):
        if all(table[e][i] == i and table[i][e] == i for i in range(n)):
            ident = e
            break
    if ident is None:
        raise AlgebraError("table has no two-sided identity")
    for i in range(n):
        if not any(table[i][j] == ident and table[j][i] == ident for j in range(n)):
            raise AlgebraError(f"element {i} has no inverse")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    raise AlgebraError(f"table is not associative at ({i},{j},{k})")
    mult = [
        [[1 if k == table[i][j] else 0 for k in range(n)] for j in range(n)]
        for i in range(n)
    ]
    unit = [1 if i == ident else 0 for i in range(n)]
    return new_algebra(field, mult, unit, name=name or f"k[G{n}]")


def cyclic_group_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def symmetric_group_table(n: int) -> list[list[int]]:
    """Multiplication table of S_n on tuples sorted lexicographically.

    Composition convention: (s*t)(x) = s(t(x)).
    """
    from itertools import permutations

    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = []
    for s in perms:
        row = []
        for t in perms:
            st = tuple(s[t[x]] for x in range(n))
            row.append(index[st])
        table.append(row)
    return table


def klein_four_table() -> list[list[int]]:
    # C2 x C2 with elements indexed by bit pairs 0..3
    return [[i ^ j for j in range(4)] for i in range(4)]


def matrix_algebra(field: Field, n: int, name: str | None = None) -> Algebra:
    """Full matrix algebra M_n with basis e_{ij} ordered row-major."""
    if n < 1:
        raise AlgebraError("matrix algebra needs n >= 1")
    dim = n * n

    def idx(i, j):
        return i * n + j

    mult = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    if j == k:
                        mult[idx(i, j)][idx(k, l)][idx(i, l)] = 1
    unit = [0] * dim
    for i in range(n):
        unit[idx(i, i)] = 1
    return new_algebra(field, mult, unit, name=name or f"M{n}")


class Quiver:
    """Finite quiver: vertex count and arrows as (source, target) pairs."""

    def __init__(self, num_vertices: int, arrows: list[tuple[int, int]]):
        self.num_vertices = num_vertices
        self.arrows = list(arrows)
        for s, t in self.arrows:
            if not (0 <= s < num_vertices and 0 <= t < num_vertices):
                raise AlgebraError("arrow endpoint out of range")

    def is_acyclic(self) -> bool:
        adj: dict[int, list[int]] = {v: [] for v in range(self.num_vertices)}
        for s, t in self.arrows:
            adj[s].append(t)
        state = [0] * self.num_vertices  # 0 new, 1 active, 2 done

        def visit(v):
            state[v] = 1
            for w in adj[v]:
                if state[w] == 1:
                    return False
                if state[w] == 0 and not visit(w):
                    return False
            state[v] = 2
            return True

        for v in range(self.num_vertices):
            if state[v] == 0 and not visit(v):
                return False
        return True


def path_algebra(field: Field, quiver: Quiver, name: str | None = None) -> Algebra:
    """Path algebra of an acyclic quiver: basis = paths (vertices included),
    multiplication = concatenation (paths composed left to right) or zero."""
    if not quiver.is_acyclic():
        raise AlgebraError("quiver has a directed cycle; path algebra is infinite-dimensional")
    # paths as tuples of arrow indices; length-0 paths are ('v', v)
    paths: list[tuple] = [("v", v) for v in range(quiver.num_vertices)]
    frontier = [("a", (i,)) for i in range(len(quiver.arrows))]
    while frontier:
        paths.extend(frontier)
        nxt = []
        for _, seq in frontier:
            last_target = quiver.arrows[seq[-1]][1]
            for i, (s, _) in enumerate(quiver.arrows):
                if s == last_target:
                    nxt.append(("a", seq + (i,)))
        frontier = nxt

    def src(p):
        return p[1] if p[0] == "v" else quiver.arrows[p[1][0]][0]

    def tgt(p):
        return p[1] if p[0] == "v" else quiver.arrows[p[1][-1]][1]

    index = {p: i for i, p in enumerate(paths)}
    dim = len(paths)
    mult = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for p in paths:
        for q in paths:
            if tgt(p) != src(q):
                continue
            if p[0] == "v":
                r = q
            elif q[0] == "v":
                r = p
            else:
                r = ("a", p[1] + q[1])
            mult[index[p]][index[q]][index[r]] = 1
    unit = [0] * dim
    for v in range(quiver.num_vertices):
        unit[index[("v", v)]] = 1
    return new_algebra(field, mult, unit, name=name or "kQ")


def dual_numbers(field: Field, name: str | None = None) -> Algebra:
    """k[x]/(x^2), basis (1, x)."""
    mult = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return new_algebra(field, mult, [1, 0], name=name or "k[x]/x^2")


_OPPOSITE_CACHE: dict[int, Algebra] = {}
_TENSOR_CACHE: dict[tuple[int, int], Algebra] = {}


def opposite(a: Algebra) -> Algebra:
    """Same space, reversed multiplication.  Cached so repeat calls share identity."""
    hit = _OPPOSITE_CACHE.get(id(a))
    if hit is not None:
        return hit
    mult = [[a.mult[j][i] for j in range(a.dim)] for i in range(a.dim)]
    out = Algebra(a.field, mult, a.unit, name=f"{a.name}^op", _skip_check=True)
    _OPPOSITE_CACHE[id(a)] = out
    _OPPOSITE_CACHE[id(out)] = a  # opposite is involutive on structure constants
    return out


def tensor_algebra(a: Algebra, b: Algebra, name: str | None = None) -> Algebra:
    """A (x) B with basis e_i (x) f_k ordered left-major (matches kron)."""
    if a.field != b.field:
        raise FieldMismatchError("tensor of algebras over different fields")
    hit = _TENSOR_CACHE.get((id(a), id(b)))
    if hit is not None:
        return hit
    f = a.field
    z = f.zero
    da, db = a.dim, b.dim
    dim = da * db
    mult = [[None] * dim for _ in range(dim)]
    for i in range(da):
        for k in range(db):
            for j in range(da):
                for l in range(db):
                    va = a.mult[i][j]
                    vb = b.mult[k][l]
                    vec = [z] * dim
                    for x, ca in enumerate(va):
                        if ca == z:
                            continue
                        for y, cb in enumerate(vb):
                            if cb != z:
                                vec[x * db + y] = f.mul(ca, cb)
                    mult[i * db + k][j * db + l] = vec
    unit = [z] * dim
    for x, ca in enumerate(a.unit):
        if ca == z:
            continue
        for y, cb in enumerate(b.unit):
            if cb != z:
                unit[x * db + y] = f.mul(ca, cb)
    out = Algebra(f, mult, unit, name=name or f"{a.name}(x){b.name}", _skip_check=True)
    _TENSOR_CACHE[(id(a), id(b))] = out
    return out


def enveloping(a: Algebra) -> Algebra:
    """A^e = A (x) A^op, cached on the algebra."""
    if a._env is None:
        a._env = tensor_algebra(a, opposite(a), name=f"{a.name}^e")
    return a._env


def multiplication_matrix(a: Algebra) -> Matrix:
    """mu: A (x) A -> A on the kron basis of A (x) A."""
    f = a.field
    dim = a.dim
    cols = []
    for i in range(dim):
        for j in range(dim):
            cols.append(a.mult[i][j])
    return Matrix.from_columns(f, cols, nrows=dim)


def separability_idempotent(a: Algebra) -> list | None:
    """A solution e of {(x (x) 1) e = e (1 (x) x), mu(e) = 1} or None.

    Presence of a solution is exactly separability of the algebra, which is
    the strict smoothness / 2-dualizability criterion used throughout.
    """
    f = a.field
    dim = a.dim
    idm = Matrix.identity(f, dim)
    rows_blocks = []
    rhs = []
    from .exactlin import kron as _kron

    for i in range(dim):
        li = _kron(a.left_mult_matrix(i), idm)
        ri = _kron(idm, a.right_mult_matrix(i))
        rows_blocks.append(li - ri)
        rhs.extend([f.zero] * (dim * dim))
    rows_blocks.append(multiplication_matrix(a))
    rhs.extend(a.unit)
    big = Matrix(f, [row for blk in rows_blocks for row in blk.data])
    return solve(big, rhs)


def is_separable(a: Algebra) -> bool:
    return separability_idempotent(a) is not None


def center(a: Algebra) -> list[list]:
    """Basis of the center {z : za = az for all a}."""
    f = a.field
    rows = []
    for i in range(a.dim):
        diff = a.left_mult_matrix(i) - a.right_mult_matrix(i)
        rows.extend(diff.data)
    if not rows:
        return [[f.one]]
    return kernel_basis(Matrix(f, rows))


class AlgebraHom:
    """Unital algebra homomorphism h: A -> B given by its matrix."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: Algebra, target: Algebra, matrix: Matrix, check: bool = True):
        self.source = source
        self.target = target
        self.matrix = matrix
        if matrix.rows != target.dim or matrix.cols != source.dim:
            raise AlgebraError("homomorphism matrix has wrong shape")
        if check:
            if matrix.apply(source.unit) != target.unit:
                raise AlgebraError("map does not preserve the unit")
            for i in range(source.dim):
                for j in range(source.dim):
                    lhs = matrix.apply(source.mult[i][j])
                    rhs = target.mul_vec(matrix.col(i), matrix.col(j))
                    if lhs != rhs:
                        raise AlgebraError(
                            f"map is not multiplicative on basis pair ({i}, {j})"
                        )

    def __call__(self, vec: list) -> list:
        return self.matrix.apply(vec)


def identity_hom(a: Algebra) -> AlgebraHom:
    return AlgebraHom(a, a, Matrix.identity(a.field, a.dim), check=False)


def swap_hom(a: Algebra, b: Algebra) -> AlgebraHom:
    """The canonical iso A (x) B -> B (x) A, e_i (x) f_k -> f_k (x) e_i."""
    ab = tensor_algebra(a, b)
    ba = tensor_algebra(b, a)
    f = a.field
    cols = []
    for i in range(a.dim):
        for k in range(b.dim):
            v = [f.zero] * (a.dim * b.dim)
            v[k * a.dim + i] = f.one
            cols.append(v)
    return AlgebraHom(ab, ba, Matrix.from_columns(f, cols), check=False)
