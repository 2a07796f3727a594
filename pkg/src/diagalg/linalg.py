"""Dense exact linear algebra over Q and prime fields.

Matrices are immutable (tuples of tuples of scalars); subspaces are stored
as reduced-row-echelon bases, which makes subspace equality a tuple
comparison.  Mod-p row reduction and multiplication go through the kernel
backend (compiled when available); rational arithmetic stays on Fraction.

The diagonalization entry points implement the standard criteria: an
operator on a finite-dimensional space is diagonalizable iff its minimal
polynomial splits into distinct linear factors, and a commuting family of
diagonalizable operators is simultaneously diagonalizable by iterated
eigenspace refinement.
"""

from . import kernels
from .errors import NotInvertible, NotSquare, SizeMismatch
from .fields import Polynomial, check_same_field, poly_splits_simply


def _rref_generic(rows, field, pivot_limit=None):
    """RREF by fraction-free-ish Gauss-Jordan with exact scalars.

    pivot_limit restricts pivot search to the first columns (for solving
    augmented systems).  Returns (rows, pivots) with rows a list of lists.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    limit = ncols if pivot_limit is None else pivot_limit
    pivots = []
    r = 0
    zero = field.zero
    for c in range(limit):
        pr = -1
        for i in range(r, nrows):
            if m[i][c] != zero:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        if inv != field.one:
            m[r] = [field.mul(x, inv) for x in m[r]]
        row_r = m[r]
        for i in range(nrows):
            if i == r:
                continue
            f = m[i][c]
            if f == zero:
                continue
            mi = m[i]
            for j in range(c, ncols):
                if row_r[j] != zero:
                    mi[j] = field.sub(mi[j], field.mul(f, row_r[j]))
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rref_rows(rows, field, pivot_limit=None):
    """RREF of a list of row vectors, dispatching to the mod-p kernels for
    full-width reductions over prime fields."""
    if not rows:
        return [], []
    if field.char > 0 and pivot_limit is None:
        nrows, ncols = len(rows), len(rows[0])
        flat = [x for row in rows for x in row]
        out, pivots = kernels.mat_rref_mod(flat, nrows, ncols, field.char)
        return [out[i * ncols:(i + 1) * ncols] for i in range(nrows)], list(pivots)
    return _rref_generic(rows, field, pivot_limit)


class Matrix:
    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows):
        self.field = field
        self.rows = tuple(tuple(field.scalar(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for row in self.rows:
            if len(row) != self.ncols:
                raise SizeMismatch("ragged rows")

    @classmethod
    def zeros(cls, field, nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, field, values):
        values = [field.scalar(v) for v in values]
        n = len(values)
        z = field.zero
        return cls(field, [[values[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_cols(cls, field, cols):
        if not cols:
            return cls(field, [])
        n = len(cols[0])
        return cls(field, [[cols[j][i] for j in range(len(cols))] for i in range(n)])

    @classmethod
    def companion(cls, poly):
        """Companion matrix of a monic polynomial (subdiagonal of ones,
        negated coefficients in the last column)."""
        F = poly.field
        if not poly.is_monic():
            poly = poly.monic()
        n = poly.degree
        z = F.zero
        rows = [[z] * n for _ in range(n)]
        for i in range(1, n):
            rows[i][i - 1] = F.one
        for i in range(n):
            rows[i][n - 1] = F.neg(poly.coeffs[i])
        return cls(F, rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def col(self, j):
        return [self.rows[i][j] for i in range(self.nrows)]

    def is_square(self):
        return self.nrows == self.ncols

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.rows))

    def __add__(self, other):
        F = check_same_field(self.field, other.field)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise SizeMismatch("matrix addition shape mismatch")
        return Matrix(F, [
            [F.add(a, b) for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.rows, other.rows)
        ])

    def __sub__(self, other):
        F = check_same_field(self.field, other.field)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise SizeMismatch("matrix subtraction shape mismatch")
        return Matrix(F, [
            [F.sub(a, b) for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.rows, other.rows)
        ])

    def __neg__(self):
        F = self.field
        return Matrix(F, [[F.neg(a) for a in row] for row in self.rows])

    def scale(self, c):
        F = self.field
        c = F.scalar(c)
        return Matrix(F, [[F.mul(c, a) for a in row] for row in self.rows])

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        F = check_same_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise SizeMismatch(f"({self.nrows}x{self.ncols}) * ({other.nrows}x{other.ncols})")
        n, m, k = self.nrows, self.ncols, other.ncols
        if F.char > 0:
            flat_a = [x for row in self.rows for x in row]
            flat_b = [x for row in other.rows for x in row]
            out = kernels.mat_mul_mod(flat_a, flat_b, n, m, k, F.char)
            return Matrix(F, [out[i * k:(i + 1) * k] for i in range(n)])
        zero = F.zero
        out = [[zero] * k for _ in range(n)]
        brows = other.rows
        for i in range(n):
            arow = self.rows[i]
            orow = out[i]
            for t in range(m):
                c = arow[t]
                if c == zero:
                    continue
                brow = brows[t]
                for j in range(k):
                    if brow[j] != zero:
                        orow[j] = F.add(orow[j], F.mul(c, brow[j]))
        return Matrix(F, out)

    __rmul__ = scale

    def __pow__(self, e):
        if not self.is_square():
            raise NotSquare("matrix power of a non-square matrix")
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def matvec(self, v):
        F = self.field
        if len(v) != self.ncols:
            raise SizeMismatch("matvec length mismatch")
        out = []
        zero = F.zero
        for row in self.rows:
            acc = zero
            for a, x in zip(row, v):
                if a != zero and x != zero:
                    acc = F.add(acc, F.mul(a, x))
            out.append(acc)
        return out

    def transpose(self):
        return Matrix(self.field, [self.col(i) for i in range(self.ncols)])

    def trace(self):
        if not self.is_square():
            raise NotSquare("trace of a non-square matrix")
        acc = self.field.zero
        for i in range(self.nrows):
            acc = self.field.add(acc, self.rows[i][i])
        return acc

    def is_zero(self):
        z = self.field.zero
        return all(a == z for row in self.rows for a in row)

    def is_diagonal(self):
        z = self.field.zero
        return all(
            self.rows[i][j] == z
            for i in range(self.nrows)
            for j in range(self.ncols)
            if i != j
        )

    def rref(self):
        rows, pivots = rref_rows(self.rows, self.field)
        return (Matrix(self.field, rows) if rows else self), pivots

    def rank(self):
        if self.nrows == 0 or self.ncols == 0:
            return 0
        _, pivots = rref_rows(self.rows, self.field)
        return len(pivots)

    def kernel_basis(self):
        """Basis of the right null space, one vector per free column,
        re-reduced to RREF rows."""
        F = self.field
        if self.ncols == 0:
            return []
        if self.nrows == 0:
            return [list(r) for r in Matrix.identity(F, self.ncols).rows]
        rows, pivots = rref_rows(self.rows, F)
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for f in free:
            v = [F.zero] * self.ncols
            v[f] = F.one
            for r, c in enumerate(pivots):
                v[c] = F.neg(rows[r][f])
            basis.append(v)
        reduced, _ = rref_rows(basis, F) if basis else ([], [])
        return [list(r) for r in reduced]

    def solve(self, b):
        """One solution x of self @ x = b, or None if inconsistent."""
        F = self.field
        if len(b) != self.nrows:
            raise SizeMismatch("solve rhs length mismatch")
        aug = [list(r) + [F.scalar(x)] for r, x in zip(self.rows, b)]
        if self.nrows == 0:
            return [F.zero] * self.ncols
        rows, pivots = rref_rows(aug, F, pivot_limit=self.ncols)
        for row in rows[len(pivots):]:
            if row[-1] != F.zero:
                return None
        x = [F.zero] * self.ncols
        for r, c in enumerate(pivots):
            x[c] = rows[r][-1]
        return x

    def solve_matrix(self, B):
        """Solve self @ X = B for all columns at once; None if inconsistent."""
        F = self.field
        if B.nrows != self.nrows:
            raise SizeMismatch("solve_matrix shape mismatch")
        aug = [list(r) + list(br) for r, br in zip(self.rows, B.rows)]
        rows, pivots = rref_rows(aug, F, pivot_limit=self.ncols)
        for row in rows[len(pivots):]:
            if any(x != F.zero for x in row[self.ncols:]):
                return None
        out = [[F.zero] * B.ncols for _ in range(self.ncols)]
        for r, c in enumerate(pivots):
            out[c] = rows[r][self.ncols:]
        return Matrix(F, out)

    def inverse(self):
        if not self.is_square():
            raise NotSquare("inverse of a non-square matrix")
        X = self.solve_matrix(Matrix.identity(self.field, self.nrows))
        if X is None or (self * X) != Matrix.identity(self.field, self.nrows):
            raise NotInvertible("singular matrix")
        return X

    def charpoly(self):
        """Characteristic polynomial det(xI - A) by the division-free
        Berkowitz recursion, monic, coefficients lowest degree first."""
        if not self.is_square():
            raise NotSquare("charpoly of a non-square matrix")
        F = self.field
        n = self.nrows
        if n == 0:
            return Polynomial.one(F)
        vec = [F.one, F.neg(self.rows[0][0])]
        for k in range(2, n + 1):
            a = self.rows[k - 1][k - 1]
            R = self.rows[k - 1][:k - 1]
            C = [self.rows[i][k - 1] for i in range(k - 1)]
            B = [row[:k - 1] for row in self.rows[:k - 1]]
            items = [F.one, F.neg(a)]
            v = C
            for _ in range(k - 1):
                dot = F.zero
                for x, y in zip(R, v):
                    dot = F.add(dot, F.mul(x, y))
                items.append(F.neg(dot))
                if len(items) == k + 1:
                    break
                v = [
                    _dot(F, Brow, v)
                    for Brow in B
                ]
            new = []
            for i in range(k + 1):
                acc = F.zero
                for j in range(len(vec)):
                    if 0 <= i - j <= k:
                        acc = F.add(acc, F.mul(items[i - j], vec[j]))
                new.append(acc)
            vec = new
        return Polynomial(F, list(reversed(vec)))

    def __repr__(self):
        fmt = self.field.format_scalar
        body = ",".join("[" + ",".join(fmt(x) for x in row) + "]" for row in self.rows)
        return f"[{body}]"


def _dot(field, xs, ys):
    acc = field.zero
    for x, y in zip(xs, ys):
        acc = field.add(acc, field.mul(x, y))
    return acc


class Subspace:
    """Subspace of K^n stored as an RREF row basis; equality of subspaces is
    equality of the canonical bases."""

    __slots__ = ("field", "ambient", "rows")

    def __init__(self, field, ambient, rref_rows_):
        self.field = field
        self.ambient = ambient
        self.rows = tuple(tuple(r) for r in rref_rows_)

    @classmethod
    def from_vectors(cls, field, ambient, vectors):
        vecs = [[field.scalar(x) for x in v] for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise SizeMismatch("vector length differs from ambient dimension")
        if not vecs:
            return cls(field, ambient, [])
        rows, pivots = rref_rows(vecs, field)
        return cls(field, ambient, rows[: len(pivots)])

    @classmethod
    def full(cls, field, ambient):
        return cls(field, ambient, Matrix.identity(field, ambient).rows)

    @classmethod
    def zero_space(cls, field, ambient):
        return cls(field, ambient, [])

    @property
    def dim(self):
        return len(self.rows)

    def is_zero(self):
        return not self.rows

    def basis_matrix(self):
        return Matrix(self.field, self.rows) if self.rows else Matrix(self.field, [])

    def contains(self, vector):
        F = self.field
        v = [F.scalar(x) for x in vector]
        if len(v) != self.ambient:
            raise SizeMismatch("vector length differs from ambient dimension")
        for row in self.rows:
            pivot = next(j for j, x in enumerate(row) if x != F.zero)
            c = v[pivot]
            if c != F.zero:
                for j in range(self.ambient):
                    if row[j] != F.zero:
                        v[j] = F.sub(v[j], F.mul(c, row[j]))
        return all(x == F.zero for x in v)

    def contains_subspace(self, other):
        return all(self.contains(r) for r in other.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.ambient, self.rows))

    def __add__(self, other):
        if self.ambient != other.ambient:
            raise SizeMismatch("subspace sum in different ambient spaces")
        return Subspace.from_vectors(
            self.field, self.ambient, list(self.rows) + list(other.rows)
        )

    def intersection(self, other):
        if self.ambient != other.ambient:
            raise SizeMismatch("subspace intersection in different ambient spaces")
        F = self.field
        if self.is_zero() or other.is_zero():
            return Subspace.zero_space(F, self.ambient)
        a, b = len(self.rows), len(other.rows)
        cols = [list(r) for r in self.rows] + [list(r) for r in other.rows]
        N = Matrix.from_cols(F, cols)
        combos = N.kernel_basis()
        vecs = []
        for combo in combos:
            v = [F.zero] * self.ambient
            for i in range(a):
                c = combo[i]
                if c != F.zero:
                    for j in range(self.ambient):
                        v[j] = F.add(v[j], F.mul(c, self.rows[i][j]))
            vecs.append(v)
        return Subspace.from_vectors(F, self.ambient, vecs)

    def __repr__(self):
        return f"Subspace(dim {self.dim} of K^{self.ambient})"


# ---------------------------------------------------------------------------
# Minimal polynomials and diagonalization
# ---------------------------------------------------------------------------

def _local_annihilator(T, start):
    """Monic minimal polynomial of the Krylov chain v, Tv, T^2 v, ... for the
    standard basis vector e_start."""
    F = T.field
    n = T.nrows
    v = [F.zero] * n
    v[start] = F.one
    echelon = {}  # pivot index -> (vector, representation over iterates)
    rep_len = 0
    while True:
        w = list(v)
        rep = [F.zero] * (rep_len + 1)
        rep[rep_len] = F.one
        for piv in sorted(echelon):
            if w[piv] == F.zero:
                continue
            evec, erep = echelon[piv]
            f = F.div(w[piv], evec[piv])
            for j in range(n):
                if evec[j] != F.zero:
                    w[j] = F.sub(w[j], F.mul(f, evec[j]))
            for j, c in enumerate(erep):
                if c != F.zero:
                    rep[j] = F.sub(rep[j], F.mul(f, c))
        pivot = next((j for j, x in enumerate(w) if x != F.zero), None)
        if pivot is None:
            return Polynomial(F, rep)
        echelon[pivot] = (w, rep)
        rep_len += 1
        v = T.matvec(v)


def minimal_polynomial(T):
    """Least-degree monic mu with mu(T) = 0, as the lcm over standard basis
    vectors of their Krylov annihilators.  Divides the characteristic
    polynomial."""
    if not T.is_square():
        raise NotSquare("minimal polynomial of a non-square matrix")
    F = T.field
    n = T.nrows
    mu = Polynomial.one(F)
    for i in range(n):
        if mu.degree >= n:
            break
        mu = mu.lcm(_local_annihilator(T, i))
    return mu


def poly_at_matrix(poly, T):
    """poly evaluated at a square matrix, by Horner."""
    if not T.is_square():
        raise NotSquare("polynomial evaluation at a non-square matrix")
    F = check_same_field(poly.field, T.field)
    acc = Matrix.zeros(F, T.nrows)
    for c in reversed(poly.coeffs):
        acc = acc * T
        if c != F.zero:
            acc = acc + Matrix.identity(F, T.nrows).scale(c)
    return acc


class DiagFiniteResult:
    __slots__ = ("ok", "p", "d", "mu", "eigenvalues")

    def __init__(self, ok, p=None, d=None, mu=None, eigenvalues=None):
        self.ok = ok
        self.p = p
        self.d = d
        self.mu = mu
        self.eigenvalues = eigenvalues

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return f"Diagonalizable(eigenvalues={self.eigenvalues})"
        return f"Not(mu={self.mu})"


def diagonalize_finite(T):
    """Exact diagonalization: invertible P and diagonal D with P^-1 T P = D,
    eigenvalues in canonical scalar order and eigenvectors per eigenvalue in
    RREF order; or the minimal polynomial as the obstruction."""
    if not T.is_square():
        raise NotSquare("diagonalization of a non-square matrix")
    F = T.field
    n = T.nrows
    mu = minimal_polynomial(T)
    if n == 0:
        return DiagFiniteResult(True, Matrix(F, []), Matrix(F, []), mu, [])
    rep = poly_splits_simply(mu)
    if not rep.splits:
        return DiagFiniteResult(False, mu=mu)
    cols = []
    diag_values = []
    for lam in rep.roots:
        shifted = T - Matrix.identity(F, n).scale(lam)
        for vec in shifted.kernel_basis():
            cols.append(vec)
            diag_values.append(lam)
    P = Matrix.from_cols(F, cols)
    D = Matrix.diagonal(F, diag_values)
    assert len(cols) == n and (T * P) == (P * D)
    return DiagFiniteResult(True, P, D, mu, rep.roots)


def commutant(gens):
    """The solution space of {X T_i = T_i X} inside the n^2-dimensional
    matrix space, as a Subspace (row-major vectorization).  Always contains
    the identity."""
    if not gens:
        raise SizeMismatch("commutant of an empty generator list")
    F = gens[0].field
    n = gens[0].nrows
    for T in gens:
        check_same_field(F, T.field)
        if not T.is_square() or T.nrows != n:
            raise SizeMismatch("commutant generators must be square of equal size")
    if n == 0:
        return Subspace.zero_space(F, 0)
    constraints = []
    for T in gens:
        for i in range(n):
            for j in range(n):
                row = [F.zero] * (n * n)
                for b in range(n):
                    row[i * n + b] = F.add(row[i * n + b], T.rows[b][j])
                for a in range(n):
                    row[a * n + j] = F.sub(row[a * n + j], T.rows[i][a])
                constraints.append(row)
    M = Matrix(F, constraints)
    return Subspace.from_vectors(F, n * n, M.kernel_basis())


def matrix_from_vec(field, flat, n):
    return Matrix(field, [flat[i * n:(i + 1) * n] for i in range(n)])


def matrix_to_vec(M):
    return [x for row in M.rows for x in row]


class SimDiagResult:
    __slots__ = ("ok", "p", "reason", "witness")

    def __init__(self, ok, p=None, reason=None, witness=None):
        self.ok = ok
        self.p = p
        self.reason = reason
        self.witness = witness

    def __bool__(self):
        return self.ok


def _refine_blocks(Ts):
    """Iterated common-eigenspace refinement.  Returns a list of
    (signature, columns) pairs; requires every T diagonalizable and the
    family commuting (checked by the callers)."""
    F = Ts[0].field
    n = Ts[0].nrows
    blocks = [((), [list(col) for col in Matrix.identity(F, n).rows])]
    for T in Ts:
        new_blocks = []
        for sig, cols in blocks:
            B = Matrix.from_cols(F, cols)
            X = B.solve_matrix(T * B)
            assert X is not None, "refinement block not invariant"
            sub = diagonalize_finite(X)
            assert sub.ok, "restriction of a diagonalizable operator must stay diagonalizable"
            by_val = {}
            for idx in range(len(cols)):
                lam = sub.d.rows[idx][idx]
                coord = sub.p.col(idx)
                vec = B.matvec(coord)
                by_val.setdefault(lam, []).append(vec)
            for lam in sorted(by_val, key=F.sort_key):
                new_blocks.append((sig + (lam,), by_val[lam]))
        blocks = new_blocks
    return blocks


def simultaneous_diagonalize_finite(Ts):
    """Joint diagonalization of a commuting family, or a witness: either a
    non-commuting pair of indices or a non-diagonalizable member with its
    minimal polynomial."""
    if not Ts:
        raise SizeMismatch("empty family")
    F = Ts[0].field
    n = Ts[0].nrows
    for T in Ts:
        check_same_field(F, T.field)
        if not T.is_square() or T.nrows != n:
            raise SizeMismatch("family members must be square of equal size")
    for i in range(len(Ts)):
        for j in range(i + 1, len(Ts)):
            if Ts[i] * Ts[j] != Ts[j] * Ts[i]:
                return SimDiagResult(False, reason="noncommuting", witness=(i, j))
    for i, T in enumerate(Ts):
        mu = minimal_polynomial(T)
        if not poly_splits_simply(mu).splits:
            return SimDiagResult(False, reason="notdiagonalizable", witness=(i, mu))
    blocks = _refine_blocks(Ts)
    cols = [c for _, block in blocks for c in block]
    P = Matrix.from_cols(F, cols)
    Pinv = P.inverse()
    for T in Ts:
        assert (Pinv * T * P).is_diagonal()
    return SimDiagResult(True, p=P)


def joint_eigenprojections(Ts):
    """The refined family of joint eigenprojections of a commuting
    diagonalizable family: one projection per joint eigenvalue signature."""
    result = simultaneous_diagonalize_finite(Ts)
    if not result.ok:
        raise SizeMismatch(f"family not simultaneously diagonalizable: {result.reason}")
    F = Ts[0].field
    n = Ts[0].nrows
    blocks = _refine_blocks(Ts)
    P = Matrix.from_cols(F, [c for _, block in blocks for c in block])
    Pinv = P.inverse()
    out = []
    offset = 0
    for sig, block in blocks:
        ind = Matrix.zeros(F, n)
        ind_rows = [list(r) for r in ind.rows]
        for t in range(offset, offset + len(block)):
            ind_rows[t][t] = F.one
        proj = P * Matrix(F, ind_rows) * Pinv
        out.append((sig, proj))
        offset += len(block)
    return out


def restriction_vanishes(T, W):
    """True iff T w = 0 for every basis row of the subspace W."""
    if T.ncols != W.ambient:
        raise SizeMismatch("operator and subspace ambient dimensions differ")
    zero = T.field.zero
    return all(all(x == zero for x in T.matvec(list(row))) for row in W.rows)
