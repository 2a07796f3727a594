"""Endomorphisms of the space with basis v_0, v_1, ... in a finitely
described class: finitely many diagonals, each an eventually periodic
sequence.

An operator is stored as a map from diagonal offset d to an EPSeq c_d with
entry(j+d, j) = c_d(j); finite "correction" entries supplied at construction
are folded into the preperiods of their diagonals, so the canonical form is
pure bands and equality of operators is a dictionary comparison.  The class
is closed under addition and multiplication, contains the shift operators,
all diagonal operators, and every finite-rank matrix placed in the window,
which covers everything this package needs to build.

Besides the ring structure, this module decides diagonalizability questions
for the class: the total T^p = T test over a prime field, torsion testing of
vectors with an explicit non-torsion growth certificate, and membership in
the closure of the set of diagonalizable operators.
"""

from .errors import (
    DuplicateLambda,
    FieldTooSmall,
    NegativeIndexLeak,
    NotEventuallyDiagonal,
    WrongField,
)
from .fields import EPSeq, Polynomial, check_same_field, poly_splits_simply
from .linalg import Matrix, diagonalize_finite, rref_rows


class FiniteVector:
    """Finitely supported vector: a map basis index -> nonzero scalar."""

    __slots__ = ("field", "entries")

    def __init__(self, field, entries):
        clean = {}
        for i, x in dict(entries).items():
            if i < 0:
                raise NegativeIndexLeak(f"vector entry at negative index {i}")
            v = field.scalar(x)
            if v != field.zero:
                clean[int(i)] = v
        self.field = field
        self.entries = clean

    @classmethod
    def basis(cls, field, i):
        return cls(field, {i: 1})

    @classmethod
    def zero(cls, field):
        return cls(field, {})

    @classmethod
    def from_list(cls, field, values):
        return cls(field, {i: v for i, v in enumerate(values)})

    def is_zero(self):
        return not self.entries

    def support(self):
        return sorted(self.entries)

    def max_index(self):
        return max(self.entries) if self.entries else -1

    def at(self, i):
        return self.entries.get(i, self.field.zero)

    def to_list(self, n):
        return [self.at(i) for i in range(n)]

    def __add__(self, other):
        F = check_same_field(self.field, other.field)
        out = dict(self.entries)
        for i, x in other.entries.items():
            out[i] = F.add(out.get(i, F.zero), x)
        return FiniteVector(F, out)

    def __sub__(self, other):
        return self + other.scale(self.field.neg(self.field.one))

    def scale(self, c):
        F = self.field
        c = F.scalar(c)
        return FiniteVector(F, {i: F.mul(c, x) for i, x in self.entries.items()})

    def __eq__(self, other):
        return (
            isinstance(other, FiniteVector)
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.entries.items()))))

    def __repr__(self):
        fmt = self.field.format_scalar
        body = " ".join(f"{i}:{fmt(x)}" for i, x in sorted(self.entries.items()))
        return f"vec {body}" if body else "vec 0"


class Operator:
    __slots__ = ("field", "bands")

    def __init__(self, field, bands=None, corrections=None):
        merged = {}
        for d, seq in (bands or {}).items():
            check_same_field(field, seq.field)
            if not seq.is_zero():
                merged[int(d)] = seq
        if corrections:
            by_offset = {}
            for (i, j), x in corrections.items():
                if i < 0 or j < 0:
                    raise NegativeIndexLeak(f"correction at ({i}, {j})")
                v = field.scalar(x)
                if v != field.zero:
                    by_offset.setdefault(i - j, {})[j] = v
            for d, cols in by_offset.items():
                width = max(cols) + 1
                base = merged.get(d, EPSeq.zero(field))
                pre = [base.at(k) for k in range(max(width, len(base.pre)))]
                for j, v in cols.items():
                    pre[j] = field.add(pre[j], v)
                per_start = len(pre)
                per = [base.at(per_start + k) for k in range(len(base.per))]
                seq = EPSeq(field, pre, per)
                if seq.is_zero():
                    merged.pop(d, None)
                else:
                    merged[d] = seq
        for d, seq in merged.items():
            if d < 0:
                for j in range(-d):
                    if seq.at(j) != field.zero:
                        raise NegativeIndexLeak(
                            f"band {d} writes row {j + d} from column {j}"
                        )
        self.field = field
        self.bands = dict(sorted(merged.items()))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def identity(cls, field):
        return cls(field, {0: EPSeq.one(field)})

    @classmethod
    def shift(cls, field, k=1):
        """v_i -> v_{i+k}; for k < 0 the truncated left shift killing v_i
        with i < |k|."""
        if k >= 0:
            return cls(field, {k: EPSeq.one(field)})
        return cls(field, {k: EPSeq(field, [0] * (-k), [1])})

    @classmethod
    def diagonal(cls, field, seq):
        return cls(field, {0: seq})

    @classmethod
    def matrix_unit(cls, field, i, j, value=1):
        return cls(field, corrections={(i, j): value})

    @classmethod
    def from_matrix(cls, field, M):
        """Window-only embedding of a finite matrix, zero beyond it."""
        corr = {}
        for i in range(M.nrows):
            for j in range(M.ncols):
                if M.rows[i][j] != field.zero:
                    corr[(i, j)] = M.rows[i][j]
        return cls(field, corrections=corr)

    # -- structure -----------------------------------------------------------

    def entry(self, i, j):
        seq = self.bands.get(i - j)
        return seq.at(j) if seq is not None else self.field.zero

    def is_zero(self):
        return not self.bands

    def max_offset(self):
        return max(self.bands) if self.bands else 0

    def min_offset(self):
        return min(self.bands) if self.bands else 0

    def preperiod_bound(self):
        return max((len(s.pre) for s in self.bands.values()), default=0)

    def is_eventually_diagonal(self):
        return all(seq.eventually_zero() for d, seq in self.bands.items() if d != 0)

    def off_diagonal_entries(self):
        """All nonzero entries off the main diagonal; finite only when the
        operator is eventually diagonal."""
        if not self.is_eventually_diagonal():
            raise NotEventuallyDiagonal("off-diagonal part is infinite")
        out = []
        for d, seq in self.bands.items():
            if d == 0:
                continue
            for j in seq.support_in_pre():
                out.append((j + d, j, seq.at(j)))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Operator)
            and self.field == other.field
            and self.bands == other.bands
        )

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.bands.items()))))

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        F = check_same_field(self.field, other.field)
        bands = dict(self.bands)
        for d, seq in other.bands.items():
            bands[d] = bands[d] + seq if d in bands else seq
        return Operator(F, bands)

    def __sub__(self, other):
        return self + other.scale(self.field.neg(self.field.one))

    def __neg__(self):
        return self.scale(self.field.neg(self.field.one))

    def scale(self, c):
        F = self.field
        c = F.scalar(c)
        if c == F.zero:
            return Operator.zero(F)
        return Operator(F, {d: seq * c for d, seq in self.bands.items()})

    def __mul__(self, other):
        if not isinstance(other, Operator):
            return self.scale(other)
        F = check_same_field(self.field, other.field)
        bands = {}
        for d1, a in self.bands.items():
            for d2, b in other.bands.items():
                # entry (j+d1+d2, j) picks up a(j+d2) * b(j)
                term = a.shift(d2) * b
                if term.is_zero():
                    continue
                d = d1 + d2
                bands[d] = bands[d] + term if d in bands else term
        out = Operator(F, bands)
        assert all(
            seq.at(j) == F.zero
            for d, seq in out.bands.items()
            if d < 0
            for j in range(-d)
        ), "product leaked below row 0"
        return out

    __rmul__ = scale

    def __pow__(self, e):
        result = Operator.identity(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def commutes_with(self, other):
        return (self * other) == (other * self)

    def is_idempotent(self):
        return (self * self) == self

    # -- actions ---------------------------------------------------------------

    def apply(self, v):
        F = check_same_field(self.field, v.field)
        acc = {}
        for j, x in v.entries.items():
            for d, seq in self.bands.items():
                c = seq.at(j)
                if c == F.zero:
                    continue
                i = j + d
                acc[i] = F.add(acc.get(i, F.zero), F.mul(c, x))
        return FiniteVector(F, acc)

    def truncate(self, n):
        """The n x n upper-left window.  Truncation is a window, not a ring
        homomorphism: products generally need padding."""
        F = self.field
        return Matrix(F, [[self.entry(i, j) for j in range(n)] for i in range(n)])

    def __repr__(self):
        parts = [f"field {self.field}"]
        for d, seq in self.bands.items():
            parts.append(f"band {d}: {seq}")
        return "\n".join(parts)


def apply(T, v):
    return T.apply(v)


def op_ring(a, b, op):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def commutes(a, b):
    return a.commutes_with(b)


def is_idempotent(a):
    return a.is_idempotent()


def truncate(T, n):
    return T.truncate(n)


def finite_field_diag_check(T):
    """Exact decision over F_p: diagonalizable iff T^p = T; total for the
    whole representation class."""
    if T.field.char == 0:
        raise WrongField("finite-field test on a rational operator")
    p = T.field.char
    return (T ** p) == T


# ---------------------------------------------------------------------------
# Torsion
# ---------------------------------------------------------------------------

class TorsionReport:
    """Outcome of a Krylov torsion probe.

    outcome is one of "torsion" (with the verified monic annihilator),
    "non_torsion" (with a growth certificate), or "unknown" (depth ran out).
    """

    __slots__ = ("outcome", "annihilator", "depth_used", "certificate")

    def __init__(self, outcome, annihilator=None, depth_used=None, certificate=None):
        self.outcome = outcome
        self.annihilator = annihilator
        self.depth_used = depth_used
        self.certificate = certificate

    def __repr__(self):
        if self.outcome == "torsion":
            return f"Torsion({self.annihilator}, depth={self.depth_used})"
        if self.outcome == "non_torsion":
            return f"NonTorsionCertified({self.certificate})"
        return f"Unknown(depth={self.depth_used})"


def growth_certificate_data(T):
    """If the top band offset is positive and its sequence is eventually
    nowhere zero, any vector whose support reaches past every preperiod has
    strictly growing iterate support, hence is not torsion.  Returns
    (dmax, threshold) or None."""
    if not T.bands:
        return None
    dmax = T.max_offset()
    if dmax <= 0:
        return None
    top = T.bands[dmax]
    if not top.period_nowhere_zero():
        return None
    return dmax, len(top.pre)


def annihilator_applies(T, v, poly):
    """Exact check that poly(T) v = 0 via the apply chain."""
    F = T.field
    acc = FiniteVector.zero(F)
    power = v
    for c in poly.coeffs:
        if c != F.zero:
            acc = acc + power.scale(c)
        power = T.apply(power)
    return acc.is_zero()


def krylov_torsion(T, v, depth=64):
    """Semi-decision of whether v is annihilated by a nonzero polynomial in
    T.  Builds v, Tv, T^2 v, ... until a linear dependence appears (torsion,
    annihilator verified by applying it) or the growth certificate fires
    (certified non-torsion) or depth runs out."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    F = check_same_field(T.field, v.field)
    cert = growth_certificate_data(T)
    echelon = {}  # pivot (max support index) -> (vector, rep over iterates)
    seen_max = -1
    current = v
    for k in range(depth + 1):
        w = dict(current.entries)
        rep = [F.zero] * (k + 1)
        rep[k] = F.one
        while w:
            piv = max(w)
            if piv not in echelon:
                break
            evec, erep = echelon[piv]
            f = F.div(w[piv], evec.entries[piv])
            for j, c in evec.entries.items():
                val = F.sub(w.get(j, F.zero), F.mul(f, c))
                if val == F.zero:
                    w.pop(j, None)
                else:
                    w[j] = val
            for j, c in enumerate(erep):
                if c != F.zero:
                    rep[j] = F.sub(rep[j], F.mul(f, c))
        if not w:
            poly = Polynomial(F, rep)
            assert annihilator_applies(T, v, poly)
            return TorsionReport("torsion", annihilator=poly.monic(), depth_used=k)
        echelon[max(w)] = (FiniteVector(F, w), rep)
        m = current.max_index()
        if cert is not None and m >= cert[1] and m > seen_max:
            return TorsionReport(
                "non_torsion",
                depth_used=k,
                certificate={
                    "top_offset": cert[0],
                    "preperiod_bound": cert[1],
                    "leading_index": m,
                    "step": k,
                },
            )
        seen_max = max(seen_max, m)
        current = T.apply(current)
    return TorsionReport("unknown", depth_used=depth)


class WindowTorsion:
    __slots__ = ("outcome", "basis", "minpoly", "reports")

    def __init__(self, outcome, basis=None, minpoly=None, reports=None):
        self.outcome = outcome
        self.basis = basis
        self.minpoly = minpoly
        self.reports = reports

    def __repr__(self):
        if self.outcome == "basis":
            return f"Basis(dim={len(self.basis)}, minpoly={self.minpoly})"
        return "Unknown"


def _echelon_insert(rows, vec, field):
    """Sparse echelon on finite vectors keyed by max support index; returns
    True when vec enlarges the span."""
    w = dict(vec.entries)
    while w:
        piv = max(w)
        if piv not in rows:
            rows[piv] = FiniteVector(field, w)
            return True
        evec = rows[piv]
        f = field.div(w[piv], evec.entries[piv])
        for j, c in evec.entries.items():
            val = field.sub(w.get(j, field.zero), field.mul(f, c))
            if val == field.zero:
                w.pop(j, None)
            else:
                w[j] = val
    return False


def torsion_part_on_window(T, window, depth=64):
    """Torsion vectors reachable from the window generators: runs the
    Krylov probe per generator, keeps the torsion ones with their full
    cyclic chains (closed under T by construction), and reports the minimal
    polynomial of T on that span (the lcm of the generator annihilators).

    Unknown if any generator is unresolved at this depth.  Torsion hidden in
    cross-generator combinations of certified-free generators is not
    enumerated; the closure test reports its answers as semi-decided
    whenever that gap could matter.
    """
    F = T.field
    reports = []
    torsion_gens = []
    for w in window:
        rep = krylov_torsion(T, w, depth)
        reports.append(rep)
        if rep.outcome == "unknown":
            return WindowTorsion("unknown", reports=reports)
        if rep.outcome == "torsion":
            torsion_gens.append((w, rep.annihilator))
    rows = {}
    minpoly = Polynomial.one(F)
    for w, ann in torsion_gens:
        minpoly = minpoly.lcm(ann)
        chain = w
        for _ in range(ann.degree):
            _echelon_insert(rows, chain, F)
            chain = T.apply(chain)
    basis = [rows[piv] for piv in sorted(rows)]
    return WindowTorsion("basis", basis=basis, minpoly=minpoly, reports=reports)


# ---------------------------------------------------------------------------
# Closure of the diagonalizable operators
# ---------------------------------------------------------------------------

class ClosureReport:
    __slots__ = ("outcome", "semi_decided", "witness", "witness_annihilator", "detail")

    def __init__(self, outcome, semi_decided, witness=None,
                 witness_annihilator=None, detail=""):
        self.outcome = outcome
        self.semi_decided = semi_decided
        self.witness = witness
        self.witness_annihilator = witness_annihilator
        self.detail = detail

    def __repr__(self):
        tail = " (semi-decided)" if self.semi_decided else ""
        return f"{self.outcome}{tail}: {self.detail}"


def _exact_torsion_space(T, theta):
    """When the growth certificate holds globally, every torsion vector
    lives in span(v_0 .. v_{theta-1}); the torsion part is then exactly the
    largest T-invariant subspace of that span, found by stabilizing
    W <- {u in W : Tu in W}."""
    F = T.field
    if theta == 0:
        return []
    reach = theta + max(0, T.max_offset())
    basis = [list(r) for r in Matrix.identity(F, theta).rows]
    while basis:
        padded = [row + [F.zero] * (reach - theta) for row in basis]
        span_rows, span_piv = rref_rows(padded, F)
        span_rows = span_rows[: len(span_piv)]
        residues = []
        for row in basis:
            v = FiniteVector(F, {i: x for i, x in enumerate(row)})
            img = T.apply(v).to_list(reach)
            for erow, p in zip(span_rows, span_piv):
                c = img[p]
                if c != F.zero:
                    for j in range(reach):
                        if erow[j] != F.zero:
                            img[j] = F.sub(img[j], F.mul(c, erow[j]))
            residues.append(img)
        combos = Matrix.from_cols(F, residues).kernel_basis()
        if len(combos) == len(basis):
            return basis
        new_basis = []
        for combo in combos:
            vec = [F.zero] * theta
            for i, c in enumerate(combo):
                if c != F.zero:
                    for j in range(theta):
                        vec[j] = F.add(vec[j], F.mul(c, basis[i][j]))
            new_basis.append(vec)
        rows, piv = rref_rows(new_basis, F) if new_basis else ([], [])
        basis = [list(r) for r in rows[: len(piv)]]
    return []


def closure_membership(T, window, depth=64):
    """Is T in the closure of the diagonalizable operators?

    Over a prime field the set is closed and the T^p = T test is a total
    decision.  Over Q, T belongs to the closure iff it is diagonalizable on
    its torsion part; when the growth certificate pins the torsion part into
    a finite window this is decided exactly (semi_decided False), otherwise
    the window generators are probed and a clean InClosure answer is only
    "no obstruction found" (semi_decided True).  A NotInClosure answer is
    always exact: it carries a verified torsion vector whose annihilator
    fails to split simply.
    """
    F = T.field
    if F.char > 0:
        ok = finite_field_diag_check(T)
        return ClosureReport(
            "in_closure" if ok else "not_in_closure",
            semi_decided=False,
            detail="T^p = T holds" if ok else "T^p differs from T",
        )
    if not window:
        raise ValueError("a nonempty window is required over Q")
    cert = growth_certificate_data(T)
    if cert is not None:
        theta = cert[1]
        basis = _exact_torsion_space(T, theta)
        if not basis:
            return ClosureReport(
                "in_closure", semi_decided=False,
                detail="torsion part is zero (growth certificate)",
            )
        imgs = []
        for row in basis:
            v = FiniteVector(F, {i: x for i, x in enumerate(row)})
            img = T.apply(v)
            assert img.max_index() < theta, "torsion space not invariant"
            imgs.append(img.to_list(theta))
        Bt = Matrix(F, basis).transpose()
        X = Bt.solve_matrix(Matrix.from_cols(F, imgs))
        assert X is not None
        res = diagonalize_finite(X)
        if res.ok:
            return ClosureReport(
                "in_closure", semi_decided=False,
                detail=f"diagonalizable on the {len(basis)}-dimensional torsion part",
            )
        witness, ann = _nonsplit_witness(T, basis, depth)
        return ClosureReport(
            "not_in_closure", semi_decided=False,
            witness=witness, witness_annihilator=ann,
            detail="torsion part carries a non-semisimple block",
        )
    tw = torsion_part_on_window(T, window, depth)
    if tw.outcome == "unknown":
        return ClosureReport("unknown", semi_decided=True,
                             detail="torsion status unresolved at this depth")
    for w, rep in zip(window, tw.reports):
        if rep.outcome == "torsion" and not poly_splits_simply(rep.annihilator).splits:
            return ClosureReport(
                "not_in_closure", semi_decided=False,
                witness=w, witness_annihilator=rep.annihilator,
                detail="window vector with non-split-simple annihilator",
            )
    return ClosureReport(
        "in_closure", semi_decided=True,
        detail="no obstruction found on the supplied window",
    )


def _nonsplit_witness(T, basis_rows, depth):
    """A vector in the torsion span whose annihilator fails the split-simply
    test; exists whenever T is not diagonalizable there."""
    F = T.field
    for row in basis_rows:
        v = FiniteVector(F, {i: x for i, x in enumerate(row)})
        rep = krylov_torsion(T, v, depth)
        if rep.outcome == "torsion" and not poly_splits_simply(rep.annihilator).splits:
            return v, rep.annihilator
    raise AssertionError("no witness in a non-diagonalizable torsion part")


# ---------------------------------------------------------------------------
# Eventually diagonal operators
# ---------------------------------------------------------------------------

class EvDiagResult:
    __slots__ = ("ok", "core_p", "core_d", "tail", "window", "mu_core")

    def __init__(self, ok, core_p=None, core_d=None, tail=None, window=0, mu_core=None):
        self.ok = ok
        self.core_p = core_p
        self.core_d = core_d
        self.tail = tail
        self.window = window
        self.mu_core = mu_core

    def __bool__(self):
        return self.ok


class SpectrumReport:
    """Eigenvalues of an eventually diagonal operator: window eigenvalues
    with verified eigenvectors plus the diagonal tail values."""

    __slots__ = ("eigen", "tail_values")

    def __init__(self, eigen, tail_values):
        self.eigen = eigen
        self.tail_values = tail_values


def eventually_diagonal_diagonalize(T):
    """Split an eventually diagonal operator into an invariant finite window
    plus a diagonal tail, and diagonalize the window block.  The operator is
    diagonalizable iff the window block is."""
    F = T.field
    if not T.is_eventually_diagonal():
        raise NotEventuallyDiagonal("operator has a non-vanishing off-diagonal band")
    m = 0
    for (i, j, _val) in T.off_diagonal_entries():
        m = max(m, i + 1, j + 1)
    diag = T.bands.get(0, EPSeq.zero(F))
    m = max(m, len(diag.pre))
    core = T.truncate(m)
    tail = diag.shift(m)
    res = diagonalize_finite(core)
    if res.ok:
        return EvDiagResult(True, core_p=res.p, core_d=res.d, tail=tail, window=m)
    return EvDiagResult(False, tail=tail, window=m, mu_core=res.mu)


def spectrum(T):
    """SpectrumReport for an eventually diagonal operator; every reported
    eigenvalue has a verified eigenvector."""
    F = T.field
    res = eventually_diagonal_diagonalize(T)
    if not res.ok:
        raise NotEventuallyDiagonal("window block is not diagonalizable")
    eigen = []
    m = res.window
    for idx in range(m):
        lam = res.core_d.rows[idx][idx]
        col = res.core_p.col(idx)
        v = FiniteVector(F, {i: x for i, x in enumerate(col)})
        assert T.apply(v) == v.scale(lam)
        eigen.append((lam, v))
    tail_vals = res.tail.value_set()
    for lam in sorted(tail_vals, key=F.sort_key):
        for j in range(m, m + len(res.tail.pre) + len(res.tail.per)):
            if T.entry(j, j) == lam:
                v = FiniteVector.basis(F, j)
                assert T.apply(v) == v.scale(lam)
                eigen.append((lam, v))
                break
    return SpectrumReport(eigen, sorted(tail_vals, key=F.sort_key))


def prop_operator_check(T, window, lambdas):
    """True iff the product of the (T - lambda_i) kills every window vector,
    computed by the apply chain without materializing the product.  The
    empty product is the identity."""
    F = T.field
    lam = [F.scalar(x) for x in lambdas]
    if len(set(lam)) != len(lam):
        raise DuplicateLambda("eigenvalue list has repeats")
    for w in window:
        u = w
        for x in lam:
            u = T.apply(u) - u.scale(x)
        if not u.is_zero():
            return False
    return True


def diagonalizable_completion(n, field):
    """The (n+1) x (n+1) companion matrix of prod_{i=0..n} (x - lambda_i)
    for the canonical distinct scalars 0, 1, ..., n; diagonalizable by
    construction.  Over F_p this needs n < p."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if field.char > 0 and n >= field.char:
        raise FieldTooSmall(f"need {n + 1} distinct scalars in F_{field.char}")
    roots = [field.scalar(i) for i in range(n + 1)]
    poly = Polynomial.from_roots(field, roots)
    return Matrix.companion(poly)
