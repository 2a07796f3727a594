"""Orthogonal families of idempotent operators and their infinite sums.

A family is summable exactly when every basis vector is moved by only
finitely many members; the sum is then the projection onto the direct sum
of the ranges along the intersection of the kernels, and it is assembled
here columnwise in the banded operator representation.

Three family shapes are supported.  A partition family colors the basis
indices with an eventually periodic coloring (plus finitely many
exceptions) and takes the diagonal 0/1 projection per color; these are
always summable with sum 1.  An explicit family is a finite list of
idempotent operators.  A pattern family is generated by matrix-unit
templates with affine index functions, one member per index i >= i0; its
orthogonality and summability are decided symbolically from the affine
forms (collisions at isolated indices are checked exactly).  Pattern
members whose templates collide are rejected outright; cancellation of
colliding units over small characteristic is not modeled.
"""

from math import gcd

from .errors import (
    InvalidFamily,
    NonCommuting,
    NotIdempotent,
    NotSummable,
    UnrepresentableSum,
)
from .fields import EPSeq, check_same_field, normalize_ep, poly_roots_in_field
from .linalg import Matrix, minimal_polynomial, rref_rows
from .operators import FiniteVector, Operator

INFINITE = "infinite"


class PartitionFamily:
    """One diagonal projection per color of an eventually periodic coloring
    of the basis indices (colors are positive ints)."""

    kind = "partition"

    def __init__(self, field, pre, per, exceptions=None):
        self.field = field
        pre = [int(c) for c in pre]
        per = [int(c) for c in per]
        if not per:
            raise InvalidFamily("coloring needs a nonempty period")
        exceptions = {int(i): int(c) for i, c in (exceptions or {}).items()}
        if any(c < 1 for c in pre + per + list(exceptions.values())):
            raise InvalidFamily("colors must be >= 1")
        # fold exceptions below the preperiod into it, drop redundant ones
        top = max(exceptions, default=-1) + 1
        base_len = max(len(pre), top)
        expanded = [self._base_at(pre, per, j) for j in range(base_len)]
        for i, c in exceptions.items():
            expanded[i] = c
        self.pre, self.per = normalize_ep(expanded, per)

    @staticmethod
    def _base_at(pre, per, j):
        if j < len(pre):
            return pre[j]
        return per[(j - len(pre)) % len(per)]

    def color_at(self, j):
        if j < len(self.pre):
            return self.pre[j]
        return self.per[(j - len(self.pre)) % len(self.per)]

    def colors(self):
        occurring = set(self.per)
        occurring.update(self.pre)
        return sorted(occurring)

    def member(self, color):
        F = self.field
        pre = [F.one if c == color else F.zero for c in self.pre]
        per = [F.one if c == color else F.zero for c in self.per]
        return Operator.diagonal(F, EPSeq(F, pre, per))

    def members(self):
        return [self.member(c) for c in self.colors()]

    def labels(self):
        return self.colors()

    def support_indices(self, j):
        return {self.colors().index(self.color_at(j))}

    def is_finite(self):
        return True  # finitely many members (each of infinite rank)

    def __repr__(self):
        return f"partition pre={list(self.pre)} per={list(self.per)}"


class ExplicitFamily:
    kind = "explicit"

    def __init__(self, field, members):
        self.field = field
        self.ops = list(members)
        for op in self.ops:
            check_same_field(field, op.field)

    def members(self):
        return list(self.ops)

    def labels(self):
        return list(range(len(self.ops)))

    def support_indices(self, j):
        F = self.field
        out = set()
        for idx, op in enumerate(self.ops):
            if not op.apply(FiniteVector.basis(F, j)).is_zero():
                out.add(idx)
        return out

    def is_finite(self):
        return True

    def __repr__(self):
        return f"explicit({len(self.ops)} members)"


class PatternFamily:
    """E_i = sum of matrix units at affine positions (ar*i+br, ac*i+bc),
    one member for every i >= i0."""

    kind = "pattern"

    def __init__(self, field, i0, terms):
        self.field = field
        self.i0 = int(i0)
        self.terms = tuple((int(a), int(b), int(c), int(d)) for a, b, c, d in terms)
        if not self.terms:
            raise InvalidFamily("pattern family needs at least one term")
        for ar, br, ac, bc in self.terms:
            if ar < 0 or ac < 0:
                raise InvalidFamily("negative index slope")
            if ar * self.i0 + br < 0 or ac * self.i0 + bc < 0:
                raise InvalidFamily("negative position at the base index")

    def member(self, i):
        if i < self.i0:
            raise InvalidFamily(f"member index {i} below base {self.i0}")
        corr = {}
        F = self.field
        for ar, br, ac, bc in self.terms:
            pos = (ar * i + br, ac * i + bc)
            corr[pos] = F.add(corr.get(pos, F.zero), F.one)
        return Operator(F, corrections=corr)

    def members(self, limit=8):
        return [self.member(i) for i in range(self.i0, self.i0 + limit)]

    def labels(self):
        return INFINITE

    def support_indices(self, j):
        out = set()
        for ar, br, ac, bc in self.terms:
            if ac == 0:
                if bc == j:
                    return INFINITE
                continue
            num = j - bc
            if num % ac == 0 and num // ac >= self.i0:
                out.add(num // ac)
        return out

    def is_finite(self):
        return False

    def __repr__(self):
        body = ", ".join(f"(r={a}*i+{b}, c={c}*i+{d})" for a, b, c, d in self.terms)
        return f"pattern i0={self.i0} terms[{body}]"


class ValidationReport:
    __slots__ = ("ok", "witness", "detail")

    def __init__(self, ok, witness=None, detail=""):
        self.ok = ok
        self.witness = witness
        self.detail = detail

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "Valid" if self.ok else f"Invalid({self.detail})"


def _cross_collision(ac, bc, ar, br, i0):
    """Does ac*i + bc == ar*j + br have a solution with i, j >= i0 and
    i != j?  Returns a witness pair or None."""
    if ac == 0 and ar == 0:
        return (i0, i0 + 1) if bc == br else None
    if ac == 0:
        num = bc - br
        if num % ar:
            return None
        j = num // ar
        if j < i0:
            return None
        i = i0 if i0 != j else i0 + 1
        return (i, j)
    if ar == 0:
        num = br - bc
        if num % ac:
            return None
        i = num // ac
        if i < i0:
            return None
        j = i0 if i0 != i else i0 + 1
        return (i, j)
    # both slopes >= 1 here (family terms never have negative slopes)
    g = gcd(ac, ar)
    rhs = br - bc
    if rhs % g:
        return None
    x, y = _bezout(ac, -ar)
    d = ac * x - ar * y  # = +-g
    scale = rhs // d
    ip, jp = x * scale, y * scale  # ac*ip - ar*jp = rhs
    si, sj = ar // g, ac // g  # homogeneous direction, both >= 1
    t0 = max(_ceil_div(i0 - ip, si), _ceil_div(i0 - jp, sj))
    for t in range(t0, t0 + 3):
        i, j = ip + si * t, jp + sj * t
        if i >= i0 and j >= i0 and i != j:
            return (i, j)
    return None


def _ceil_div(a, b):
    return -(-a // b)


def _bezout(a, b):
    """x, y with a*x + b*y equal to a euclidean gcd of (a, b) up to sign."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_x, old_y


def _affine_eq(ac, bc, ar, br):
    return ac == ar and bc == br


def _pattern_self_check(fam, sample_bound):
    """Symbolic idempotency of every member plus exact checks at the
    sampled and exceptional indices."""
    terms = fam.terms
    exceptional = set()
    generic_products = []
    for (ar1, br1, ac1, bc1) in terms:
        for (ar2, br2, ac2, bc2) in terms:
            if _affine_eq(ac1, bc1, ar2, br2):
                generic_products.append((ar1, br1, ac2, bc2))
            elif ac1 != ar2:
                num = br2 - bc1
                den = ac1 - ar2
                if num % den == 0 and num // den >= fam.i0:
                    exceptional.add(num // den)
            # ac1 == ar2 with bc1 != br2: never equal
    if sorted(generic_products) != sorted(terms):
        i = fam.i0
        while i in exceptional:
            i += 1
        E = fam.member(i)
        if not E.is_idempotent():
            return ValidationReport(False, witness=(i, i, E * E - E),
                                    detail=f"member {i} is not idempotent")
    for i in sorted(exceptional | set(range(fam.i0, fam.i0 + sample_bound))):
        E = fam.member(i)
        if not E.is_idempotent():
            return ValidationReport(False, witness=(i, i, E * E - E),
                                    detail=f"member {i} is not idempotent")
    return ValidationReport(True)


def _pattern_cross_check(fam, sample_bound):
    exact_pairs = set()
    for (_, _, ac1, bc1) in fam.terms:
        for (ar2, br2, _, _) in fam.terms:
            hit = _cross_collision(ac1, bc1, ar2, br2, fam.i0)
            if hit is not None:
                exact_pairs.add(hit)
    for i in range(fam.i0, fam.i0 + sample_bound):
        for j in range(fam.i0, fam.i0 + sample_bound):
            if i != j:
                exact_pairs.add((i, j))
    for (i, j) in sorted(exact_pairs):
        prod = fam.member(i) * fam.member(j)
        if not prod.is_zero():
            return ValidationReport(False, witness=(i, j, prod),
                                    detail=f"members {i} and {j} are not orthogonal")
    return ValidationReport(True)


def validate(family, sample_bound=24):
    """Orthogonality and idempotency of the family: symbolic where the shape
    allows it, exact on everything at indices below sample_bound."""
    if sample_bound < 1:
        raise ValueError("sample_bound must be >= 1")
    if family.kind == "partition":
        return ValidationReport(True)  # disjoint 0/1 diagonals by construction
    if family.kind == "explicit":
        ops = family.ops
        for a, op in enumerate(ops):
            if not op.is_idempotent():
                return ValidationReport(False, witness=(a, a, op * op - op),
                                        detail=f"member {a} is not idempotent")
        for a in range(len(ops)):
            for b in range(len(ops)):
                if a != b:
                    prod = ops[a] * ops[b]
                    if not prod.is_zero():
                        return ValidationReport(
                            False, witness=(a, b, prod),
                            detail=f"members {a} and {b} are not orthogonal")
        return ValidationReport(True)
    rep = _pattern_self_check(family, sample_bound)
    if not rep.ok:
        return rep
    return _pattern_cross_check(family, sample_bound)


class SummabilityReport:
    __slots__ = ("summable", "sum", "witness_index")

    def __init__(self, summable, sum_op=None, witness_index=None):
        self.summable = summable
        self.sum = sum_op
        self.witness_index = witness_index

    def __bool__(self):
        return self.summable

    def __repr__(self):
        if self.summable:
            return "Summable"
        return f"NotSummable(witness j={self.witness_index})"


def summability(family):
    """Decide summability through the per-basis-vector support oracle and,
    in the summable case, build the sum in the banded representation.

    For a partition family the supports are singletons and the members sum
    to the identity.  A finite explicit family is always summable.  A
    pattern family fails exactly when some template hits a fixed column for
    every member index; the witness is that column.
    """
    rep = validate(family)
    if not rep.ok:
        raise InvalidFamily(rep.detail)
    F = family.field
    if family.kind == "partition":
        total = Operator.zero(F)
        for op in family.members():
            total = total + op
        assert total == Operator.identity(F)
        return SummabilityReport(True, total)
    if family.kind == "explicit":
        total = Operator.zero(F)
        for op in family.ops:
            total = total + op
        assert total.is_idempotent()
        return SummabilityReport(True, total)
    # pattern family
    for (_, _, ac, bc) in family.terms:
        if ac == 0:
            return SummabilityReport(False, witness_index=bc)
    bands = {}
    for (ar, br, ac, bc) in family.terms:
        if ar != ac:
            raise UnrepresentableSum(
                "summable pattern sum leaves the banded class "
                f"(term slopes {ar} != {ac})")
        start = ac * family.i0 + bc
        d = br - bc
        seq = EPSeq(F, [0] * start, [1] + [0] * (ac - 1))
        bands[d] = bands[d] + seq if d in bands else seq
    total = Operator(F, bands)
    assert total.is_idempotent()
    return SummabilityReport(True, total)


def sums_to_one(family):
    rep = summability(family)
    return bool(rep) and rep.sum == Operator.identity(family.field)


class LubReport:
    __slots__ = ("premise_left", "premise_right", "premise_both",
                 "sum_left", "sum_right", "sum_both", "consistent")

    def __init__(self, pl, pr, pb, sl, sr, sb):
        self.premise_left = pl
        self.premise_right = pr
        self.premise_both = pb
        self.sum_left = sl
        self.sum_right = sr
        self.sum_both = sb
        # upper-bound law: if every member sits below f, so does the sum
        self.consistent = ((not pl or sl) and (not pr or sr) and (not pb or sb))

    def __repr__(self):
        return (f"LubReport(premises l={self.premise_left} r={self.premise_right} "
                f"both={self.premise_both}; sum l={self.sum_left} r={self.sum_right} "
                f"both={self.sum_both}; consistent={self.consistent})")


def lub_check(family, f, probe=24):
    """Check, in each idempotent ordering, whether every member sits below f
    and whether the sum does; the least-upper-bound law (members below f
    implies sum below f) is asserted on the instance.

    e <=_l f means ef = e; e <=_r f means fe = e; <= is both.  Infinite
    pattern families are probed on their first ``probe`` members.
    """
    if not f.is_idempotent():
        raise NotIdempotent("comparison element is not idempotent")
    rep = summability(family)
    if not rep.summable:
        raise NotSummable(f"family is not summable (witness j={rep.witness_index})")
    e = rep.sum
    members = family.members(probe) if family.kind == "pattern" else family.members()
    pl = all((m * f) == m for m in members)
    pr = all((f * m) == m for m in members)
    pb = pl and pr
    sl = (e * f) == e
    sr = (f * e) == e
    sb = sl and sr
    report = LubReport(pl, pr, pb, sl, sr, sb)
    assert report.consistent, "least-upper-bound law failed on this instance"
    return report


def _combined_partition(E, F_fam):
    field = E.field
    L = max(len(E.pre), len(F_fam.pre))
    per_len = _lcm(len(E.per), len(F_fam.per))
    ids = {}
    pre = []
    for j in range(L):
        pair = (E.color_at(j), F_fam.color_at(j))
        pre.append(ids.setdefault(pair, len(ids) + 1))
    per = []
    for j in range(L, L + per_len):
        pair = (E.color_at(j), F_fam.color_at(j))
        per.append(ids.setdefault(pair, len(ids) + 1))
    return PartitionFamily(field, pre, per)


def _lcm(a, b):
    return a * b // gcd(a, b)


def product_family(E, F_fam):
    """The family of pairwise products {E_i F_j} with zero members dropped.

    Requires both families summable and all members commuting pairwise; the
    result's sum is asserted equal to (sum E)(sum F).  Partition families
    combine into the refined partition; anything else finite combines into
    an explicit family.  Products with pattern families would need a
    two-index shape that the representation does not carry.
    """
    field = check_same_field(E.field, F_fam.field)
    if E.kind == "pattern" or F_fam.kind == "pattern":
        raise InvalidFamily("products of pattern families are not representable")
    rep_e = summability(E)
    rep_f = summability(F_fam)
    if not rep_e.summable:
        raise NotSummable(f"left family (witness j={rep_e.witness_index})")
    if not rep_f.summable:
        raise NotSummable(f"right family (witness j={rep_f.witness_index})")
    if E.kind == "partition" and F_fam.kind == "partition":
        out = _combined_partition(E, F_fam)
    else:
        for a, ea in enumerate(E.members()):
            for b, fb in enumerate(F_fam.members()):
                if not ea.commutes_with(fb):
                    raise NonCommuting(f"members {a} and {b} do not commute")
        prods = []
        for ea in E.members():
            for fb in F_fam.members():
                p = ea * fb
                if not p.is_zero():
                    prods.append(p)
        out = ExplicitFamily(field, prods)
    rep_out = summability(out)
    assert rep_out.summable
    assert rep_out.sum == rep_e.sum * rep_f.sum
    return out


class SimDiagFamilies:
    __slots__ = ("ok", "refined", "reason")

    def __init__(self, ok, refined=None, reason=None):
        self.ok = ok
        self.refined = refined
        self.reason = reason

    def __bool__(self):
        return self.ok


def simultaneous_diagonalize_families(E, F_fam):
    """Refine two commuting summable families with sum 1 into their product
    family, asserting the marginal identities sum_j E_i F_j = E_i and
    sum_i E_i F_j = F_j and that the refinement again sums to 1."""
    try:
        if not sums_to_one(E):
            return SimDiagFamilies(False, reason="left family does not sum to 1")
        if not sums_to_one(F_fam):
            return SimDiagFamilies(False, reason="right family does not sum to 1")
        for a, ea in enumerate(E.members()):
            for b, fb in enumerate(F_fam.members()):
                if not ea.commutes_with(fb):
                    return SimDiagFamilies(
                        False, reason=f"members {a} and {b} do not commute")
        refined = product_family(E, F_fam)
    except (InvalidFamily, NotSummable, NonCommuting) as exc:
        return SimDiagFamilies(False, reason=str(exc))
    f_sum = summability(F_fam).sum
    e_sum = summability(E).sum
    for ea in E.members():
        total = Operator.zero(E.field)
        for fb in F_fam.members():
            total = total + ea * fb
        assert total == ea, "row marginal failed"
    for fb in F_fam.members():
        total = Operator.zero(E.field)
        for ea in E.members():
            total = total + ea * fb
        assert total == fb, "column marginal failed"
    assert summability(refined).sum == e_sum * f_sum == Operator.identity(E.field)
    return SimDiagFamilies(True, refined=refined)


class SearchResult:
    __slots__ = ("found", "vector", "eigenvalues", "truncation")

    def __init__(self, found, vector=None, eigenvalues=None, truncation=None):
        self.found = found
        self.vector = vector
        self.eigenvalues = eigenvalues
        self.truncation = truncation

    def __bool__(self):
        return self.found

    def __repr__(self):
        if self.found:
            return f"Found({self.vector})"
        return f"NoneWithin({self.truncation})"


def _eigen_split(field, basis, images_of_basis, width):
    """Split span(basis) into eigenspace candidates of the map sending the
    basis rows to the given images (all vectors of length ``width``).
    Returns (lam, rows) pairs.  The map must preserve the span."""
    k = len(basis)
    Bt = Matrix(field, basis).transpose()
    X = Bt.solve_matrix(Matrix.from_cols(field, images_of_basis))
    assert X is not None
    mu = minimal_polynomial(X)
    out = []
    for lam in poly_roots_in_field(mu):
        shifted = X - Matrix.identity(field, k).scale(lam)
        vecs = []
        for combo in shifted.kernel_basis():
            vec = [field.zero] * width
            for i, c in enumerate(combo):
                if c != field.zero:
                    for j in range(width):
                        vec[j] = field.add(vec[j], field.mul(c, basis[i][j]))
            vecs.append(vec)
        rows, piv = rref_rows(vecs, field) if vecs else ([], [])
        rows = [list(r) for r in rows[: len(piv)]]
        if rows:
            out.append((lam, rows))
    return out


def common_eigenvector_search(ops, truncation):
    """Search for a vector supported below ``truncation`` that is an
    eigenvector of every operator, by iterated refinement: cut to vectors
    whose image stays inside the window, pass to the largest invariant
    subspace, split into exact eigenspaces, and repeat per operator.  Any
    candidate is verified exactly against the untruncated operators, and an
    empty refinement proves there is no such vector in the window.
    """
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    if not ops:
        raise ValueError("empty operator list")
    field = ops[0].field
    for op in ops:
        check_same_field(field, op.field)
    M = truncation
    spaces = [[list(r) for r in Matrix.identity(field, M).rows]]
    for T in ops:
        reach = M + max(0, T.max_offset())
        new_spaces = []
        for basis in spaces:
            basis = _largest_window_invariant(T, basis, M, reach)
            if not basis:
                continue
            images = []
            for row in basis:
                img = T.apply(FiniteVector(field, dict(enumerate(row))))
                assert img.max_index() < M
                images.append(img.to_list(M))
            for _lam, rows in _eigen_split(field, basis, images, M):
                new_spaces.append(rows)
        spaces = new_spaces
        if not spaces:
            return SearchResult(False, truncation=truncation)
    for basis in spaces:
        if basis:
            v = FiniteVector(field, dict(enumerate(basis[0])))
            lams = _verify_common_eigenvector(ops, v)
            if lams is not None:
                return SearchResult(True, vector=v, eigenvalues=lams,
                                    truncation=truncation)
    return SearchResult(False, truncation=truncation)


def _largest_window_invariant(T, basis, M, reach):
    """Largest subspace of span(basis) whose full-operator image stays in
    the window and inside itself."""
    field = T.field
    while basis:
        padded = [row + [field.zero] * (reach - M) for row in basis]
        span_rows, span_piv = rref_rows(padded, field)
        span_rows = span_rows[: len(span_piv)]
        residues = []
        for row in basis:
            img = T.apply(FiniteVector(field, dict(enumerate(row)))).to_list(reach)
            for erow, p in zip(span_rows, span_piv):
                c = img[p]
                if c != field.zero:
                    for j in range(reach):
                        if erow[j] != field.zero:
                            img[j] = field.sub(img[j], field.mul(c, erow[j]))
            residues.append(img)
        combos = Matrix.from_cols(field, residues).kernel_basis()
        if len(combos) == len(basis):
            return basis
        new_basis = []
        for combo in combos:
            vec = [field.zero] * M
            for i, c in enumerate(combo):
                if c != field.zero:
                    for j in range(M):
                        vec[j] = field.add(vec[j], field.mul(c, basis[i][j]))
            new_basis.append(vec)
        rows, piv = rref_rows(new_basis, field) if new_basis else ([], [])
        basis = [list(r) for r in rows[: len(piv)]]
    return []


def _verify_common_eigenvector(ops, v):
    lams = []
    for T in ops:
        img = T.apply(v)
        if img.is_zero():
            lams.append(T.field.zero)
            continue
        idx = img.max_index()
        if v.at(idx) == T.field.zero:
            return None
        lam = T.field.div(img.at(idx), v.at(idx))
        if img != v.scale(lam):
            return None
        lams.append(lam)
    return lams
