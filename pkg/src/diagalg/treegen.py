"""Binary trees of nested subspace splittings inside a finite window.

The construction produces, for every binary string i of length <= n,
a subspace V_i of the M-dimensional window such that V_empty is the whole
window, every V_i is the direct sum of its children V_i0 and V_i1, the span
of the first |i| coordinate vectors meets V_i trivially, and a fixed witness
vector w has a nonzero component in every leaf.  The dimensions keep a
floor of floor(M / 2^level) - level, the finite stand-in for splitting
infinite-dimensional spaces in half.

The leaf projections of such a tree form orthogonal idempotent families,
one per level, each summing to the identity on the window and refining the
previous level; they commute, every member is diagonalizable, and the
witness vector makes the linear map (coefficients) -> (combination applied
to w) injective, which is the discreteness certificate for the span of the
whole family.

The splitting choices the construction is free to make are pinned down
canonically (extension vectors in increasing index order, alternating
assignment to children); a seed shuffles the candidate order for property
testing while staying reproducible.
"""

import random
from fractions import Fraction

from .errors import FiniteFieldUnsupported, TruncationTooSmall, VerifyFailed
from .fields import QQ
from .linalg import Matrix, Subspace, rref_rows
from .operators import FiniteVector, Operator


def _reduce_against(field, echelon, vec):
    """Reduce vec against echelon rows (list of (pivot, row)); returns the
    reduced vector."""
    v = list(vec)
    for piv, row in echelon:
        c = v[piv]
        if c != field.zero:
            for j in range(len(v)):
                if row[j] != field.zero:
                    v[j] = field.sub(v[j], field.mul(c, row[j]))
    return v


def _echelon_add(field, echelon, vec):
    """Insert vec into the echelon if independent; True when added."""
    v = _reduce_against(field, echelon, vec)
    piv = next((j for j, x in enumerate(v) if x != field.zero), None)
    if piv is None:
        return False
    inv = field.inv(v[piv])
    row = [field.mul(inv, x) for x in v]
    echelon.append((piv, row))
    echelon.sort()
    return True


class TreeDecomposition:
    __slots__ = ("field", "depth", "window", "nodes", "w")

    def __init__(self, field, depth, window, nodes, w):
        self.field = field
        self.depth = depth
        self.window = window
        self.nodes = dict(nodes)
        self.w = tuple(w)

    def strings(self, length):
        if length == 0:
            return [""]
        return [s + b for s in self.strings(length - 1) for b in "01"]

    def leaf_components(self):
        """Decomposition of w across the depth-n leaves, solving against the
        concatenated leaf bases."""
        F = self.field
        leaves = self.strings(self.depth)
        cols = []
        owners = []
        for leaf in leaves:
            for row in self.nodes[leaf].rows:
                cols.append(list(row))
                owners.append(leaf)
        B = Matrix.from_cols(F, cols)
        coords = B.solve(list(self.w))
        if coords is None:
            raise VerifyFailed("witness vector does not decompose over the leaves")
        comps = {}
        for leaf in leaves:
            comps[leaf] = [F.zero] * self.window
        for c, col, owner in zip(coords, cols, owners):
            if c != F.zero:
                vec = comps[owner]
                for j in range(self.window):
                    vec[j] = F.add(vec[j], F.mul(c, col[j]))
        return comps


def build(depth, window, seed=None, field=QQ):
    """Construct a decomposition of the given depth inside an M-dimensional
    window, M >= 2^(depth+2).  Only infinite scalar fields support the
    splitting argument, so the field is Q."""
    if field.char != 0:
        raise FiniteFieldUnsupported("the splitting construction needs an infinite field")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if window < 2 ** (depth + 2):
        raise TruncationTooSmall(f"window {window} < 2^{depth + 2}")
    F = field
    M = window
    rng = random.Random(seed) if seed is not None else None
    full = Subspace.full(F, M)
    nodes = {"": full}
    w = [F.one] + [F.zero] * (M - 1)
    comps = {"": w}

    for m in range(1, depth + 1):
        window_span = Subspace.from_vectors(
            F, M, [_unit(F, M, k) for k in range(m)])
        for name in _strings(m - 1):
            V = nodes[name]
            wi = comps[name]
            pool = [list(r) for r in V.rows]
            if rng is not None:
                rng.shuffle(pool)
            S = window_span.intersection(V)
            if S.dim > 1:
                raise VerifyFailed("window span meets a node in dimension > 1")
            wi_line = Subspace.from_vectors(F, M, [wi])
            if S.is_zero() or wi_line.contains(S.rows[0]):
                v0_rows, v1_rows, w0, w1 = _split_case_one(F, M, V, wi, pool)
            else:
                v0_rows, v1_rows, w0, w1 = _split_case_two(
                    F, M, V, wi, list(S.rows[0]), pool)
            nodes[name + "0"] = Subspace.from_vectors(F, M, v0_rows)
            nodes[name + "1"] = Subspace.from_vectors(F, M, v1_rows)
            comps[name + "0"] = w0
            comps[name + "1"] = w1
    return TreeDecomposition(F, depth, M, nodes, w)


def _unit(field, n, k):
    v = [field.zero] * n
    v[k] = field.one
    return v


def _strings(length):
    if length == 0:
        return [""]
    return [s + b for s in _strings(length - 1) for b in "01"]


def _split_case_one(F, M, V, wi, pool):
    # S subset of span(wi): write wi = a + b with a, b independent in V
    half = F.scalar(Fraction(1, 2)) if F.char == 0 else F.inv(F.scalar(2))
    wi_line = Subspace.from_vectors(F, M, [wi])
    u = next((row for row in pool if not wi_line.contains(row)), None)
    if u is None:
        raise TruncationTooSmall("node too small to split (needs dimension >= 2)")
    a = [F.mul(half, F.add(x, y)) for x, y in zip(wi, u)]
    b = [F.mul(half, F.sub(x, y)) for x, y in zip(wi, u)]
    ext = _complete(F, [a, b], pool, V.dim)
    v0 = [a] + ext[0::2]
    v1 = [b] + ext[1::2]
    return v0, v1, a, b


def _split_case_two(F, M, V, wi, g, pool):
    # S = span(g) with g, wi independent: pick a, b with {g, wi, a, b}
    # independent, put g - a and wi - b on one side, a and b on the other
    echelon = []
    for vec in (g, wi):
        _echelon_add(F, echelon, vec)
    picks = []
    for row in pool:
        if _echelon_add(F, echelon, row):
            picks.append(row)
            if len(picks) == 2:
                break
    if len(picks) < 2:
        raise TruncationTooSmall("node too small to split (needs dimension >= 4)")
    a, b = picks
    ga = [F.sub(x, y) for x, y in zip(g, a)]
    wb = [F.sub(x, y) for x, y in zip(wi, b)]
    ext = _complete(F, [ga, wb, a, b], pool, V.dim)
    v0 = [ga, wb] + ext[0::2]
    v1 = [a, b] + ext[1::2]
    return v0, v1, wb, b


def _complete(F, seed_vecs, pool, target_dim):
    echelon = []
    for vec in seed_vecs:
        if not _echelon_add(F, echelon, vec):
            raise VerifyFailed("splitting seed vectors are dependent")
    ext = []
    for row in pool:
        if len(echelon) == target_dim:
            break
        if _echelon_add(F, echelon, row):
            ext.append(row)
    if len(echelon) != target_dim:
        raise VerifyFailed("could not complete a node basis")
    return ext


class VerifyReport:
    __slots__ = ("ok", "clause", "witness")

    def __init__(self, ok, clause=None, witness=None):
        self.ok = ok
        self.clause = clause
        self.witness = witness

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "Pass" if self.ok else f"Fail(clause={self.clause}, witness={self.witness})"


def verify(d, check_witness=True):
    """Exact check of every structural clause: the root is the window, each
    node splits as the direct sum of its children, the first-|i| coordinate
    span meets each node trivially, dimensions respect the floor, and the
    witness has nonzero components in all leaves (skippable so that the
    discreteness certificate can report a tampered witness honestly)."""
    F = d.field
    M = d.window
    if d.nodes.get("") != Subspace.full(F, M):
        return VerifyReport(False, "root", "")
    for m in range(d.depth + 1):
        window_span = Subspace.from_vectors(F, M, [_unit(F, M, k) for k in range(m)])
        for name in _strings(m):
            V = d.nodes.get(name)
            if V is None:
                return VerifyReport(False, "missing-node", name)
            if m >= 1 and not window_span.intersection(V).is_zero():
                return VerifyReport(False, "a", name)
            floor = M // (2 ** m) - m
            if V.dim < floor:
                return VerifyReport(False, "c", name)
            if m < d.depth:
                left = d.nodes.get(name + "0")
                right = d.nodes.get(name + "1")
                if left is None or right is None:
                    return VerifyReport(False, "missing-node", name + "0/1")
                if left.dim + right.dim != V.dim:
                    return VerifyReport(False, "b", name)
                if not left.intersection(right).is_zero():
                    return VerifyReport(False, "b", name)
                if (left + right) != V:
                    return VerifyReport(False, "b", name)
    if check_witness:
        try:
            comps = d.leaf_components()
        except VerifyFailed:
            return VerifyReport(False, "d", "w")
        for leaf, vec in comps.items():
            if all(x == F.zero for x in vec):
                return VerifyReport(False, "d", leaf)
    return VerifyReport(True)


def idempotent_family(d, level, check_refinement=True):
    """Projections onto the level's subspaces along their complements,
    embedded window-only (zero beyond the window), in binary-string order.

    Asserts orthogonality, that the family sums to the identity on the
    window, and (for levels below the depth) the refinement of each member
    into its two children.
    """
    rep = verify(d)
    if not rep.ok:
        raise VerifyFailed(f"decomposition fails clause {rep.clause} at {rep.witness}")
    if not 0 <= level <= d.depth:
        raise ValueError("level out of range")
    mats = _level_projections(d, level)
    F = d.field
    M = d.window
    window_identity = Operator.from_matrix(F, Matrix.identity(F, M))
    ops = [Operator.from_matrix(F, mat) for _, mat in mats]
    total = Operator.zero(F)
    for a in range(len(ops)):
        for b in range(len(ops)):
            if a != b:
                assert (ops[a] * ops[b]).is_zero()
        assert ops[a].is_idempotent()
        total = total + ops[a]
    assert total == window_identity
    if check_refinement and level < d.depth:
        children = dict(_level_projections(d, level + 1))
        for name, mat in mats:
            assert mat == children[name + "0"] + children[name + "1"]
    return ops


def level_labels(d, level):
    return _strings(level)


def _level_projections(d, level):
    F = d.field
    M = d.window
    names = _strings(level)
    cols = []
    spans = []
    for name in names:
        rows = d.nodes[name].rows
        spans.append((name, len(rows)))
        cols.extend([list(r) for r in rows])
    B = Matrix.from_cols(F, cols)
    Binv = B.inverse()
    out = []
    offset = 0
    for name, k in spans:
        block = Matrix(F, [
            [B.rows[i][offset + t] for t in range(k)] for i in range(M)
        ])
        rows_part = Matrix(F, [Binv.rows[offset + t] for t in range(k)])
        out.append((name, block * rows_part))
        offset += k
    return out


class EigenSearchReport:
    __slots__ = ("confirmed", "vector", "level")

    def __init__(self, confirmed, vector=None, level=None):
        self.confirmed = confirmed
        self.vector = vector
        self.level = level

    def __bool__(self):
        return self.confirmed

    def __repr__(self):
        return "Confirmed" if self.confirmed else f"CounterexampleFound({self.vector})"


def no_common_eigenvector(d, through_level):
    """Exhaustive common-eigenspace refinement of all level <= m projections
    over candidate vectors supported in the first m coordinates (the whole
    window when m = 0, where the single projection trivially has
    eigenvectors).

    Confirmed means the refined common eigenspace is zero -- which clause
    (a) of the construction forces for every m >= 1; a counterexample is
    verified exactly and signals a construction bug.  As m grows the
    candidate spans exhaust the space, recovering the full no-common-
    eigenvector statement in the limit.
    """
    rep = verify(d)
    if not rep.ok:
        raise VerifyFailed(f"decomposition fails clause {rep.clause} at {rep.witness}")
    m = through_level
    if not 0 <= m <= d.depth:
        raise ValueError("level out of range")
    F = d.field
    M = d.window
    if m == 0:
        candidates = Subspace.full(F, M)
    else:
        candidates = Subspace.from_vectors(F, M, [_unit(F, M, k) for k in range(m)])
    projections = []
    for level in range(0, m + 1):
        projections.extend(mat for _, mat in _level_projections(d, level))
    spaces = [candidates]
    for E in projections:
        refined = []
        for S in spaces:
            if S.is_zero():
                continue
            for lam in (F.zero, F.one):
                shifted = E - Matrix.identity(F, M).scale(lam)
                eigenspace = Subspace.from_vectors(F, M, shifted.kernel_basis())
                cut = S.intersection(eigenspace)
                if not cut.is_zero():
                    refined.append(cut)
        spaces = refined
        if not spaces:
            return EigenSearchReport(True, level=m)
    for S in spaces:
        if not S.is_zero():
            v = list(S.rows[0])
            for E in projections:
                img = E.matvec(v)
                assert img == [F.zero] * M or img == v, "refinement produced a non-eigenvector"
            return EigenSearchReport(False, vector=FiniteVector(F, dict(enumerate(v))), level=m)
    return EigenSearchReport(True, level=m)


class DiscretenessReport:
    __slots__ = ("injective", "rank", "leaf_count", "killer")

    def __init__(self, injective, rank, leaf_count, killer):
        self.injective = injective
        self.rank = rank
        self.leaf_count = leaf_count
        self.killer = killer

    def __bool__(self):
        return self.injective

    def __repr__(self):
        return (f"DiscretenessReport(injective={self.injective}, "
                f"rank={self.rank}/{self.leaf_count})")


def discreteness_witness(d):
    """Certificate that the span of the leaf projections meets the window
    annihilator of w only in zero: the map (coefficients) -> (combination
    applied to w) is injective, i.e. the matrix of leaf components of w has
    full column rank 2^depth.  Also builds the rank-(M-1) idempotent with
    w in its kernel that generates the annihilator ideal."""
    rep = verify(d, check_witness=False)
    if not rep.ok:
        raise VerifyFailed(f"decomposition fails clause {rep.clause} at {rep.witness}")
    if d.depth < 1:
        raise ValueError("discreteness certificate needs depth >= 1")
    F = d.field
    M = d.window
    comps = d.leaf_components()
    leaves = _strings(d.depth)
    L = Matrix.from_cols(F, [comps[leaf] for leaf in leaves])
    rank = L.rank()
    injective = rank == len(leaves)
    # idempotent killing w: basis {w, completion}, projection along w
    echelon = []
    if not _echelon_add(F, echelon, list(d.w)):
        raise VerifyFailed("witness vector is zero")
    basis = [list(d.w)]
    for k in range(M):
        if _echelon_add(F, echelon, _unit(F, M, k)):
            basis.append(_unit(F, M, k))
    B = Matrix.from_cols(F, basis)
    diag = Matrix.diagonal(F, [F.zero] + [F.one] * (M - 1))
    E = B * diag * B.inverse()
    assert E * E == E and E.matvec(list(d.w)) == [F.zero] * M
    return DiscretenessReport(injective, rank, len(leaves), E)
