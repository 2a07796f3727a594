import random
from fractions import Fraction

import pytest

from diagalg.errors import NotSquare, SizeMismatch
from diagalg.fields import GF, Polynomial, QQ, poly_splits_simply
from diagalg.linalg import (
    Matrix,
    Subspace,
    commutant,
    diagonalize_finite,
    joint_eigenprojections,
    matrix_to_vec,
    minimal_polynomial,
    poly_at_matrix,
    restriction_vanishes,
    simultaneous_diagonalize_finite,
)

from oracles import (
    plain_rank,
    plain_solve,
    sympy_charpoly_coeffs,
    sympy_factor_degrees,
    sympy_rational_diagonalizable,
)


def rand_matrix(rng, field, n):
    if field.char == 0:
        return Matrix(field, [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)])
    return Matrix(field, [[rng.randrange(field.char) for _ in range(n)] for _ in range(n)])


class TestMatrixBasics:
    def test_mul_matches_plain_loops(self):
        rng = random.Random(1)
        for field in (QQ, GF(5)):
            A = rand_matrix(rng, field, 4)
            B = rand_matrix(rng, field, 4)
            C = A * B
            for i in range(4):
                for j in range(4):
                    acc = field.zero
                    for t in range(4):
                        acc = field.add(acc, field.mul(A[i, t], B[t, j]))
                    assert C[i, j] == acc

    def test_rank_matches_oracle(self):
        rng = random.Random(2)
        for _ in range(30):
            field = rng.choice([QQ, GF(3)])
            n = rng.randint(1, 5)
            A = rand_matrix(rng, field, n)
            p = field.char or None
            assert A.rank() == plain_rank([list(r) for r in A.rows], p)

    def test_solve_and_inverse(self):
        A = Matrix(QQ, [[2, 1], [1, 1]])
        x = A.solve([3, 2])
        assert A.matvec(x) == [Fraction(3), Fraction(2)]
        assert A * A.inverse() == Matrix.identity(QQ, 2)
        assert Matrix(QQ, [[1, 1], [1, 1]]).solve([1, 0]) is None

    def test_kernel(self):
        A = Matrix(QQ, [[1, 1, 0], [0, 0, 1]])
        ker = A.kernel_basis()
        assert len(ker) == 1
        assert A.matvec(ker[0]) == [Fraction(0), Fraction(0)]

    def test_charpoly_against_sympy(self):
        rng = random.Random(3)
        for _ in range(25):
            n = rng.randint(1, 5)
            A = rand_matrix(rng, QQ, n)
            mine = list(A.charpoly().coeffs)
            assert mine == sympy_charpoly_coeffs([list(r) for r in A.rows])

    def test_zero_dimensional_edges(self):
        E = Matrix(QQ, [])
        assert minimal_polynomial(E) == Polynomial.one(QQ)
        assert E.charpoly() == Polynomial.one(QQ)
        res = diagonalize_finite(E)
        assert res.ok and res.p.nrows == 0

    def test_shape_errors(self):
        with pytest.raises(NotSquare):
            minimal_polynomial(Matrix(QQ, [[1, 2]]))
        with pytest.raises(SizeMismatch):
            Matrix(QQ, [[1]]) * Matrix(QQ, [[1, 2], [3, 4]])


class TestMinimalPolynomial:
    def test_identity(self):
        mu = minimal_polynomial(Matrix.identity(QQ, 3))
        assert mu == Polynomial(QQ, [-1, 1])

    def test_nilpotent_block(self):
        J = Matrix(QQ, [[0, 1], [0, 0]])
        assert minimal_polynomial(J) == Polynomial(QQ, [0, 0, 1])

    def test_companion_of_irreducible_cubic(self):
        f = Polynomial(QQ, [-2, 0, 0, 1])  # x^3 - 2
        C = Matrix.companion(f)
        mu = minimal_polynomial(C)
        # oracle: the characteristic polynomial is x^3 - 2 and it is
        # irreducible, so its only monic divisors are 1 and itself
        assert sympy_charpoly_coeffs([list(r) for r in C.rows]) == [-2, 0, 0, 1]
        assert sympy_factor_degrees([-2, 0, 0, 1]) == [3]
        assert mu == f

    def test_divides_charpoly(self):
        rng = random.Random(4)
        for _ in range(40):
            field = rng.choice([QQ, GF(3), GF(5)])
            A = rand_matrix(rng, field, rng.randint(1, 4))
            mu = minimal_polynomial(A)
            chi = A.charpoly()
            assert (chi % mu).is_zero()
            assert poly_at_matrix(mu, A).is_zero()


class TestDiagonalizeFinite:
    def test_already_diagonal(self):
        T = Matrix.diagonal(QQ, [1, 2])
        res = diagonalize_finite(T)
        assert res.ok and res.p == Matrix.identity(QQ, 2) and res.d == T

    def test_swap_matrix_over_q(self):
        res = diagonalize_finite(Matrix(QQ, [[0, 1], [1, 0]]))
        assert res.ok
        assert [res.d[i, i] for i in range(2)] == [Fraction(-1), Fraction(1)]

    def test_swap_matrix_over_f2(self):
        # over F_2 the minimal polynomial is x^2 + 1 = (x+1)^2: brute force
        # the annihilator from powers I, T, T^2
        F = GF(2)
        T = Matrix(F, [[0, 1], [1, 0]])
        powers = [matrix_to_vec(Matrix.identity(F, 2)), matrix_to_vec(T),
                  matrix_to_vec(T * T)]
        assert plain_rank(powers[:2], 2) == 2 and plain_rank(powers, 2) == 2
        dep = plain_solve([list(r) for r in zip(*powers[:2])], powers[2], 2)
        mu_expected = Polynomial(F, [(-dep[0]) % 2, (-dep[1]) % 2, 1])
        res = diagonalize_finite(T)
        assert not res.ok
        assert res.mu == mu_expected == Polynomial(F, [1, 0, 1])

    def test_conjugation_verified(self):
        rng = random.Random(5)
        for _ in range(40):
            field = rng.choice([QQ, GF(5)])
            T = rand_matrix(rng, field, rng.randint(1, 4))
            res = diagonalize_finite(T)
            if res.ok:
                assert res.p.inverse() * T * res.p == res.d
                # diagonal entries = roots of the characteristic polynomial
                chi = T.charpoly()
                diag = [res.d[i, i] for i in range(T.nrows)]
                prod = Polynomial.from_roots(field, diag)
                assert prod == chi
            else:
                assert not poly_splits_simply(res.mu).splits

    def test_fp_diagonalizable_iff_power_identity(self):
        rng = random.Random(6)
        for t in range(300):
            field = GF(3) if t % 2 else GF(5)
            T = rand_matrix(rng, field, 4)
            res = diagonalize_finite(T)
            assert res.ok == ((T ** field.char) == T)


class TestCommutant:
    def test_identity_generator(self):
        space = commutant([Matrix.identity(QQ, 2)])
        assert space.dim == 4

    def test_nilpotent_block(self):
        J = Matrix(QQ, [[0, 1], [0, 0]])
        space = commutant([J])
        # oracle: solve X J = J X as a plain 4x4 homogeneous system
        # unknowns x = (a, b, c, d) for X = [[a, b], [c, d]]
        rows = [
            [0, 0, 1, 0],   # (XJ-JX)[0][0] = -c
            [1, 0, 0, -1],  # (XJ-JX)[0][1] = a - d
            [0, 0, 0, 0],   # (XJ-JX)[1][0] = 0
            [0, 0, 1, 0],   # (XJ-JX)[1][1] = c
        ]
        assert space.dim == 4 - plain_rank(rows)
        assert space.contains(matrix_to_vec(Matrix.identity(QQ, 2)))
        assert space.contains(matrix_to_vec(J))

    def test_distinct_diagonal(self):
        space = commutant([Matrix.diagonal(QQ, [1, 2])])
        assert space.dim == 2
        assert space.contains([1, 0, 0, 0]) and space.contains([0, 0, 0, 1])

    def test_contains_polynomials_of_generators(self):
        rng = random.Random(7)
        for _ in range(20):
            field = rng.choice([QQ, GF(3)])
            T = rand_matrix(rng, field, 3)
            space = commutant([T])
            assert space.contains(matrix_to_vec(Matrix.identity(field, 3)))
            assert space.contains(matrix_to_vec(T * T))

    def test_double_commutant_of_distinct_diagonalizable(self):
        T = Matrix(QQ, [[0, 1], [1, 0]])  # eigenvalues 1, -1
        first = commutant([T])
        mats = [Matrix(QQ, [list(first.rows[i][0:2]), list(first.rows[i][2:4])])
                for i in range(first.dim)]
        second = commutant(mats)
        # the double commutant is the polynomial algebra of T: here dim 2
        assert second.dim == 2
        assert second.contains(matrix_to_vec(T))


class TestSimultaneous:
    def test_diagonal_pair(self):
        res = simultaneous_diagonalize_finite(
            [Matrix.diagonal(QQ, [1, 2]), Matrix.diagonal(QQ, [3, 3])])
        assert res.ok and res.p == Matrix.identity(QQ, 2)

    def test_power_pair_joint_basis(self):
        T = Matrix(QQ, [[0, 1], [1, 0]])
        res = simultaneous_diagonalize_finite([T, T * T])
        assert res.ok
        cols = [res.p.col(j) for j in range(2)]
        # joint basis (1, 1) and (1, -1) up to scaling; oracle: common
        # eigenvectors of T (T^2 = I adds nothing)
        for col in cols:
            ratio = {tuple(x * col[0] for x in (1, 1)), tuple(x * col[0] for x in (1, -1))}
            assert tuple(col) in ratio or tuple(-x for x in col) in ratio

    def test_fail_witnesses(self):
        J = Matrix(QQ, [[0, 1], [0, 0]])
        res = simultaneous_diagonalize_finite([J, Matrix.identity(QQ, 2)])
        assert not res.ok and res.reason == "notdiagonalizable"
        assert res.witness[1] == Polynomial(QQ, [0, 0, 1])
        A = Matrix(QQ, [[0, 1], [1, 0]])
        B = Matrix(QQ, [[1, 1], [0, 2]])
        res2 = simultaneous_diagonalize_finite([A, B])
        assert not res2.ok and res2.reason == "noncommuting"

    def test_polynomials_of_common_matrix(self):
        rng = random.Random(8)
        for _ in range(25):
            field = rng.choice([QQ, GF(7)])
            n = rng.randint(2, 4)
            while True:
                P = rand_matrix(rng, field, n)
                if P.rank() == n:
                    break
            vals = ([Fraction(rng.randint(-3, 3)) for _ in range(n)] if field.char == 0
                    else [rng.randrange(field.char) for _ in range(n)])
            T = P * Matrix.diagonal(field, vals) * P.inverse()
            fams = []
            for _ in range(3):
                coeffs = ([Fraction(rng.randint(-2, 2)) for _ in range(3)] if field.char == 0
                          else [rng.randrange(field.char) for _ in range(3)])
                fams.append(poly_at_matrix(Polynomial(field, coeffs), T))
            res = simultaneous_diagonalize_finite(fams)
            assert res.ok

    def test_joint_eigenprojections_resolve_identity(self):
        T1 = Matrix.diagonal(QQ, [1, 1, 2])
        T2 = Matrix.diagonal(QQ, [0, 3, 3])
        projs = joint_eigenprojections([T1, T2])
        assert len(projs) == 3
        total = Matrix.zeros(QQ, 3)
        for _, pr in projs:
            assert pr * pr == pr
            total = total + pr
        assert total == Matrix.identity(QQ, 3)


class TestRestriction:
    def test_zero_operator(self):
        W = Subspace.from_vectors(QQ, 2, [[1, 0]])
        assert restriction_vanishes(Matrix.zeros(QQ, 2), W)

    def test_identity_on_nonzero(self):
        W = Subspace.from_vectors(QQ, 2, [[1, 0]])
        assert not restriction_vanishes(Matrix.identity(QQ, 2), W)

    def test_matrix_unit_kills_first_vector(self):
        # unit sending e_1 -> e_0 vanishes on span(e_0): direct product check
        E = Matrix(QQ, [[0, 1], [0, 0]])
        assert E.matvec([1, 0]) == [Fraction(0), Fraction(0)]
        assert restriction_vanishes(E, Subspace.from_vectors(QQ, 2, [[1, 0]]))


class TestSubspace:
    def test_rref_canonical_equality(self):
        a = Subspace.from_vectors(QQ, 3, [[1, 1, 0], [0, 1, 1]])
        b = Subspace.from_vectors(QQ, 3, [[2, 2, 0], [1, 2, 1]])
        assert a == b

    def test_intersection_and_sum(self):
        a = Subspace.from_vectors(QQ, 3, [[1, 0, 0], [0, 1, 0]])
        b = Subspace.from_vectors(QQ, 3, [[0, 1, 0], [0, 0, 1]])
        cap = a.intersection(b)
        assert cap.dim == 1 and cap.contains([0, 1, 0])
        assert (a + b).dim == 3

    def test_diagonalizability_from_sympy(self):
        rng = random.Random(9)
        for _ in range(25):
            n = rng.randint(1, 4)
            A = rand_matrix(rng, QQ, n)
            assert diagonalize_finite(A).ok == sympy_rational_diagonalizable(
                [list(r) for r in A.rows])
