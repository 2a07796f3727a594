import random
from fractions import Fraction

import pytest

from diagalg.errors import CapacityExceeded, FieldMismatch, ZeroPolynomial
from diagalg.fields import (
    EPSeq,
    GF,
    Polynomial,
    QQ,
    epseq_op,
    epseq_shift,
    poly_roots_in_field,
    poly_splits_simply,
    poly_squarefree_part,
)

from oracles import brute_normalize_ep, gfp_eval, gfp_radical


def P(field, *coeffs):
    return Polynomial(field, list(coeffs))


class TestFields:
    def test_prime_validation(self):
        with pytest.raises(ValueError):
            GF(4)
        with pytest.raises(ValueError):
            GF(1)
        assert GF(2).char == 2 and GF(97).char == 97

    def test_rational_scalars_reduced(self):
        a = QQ.scalar("6/4")
        assert (a.numerator, a.denominator) == (3, 2)
        assert QQ.format_scalar(Fraction(-3, 2)) == "-3/2"
        assert QQ.parse_scalar("-3/2") == Fraction(-3, 2)

    def test_modp_scalars(self):
        F = GF(7)
        assert F.scalar(-1) == 6
        assert F.format_scalar(3) == "3 mod 7"
        assert F.parse_scalar("10 mod 7") == 3
        with pytest.raises(FieldMismatch):
            F.parse_scalar("1 mod 5")
        assert F.inv(3) == 5

    def test_field_mismatch_guard(self):
        with pytest.raises(FieldMismatch):
            P(QQ, 1) + P(GF(2), 1)


class TestSquarefree:
    def test_repeated_root_over_q(self):
        # x^2 -> x
        assert poly_squarefree_part(P(QQ, 0, 0, 1)) == P(QQ, 0, 1)

    def test_already_squarefree(self):
        f = P(QQ, -1, 0, 1)
        assert poly_squarefree_part(f) == f

    def test_f2_with_pth_power_factor(self):
        # x^3 + x = x (x+1)^2 over F_2; radical is x^2 + x
        F = GF(2)
        f = P(F, 0, 1, 0, 1)
        expected = gfp_radical([0, 1, 0, 1], 2)
        assert expected == [0, 1, 1]
        assert poly_squarefree_part(f) == Polynomial(F, expected)

    def test_derivative_vanishes(self):
        # (x+1)^2 = x^2 + 1 over F_2 has zero derivative
        F = GF(2)
        assert poly_squarefree_part(P(F, 1, 0, 1)) == P(F, 1, 1)

    def test_zero_rejected(self):
        with pytest.raises(ZeroPolynomial):
            poly_squarefree_part(Polynomial.zero(QQ))

    def test_squarefree_properties_random(self):
        rng = random.Random(7)
        for _ in range(150):
            p = rng.choice([2, 3, 5, 7])
            F = GF(p)
            f = Polynomial(F, [rng.randrange(p) for _ in range(rng.randint(1, 6))] + [1])
            r = poly_squarefree_part(f)
            assert (f % r).is_zero()
            d = r.derivative()
            assert d.is_zero() and r.degree == 0 or r.gcd(d).degree == 0
        for _ in range(100):
            f = Polynomial(QQ, [Fraction(rng.randint(-4, 4)) for _ in range(rng.randint(1, 6))] + [1])
            r = poly_squarefree_part(f)
            assert (f % r).is_zero()
            assert r.gcd(r.derivative()).degree == 0


class TestSplitsSimply:
    def test_symmetric_roots(self):
        rep = poly_splits_simply(P(QQ, -1, 0, 1))
        assert rep.splits and rep.roots == [Fraction(-1), Fraction(1)]

    def test_irreducible_over_f2(self):
        # exhaustive root check: x^2+x+1 has no root among the 2 elements
        assert all(gfp_eval([1, 1, 1], a, 2) != 0 for a in range(2))
        rep = poly_splits_simply(P(GF(2), 1, 1, 1))
        assert not rep.splits

    def test_no_rational_roots(self):
        rep = poly_splits_simply(P(QQ, 1, 0, 1))
        assert not rep.splits

    def test_repeated_factor_rejected(self):
        rep = poly_splits_simply(P(QQ, 0, 0, 1))
        assert not rep.splits and "repeated" in rep.reason

    def test_rational_root_extraction(self):
        f = Polynomial.from_roots(QQ, [Fraction(1, 2), Fraction(-3), Fraction(5)])
        rep = poly_splits_simply(f)
        assert rep.splits
        assert rep.roots == sorted([Fraction(1, 2), Fraction(-3), Fraction(5)])

    def test_agrees_with_exhaustive_enumeration(self):
        rng = random.Random(11)
        for _ in range(300):
            p = rng.choice([2, 3, 5, 7])
            F = GF(p)
            deg = rng.randint(1, 6)
            f = Polynomial(F, [rng.randrange(p) for _ in range(deg)] + [1])
            coeffs = list(f.coeffs)
            roots = [a for a in range(p) if gfp_eval(coeffs, a, p) == 0]
            # multiplicity count by repeated deflation
            total_mult = 0
            simple = True
            for a in roots:
                g = f
                mult = 0
                lin = P(F, (-a) % p, 1)
                while (g % lin).is_zero():
                    g = g // lin
                    mult += 1
                total_mult += mult
                if mult > 1:
                    simple = False
            expected = simple and total_mult == f.degree
            rep = poly_splits_simply(f)
            assert rep.splits == expected
            if rep.splits:
                assert rep.roots == sorted(roots)

    def test_roots_in_field_helper(self):
        f = Polynomial.from_roots(QQ, [1, 2]) * P(QQ, 1, 0, 1)
        assert poly_roots_in_field(f) == [Fraction(1), Fraction(2)]

    def test_capacity_guard(self):
        f = P(QQ, 2 ** 300 + 1, 0, 1)
        with pytest.raises(CapacityExceeded):
            poly_splits_simply(f)


class TestPolynomialRing:
    def test_divmod_and_gcd(self):
        f = P(QQ, -1, 0, 1)
        g = P(QQ, 1, 1)
        q, r = divmod(f, g)
        assert q * g + r == f and r.is_zero()
        assert f.gcd(g) == P(QQ, 1, 1)
        assert f.lcm(g) == f

    def test_pow_mod(self):
        F = GF(5)
        f = P(F, 1, 1, 1)
        x = Polynomial.x(F)
        assert x.pow_mod(5, f) == (x * x * x * x * x) % f


class TestEPSeq:
    def test_constant_add(self):
        a = EPSeq.constant(QQ, 1)
        b = EPSeq.constant(QQ, 2)
        assert epseq_op(a, b, "add") == EPSeq.constant(QQ, 3)

    def test_eventually_zero_absorber(self):
        a = EPSeq(QQ, [5], [0])
        b = EPSeq(QQ, [], [2, 3])
        out = epseq_op(a, b, "mul")
        assert out == EPSeq(QQ, [10], [0])

    def test_interleaved_add_renormalizes(self):
        a = EPSeq(QQ, [], [1, 0])
        b = EPSeq(QQ, [], [0, 1])
        out = a + b
        pre, per = brute_normalize_ep(lambda i: a.at(i) + b.at(i), 4, 4, 13)
        assert (list(out.pre), list(out.per)) == (pre, per)
        assert out == EPSeq.one(QQ)

    def test_normalization_idempotent_and_minimal(self):
        rng = random.Random(3)
        for _ in range(200):
            F = rng.choice([QQ, GF(3)])
            pre = [F.scalar(rng.randint(0, 2)) for _ in range(rng.randint(0, 3))]
            per = [F.scalar(rng.randint(0, 2)) for _ in range(rng.randint(1, 4))]
            s = EPSeq(F, pre, per)
            again = EPSeq(F, list(s.pre), list(s.per))
            assert again == s
            bpre, bper = brute_normalize_ep(s.at, 6, 6, len(pre) + 3 * len(per) + 8)
            assert (list(s.pre), list(s.per)) == (bpre, bper)

    def test_equality_matches_pointwise(self):
        rng = random.Random(5)
        from math import lcm
        for _ in range(200):
            F = GF(5)
            a = EPSeq(F, [rng.randrange(5) for _ in range(rng.randint(0, 2))],
                      [rng.randrange(5) for _ in range(rng.randint(1, 3))])
            b = EPSeq(F, [rng.randrange(5) for _ in range(rng.randint(0, 2))],
                      [rng.randrange(5) for _ in range(rng.randint(1, 3))])
            horizon = len(a.pre) + len(b.pre) + 2 * lcm(len(a.per), len(b.per))
            pointwise = all(a.at(i) == b.at(i) for i in range(horizon))
            assert (a == b) == pointwise

    def test_shift_semantics(self):
        s = EPSeq(QQ, [1, 2], [3, 4])
        shifted = epseq_shift(s, 3)
        assert [shifted.at(i) for i in range(5)] == [s.at(i + 3) for i in range(5)]
        padded = epseq_shift(s, -2)
        assert [padded.at(i) for i in range(6)] == [0, 0, 1, 2, 3, 4]

    def test_period_divides_lcm(self):
        a = EPSeq(QQ, [], [1, 2, 3])
        b = EPSeq(QQ, [], [1, 2])
        out = a * b
        assert 6 % len(out.per) == 0
