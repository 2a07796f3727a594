"""Exact scalars, dense polynomials, and eventually periodic sequences.

Two coefficient fields are supported: the rationals, whose scalars are
arbitrary-precision ``fractions.Fraction`` values (always stored reduced,
positive denominator), and prime fields F_p, whose scalars are plain ints
in [0, p).  Arithmetic is routed through the owning field object, so a
scalar never crosses between fields unchecked.

Eventually periodic sequences (preperiod + repeating period) are the finite
descriptions used for infinite diagonals and bands elsewhere in the package.
Their normal form -- the unique minimal (preperiod, period) pair -- makes
equality of the infinite sequences decidable.

All values are immutable after construction; every function here is pure.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import (
    CapacityExceeded,
    FieldMismatch,
    ZeroPolynomial,
)

# Rational root extraction refuses to enumerate divisors of integers beyond
# this many bits; prime fields refuse exhaustive root scans beyond this size.
DEFAULT_MAX_BITS = 256
MAX_ENUMERABLE_PRIME = 1_000_003


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Rationals:
    """The field Q.  Scalars are Fraction values."""

    char = 0

    def scalar(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse_scalar(x)
        raise TypeError(f"cannot coerce {x!r} into Q")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by 0")
        return a / b

    def sort_key(self, a):
        return a

    def format_scalar(self, a):
        return f"{a.numerator}/{a.denominator}" if a.denominator != 1 else str(a.numerator)

    def parse_scalar(self, text):
        return Fraction(text.strip())

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class PrimeField:
    """The field F_p for a prime p.  Scalars are ints in [0, p)."""

    def __init__(self, p):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p

    def scalar(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            return self.parse_scalar(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1 % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def sort_key(self, a):
        return a

    def elements(self):
        return range(self.p)

    def format_scalar(self, a):
        return f"{a} mod {self.p}"

    def parse_scalar(self, text):
        text = text.strip()
        if "mod" in text:
            r, mod = text.split("mod")
            if int(mod) != self.p:
                raise FieldMismatch(f"scalar written mod {mod.strip()} parsed in F_{self.p}")
            return int(r) % self.p
        return int(text) % self.p

    def __repr__(self):
        return f"F_{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p):
    return PrimeField(p)


def check_same_field(a, b):
    if a != b:
        raise FieldMismatch(f"{a} vs {b}")
    return a


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Dense univariate polynomial over a fixed field, coefficients lowest
    degree first, trailing zeros trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = [field.scalar(c) for c in coeffs]
        while cs and cs[-1] == field.zero:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, field):
        return cls(field, [])

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def one(cls, field):
        return cls(field, [1])

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def from_roots(cls, field, roots):
        f = cls.one(field)
        for r in roots:
            f = f * cls(field, [field.neg(field.scalar(r)), field.one])
        return f

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def monic(self):
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        inv = self.field.inv(self.coeffs[-1])
        return Polynomial(self.field, [self.field.mul(c, inv) for c in self.coeffs])

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        F = check_same_field(self.field, other.field)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other):
        F = check_same_field(self.field, other.field)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(F, [F.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        return Polynomial(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        F = self.field
        if isinstance(other, Polynomial):
            check_same_field(F, other.field)
            if self.is_zero() or other.is_zero():
                return Polynomial.zero(F)
            out = [F.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == F.zero:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
            return Polynomial(F, out)
        c = F.scalar(other)
        return Polynomial(F, [F.mul(c, a) for a in self.coeffs])

    __rmul__ = __mul__

    def __divmod__(self, other):
        F = check_same_field(self.field, other.field)
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        rem = list(self.coeffs)
        div = other.coeffs
        inv_lead = F.inv(div[-1])
        q = [F.zero] * max(0, len(rem) - len(div) + 1)
        for k in range(len(rem) - len(div), -1, -1):
            c = F.mul(rem[k + len(div) - 1], inv_lead)
            if c == F.zero:
                continue
            q[k] = c
            for i, d in enumerate(div):
                rem[k + i] = F.sub(rem[k + i], F.mul(c, d))
        return Polynomial(F, q), Polynomial(F, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other):
        return (other % self).is_zero()

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def lcm(self, other):
        if self.is_zero() or other.is_zero():
            return Polynomial.zero(self.field)
        g = self.gcd(other)
        return ((self * other) // g).monic()

    def derivative(self):
        F = self.field
        return Polynomial(F, [F.mul(F.scalar(k), c) for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        F = self.field
        x = F.scalar(x)
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def pow_mod(self, exp, mod):
        """self**exp reduced mod ``mod``, by square and multiply."""
        F = check_same_field(self.field, mod.field)
        result = Polynomial.one(F) % mod
        base = self % mod
        while exp:
            if exp & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            exp >>= 1
        return result

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == self.field.zero:
                continue
            cs = self.field.format_scalar(c)
            term = cs if k == 0 else ("x" if k == 1 else f"x^{k}")
            if k > 0 and cs != "1":
                term = f"{cs}*{term}"
            parts.append(term)
        return " + ".join(parts)


def _pth_root(f):
    """Inverse Frobenius for f = g(x^p) over F_p; coefficient-wise c^(1/p) = c."""
    p = f.field.char
    return Polynomial(f.field, [f.coeffs[i] for i in range(0, len(f.coeffs), p)])


def poly_squarefree_part(f):
    """The product of the distinct irreducible factors of f, monic.

    Over a characteristic-p field, a vanishing derivative means f is a p-th
    power pattern g(x^p); descent through the p-th root handles it.
    """
    if f.is_zero():
        raise ZeroPolynomial("squarefree part of 0")
    F = f.field
    f = f.monic()
    if f.degree == 0:
        return f
    d = f.derivative()
    if d.is_zero():
        # only possible in characteristic p
        return poly_squarefree_part(_pth_root(f))
    g = f.gcd(d)
    if g.degree == 0:
        return f
    w = f // g  # the factors whose multiplicity is prime to char
    if F.char == 0:
        return w.monic()
    # strip all w-factors out of g; what is left is a p-th power
    c = g
    while True:
        d2 = c.gcd(w)
        if d2.degree == 0:
            break
        c = c // d2
    if c.degree == 0:
        return w.monic()
    return (w * poly_squarefree_part(_pth_root(c))).monic()


class SplitsReport:
    """Outcome of poly_splits_simply: either the sorted distinct roots, or a
    reason why f is not a product of distinct linear factors."""

    __slots__ = ("splits", "roots", "reason")

    def __init__(self, splits, roots=None, reason=None):
        self.splits = splits
        self.roots = roots
        self.reason = reason

    def __bool__(self):
        return self.splits

    def __repr__(self):
        if self.splits:
            return f"Yes({self.roots})"
        return f"No({self.reason})"


def _int_divisors(n, max_bits):
    n = abs(n)
    if n.bit_length() > max_bits:
        raise CapacityExceeded(f"divisor enumeration on a {n.bit_length()}-bit integer")
    factors = {}
    d = 2
    rest = n
    while d * d <= rest and d <= 1_000_000:
        while rest % d == 0:
            factors[d] = factors.get(d, 0) + 1
            rest //= d
        d += 1 if d == 2 else 2
    if rest > 1:
        # no factor below 1e6, so rest is prime whenever rest < 1e12
        if rest >= 10**12:
            raise CapacityExceeded(f"cannot certify factorization of {rest}")
        factors[rest] = factors.get(rest, 0) + 1
    divs = [1]
    for prime, e in factors.items():
        divs = [d * prime**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _rational_roots(f, max_bits):
    """All rational roots of f over Q, by divisor enumeration on the integer
    form, with full deflation.  Roots are returned with multiplicity."""
    F = f.field
    roots = []
    # strip zero roots
    k = 0
    while k < len(f.coeffs) and f.coeffs[k] == 0:
        k += 1
    roots.extend([Fraction(0)] * k)
    f = Polynomial(F, f.coeffs[k:])
    while f.degree >= 1:
        den = 1
        for c in f.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [c.numerator * (den // c.denominator) for c in f.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        ints = [c // g for c in ints]
        found = None
        for p in _int_divisors(ints[0], max_bits):
            for q in _int_divisors(ints[-1], max_bits):
                if gcd(p, q) != 1:
                    continue
                for sign in (1, -1):
                    r = Fraction(sign * p, q)
                    if f(r) == 0:
                        found = r
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        f = f // Polynomial(F, [-found, 1])
    return roots, f


def poly_roots_in_field(f, max_bits=DEFAULT_MAX_BITS):
    """The distinct roots of f lying in its own field (irrational or
    extension-field roots are simply not reported)."""
    if f.is_zero():
        raise ZeroPolynomial("root extraction on 0")
    F = f.field
    if f.degree == 0:
        return []
    if F.char > 0:
        if F.char > MAX_ENUMERABLE_PRIME:
            raise CapacityExceeded(f"root scan over F_{F.char}")
        return [a for a in F.elements() if f(a) == F.zero]
    roots, _ = _rational_roots(f.monic(), max_bits)
    return sorted(set(roots))


def poly_splits_simply(f, field=None, max_bits=DEFAULT_MAX_BITS):
    """Decide whether f is a product of pairwise distinct linear factors
    over its field, and if so return the sorted roots.

    Over F_p the criterion is x^p = x mod f (x^p computed by repeated
    squaring), which covers squarefreeness and splitting in one test.  Over
    Q, squarefreeness is checked through gcd(f, f'), then rational roots are
    extracted by bounded divisor enumeration with full deflation.
    """
    if f.is_zero():
        raise ZeroPolynomial("splitting test on 0")
    F = f.field
    if field is not None and field != F:
        raise FieldMismatch(f"polynomial over {F}, test requested over {field}")
    f = f.monic()
    if f.degree == 0:
        return SplitsReport(True, roots=[])
    if F.char > 0:
        p = F.char
        xp = Polynomial.x(F).pow_mod(p, f)
        if xp != Polynomial.x(F) % f:
            g = f.gcd(f.derivative()) if not f.derivative().is_zero() else f
            if g.degree > 0:
                return SplitsReport(False, reason="repeated factor")
            return SplitsReport(False, reason="irreducible factor of degree > 1")
        if p > MAX_ENUMERABLE_PRIME:
            raise CapacityExceeded(f"root scan over F_{p}")
        roots = [a for a in F.elements() if f(a) == F.zero]
        return SplitsReport(True, roots=sorted(roots, key=F.sort_key))
    g = f.gcd(f.derivative())
    if g.degree > 0:
        return SplitsReport(False, reason="repeated factor")
    roots, rest = _rational_roots(f, max_bits)
    if rest.degree >= 1:
        return SplitsReport(False, reason=f"no rational root of residual degree {rest.degree}")
    return SplitsReport(True, roots=sorted(roots, key=F.sort_key))


# ---------------------------------------------------------------------------
# Eventually periodic sequences
# ---------------------------------------------------------------------------

def normalize_ep(pre, per):
    """Reduce an (preperiod, period) pair of values to the unique minimal
    form describing the same infinite sequence.  Works for any values with
    equality; used both for scalar sequences and for color sequences."""
    pre = list(pre)
    per = list(per)
    if not per:
        raise ValueError("period must be nonempty")
    # minimal cyclic period: the minimal period of a repeated word divides
    # its length
    m = len(per)
    for d in range(1, m + 1):
        if m % d == 0 and all(per[i] == per[i % d] for i in range(m)):
            per = per[:d]
            break
    # absorb preperiod tail entries that already lie on the cycle
    while pre and pre[-1] == per[-1]:
        pre.pop()
        per = [per[-1]] + per[:-1]
    return tuple(pre), tuple(per)


class EPSeq:
    """Eventually periodic scalar sequence: ``pre`` then ``per`` repeating.

    Instances are kept in the minimal normal form, so == decides equality of
    the infinite sequences.
    """

    __slots__ = ("field", "pre", "per")

    def __init__(self, field, pre, per):
        pre = [field.scalar(c) for c in pre]
        per = [field.scalar(c) for c in per]
        self.field = field
        self.pre, self.per = normalize_ep(pre, per)

    @classmethod
    def constant(cls, field, value):
        return cls(field, [], [value])

    @classmethod
    def zero(cls, field):
        return cls(field, [], [0])

    @classmethod
    def one(cls, field):
        return cls(field, [], [1])

    def at(self, n):
        if n < 0:
            return self.field.zero
        if n < len(self.pre):
            return self.pre[n]
        return self.per[(n - len(self.pre)) % len(self.per)]

    def is_zero(self):
        return not self.pre and self.per == (self.field.zero,)

    def eventually_zero(self):
        return self.per == (self.field.zero,)

    def period_nowhere_zero(self):
        return all(c != self.field.zero for c in self.per)

    def window(self, n):
        return [self.at(i) for i in range(n)]

    def value_set(self):
        return set(self.pre) | set(self.per)

    def support_in_pre(self):
        """Indices below the preperiod length with a nonzero value."""
        return [i for i, c in enumerate(self.pre) if c != self.field.zero]

    def _binop(self, other, op):
        F = check_same_field(self.field, other.field)
        k = max(len(self.pre), len(other.pre))
        m = lcm(len(self.per), len(other.per))
        pre = [op(self.at(i), other.at(i)) for i in range(k)]
        per = [op(self.at(k + i), other.at(k + i)) for i in range(m)]
        return EPSeq(F, pre, per)

    def __add__(self, other):
        return self._binop(other, self.field.add)

    def __sub__(self, other):
        return self._binop(other, self.field.sub)

    def __mul__(self, other):
        if isinstance(other, EPSeq):
            return self._binop(other, self.field.mul)
        c = self.field.scalar(other)
        return EPSeq(
            self.field,
            [self.field.mul(c, v) for v in self.pre],
            [self.field.mul(c, v) for v in self.per],
        )

    __rmul__ = __mul__

    def __neg__(self):
        return EPSeq(self.field, [self.field.neg(v) for v in self.pre],
                     [self.field.neg(v) for v in self.per])

    def shift(self, d):
        """Index shift.  For d >= 0 the raw shift n -> value at n+d; for
        d < 0 the prefix extension that pads |d| zeros in front."""
        if d >= 0:
            k = max(0, len(self.pre) - d)
            pre = [self.at(i + d) for i in range(k)]
            per_off = d + k
            per = [self.at(per_off + i) for i in range(len(self.per))]
            return EPSeq(self.field, pre, per)
        pad = [self.field.zero] * (-d)
        return EPSeq(self.field, pad + list(self.pre), list(self.per))

    def __eq__(self, other):
        return (
            isinstance(other, EPSeq)
            and self.field == other.field
            and self.pre == other.pre
            and self.per == other.per
        )

    def __hash__(self):
        return hash((self.field, self.pre, self.per))

    def __repr__(self):
        fmt = self.field.format_scalar
        pre = ",".join(fmt(c) for c in self.pre)
        per = ",".join(fmt(c) for c in self.per)
        return f"pre=[{pre}];per=[{per}]"


def epseq_op(a, b, op):
    """Pointwise add or mul of two sequences over the same field."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def epseq_shift(a, d):
    return a.shift(d)
