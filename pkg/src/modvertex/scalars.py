"""Exact arithmetic over F_p, binomial coefficients mod p, and F_p[kappa].

Coefficients inside sparse vectors are plain ``int`` residues or ``KPoly``
values (polynomials in a formal level kappa). Both support ``c % p`` as the
reduction step, so vector code treats them uniformly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering

from modvertex.kernels import binom_mod


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@total_ordering
class Prime:
    """A prime modulus chosen at runtime."""

    __slots__ = ("p",)

    def __init__(self, p):
        if isinstance(p, Prime):
            p = p.p
        p = int(p)
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __int__(self):
        return self.p

    __index__ = __int__

    def __eq__(self, other):
        if isinstance(other, Prime):
            return self.p == other.p
        if isinstance(other, int):
            return self.p == other
        return NotImplemented

    def __lt__(self, other):
        return self.p < int(other)

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return f"Prime({self.p})"


def _modulus(p) -> int:
    return p.p if isinstance(p, Prime) else int(p)


@dataclass(frozen=True)
class FpScalar:
    residue: int
    prime: Prime

    def __post_init__(self):
        if not isinstance(self.prime, Prime):
            object.__setattr__(self, "prime", Prime(self.prime))
        object.__setattr__(self, "residue", self.residue % self.prime.p)

    @classmethod
    def of(cls, value: int, p) -> "FpScalar":
        return cls(value, Prime(p))

    def _coerce(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.prime != self.prime:
                raise ValueError("scalars over different primes")
            return other.residue
        if isinstance(other, int):
            return other
        raise TypeError(f"cannot combine FpScalar with {type(other).__name__}")

    def __add__(self, other):
        return FpScalar(self.residue + self._coerce(other), self.prime)

    __radd__ = __add__

    def __sub__(self, other):
        return FpScalar(self.residue - self._coerce(other), self.prime)

    def __rsub__(self, other):
        return FpScalar(self._coerce(other) - self.residue, self.prime)

    def __mul__(self, other):
        return FpScalar(self.residue * self._coerce(other), self.prime)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.residue, self.prime)

    def inv(self) -> "FpScalar":
        if self.residue == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpScalar(pow(self.residue, self.prime.p - 2, self.prime.p), self.prime)

    def __truediv__(self, other):
        return self * FpScalar(self._coerce(other), self.prime).inv()

    def __pow__(self, e: int):
        return fp_pow(self, e)

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.prime == other.prime and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == other % self.prime.p
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.prime.p))

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.prime.p})"


def fp_binom(b: int, a: int, p) -> FpScalar:
    """``binom(b, a)`` reduced mod p; ``b`` may be negative.

    Uses the polynomial extension b(b-1)...(b-a+1)/a!, so
    ``binom(-m, a) = (-1)^a binom(m+a-1, a)``, then Lucas' digit product.
    """
    if a < 0:
        raise ValueError("lower index must be nonnegative")
    prime = Prime(p)
    return FpScalar(binom_mod(int(b), int(a), prime.p), prime)


def fp_pow(x: FpScalar, e: int) -> FpScalar:
    if e < 0:
        return fp_pow(x.inv(), -e)
    r, base = 1, x.residue
    m = x.prime.p
    while e:
        if e & 1:
            r = (r * base) % m
        base = (base * base) % m
        e >>= 1
    return FpScalar(r, x.prime)


class KPoly:
    """Univariate polynomial over F_p in a formal level ``k``.

    Immutable and hashable; coefficients are stored low degree first with
    trailing zeros stripped. Mixed arithmetic with ``int`` is supported.
    """

    __slots__ = ("p", "c", "_h")

    def __init__(self, coeffs, p):
        p = _modulus(p)
        cs = [int(x) % p for x in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.p = p
        self.c = tuple(cs)
        self._h = None

    @classmethod
    def kappa(cls, p) -> "KPoly":
        return cls((0, 1), p)

    @classmethod
    def const(cls, value, p) -> "KPoly":
        return cls((value,), p)

    def _lift(self, other):
        if isinstance(other, KPoly):
            if other.p != self.p:
                raise ValueError("polynomials over different primes")
            return other.c
        if isinstance(other, int):
            return (other % self.p,)
        if isinstance(other, FpScalar):
            return (other.residue,)
        return None

    def __add__(self, other):
        oc = self._lift(other)
        if oc is None:
            return NotImplemented
        n = max(len(self.c), len(oc))
        return KPoly([(self.c[i] if i < len(self.c) else 0) + (oc[i] if i < len(oc) else 0)
                      for i in range(n)], self.p)

    __radd__ = __add__

    def __neg__(self):
        return KPoly([-x for x in self.c], self.p)

    def __sub__(self, other):
        oc = self._lift(other)
        if oc is None:
            return NotImplemented
        return self + KPoly([-x for x in oc], self.p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        oc = self._lift(other)
        if oc is None:
            return NotImplemented
        if not self.c or not oc:
            return KPoly((), self.p)
        out = [0] * (len(self.c) + len(oc) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(oc):
                    out[i + j] += x * y
        return KPoly(out, self.p)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        r = KPoly((1,), self.p)
        base = self
        while e:
            if e & 1:
                r = r * base
            base = base * base
            e >>= 1
        return r

    def __mod__(self, p):
        # coefficients are always reduced; this keeps ``c % p`` uniform with int
        if _modulus(p) != self.p:
            raise ValueError("reducing by a different prime")
        return self

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, KPoly):
            return self.p == other.p and self.c == other.c
        if isinstance(other, int):
            return self.c == KPoly((other,), self.p).c
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.p, self.c)) if len(self.c) > 1 else hash(self.c[0] if self.c else 0)
        return self._h

    def degree(self) -> int:
        return len(self.c) - 1

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def constant(self) -> int:
        return self.c[0] if self.c else 0

    def evaluate(self, k: int) -> int:
        r = 0
        for x in reversed(self.c):
            r = (r * k + x) % self.p
        return r

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for i, x in enumerate(self.c):
            if not x:
                continue
            if i == 0:
                terms.append(str(x))
            else:
                mon = "k" if i == 1 else f"k^{i}"
                terms.append(mon if x == 1 else f"{x}*{mon}")
        return " + ".join(terms)


def reduce_coeff(c, p: int):
    """Normalize a coefficient (int or KPoly) modulo p."""
    return c % p


def coeff_is_fp(c) -> bool:
    """True when the coefficient is an honest element of F_p."""
    return isinstance(c, int) or (isinstance(c, KPoly) and c.is_constant())
