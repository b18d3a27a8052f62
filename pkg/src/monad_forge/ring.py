"""Euclidean domains: the integers, the Gaussian integers and GF(p)[x].

Elements are plain Python values so that matrix code can use the ordinary
arithmetic operators:

* ``Z``      -- ``int``
* ``Z[i]``   -- :class:`GaussInt`
* ``GF(p)[x]`` -- :class:`Poly`

Everything that is not plain arithmetic (Euclidean division, canonical
associates, residues, factorization, text syntax) goes through a ring
object, an instance of :class:`EuclideanRing`.

>>> Z.factor(12)
Factorization(unit=1, factors=((MaximalIdeal(2), 2), (MaximalIdeal(3), 1)))
>>> ZI.normalize(ZI.parse("-1-i"))
(GaussInt(1, 1), GaussInt(-1, 0))
"""

from __future__ import annotations

import functools
import itertools
import math
import random
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterator, Union

from .errors import MixedRings, ParseError, ZeroElement, BadParameters


class GaussInt:
    """A Gaussian integer ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        self.re = re
        self.im = im

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussInt):
            return other
        if isinstance(other, int):
            return GaussInt(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return GaussInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return GaussInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return GaussInt(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = GaussInt(1, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def __repr__(self):
        return f"GaussInt({self.re}, {self.im})"

    def conjugate(self) -> GaussInt:
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im


class Poly:
    """A polynomial over GF(p), coefficients stored lowest degree first.

    The coefficient tuple never has a trailing zero; ``()`` is the zero
    polynomial.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs=()):
        c = [x % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.p = p
        self.coeffs = tuple(c)

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.p != self.p:
                raise MixedRings(f"GF({self.p})[x] and GF({other.p})[x] mixed")
            return other
        if isinstance(other, int):
            return Poly(self.p, (other,))
        return NotImplemented

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(self.p, [x + y for x, y in itertools.zip_longest(a, b, fillvalue=0)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.p, [-x for x in self.coeffs])

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(self.p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly(self.p, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        inv = pow(other.leading, p - 2, p)
        rem = list(self.coeffs)
        db = other.degree
        quot = [0] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv % p
            quot[k] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[k + j] = (rem[k + j] - c * y) % p
        return Poly(p, quot), Poly(p, rem[:db] if db > 0 else [])

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == Poly(self.p, (other,)).coeffs
        if isinstance(other, Poly):
            return self.p == other.p and self.coeffs == other.coeffs
        return False

    def __hash__(self):
        return hash((self.p, self.coeffs)) if len(self.coeffs) > 1 else hash(self.leading)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({self.p}, {self.coeffs})"

    def __call__(self, x: int) -> int:
        return sum(c * pow(x, i, self.p) for i, c in enumerate(self.coeffs)) % self.p


RingElement = Union[int, GaussInt, Poly]


@functools.total_ordering
@dataclass(frozen=True, eq=True)
class MaximalIdeal:
    """A maximal ideal, stored as its canonical (normalized, irreducible) generator."""

    ring: "EuclideanRing"
    generator: Any

    def __post_init__(self):
        r = self.ring
        r.check(self.generator)
        if not self.generator or r.is_unit(self.generator):
            raise BadParameters(f"{r.format(self.generator)} does not generate a maximal ideal")
        canon, _ = r.normalize(self.generator)
        if canon != self.generator:
            raise BadParameters(f"{r.format(self.generator)} is not a canonical associate")

    def __lt__(self, other: MaximalIdeal) -> bool:
        return self.ring.sort_key(self.generator) < other.ring.sort_key(other.generator)

    def __repr__(self):
        return f"MaximalIdeal({self.ring.format(self.generator)})"

    def __str__(self):
        return self.ring.format(self.generator)

    @property
    def residue_count(self) -> int:
        """Number of elements of the residue field."""
        return self.ring.residue_count(self.generator)


@dataclass(frozen=True)
class Factorization:
    unit: Any
    factors: tuple  # ((MaximalIdeal, multiplicity), ...)

    def expand(self):
        out = self.unit
        for ideal, e in self.factors:
            out = out * ideal.generator ** e
        return out


class EuclideanRing(ABC):
    """Common contract of the shipped Euclidean domains."""

    tag: str

    # -- arithmetic primitives -------------------------------------------

    @property
    @abstractmethod
    def zero(self): ...

    @property
    @abstractmethod
    def one(self): ...

    @abstractmethod
    def coerce(self, value: int): ...

    @abstractmethod
    def check(self, e):
        """Return ``e`` unchanged, raising :class:`MixedRings` if it is foreign."""

    @abstractmethod
    def norm(self, e) -> int:
        """Euclidean function; 0 only for the zero element."""

    @abstractmethod
    def divmod(self, a, b): ...

    @abstractmethod
    def units(self) -> list: ...

    @abstractmethod
    def normalize(self, e):
        """``(canonical, unit)`` with ``e == unit * canonical``."""

    @abstractmethod
    def reduce(self, x, d):
        """Canonical representative of ``x`` modulo ``(d)``; ``x`` itself when d = 0."""

    @abstractmethod
    def residues(self, d) -> Iterator:
        """All canonical residues modulo a nonzero ``d``, in a fixed order."""

    @abstractmethod
    def residue_count(self, d) -> int: ...

    @abstractmethod
    def sort_key(self, e): ...

    @abstractmethod
    def parse(self, text: str): ...

    @abstractmethod
    def format(self, e) -> str: ...

    @abstractmethod
    def factor(self, e) -> Factorization: ...

    @abstractmethod
    def scalar_generators(self) -> list:
        """Elements that, together with 1, generate the ring as a ring."""

    @abstractmethod
    def random_element(self, rng: random.Random, size: int): ...

    @abstractmethod
    def irreducibles(self, max_residue_count: int) -> list:
        """Canonical irreducibles whose residue field has at most the given size."""

    # -- derived operations ----------------------------------------------

    def is_unit(self, e) -> bool:
        return e in self.units()

    def unit_inverse(self, u):
        for v in self.units():
            if u * v == self.one:
                return v
        raise ZeroElement(f"{self.format(u)} is not a unit")

    def divides(self, a, b) -> bool:
        """Does ``a`` divide ``b``?"""
        if not a:
            return not b
        return not self.divmod(b, a)[1]

    def exact_div(self, a, b):
        q, r = self.divmod(a, b)
        if r:
            raise ArithmeticError(f"{self.format(b)} does not divide {self.format(a)}")
        return q

    def ext_gcd(self, a, b):
        """``(g, u, v)`` with ``g = u*a + v*b`` and ``g`` canonical."""
        a, b = self.check(a), self.check(b)
        if not a and not b:
            raise ZeroElement("gcd(0, 0) is undefined")
        r0, r1 = a, b
        s0, s1 = self.one, self.zero
        t0, t1 = self.zero, self.one
        while r1:
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        g, unit = self.normalize(r0)
        inv = self.unit_inverse(unit)
        return g, s0 * inv, t0 * inv

    def gcd(self, a, b):
        if not a and not b:
            return self.zero
        return self.ext_gcd(a, b)[0]

    def valuation(self, e, pi) -> int:
        n = 0
        while e and self.divides(pi, e):
            e = self.exact_div(e, pi)
            n += 1
        return n

    def ideal(self, generator) -> MaximalIdeal:
        """Canonical maximal ideal generated by an irreducible element."""
        g = self.check(generator)
        if not g:
            raise ZeroElement("the zero ideal is not maximal")
        g = self.normalize(g)[0]
        f = self.factor(g)
        if len(f.factors) != 1 or f.factors[0][1] != 1:
            raise BadParameters(f"{self.format(g)} is not irreducible")
        return MaximalIdeal(self, g)

    def parse_ideal(self, text: str) -> MaximalIdeal:
        return self.ideal(self.parse(text))

    def _finish_factor(self, e, found: dict) -> Factorization:
        unit = e
        for gen, mult in found.items():
            unit = self.exact_div(unit, gen ** mult)
        factors = tuple(sorted(((MaximalIdeal(self, g), m) for g, m in found.items()),
                               key=lambda t: self.sort_key(t[0].generator)))
        return Factorization(unit, factors)

    def __repr__(self):
        return f"<ring {self.tag}>"


def _trial_divide_int(n: int) -> dict:
    n = abs(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _parse_terms(text: str) -> list[str]:
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty element")
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise ParseError(f"cannot parse element {text!r}")
    return terms


class Integers(EuclideanRing):
    tag = "z"

    def __eq__(self, other):
        return isinstance(other, Integers)

    def __hash__(self):
        return hash("z")

    zero = 0
    one = 1

    def coerce(self, value):
        return int(value)

    def check(self, e):
        if not isinstance(e, int) or isinstance(e, bool):
            raise MixedRings(f"{e!r} is not an integer")
        return e

    def norm(self, e):
        return abs(e)

    def divmod(self, a, b):
        if b == 0:
            raise ZeroDivisionError("integer division by zero")
        return divmod(a, b)

    def units(self):
        return [1, -1]

    def is_unit(self, e):
        return e == 1 or e == -1

    def unit_inverse(self, u):
        if u not in (1, -1):
            raise ZeroElement(f"{u} is not a unit")
        return u

    def normalize(self, e):
        if e == 0:
            raise ZeroElement("cannot normalize 0")
        return (e, 1) if e > 0 else (-e, -1)

    def reduce(self, x, d):
        return x % d if d else x

    def residues(self, d):
        return iter(range(abs(d)))

    def residue_count(self, d):
        return abs(d)

    def sort_key(self, e):
        return (abs(e), e < 0)

    def parse(self, text):
        try:
            return int(text.replace(" ", ""))
        except ValueError:
            raise ParseError(f"not an integer: {text!r}") from None

    def format(self, e):
        return str(e)

    def factor(self, e):
        if e == 0:
            raise ZeroElement("cannot factor 0")
        return self._finish_factor(e, _trial_divide_int(e))

    def scalar_generators(self):
        return []

    def random_element(self, rng, size):
        return rng.randint(-size, size)

    def irreducibles(self, max_residue_count):
        return [p for p in range(2, max_residue_count + 1)
                if all(p % q for q in range(2, math.isqrt(p) + 1))]


class GaussianIntegers(EuclideanRing):
    tag = "zi"

    def __eq__(self, other):
        return isinstance(other, GaussianIntegers)

    def __hash__(self):
        return hash("zi")

    @property
    def zero(self):
        return GaussInt(0, 0)

    @property
    def one(self):
        return GaussInt(1, 0)

    def coerce(self, value):
        if isinstance(value, GaussInt):
            return value
        return GaussInt(int(value), 0)

    def check(self, e):
        if isinstance(e, GaussInt):
            return e
        raise MixedRings(f"{e!r} is not a Gaussian integer")

    def norm(self, e):
        return e.norm()

    def divmod(self, a, b):
        a, b = self.coerce(a), self.coerce(b)
        n = b.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        num = a * b.conjugate()
        # nearest-integer rounding keeps N(remainder) <= N(b)/2
        q = GaussInt((2 * num.re + n) // (2 * n), (2 * num.im + n) // (2 * n))
        return q, a - q * b

    def divides(self, a, b):
        a, b = self.coerce(a), self.coerce(b)
        if not a:
            return not b
        num = b * a.conjugate()
        n = a.norm()
        return num.re % n == 0 and num.im % n == 0

    def exact_div(self, a, b):
        a, b = self.coerce(a), self.coerce(b)
        num = a * b.conjugate()
        n = b.norm()
        if num.re % n or num.im % n:
            raise ArithmeticError(f"{self.format(b)} does not divide {self.format(a)}")
        return GaussInt(num.re // n, num.im // n)

    def units(self):
        return [GaussInt(1, 0), GaussInt(0, 1), GaussInt(-1, 0), GaussInt(0, -1)]

    def is_unit(self, e):
        return e.norm() == 1

    def unit_inverse(self, u):
        if u.norm() != 1:
            raise ZeroElement(f"{self.format(u)} is not a unit")
        return u.conjugate()

    def normalize(self, e):
        e = self.coerce(e)
        if not e:
            raise ZeroElement("cannot normalize 0")
        for u in self.units():
            c = e * u.conjugate()
            if c.re > 0 and c.im >= 0:
                return c, u
        raise AssertionError("unreachable")

    def _lattice(self, d):
        # The ideal (d) as a sublattice of Z^2 in Hermite form {(g, q), (0, r)}.
        a, b = d.re, d.im
        g, s, t = Z.ext_gcd(a, b) if (a or b) else (0, 0, 0)
        q = b * s - a * t
        r = d.norm() // g
        return g, q, r

    def reduce(self, x, d):
        x, d = self.coerce(x), self.coerce(d)
        if not d:
            return x
        g, q, r = self._lattice(d)
        k, re_ = divmod(x.re, g)
        return GaussInt(re_, (x.im - k * q) % r)

    def residues(self, d):
        g, _, r = self._lattice(self.coerce(d))
        return (GaussInt(a, b) for a in range(g) for b in range(r))

    def residue_count(self, d):
        return self.coerce(d).norm()

    def sort_key(self, e):
        return (e.norm(), e.re, e.im)

    def parse(self, text):
        re_part, im_part = 0, 0
        for term in _parse_terms(text):
            if term.endswith("i"):
                coeff = term[:-1].lstrip("*")
                if coeff in ("", "+"):
                    im_part += 1
                elif coeff == "-":
                    im_part -= 1
                else:
                    try:
                        im_part += int(coeff.rstrip("*"))
                    except ValueError:
                        raise ParseError(f"bad Gaussian integer {text!r}") from None
            else:
                try:
                    re_part += int(term)
                except ValueError:
                    raise ParseError(f"bad Gaussian integer {text!r}") from None
        return GaussInt(re_part, im_part)

    def format(self, e):
        a, b = e.re, e.im
        if b == 0:
            return str(a)
        im = {1: "i", -1: "-i"}.get(b, f"{b}i")
        if a == 0:
            return im
        return f"{a}{im}" if b < 0 else f"{a}+{im}"

    def factor(self, e):
        e = self.coerce(e)
        if not e:
            raise ZeroElement("cannot factor 0")
        found = {}
        for p in sorted(_trial_divide_int(e.norm())):
            if p == 2:
                candidates = [GaussInt(1, 1)]
            elif p % 4 == 3:
                candidates = [GaussInt(p, 0)]
            else:
                k = next(k for k in range(2, p) if (k * k + 1) % p == 0)
                pi = self.gcd(GaussInt(p, 0), GaussInt(k, 1))
                candidates = [pi, self.normalize(pi.conjugate())[0]]
            for pi in candidates:
                m = 0
                while self.divides(pi, e):
                    e = self.exact_div(e, pi)
                    m += 1
                if m:
                    found[pi] = found.get(pi, 0) + m
        factors = tuple(sorted(((MaximalIdeal(self, g), m) for g, m in found.items()),
                               key=lambda t: self.sort_key(t[0].generator)))
        return Factorization(e, factors)

    def scalar_generators(self):
        return [GaussInt(0, 1)]

    def random_element(self, rng, size):
        r = math.isqrt(size)
        while True:
            z = GaussInt(rng.randint(-r, r), rng.randint(-r, r))
            if z.norm() <= size:
                return z

    def irreducibles(self, max_residue_count):
        out = set()
        r = math.isqrt(max_residue_count)
        for a in range(1, r + 1):
            for b in range(0, r + 1):
                z = GaussInt(a, b)
                if 1 < z.norm() <= max_residue_count:
                    f = self.factor(z)
                    if len(f.factors) == 1 and f.factors[0][1] == 1:
                        out.add(z)
        return sorted(out, key=self.sort_key)


class PolynomialsModP(EuclideanRing):
    """GF(p)[x] for a prime p <= 31."""

    def __init__(self, p: int):
        if p > 31 or p < 2 or any(p % q == 0 for q in range(2, p)):
            raise BadParameters(f"FPX needs a prime p <= 31, got {p}")
        self.p = p
        self.tag = f"fpx:{p}"

    def __eq__(self, other):
        return isinstance(other, PolynomialsModP) and other.p == self.p

    def __hash__(self):
        return hash(("fpx", self.p))

    @property
    def zero(self):
        return Poly(self.p)

    @property
    def one(self):
        return Poly(self.p, (1,))

    @property
    def x(self):
        return Poly(self.p, (0, 1))

    def coerce(self, value):
        if isinstance(value, Poly):
            return self.check(value)
        return Poly(self.p, (int(value),))

    def check(self, e):
        if isinstance(e, Poly) and e.p == self.p:
            return e
        raise MixedRings(f"{e!r} is not in GF({self.p})[x]")

    def norm(self, e):
        # Euclidean function: p^deg, 0 for the zero polynomial
        return self.p ** e.degree if e.coeffs else 0

    def divmod(self, a, b):
        return divmod(self.coerce(a), self.coerce(b))

    def units(self):
        return [Poly(self.p, (c,)) for c in range(1, self.p)]

    def is_unit(self, e):
        return e.degree == 0

    def unit_inverse(self, u):
        if u.degree != 0:
            raise ZeroElement(f"{self.format(u)} is not a unit")
        return Poly(self.p, (pow(u.leading, self.p - 2, self.p),))

    def normalize(self, e):
        e = self.coerce(e)
        if not e:
            raise ZeroElement("cannot normalize 0")
        lead = e.leading
        inv = pow(lead, self.p - 2, self.p)
        return e * inv, Poly(self.p, (lead,))

    def reduce(self, x, d):
        x = self.coerce(x)
        if not d:
            return x
        return divmod(x, d)[1]

    def residues(self, d):
        n = d.degree
        return (Poly(self.p, c) for c in itertools.product(range(self.p), repeat=n))

    def residue_count(self, d):
        return self.p ** d.degree

    def sort_key(self, e):
        return (e.degree, tuple(reversed(e.coeffs)))

    def parse(self, text):
        out = [0]
        for term in _parse_terms(text):
            m = re.fullmatch(r"([+-]?)(\d*)\*?(x(?:\^(\d+))?)?", term)
            if not m or (not m.group(2) and not m.group(3)):
                raise ParseError(f"bad polynomial {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = int(m.group(2)) if m.group(2) else 1
            deg = 0 if not m.group(3) else int(m.group(4) or 1)
            out.extend([0] * (deg + 1 - len(out)))
            out[deg] += sign * coeff
        return Poly(self.p, out)

    def format(self, e):
        if not e.coeffs:
            return "0"
        parts = []
        for deg in range(e.degree, -1, -1):
            c = e.coeffs[deg]
            if not c:
                continue
            if deg == 0:
                parts.append(str(c))
            else:
                mono = "x" if deg == 1 else f"x^{deg}"
                parts.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(parts)

    def monic(self, degree: int) -> Iterator[Poly]:
        """Monic polynomials of the given degree in a fixed order."""
        for lower in itertools.product(range(self.p), repeat=degree):
            yield Poly(self.p, tuple(reversed(lower)) + (1,))

    def factor(self, e):
        e = self.coerce(e)
        if not e:
            raise ZeroElement("cannot factor 0")
        found = {}
        rest = e
        d = 1
        while 2 * d <= rest.degree:
            for cand in self.monic(d):
                while rest.degree >= d and not divmod(rest, cand)[1]:
                    rest = divmod(rest, cand)[0]
                    found[cand] = found.get(cand, 0) + 1
            d += 1
        if rest.degree > 0:
            canon, _ = self.normalize(rest)
            found[canon] = found.get(canon, 0) + 1
        return self._finish_factor(e, found)

    def scalar_generators(self):
        return [self.x]

    def random_element(self, rng, size):
        deg = rng.randint(-1, size)
        return Poly(self.p, [rng.randrange(self.p) for _ in range(deg + 1)])

    def irreducibles(self, max_residue_count):
        out = []
        d = 1
        while self.p ** d <= max_residue_count:
            for cand in self.monic(d):
                f = self.factor(cand)
                if len(f.factors) == 1 and f.factors[0][1] == 1:
                    out.append(cand)
            d += 1
        return out


Z = Integers()
ZI = GaussianIntegers()


@functools.lru_cache(maxsize=None)
def FPX(p: int) -> PolynomialsModP:
    return PolynomialsModP(p)


def ring_from_tag(tag: str) -> EuclideanRing:
    """Parse a ring selector: ``z``, ``zi`` or ``fpx:<p>``."""
    tag = tag.strip().lower()
    if tag == "z":
        return Z
    if tag == "zi":
        return ZI
    if tag.startswith("fpx:"):
        try:
            return FPX(int(tag[4:]))
        except ValueError:
            raise ParseError(f"bad ring selector {tag!r}") from None
    raise ParseError(f"unknown ring {tag!r}; expected z, zi or fpx:<p>")
