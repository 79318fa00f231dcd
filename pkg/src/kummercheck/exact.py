"""Exact arithmetic foundation.

Arbitrary-precision rationals (``fractions.Fraction``), univariate polynomials
over Q and over F_p, resultants and discriminants via Sylvester matrices with
fraction-free elimination, complete factorization over F_p, Sturm-sequence real
root isolation, power-sum traces, and arithmetic in the quotient ring Q[x]/(f).

Every verdict-path computation here is exact; no floating point appears in
this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Iterable, Sequence

from .errors import ContractViolation, InputError

Rational = Fraction

# ---------------------------------------------------------------------------
# primes and residues
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64-bit inputs."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, v in enumerate(sieve) if v]


def factor_int(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division plus Pollard rho."""
    n = abs(n)
    if n <= 1:
        return {}
    out: dict[int, int] = {}
    for p in primes_up_to(10_000):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        if n == 1:
            return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        stack.extend(_pollard_rho_split(m))
    return out


def _pollard_rho_split(n: int) -> tuple[int, int]:
    if n % 2 == 0:
        return 2, n // 2
    c = 1
    while True:
        x, y, d = 2, 2, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d, n // d
        c += 1


def legendre(a: int, p: int) -> int:
    """Quadratic residue symbol (a/p) in {-1, 0, 1} for odd prime p."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def valuation(x: Rational | int, p: int) -> int:
    """p-adic valuation; raises on x = 0."""
    if x == 0:
        raise InputError("valuation of zero is undefined")
    x = Fraction(x)
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def is_rational_square(x: Rational | int) -> bool:
    x = Fraction(x)
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    return rn * rn == n and rd * rd == d


# ---------------------------------------------------------------------------
# polynomials over Q
# ---------------------------------------------------------------------------


class PolyQ:
    """Immutable univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rational | int | str]) -> None:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("PolyQ is immutable")

    # -- basic structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Rational:
        if self.is_zero:
            raise InputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyQ) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero:
            return "PolyQ(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{i}" if i else f"{c}")
        return "PolyQ(" + " + ".join(reversed(terms)) + ")"

    def __getitem__(self, i: int) -> Rational:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "PolyQ") -> "PolyQ":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return PolyQ(out)

    def __neg__(self) -> "PolyQ":
        return PolyQ([-c for c in self.coeffs])

    def __sub__(self, other: "PolyQ") -> "PolyQ":
        return self + (-other)

    def __mul__(self, other) -> "PolyQ":
        if isinstance(other, (int, Fraction)):
            return PolyQ([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return PolyQ([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "PolyQ":
        out, base = PolyQ([1]), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other: "PolyQ") -> tuple["PolyQ", "PolyQ"]:
        if other.is_zero:
            raise InputError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d, lc = other.degree, other.lc
        while len(rem) - 1 >= d and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            c = rem[-1] / lc
            k = len(rem) - 1 - d
            q[k] = c
            for i, oc in enumerate(other.coeffs):
                rem[k + i] -= c * oc
        return PolyQ(q), PolyQ(rem)

    def __floordiv__(self, other: "PolyQ") -> "PolyQ":
        return divmod(self, other)[0]

    def __mod__(self, other: "PolyQ") -> "PolyQ":
        return divmod(self, other)[1]

    # -- calculus and evaluation ---------------------------------------------

    def derivative(self) -> "PolyQ":
        return PolyQ([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: Rational | int) -> Rational:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "PolyQ") -> "PolyQ":
        acc = PolyQ([])
        for c in reversed(self.coeffs):
            acc = acc * inner + PolyQ([c])
        return acc

    def monic(self) -> "PolyQ":
        return PolyQ([c / self.lc for c in self.coeffs])

    def reversed_coeffs(self) -> "PolyQ":
        """x^deg * f(1/x)."""
        return PolyQ(list(reversed(self.coeffs)))

    def cleared(self) -> tuple[list[int], int]:
        """Integer coefficient list together with the denominator multiplier d (d*f integral)."""
        d = 1
        for c in self.coeffs:
            d = d * c.denominator // math.gcd(d, c.denominator)
        return [int(c * d) for c in self.coeffs], d

    def primitive_integer(self) -> tuple[list[int], Rational]:
        """Primitive integer coefficients cs and scale s with f = s * cs (positive lc)."""
        ints, d = self.cleared()
        g = 0
        for c in ints:
            g = math.gcd(g, abs(c))
        g = g or 1
        sign = -1 if ints[-1] < 0 else 1
        cs = [c * sign // g for c in ints]
        return cs, Fraction(sign * g, d)


def poly_gcd(f: PolyQ, g: PolyQ) -> PolyQ:
    """Monic gcd over Q."""
    a, b = f, g
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a.monic()


def squarefree_part(f: PolyQ) -> PolyQ:
    g = poly_gcd(f, f.derivative())
    if g.degree <= 0:
        return f
    return f // g


# ---------------------------------------------------------------------------
# resultant / discriminant via Sylvester matrix, fraction-free elimination
# ---------------------------------------------------------------------------


def _bareiss_det(m: list[list[int]]) -> int:
    """Determinant of an integer matrix by Bareiss fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i, row_k = m[i], m[k]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[-1][-1]


def _sylvester_det(fc: Sequence[int], gc: Sequence[int]) -> int:
    """Resultant of two integer polynomials (ascending coefficients) with deg >= 1 each."""
    m, n = len(fc) - 1, len(gc) - 1
    size = m + n
    fd = list(reversed(fc))
    gd = list(reversed(gc))
    rows = []
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - i - m - 1))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - i - n - 1))
    return _bareiss_det(rows)


def resultant(f: PolyQ, g: PolyQ) -> Rational:
    """Res(f, g) = lc(f)^deg(g) * prod g(alpha) over the roots alpha of f."""
    if f.is_zero or g.is_zero:
        raise InputError("resultant requires nonzero polynomials")
    m, n = f.degree, g.degree
    if m == 0:
        return f.lc**n
    if n == 0:
        return g.lc**m
    fi, df = f.cleared()
    gi, dg = g.cleared()
    r = _sylvester_det(fi, gi)
    return Fraction(r, df**n * dg**m)


def discriminant(f: PolyQ) -> Rational:
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    n = f.degree
    if n < 2:
        raise InputError("discriminant requires degree >= 2")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


# ---------------------------------------------------------------------------
# polynomials over F_p
# ---------------------------------------------------------------------------


class PolyFp:
    """Immutable univariate polynomial over F_p, coefficients in [0, p) ascending."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[int]) -> None:
        cs = [c % p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("PolyFp is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        if self.is_zero:
            raise InputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyFp)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"PolyFp(p={self.p}, {list(self.coeffs)})"

    def _wrap(self, coeffs: Iterable[int]) -> "PolyFp":
        return PolyFp(self.p, coeffs)

    def __add__(self, other: "PolyFp") -> "PolyFp":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return self._wrap(out)

    def __neg__(self) -> "PolyFp":
        return self._wrap([-c for c in self.coeffs])

    def __sub__(self, other: "PolyFp") -> "PolyFp":
        return self + (-other)

    def __mul__(self, other) -> "PolyFp":
        if isinstance(other, int):
            return self._wrap([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return self._wrap([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        p = self.p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = (out[i + j] + a * b) % p
        return self._wrap(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "PolyFp") -> tuple["PolyFp", "PolyFp"]:
        if other.is_zero:
            raise InputError("polynomial division by zero")
        p = self.p
        inv_lc = pow(other.lc, p - 2, p)
        q = [0] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        while len(rem) - 1 >= d:
            while rem and rem[-1] % p == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            c = rem[-1] * inv_lc % p
            k = len(rem) - 1 - d
            q[k] = c
            for i, oc in enumerate(other.coeffs):
                rem[k + i] = (rem[k + i] - c * oc) % p
        return self._wrap(q), self._wrap(rem)

    def __floordiv__(self, other: "PolyFp") -> "PolyFp":
        return divmod(self, other)[0]

    def __mod__(self, other: "PolyFp") -> "PolyFp":
        return divmod(self, other)[1]

    def monic(self) -> "PolyFp":
        inv = pow(self.lc, self.p - 2, self.p)
        return self._wrap([c * inv for c in self.coeffs])

    def derivative(self) -> "PolyFp":
        return self._wrap([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def pow_mod(self, e: int, modulus: "PolyFp") -> "PolyFp":
        out = self._wrap([1])
        base = self % modulus
        while e:
            if e & 1:
                out = out * base % modulus
            base = base * base % modulus
            e >>= 1
        return out


def fp_gcd(a: PolyFp, b: PolyFp) -> PolyFp:
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def _fp_pth_root(f: PolyFp) -> PolyFp:
    # In F_p[x], f' = 0 forces f(x) = g(x^p) and then f = g(x)^p since c^p = c.
    p = f.p
    return PolyFp(p, [f.coeffs[i] for i in range(0, len(f.coeffs), p)])


def _fp_squarefree_decomposition(f: PolyFp) -> list[tuple[PolyFp, int]]:
    """Monic f -> [(monic squarefree, multiplicity)], product reproducing f."""
    p = f.p
    out: list[tuple[PolyFp, int]] = []
    if f.degree <= 0:
        return out
    fp = f.derivative()
    if fp.is_zero:
        return [(g, p * m) for g, m in _fp_squarefree_decomposition(_fp_pth_root(f))]
    a = fp_gcd(f, fp)
    b = f // a
    i = 1
    while b.degree > 0:
        c = fp_gcd(a, b)
        d = b // c
        if d.degree > 0:
            out.append((d, i))
        b = c
        a = a // c
        i += 1
    if a.degree > 0:
        out.extend((g, p * m) for g, m in _fp_squarefree_decomposition(a))
    return out


def _fp_distinct_degree(f: PolyFp) -> list[tuple[PolyFp, int]]:
    """Monic squarefree f -> [(product of irreducibles of degree d, d)]."""
    p = f.p
    out = []
    x = PolyFp(p, [0, 1])
    h = x
    i = 1
    while f.degree >= 2 * i:
        h = h.pow_mod(p, f)
        g = fp_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, i))
            f = f // g
            h = h % f
        i += 1
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _fp_equal_degree(f: PolyFp, d: int, rng: Random) -> list[PolyFp]:
    """Cantor-Zassenhaus split of a monic product of degree-d irreducibles."""
    if f.degree == d:
        return [f]
    p = f.p
    while True:
        r = PolyFp(p, [rng.randrange(p) for _ in range(f.degree)] + [1])
        if p == 2:
            t = PolyFp(2, [])
            term = r % f
            for _ in range(d):
                t = (t + term) % f
                term = term * term % f
        else:
            t = r.pow_mod((p**d - 1) // 2, f) - PolyFp(p, [1])
        g = fp_gcd(f, t)
        if 0 < g.degree < f.degree:
            return _fp_equal_degree(g, d, rng) + _fp_equal_degree(f // g, d, rng)


@dataclass(frozen=True)
class FactorizationFp:
    """Complete factorization over F_p: unit * prod factor^multiplicity."""

    p: int
    unit: int
    factors: tuple[tuple[PolyFp, int], ...]

    def recombine(self) -> PolyFp:
        acc = PolyFp(self.p, [self.unit])
        for g, m in self.factors:
            for _ in range(m):
                acc = acc * g
        return acc

    def cycle_type(self) -> tuple[int, ...]:
        degs: list[int] = []
        for g, m in self.factors:
            degs.extend([g.degree] * m)
        return tuple(sorted(degs, reverse=True))


def reduce_mod_p(f: PolyQ, p: int) -> PolyFp:
    """Reduction mod p; rejects coefficients with p in the denominator."""
    out = []
    for c in f.coeffs:
        if c.denominator % p == 0:
            raise InputError(f"coefficient {c} is not {p}-integral")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return PolyFp(p, out)


def factor_mod_p(f: PolyQ, p: int, seed: int = 0) -> FactorizationFp:
    """Squarefree decomposition, then distinct-degree, then equal-degree splitting.

    The equal-degree stage is randomized; the seed pins the run and the factor
    list is sorted canonically, so output is reproducible either way.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    fbar = reduce_mod_p(f, p)
    if fbar.degree != f.degree:
        raise InputError(f"leading coefficient of {f!r} vanishes mod {p}")
    if fbar.is_zero:
        raise InputError("cannot factor the zero polynomial")
    rng = Random(seed)
    unit = fbar.lc
    monic = fbar.monic()
    factors: list[tuple[PolyFp, int]] = []
    for sqf, mult in _fp_squarefree_decomposition(monic):
        for prod, d in _fp_distinct_degree(sqf):
            for irr in _fp_equal_degree(prod, d, rng):
                factors.append((irr, mult))
    factors.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return FactorizationFp(p=p, unit=unit, factors=tuple(factors))


def roots_mod_p(f: PolyQ, p: int) -> list[int]:
    """Roots in F_p (without multiplicity)."""
    fbar = reduce_mod_p(f, p)
    return [r for r in range(p) if fbar(r) == 0]


# ---------------------------------------------------------------------------
# real root isolation (Sturm)
# ---------------------------------------------------------------------------

STURM_WIDTH = Fraction(1, 2**16)


def sturm_chain(f: PolyQ) -> list[PolyQ]:
    chain = [f, f.derivative()]
    while chain[-1].degree > 0:
        chain.append(-(chain[-2] % chain[-1]))
    if chain[-1].is_zero:
        chain.pop()
    return chain


def _sign_variations(chain: Sequence[PolyQ], x: Rational) -> int:
    signs = []
    for g in chain:
        v = g(x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(f: PolyQ) -> Rational:
    """Cauchy bound: all real roots lie strictly inside (-B, B)."""
    lc = abs(f.lc)
    return 1 + max(abs(c) for c in f.coeffs) / lc


def isolate_real_roots(f: PolyQ) -> list[tuple[Rational, Rational]]:
    """Disjoint rational intervals, one per real root of squarefree f.

    Exact roots come back as degenerate intervals [r, r]; other intervals are
    refined below STURM_WIDTH and satisfy f(lo) * f(hi) < 0.
    """
    if f.degree <= 0:
        return []
    if poly_gcd(f, f.derivative()).degree > 0:
        raise InputError("isolate_real_roots requires a squarefree polynomial")
    chain = sturm_chain(f)
    bound = root_bound(f)
    out: list[tuple[Rational, Rational]] = []

    def count(lo: Rational, hi: Rational) -> int:
        return _sign_variations(chain, lo) - _sign_variations(chain, hi)

    def refine(lo: Rational, hi: Rational) -> None:
        # exactly one root in (lo, hi), f nonzero at both endpoints
        while hi - lo >= STURM_WIDTH:
            mid = (lo + hi) / 2
            if f(mid) == 0:
                out.append((mid, mid))
                return
            if f(lo) * f(mid) < 0:
                hi = mid
            else:
                lo = mid
        out.append((lo, hi))

    def split(lo: Rational, hi: Rational, n: int) -> None:
        if n == 0:
            return
        if n == 1:
            refine(lo, hi)
            return
        mid = (lo + hi) / 2
        if f(mid) == 0:
            # isolate the exact root, then recurse on shrunk flanks
            delta = (hi - lo) / 8
            while f(mid - delta) == 0 or f(mid + delta) == 0 or count(mid - delta, mid + delta) > 1:
                delta /= 2
            out.append((mid, mid))
            split(lo, mid - delta, count(lo, mid - delta))
            split(mid + delta, hi, count(mid + delta, hi))
        else:
            split(lo, mid, count(lo, mid))
            split(mid, hi, count(mid, hi))

    lo, hi = -bound, bound
    while f(lo) == 0:
        lo -= 1
    while f(hi) == 0:
        hi += 1
    split(lo, hi, count(lo, hi))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# power sums / quotient ring helpers
# ---------------------------------------------------------------------------


def trace_powers(f: PolyQ, count: int) -> list[Rational]:
    """Tr(theta^i) for 0 <= i < count via Newton's identities; f monic."""
    if f.is_zero or not f.is_monic:
        raise InputError("trace_powers requires a monic polynomial")
    n = f.degree
    if n < 1:
        raise InputError("trace_powers requires degree >= 1")
    e = [Fraction(0)] * (n + 1)  # elementary symmetric functions
    for k in range(1, n + 1):
        e[k] = (-1) ** k * f[n - k]
    ps = [Fraction(n)]
    for k in range(1, count):
        acc = Fraction(0)
        for i in range(1, min(k - 1, n) + 1):
            acc += (-1) ** (i - 1) * e[i] * ps[k - i]
        if k <= n:
            acc += (-1) ** (k - 1) * k * e[k]
        ps.append(acc)
    return ps[:count]


def poly_invmod(a: PolyQ, f: PolyQ) -> PolyQ:
    """Inverse of a modulo f in Q[x]/(f); raises if gcd(a, f) is nonconstant."""
    r0, r1 = f, a % f
    s0, s1 = PolyQ([]), PolyQ([1])
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise InputError("element is not invertible modulo f")
    return (s0 * (1 / r0.coeffs[0])) % f

def poly_mulmod(a: PolyQ, b: PolyQ, f: PolyQ) -> PolyQ:
    return (a * b) % f


def multiplication_matrix(a: PolyQ, f: PolyQ) -> list[list[Rational]]:
    """Matrix of multiplication by a on Q[x]/(f) in the power basis (column j = a*x^j)."""
    n = f.degree
    cols = []
    cur = a % f
    for _ in range(n):
        cols.append([cur[i] for i in range(n)])
        cur = (cur * PolyQ([0, 1])) % f
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def matrix_trace(m: Sequence[Sequence[Rational]]) -> Rational:
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


def matrix_det(m: Sequence[Sequence[Rational]]) -> Rational:
    """Determinant of a rational matrix (Bareiss after clearing denominators)."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    d = 1
    for row in m:
        for c in row:
            c = Fraction(c)
            d = d * c.denominator // math.gcd(d, c.denominator)
    rows = [[int(Fraction(c) * d) for c in row] for row in m]
    return Fraction(_bareiss_det(rows), d**n)


# ---------------------------------------------------------------------------
# irreducibility over Q  (degree <= 5)
# ---------------------------------------------------------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    for i in range(1, math.isqrt(n) + 1):
        if n % i == 0:
            out.add(i)
            out.add(n // i)
    return sorted(out)


def _rational_roots(ints: list[int]) -> list[Fraction]:
    # primitive integer coefficients, ascending; constant term nonzero
    roots = []
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for s in (1, -1):
                r = Fraction(s * num, den)
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * r + c
                if acc == 0:
                    roots.append(r)
    return roots


def _merge_partitions(parts: tuple[int, ...]) -> set[tuple[int, ...]]:
    """All degree partitions obtainable by merging blocks of the given one."""
    if not parts:
        return {()}
    head, rest = parts[0], parts[1:]
    out: set[tuple[int, ...]] = set()
    for sub in _merge_partitions(rest):
        out.add(tuple(sorted((head,) + sub, reverse=True)))
        for i in range(len(sub)):
            merged = list(sub)
            merged[i] += head
            out.add(tuple(sorted(merged, reverse=True)))
    return out


def is_irreducible(f: PolyQ) -> bool:
    """Complete irreducibility decision over Q for degree <= 5.

    Rational-root test plus an exhaustive bounded search for quadratic factors;
    factor patterns mod several primes short-circuit most inputs first.
    """
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    if n > 5:
        raise InputError("irreducibility over Q implemented for degree <= 5 only")
    ints, _ = f.primitive_integer()
    if ints[0] == 0:
        return False  # x divides f
    if _rational_roots(ints):
        return False
    if n <= 3:
        return True  # any factorization of degree <= 3 has a linear factor

    # factor-pattern sieve mod p: a factorization over Q merges the mod-p pattern
    fi = PolyQ(ints)
    possible: set[tuple[int, ...]] | None = None
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97):
        if ints[-1] % p == 0:
            continue
        fac = factor_mod_p(fi, p)
        if any(m > 1 for _, m in fac.factors):
            continue
        pattern = fac.cycle_type()
        if len(pattern) == 1:
            return True
        opts = _merge_partitions(pattern)
        possible = opts if possible is None else possible & opts
        if possible == {(n,)}:
            return True

    # exhaustive quadratic-factor search; Mignotte-style coefficient bound
    norm2 = math.isqrt(sum(c * c for c in ints)) + 1
    bound = 2**n * (norm2 + abs(ints[-1]))
    small_first = sorted(range(-bound, bound + 1), key=abs)
    for a in _divisors(ints[-1]):
        for b in small_first:
            for c in small_first:
                if c == 0:
                    continue  # factor with zero constant term forces x | f, excluded
                if (fi % PolyQ([c, b, a])).is_zero:
                    return False
    return True
