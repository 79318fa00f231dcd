"""p-adic hypothesis checks at odd primes.

Reduction types from discriminant valuations, Hensel lifting of simple roots
and of coprime factors, the parity condition on lambda at a nodal prime, and
a one-sided certifier that a lambda class is nontrivial.

Valuations at the ramified quadratic completion above a nodal prime are read
off resultants with the Hensel-lifted local factor: a discriminant valuation
of exactly 1 forces the double root to contribute a ramified quadratic
completion with residue degree 1 (an unramified quadratic factor would add an
even amount to the discriminant valuation), so val_p of the norm equals the
completion valuation there.  Only odd p is accepted on verdict paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ContractViolation, InputError, PreconditionError
from .exact import (
    PolyFp,
    PolyQ,
    Rational,
    discriminant,
    factor_mod_p,
    fp_gcd,
    is_prime,
    legendre,
    primes_up_to,
    resultant,
    valuation,
)

PRECISION_LADDER = (4, 8, 16, 32)


@dataclass(frozen=True)
class PadicApprox:
    """Residue value mod p^precision."""

    p: int
    precision: int
    value: int

    def __post_init__(self):
        if self.precision < 1:
            raise InputError("precision must be >= 1")
        object.__setattr__(self, "value", self.value % self.p**self.precision)

    def reduce_to(self, precision: int) -> "PadicApprox":
        if precision > self.precision:
            raise InputError("cannot increase precision by reduction")
        return PadicApprox(self.p, precision, self.value % self.p**precision)


@dataclass(frozen=True)
class ReductionType:
    """Reduction classification of a monic polynomial at an odd prime.

    'good' for unit discriminant, 'node' for discriminant valuation exactly 1
    (one rational double root, all other factors simple), 'other' for
    valuation >= 2.
    """

    classification: str
    valuation: int
    double_root: int | None = None
    simple_roots: tuple[int, ...] = ()
    factor_pattern: tuple[tuple[int, int], ...] = ()


def _require_odd_prime(p: int) -> None:
    if not is_prime(p) or p == 2:
        raise InputError(f"odd prime required, got {p}")


def _require_p_integral(f: PolyQ, p: int) -> None:
    for c in f.coeffs:
        if c.denominator % p == 0:
            raise InputError(f"coefficient {c} is not {p}-integral")


def reduction_type(f: PolyQ, p: int) -> ReductionType:
    """Classify the reduction of monic f at odd p by its discriminant valuation."""
    _require_odd_prime(p)
    if not f.is_monic:
        raise InputError("reduction_type requires a monic polynomial")
    _require_p_integral(f, p)
    disc = discriminant(f)
    if disc == 0:
        raise InputError("polynomial is not separable")
    v = valuation(disc, p)
    if v == 0:
        return ReductionType("good", 0)
    if v >= 2:
        return ReductionType("other", v)
    fac = factor_mod_p(f, p)
    pattern = tuple(sorted((g.degree, m) for g, m in fac.factors))
    doubles = [(g, m) for g, m in fac.factors if m > 1]
    if len(doubles) != 1 or doubles[0][1] != 2 or doubles[0][0].degree != 1:
        raise ContractViolation(
            f"valuation 1 must force one rational double root; got pattern {pattern}"
        )
    double_root = (-doubles[0][0].coeffs[0]) % p
    simple_roots = tuple(
        sorted((-g.coeffs[0]) % p for g, m in fac.factors if m == 1 and g.degree == 1)
    )
    return ReductionType("node", 1, double_root, simple_roots, pattern)


def discriminant_valuation_matrix(
    polys: Sequence[PolyQ], primes: Sequence[int]
) -> tuple[list[list[int]], bool]:
    """Matrix val_{w_i}(disc f_j) and whether it is the identity pattern."""
    if len(polys) != len(primes):
        raise InputError("need as many primes as polynomials")
    if len(set(primes)) != len(primes):
        raise InputError("primes must be distinct")
    for p in primes:
        _require_odd_prime(p)
        for f in polys:
            _require_p_integral(f, p)
    discs = [discriminant(f) for f in polys]
    if any(d == 0 for d in discs):
        raise InputError("polynomials must be separable")
    matrix = [[valuation(d, p) for d in discs] for p in primes]
    ok = all(
        matrix[i][j] == (1 if i == j else 0)
        for i in range(len(primes))
        for j in range(len(polys))
    )
    return matrix, ok


def quartic_torsor_unramified(g: PolyQ, p: int) -> bool | None:
    """Unramifiedness of the degree-4 binary-form scheme at odd p.

    True for unit discriminant; for discriminant valuation 1 the reduction of
    v^4 g(u/v), including the point at infinity when the leading coefficient
    drops, must consist of one rational double point plus a reduced
    degree-2 part.  Valuation >= 2 is an undecided outcome (None).
    """
    if g.degree != 4:
        raise InputError("expected a quartic")
    _require_odd_prime(p)
    _require_p_integral(g, p)
    disc = discriminant(g)
    if disc == 0:
        raise InputError("quartic is not separable")
    v = valuation(disc, p)
    if v == 0:
        return True
    if v >= 2:
        return None
    fac = factor_mod_p(g, p)
    points = [(h.degree, m) for h, m in fac.factors]
    drop = 4 - sum(d * m for d, m in points)
    if drop:
        points.append((1, drop))  # the point at infinity
    doubles = [pt for pt in points if pt[1] == 2]
    simples = [pt for pt in points if pt[1] == 1]
    if (
        len(doubles) == 1
        and doubles[0][0] == 1
        and len(doubles) + len(simples) == len(points)
        and sum(d for d, _ in simples) == 2
    ):
        return True
    return False


# ---------------------------------------------------------------------------
# Hensel lifting
# ---------------------------------------------------------------------------


def poly_residues(f: PolyQ, p: int, k: int) -> list[int]:
    """Coefficients of f as residues mod p^k (denominators must be p-units)."""
    pk = p**k
    out = []
    for c in f.coeffs:
        if c.denominator % p == 0:
            raise InputError(f"coefficient {c} is not {p}-integral")
        out.append(c.numerator * pow(c.denominator, -1, pk) % pk)
    return out


def _eval_mod(coeffs: Sequence[int], x: int, m: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % m
    return acc


def hensel_lift_simple_roots(f: PolyQ, p: int, k: int) -> list[PadicApprox]:
    """One approximation per simple root of f mod p, lifted to mod p^k by Newton."""
    if k < 1:
        raise InputError("precision must be >= 1")
    _require_p_integral(f, p)
    fk = poly_residues(f, p, k)
    dk = [i * c for i, c in enumerate(fk)][1:]
    fbar = PolyFp(p, fk)
    if fbar.is_zero:
        return []
    out = []
    for r in range(p):
        if fbar(r) != 0:
            continue
        if _eval_mod(dk, r, p) % p == 0:
            continue  # multiple root: not lifted
        x, prec = r, 1
        while prec < k:
            prec = min(2 * prec, k)
            m = p**prec
            fx = _eval_mod(fk, x, m)
            dfx = _eval_mod(dk, x, m)
            x = (x - fx * pow(dfx, -1, m)) % m
        out.append(PadicApprox(p, k, x))
    out.sort(key=lambda a: a.value % p)
    return out


def _fp_bezout(a: PolyFp, b: PolyFp) -> tuple[PolyFp, PolyFp]:
    """(u, v) with u*a + v*b = 1 for coprime a, b over F_p."""
    p = a.p
    r0, r1 = a, b
    u0, u1 = PolyFp(p, [1]), PolyFp(p, [])
    v0, v1 = PolyFp(p, []), PolyFp(p, [1])
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if r0.degree != 0:
        raise InputError("polynomials are not coprime")
    inv = pow(r0.coeffs[0], p - 2, p)
    return u0 * inv, v0 * inv


def _int_poly_mul(a: Sequence[int], b: Sequence[int], m: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % m
    return out


def hensel_lift_factor(f: PolyQ, h0: PolyFp, p: int, k: int) -> list[int]:
    """Lift a monic factor h0 of f mod p, coprime to its cofactor, to mod p^k.

    Returns the integer coefficients (ascending, reduced mod p^k) of the
    monic lift h with h dividing f mod p^k.
    """
    fbar = PolyFp(p, poly_residues(f, p, 1))
    if not (fbar % h0).is_zero:
        raise InputError("h0 does not divide f mod p")
    g0 = fbar // h0
    if fp_gcd(h0, g0).degree != 0:
        raise InputError("factor is not coprime to its cofactor")
    u, v = _fp_bezout(g0, h0)  # u*g0 + v*h0 = 1
    pk = p**k
    fk = poly_residues(f, p, k)
    h = list(h0.coeffs)
    g = list(g0.coeffs)
    for i in range(1, k):
        pi = p**i
        gh = _int_poly_mul(g, h, pk)
        gh += [0] * (len(fk) - len(gh))
        diff = [(fc - ghc) % pk for fc, ghc in zip(fk, gh)]
        if any(c % pi for c in diff):
            raise ContractViolation("Hensel step lost divisibility")
        d = PolyFp(p, [c // pi for c in diff])
        bq, b = divmod(d * u, h0)
        a = d * v + bq * g0
        if a.degree >= g0.degree:
            raise ContractViolation("cofactor correction degree too large")
        for idx, c in enumerate(b.coeffs):
            h[idx] = (h[idx] + pi * c) % pk
        g += [0] * max(0, a.degree + 1 - len(g))
        for idx, c in enumerate(a.coeffs):
            g[idx] = (g[idx] + pi * c) % pk
    return [c % pk for c in h]


# ---------------------------------------------------------------------------
# lambda conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaElement:
    """lambda = a(theta) in L = Q[x]/(f), represented by a of degree < deg f."""

    poly: PolyQ

    def __post_init__(self):
        if self.poly.is_zero:
            raise InputError("lambda must be nonzero")

    def normalized_at(self, p: int) -> PolyQ:
        """Scale by a rational so all coefficients are p-integral with unit content.

        Scaling lambda by a nonzero rational does not change either lambda
        condition, so tests at p may use this representative freely.
        """
        v = min(valuation(c, p) for c in self.poly.coeffs if c != 0)
        scaled = self.poly * Fraction(1, p) ** v
        ints, _ = scaled.cleared()
        return PolyQ(ints)


def _resultant_valuation(
    h_int: Sequence[int], a: PolyQ, p: int, k: int
) -> int | None:
    """val_p Res(h, a) for h known mod p^k; None when >= k (undetermined)."""
    h = PolyQ(list(h_int))
    r = resultant(h, a)
    if r == 0:
        return None
    v = valuation(r, p)
    return v if v < k else None


def lambda_parity_condition(f: PolyQ, lam: LambdaElement, p: int) -> bool | None:
    """Existence of r in Q* making val(lambda * r) even at every completion above p.

    Requires nodal reduction of f at p.  The double root contributes one
    ramified quadratic completion (e = 2, residue degree 1); each simple
    factor of degree d contributes an unramified completion with residue
    degree d.  The condition holds iff the ramified valuation is even and all
    unramified valuations share one parity.  Returns None when the precision
    ladder cannot determine some valuation.
    """
    rt = reduction_type(f, p)
    if rt.classification != "node":
        raise PreconditionError(f"reduction at {p} is {rt.classification}, not node")
    a = lam.normalized_at(p)
    if a.degree >= f.degree:
        raise InputError("lambda representative must have degree < deg f")
    fac = factor_mod_p(f, p)
    double = next(g for g, m in fac.factors if m == 2)
    simples = [g for g, m in fac.factors if m == 1]
    ram_factor = double * double
    for k in PRECISION_LADDER:
        vals: list[int] = []
        determined = True
        h_ram = hensel_lift_factor(f, ram_factor, p, k)
        v_ram = _resultant_valuation(h_ram, a, p, k)
        if v_ram is None:
            determined = False
        for g in simples:
            h = hensel_lift_factor(f, g, p, k)
            v = _resultant_valuation(h, a, p, k)
            if v is None:
                determined = False
                break
            if v % g.degree:
                raise ContractViolation("norm valuation not divisible by residue degree")
            vals.append(v // g.degree)
        if determined:
            return v_ram % 2 == 0 and len(set(v % 2 for v in vals)) <= 1
    return None


@dataclass(frozen=True)
class LambdaClassResult:
    """Outcome of the nontriviality search for the class of lambda.

    'certified_nontrivial' comes with a split witness prime and the quadratic
    characters of lambda at the five root completions; 'undecided' reports how
    many totally split primes were examined without finding mixed characters
    (many consistent split primes suggest, but never prove, a trivial class).
    """

    status: str
    witness_prime: int | None = None
    characters: tuple[int, ...] = ()
    split_primes_examined: int = 0


def lambda_nontrivial_class(
    f: PolyQ, lam: LambdaElement, prime_budget: int
) -> LambdaClassResult:
    """One-sided certifier that lambda is not a rational multiple of a square in L.

    Searches totally split primes q where lambda is a unit at all five root
    completions; mixed quadratic residue characters of a(r_1), ..., a(r_5)
    certify nontriviality, because multiplying by c*z^2 scales every
    character by the same chi(c).  Never certifies triviality.
    """
    if f.degree != 5 or not f.is_monic:
        raise InputError("expected a monic quintic")
    disc = discriminant(f)
    if disc == 0:
        raise InputError("quintic is not separable")
    split_seen = 0
    for q in primes_up_to(prime_budget):
        if q == 2:
            continue
        if any(c.denominator % q == 0 for c in f.coeffs):
            continue
        if valuation(disc, q) != 0:
            continue
        a = lam.normalized_at(q)
        if any(c.denominator % q == 0 for c in a.coeffs):
            continue
        fbar = PolyFp(q, poly_residues(f, q, 1))
        # totally split iff x^q = x mod f (five distinct linear factors)
        xq = PolyFp(q, [0, 1]).pow_mod(q, fbar)
        if xq != PolyFp(q, [0, 1]):
            continue
        roots = [r for r, _ in _linear_roots(fbar)]
        if len(roots) != 5:
            continue
        split_seen += 1
        values = [_eval_mod(poly_residues(a, q, 1), r, q) for r in roots]
        if any(v == 0 for v in values):
            continue  # lambda is not a unit at some completion over q
        chars = tuple(legendre(v, q) for v in values)
        if len(set(chars)) > 1:
            return LambdaClassResult(
                "certified_nontrivial", q, chars, split_primes_examined=split_seen
            )
    return LambdaClassResult("undecided", split_primes_examined=split_seen)


def _linear_roots(fbar: PolyFp) -> list[tuple[int, int]]:
    """(root, multiplicity) pairs of the linear factors of fbar."""
    out = []
    for g, m in factor_mod_p(PolyQ(list(fbar.coeffs)), fbar.p).factors:
        if g.degree == 1:
            out.append(((-g.coeffs[0]) % fbar.p, m))
    return out
