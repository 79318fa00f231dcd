"""Kummer surface equations.

Two models are constructed here:

* the product model z^2 = g1(x) g2(y) attached to a pair of quartics;
* the intersection of three quadrics in P^5 attached to a monic quintic f
  and a unit lambda = a(theta) of L = Q[x]/(f).

Coordinate order for the quadric model, relied on by every consumer: the six
projective variables are (c0, c1, c2, c3, c4, d), where u = sum c_i theta^i
runs over the power basis of L and d is the extra scalar variable.  Gram
entry (i, j) of the e-th quadric (e = 0, 1, 2) is Tr(lambda theta^(e+i+j) / f'(theta));
the third quadric additionally carries -N(lambda) at position (5, 5).  All
cross terms between the c-block and d vanish.

Traces and the norm are computed from multiplication operators on Q[x]/(f),
never from numerical roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .exact import (
    PolyQ,
    Rational,
    discriminant,
    is_irreducible,
    matrix_det,
    multiplication_matrix,
    poly_invmod,
    trace_powers,
)


@dataclass(frozen=True)
class QuadricForm:
    """Symmetric 6x6 rational Gram matrix; Q(v) = v^T A v."""

    gram: tuple[tuple[Rational, ...], ...]

    def __post_init__(self):
        if len(self.gram) != 6 or any(len(r) != 6 for r in self.gram):
            raise InputError("Gram matrix must be 6x6")
        for i in range(6):
            for j in range(6):
                if self.gram[i][j] != self.gram[j][i]:
                    raise InputError("Gram matrix must be symmetric")

    def __call__(self, v: Sequence[Rational]) -> Rational:
        acc = Fraction(0)
        for i in range(6):
            if v[i]:
                acc += v[i] * sum(self.gram[i][j] * v[j] for j in range(6))
        return acc

    def restrict(self, basis: Sequence[Sequence[Rational]]) -> list[list[Rational]]:
        """Gram matrix of the restriction to the span of the given vectors."""
        k = len(basis)
        out = []
        for a in range(k):
            row = []
            for b in range(k):
                row.append(
                    sum(
                        basis[a][i] * self.gram[i][j] * basis[b][j]
                        for i in range(6)
                        for j in range(6)
                    )
                )
            out.append(row)
        return out


@dataclass(frozen=True)
class ResolventData:
    """Resolvent data of a quartic a x^4 + b x^3 + c x^2 + d x + e.

    invariant_i = 12ae - 3bd + c^2 and
    invariant_j = 72ace + 9bcd - 27ad^2 - 27eb^2 - 2c^3 are the classical
    weight-2 and weight-3 invariants.  Two cubics are carried:

    * ``cubic``: z^3 - c z^2 + (bd - 4ae) z - (b^2 e + a d^2 - 4ace), whose
      roots are a*(pair products of roots) and whose discriminant equals the
      discriminant of the quartic exactly;
    * ``jacobian_cubic``: t^3 - 27*I*t - 27*J, the right-hand side of the
      Weierstrass model of the quartic's Jacobian.  Its roots are an affine
      rescaling (t = 9z - 3c) of the roots of ``cubic``, so both generate the
      same splitting field, but its discriminant is 3^12 times larger.
    """

    invariant_i: Rational
    invariant_j: Rational
    cubic: PolyQ
    jacobian_cubic: PolyQ


def resolvent_cubic(g: PolyQ) -> ResolventData:
    if g.degree != 4:
        raise InputError("resolvent cubic requires a quartic")
    a, b, c, d, e = g[4], g[3], g[2], g[1], g[0]
    inv_i = 12 * a * e - 3 * b * d + c * c
    inv_j = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c**3
    cubic = PolyQ([-(b * b * e + a * d * d - 4 * a * c * e), b * d - 4 * a * e, -c, 1])
    jac = PolyQ([-27 * inv_j, -27 * inv_i, 0, 1])
    return ResolventData(inv_i, inv_j, cubic, jac)


@dataclass(frozen=True)
class ProductKummerSurface:
    """The affine model z^2 = g1(x) g2(y) for a pair of quartics."""

    g1: PolyQ
    g2: PolyQ

    def __post_init__(self):
        if self.g1.degree != 4 or self.g2.degree != 4:
            raise InputError("both polynomials must have degree exactly 4")

    def evaluate(self, x: Rational, y: Rational) -> Rational:
        return self.g1(x) * self.g2(y)


def product_surface(g1: PolyQ, g2: PolyQ) -> ProductKummerSurface:
    return ProductKummerSurface(g1, g2)


@dataclass(frozen=True)
class QuadricKummerSurface:
    """Intersection of three quadrics in P^5 attached to (f, lambda)."""

    q1: QuadricForm
    q2: QuadricForm
    q3: QuadricForm
    f: PolyQ
    lam: PolyQ
    norm_lambda: Rational

    @property
    def quadrics(self) -> tuple[QuadricForm, QuadricForm, QuadricForm]:
        return (self.q1, self.q2, self.q3)


def field_norm(a: PolyQ, f: PolyQ) -> Rational:
    """Norm of a(theta) in Q[x]/(f) as the determinant of its multiplication operator."""
    return matrix_det(multiplication_matrix(a, f))


def kummer_quadrics(f: PolyQ, lam: PolyQ) -> QuadricKummerSurface:
    """Build the three quadrics for a monic irreducible quintic f and lambda = lam(theta).

    Gram entries are traces of multiplication operators: with
    beta = lambda / f'(theta) reduced mod f, entry (i, j) of quadric e is
    Tr(theta^(e+i+j) beta), assembled from power-sum traces of f.
    """
    if f.degree != 5 or not f.is_monic:
        raise InputError("expected a monic quintic")
    if discriminant(f) == 0:
        raise InputError("quintic must be separable")
    if not is_irreducible(f):
        raise InputError("quintic must be irreducible")
    lam = lam % f
    if lam.is_zero:
        raise InputError("lambda must be nonzero")

    beta = (lam * poly_invmod(f.derivative(), f)) % f
    power_traces = trace_powers(f, 15)

    def trace_theta_pow_beta(k: int) -> Rational:
        # Tr(theta^k * beta) expanded on the power basis
        return sum(
            (beta[m] * power_traces[k + m] for m in range(5)),
            Fraction(0),
        )

    c = [trace_theta_pow_beta(k) for k in range(11)]

    def gram(e: int, corner: Rational) -> QuadricForm:
        rows = []
        for i in range(6):
            row = []
            for j in range(6):
                if i < 5 and j < 5:
                    row.append(c[e + i + j])
                elif i == 5 and j == 5:
                    row.append(corner)
                else:
                    row.append(Fraction(0))
            rows.append(tuple(row))
        return QuadricForm(tuple(rows))

    norm = field_norm(lam, f)
    return QuadricKummerSurface(
        q1=gram(0, Fraction(0)),
        q2=gram(1, Fraction(0)),
        q3=gram(2, -norm),
        f=f,
        lam=lam,
        norm_lambda=norm,
    )


def line_restriction(surface: QuadricKummerSurface) -> list[list[list[Rational]]]:
    """Restrict all three quadrics to the plane u = r + s theta, u0 = s.

    Returns the three 2x2 Gram matrices in the parameters (r, s); for
    lambda = 1 all of them vanish identically, which is the statement that
    the surface contains that projective line.
    """
    r_dir = [Fraction(1), 0, 0, 0, 0, Fraction(0)]
    s_dir = [Fraction(0), 1, 0, 0, 0, Fraction(1)]
    return [q.restrict([r_dir, s_dir]) for q in surface.quadrics]
