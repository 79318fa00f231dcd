"""F2 modules over permutation groups and finite-model torsor machinery.

Vectors over F2 are int bitmasks; a matrix is a tuple of row masks, so that
bit r of (A v) is the parity of A[r] & v.  First cohomology is computed from
cocycle values on generators constrained by every edge of the Cayley graph:
a function c with c(u s) = c(u) + u c(s) for all u and all generators s is a
cocycle (induction on word length), so the harvested linear system cuts out
Z^1 exactly while keeping only #generators * dim unknowns.  A full-table
method is deliberately not used here; tests retain one as an oracle.

The finite torsor models are semidirect products M^n x| G carrying a tuple of
1-cocycles with values in M.  On such a model the package checks, entirely by
linear algebra and finite enumeration: independence of cocycle classes and
its four equivalent reformulations, lifting of group elements with prescribed
restriction classes, the normal-subgroup dichotomy for M^n x| G, absence of
quadratic subextensions below the torsor field, and invariance of the
abelianization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import ContractViolation, InputError, PreconditionError, ResourceError
from .permgrp import Perm, PermGroup, product_group, symmetric_group

MAX_GROUP_ORDER = 10_000

# ---------------------------------------------------------------------------
# F2 linear algebra on bitmasks
# ---------------------------------------------------------------------------


def mat_identity(d: int) -> tuple[int, ...]:
    return tuple(1 << r for r in range(d))


def mat_apply(rows: Sequence[int], v: int) -> int:
    out = 0
    for r, row in enumerate(rows):
        if (row & v).bit_count() & 1:
            out |= 1 << r
    return out


def mat_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    # row r of A*B is the XOR of the rows of B selected by row r of A
    out = []
    for ra in a:
        acc = 0
        k = 0
        while ra:
            if ra & 1:
                acc ^= b[k]
            ra >>= 1
            k += 1
        out.append(acc)
    return tuple(out)


def mat_add_identity(rows: Sequence[int]) -> tuple[int, ...]:
    return tuple(row ^ (1 << r) for r, row in enumerate(rows))


def mat_transpose(rows: Sequence[int], width: int) -> tuple[int, ...]:
    return tuple(
        sum(((rows[r] >> c) & 1) << r for r in range(len(rows))) for c in range(width)
    )


class Eliminator:
    """Incremental Gaussian elimination over F2 on row bitmasks."""

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}

    def reduce(self, row: int) -> int:
        while row:
            b = row.bit_length() - 1
            if b in self.pivots:
                row ^= self.pivots[b]
            else:
                return row
        return 0

    def add(self, row: int) -> bool:
        """Insert a row; True if it increased the rank."""
        row = self.reduce(row)
        if row:
            self.pivots[row.bit_length() - 1] = row
            return True
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)


def mat_rank(rows: Iterable[int]) -> int:
    e = Eliminator()
    for r in rows:
        e.add(r)
    return e.rank


def solve_affine(rows: Sequence[int], rhs: Sequence[int], width: int) -> int | None:
    """One solution x (bitmask of `width` unknowns) of rows[i] . x = rhs[i], or None.

    The right-hand side rides in bit 0 so pivots always land on unknowns;
    a reduced row equal to 1 is the contradiction 0 = 1.
    """
    elim = Eliminator()
    for row, b in zip(rows, rhs):
        reduced = elim.reduce((row << 1) | b)
        if reduced == 1:
            return None
        if reduced:
            elim.pivots[reduced.bit_length() - 1] = reduced
    x = 0
    # each pivot row has all other bits strictly below its pivot, so ascending
    # pivot order is valid back-substitution with free variables at zero
    for b in sorted(elim.pivots):
        row = elim.pivots[b]
        need = (row & 1) ^ (((row >> 1) & x).bit_count() & 1)
        if need:
            x |= 1 << (b - 1)
    for row, b in zip(rows, rhs):
        if ((row & x).bit_count() & 1) != b:
            raise ContractViolation("affine solve produced a non-solution")
    return x


def span_basis(vectors: Iterable[int]) -> list[int]:
    elim = Eliminator()
    for v in vectors:
        elim.add(v)
    return sorted(elim.pivots.values(), reverse=True)


def in_span(basis_elim: Eliminator, v: int) -> bool:
    return basis_elim.reduce(v) == 0


def nullspace_basis(rows: Sequence[int], width: int) -> list[int]:
    """Basis of the solution space of rows . x = 0 over F2."""
    elim = Eliminator()
    for r in rows:
        elim.add(r)
    pivots = dict(elim.pivots)  # bit -> row
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        x = 1 << fc
        for b in sorted(pivots, reverse=False):
            row = pivots[b]
            if (row & x).bit_count() & 1:
                x ^= 1 << b
        basis.append(x)
    return basis


# ---------------------------------------------------------------------------
# G-modules over F2
# ---------------------------------------------------------------------------


class F2GModule:
    """F2 vector space with a G-action given by one matrix per group generator.

    The full map G -> GL_d(F2) is built by closure and checked for
    consistency: reaching the same group element along two generator words
    must give the same matrix, otherwise the generator matrices violate the
    group relations and construction fails.
    """

    def __init__(self, group: PermGroup, dim: int, gen_matrices: Sequence[Sequence[int]]):
        if len(gen_matrices) != len(group.generators):
            raise InputError("one action matrix per group generator required")
        self.group = group
        self.dim = dim
        self.gen_matrices = tuple(tuple(m) for m in gen_matrices)
        self._table: dict[Perm, tuple[int, ...]] = {}
        self._build_table()

    def _build_table(self) -> None:
        ident = self.group.identity
        table = {ident: mat_identity(self.dim)}
        frontier = [ident]
        while frontier:
            nxt = []
            for u in frontier:
                mu = table[u]
                for s, ms in zip(self.group.generators, self.gen_matrices):
                    w = u * s
                    mw = mat_mul(mu, ms)
                    if w in table:
                        if table[w] != mw:
                            raise ContractViolation(
                                "generator matrices do not satisfy the group relations"
                            )
                    else:
                        table[w] = mw
                        nxt.append(w)
            frontier = nxt
        if len(table) != self.group.order:
            raise ContractViolation("action table does not cover the group")
        self._table = table

    def rows_of(self, g: Perm) -> tuple[int, ...]:
        return self._table[g]

    def act(self, g: Perm, v: int) -> int:
        return mat_apply(self._table[g], v)

    def is_faithful(self) -> bool:
        return len(set(self._table.values())) == self.group.order

    def vectors(self) -> range:
        return range(1 << self.dim)


def zero_sum_module(m: int) -> F2GModule:
    """Kernel of the coordinate sum on (F2)^m under S_m, for odd m >= 3.

    Basis: b_i = e_i + e_(m-1) for i < m-1; a permutation sends b_i to
    b_(s(i)) + b_(s(m-1)) with the convention b_(m-1) = 0.
    """
    if m < 3 or m % 2 == 0:
        raise InputError("zero-sum module requires odd m >= 3")
    group = symmetric_group(m)
    d = m - 1
    mats = []
    for s in group.generators:
        cols = []
        for i in range(d):
            v = 0
            if s(i) < d:
                v ^= 1 << s(i)
            if s(m - 1) < d:
                v ^= 1 << s(m - 1)
            cols.append(v)
        mats.append(mat_transpose(tuple(cols), d))
    return F2GModule(group, d, mats)


def permutation_module(m: int) -> F2GModule:
    """(F2)^m with S_m permuting coordinates."""
    group = symmetric_group(m)
    mats = []
    for s in group.generators:
        cols = [1 << s(i) for i in range(m)]
        mats.append(mat_transpose(tuple(cols), m))
    return F2GModule(group, m, mats)


def trivial_module(dim: int) -> F2GModule:
    group = symmetric_group(1)
    return F2GModule(group, dim, [mat_identity(dim)])


def module_power(mod: F2GModule, n: int) -> F2GModule:
    """Direct sum of n copies of the module with the diagonal action."""
    d = mod.dim
    mats = []
    for m in mod.gen_matrices:
        rows = []
        for t in range(n):
            rows.extend(row << (t * d) for row in m)
        mats.append(tuple(rows))
    return F2GModule(mod.group, n * d, mats)


def module_direct_sum(m1: F2GModule, m2: F2GModule) -> tuple[F2GModule, PermGroup]:
    """M1 + M2 over the product of their groups acting factor-wise."""
    group = product_group(m1.group, m2.group)
    d1, d2 = m1.dim, m2.dim
    mats = []
    for g1 in m1.gen_matrices:
        rows = list(g1) + [row << d1 for row in mat_identity(d2)]
        mats.append(tuple(rows))
    for g2 in m2.gen_matrices:
        rows = list(mat_identity(d1)) + [row << d1 for row in g2]
        mats.append(tuple(rows))
    return F2GModule(group, d1 + d2, mats), group


# ---------------------------------------------------------------------------
# module conditions
# ---------------------------------------------------------------------------


def is_simple(mod: F2GModule) -> bool:
    """True iff every nonzero vector generates the whole module."""
    if mod.dim < 1:
        raise InputError("module must have dimension >= 1")
    gens = [mod.rows_of(s) for s in mod.group.generators]
    for v in range(1, 1 << mod.dim):
        elim = Eliminator()
        elim.add(v)
        queue = [v]
        while queue:
            w = queue.pop()
            for m in gens:
                u = mat_apply(m, w)
                red = elim.reduce(u)
                if red:
                    elim.add(red)
                    queue.append(red)
        if elim.rank < mod.dim:
            return False
    return True


def endomorphism_dim(mod: F2GModule) -> int:
    """F2-dimension of the matrices commuting with the whole action."""
    d = mod.dim
    rows = []
    for a in mod.gen_matrices:
        at = mat_transpose(a, d)
        for i in range(d):
            for j in range(d):
                # sum_k X[i][k] A[k][j] + A[i][k] X[k][j] = 0
                row = 0
                for k in range(d):
                    if (at[j] >> k) & 1:  # A[k][j]
                        row ^= 1 << (i * d + k)
                    if (a[i] >> k) & 1:  # A[i][k]
                        row ^= 1 << (k * d + j)
                if row:
                    rows.append(row)
    return d * d - mat_rank(rows)


def coinvariant_dim(mod: F2GModule, g: Perm) -> int:
    """dim M/(g-1) = dim M - rank(action(g) - 1)."""
    if g not in mod.group:
        raise InputError("element is not in the acting group")
    return mod.dim - mat_rank(mat_add_identity(mod.rows_of(g)))


def local_h1_dim(mod: F2GModule, frob: Perm) -> int:
    """2 * dim M/(Frob-1): the local H^1 dimension at a good prime."""
    c = coinvariant_dim(mod, frob)
    kernel = mod.dim - mat_rank(mat_add_identity(mod.rows_of(frob)))
    if kernel != c:
        raise ContractViolation("dim ker(frob-1) != dim coker(frob-1)")
    return 2 * c


# ---------------------------------------------------------------------------
# generic cocycle systems over a finite group
# ---------------------------------------------------------------------------


@dataclass
class CocycleSystem:
    """Cayley-graph constraint system for 1-cocycles with generator values unknown."""

    n_unknowns: int
    constraints: list[int]
    symbolic: dict  # element -> tuple of d masks over the unknowns
    gens: tuple
    d: int

    def z1_dim(self) -> int:
        return self.n_unknowns - mat_rank(self.constraints)

    def b1_dim(self, gen_act_rows: Sequence[Sequence[int]]) -> int:
        # coboundary of basis vector e_c has value (A_s + 1)e_c on generator s
        d = self.d
        rows = []
        for c in range(d):
            img = 0
            for gi, a in enumerate(gen_act_rows):
                col = mat_apply(mat_add_identity(a), 1 << c)
                img |= col << (gi * d)
            rows.append(img)
        return mat_rank(rows)


def build_cocycle_system(
    elements: Sequence,
    identity,
    mul: Callable,
    gens: Sequence,
    act_rows_of: Callable,
    d: int,
) -> CocycleSystem:
    """Harvest all Cayley-edge constraints c(u s) = c(u) + u c(s).

    Unknowns are the d bits of c(s) for each generator s.  The symbolic value
    of c at each element is a tuple of d linear forms over the unknowns.
    """
    n_unk = len(gens) * d
    sym = {identity: (0,) * d}
    order = [identity]
    constraints: list[int] = []
    qi = 0
    while qi < len(order):
        u = order[qi]
        qi += 1
        au = act_rows_of(u)
        su = sym[u]
        for gi, s in enumerate(gens):
            w = mul(u, s)
            shift = gi * d
            val = tuple(su[r] ^ (au[r] << shift) for r in range(d))
            known = sym.get(w)
            if known is None:
                sym[w] = val
                order.append(w)
            else:
                for r in range(d):
                    diff = known[r] ^ val[r]
                    if diff:
                        constraints.append(diff)
    if len(sym) != len(elements):
        raise ContractViolation("generators do not generate the group")
    return CocycleSystem(n_unk, constraints, sym, tuple(gens), d)


def h1_dim(group: PermGroup, mod: F2GModule) -> int:
    """dim H^1(G, M) from generator cocycles constrained by Cayley cycles."""
    if group.order > MAX_GROUP_ORDER:
        raise ResourceError(f"group order {group.order} exceeds {MAX_GROUP_ORDER}")
    if group is not mod.group and group.elements != mod.group.elements:
        raise InputError("module is not a module over the given group")
    system = build_cocycle_system(
        group.elements,
        group.identity,
        lambda a, b: a * b,
        group.generators,
        mod.rows_of,
        mod.dim,
    )
    b1 = system.b1_dim([mod.rows_of(s) for s in group.generators])
    return system.z1_dim() - b1


def module_condition_report(mod: F2GModule) -> dict:
    """The four module conditions for one module, plus the evidence elements.

    Returns simplicity, endomorphism dimension, H^1 over the acting group,
    and cycle witnesses g (coinvariants F2) and h (coinvariants 0) when they
    exist among the group elements.
    """
    group = mod.group
    g_witness = None
    h_witness = None
    for g in group:
        c = coinvariant_dim(mod, g)
        if c == 1 and g_witness is None:
            g_witness = g
        if c == 0 and h_witness is None:
            h_witness = g
        if g_witness is not None and h_witness is not None:
            break
    return {
        "simple": is_simple(mod),
        "endomorphism_dim": endomorphism_dim(mod),
        "h1_dim": h1_dim(group, mod),
        "coinvariant_one_witness": g_witness,
        "coinvariant_zero_witness": h_witness,
    }


# ---------------------------------------------------------------------------
# semidirect products M^n x| G
# ---------------------------------------------------------------------------


class SemidirectGroup:
    """M x| G with explicit elements (vec bitmask, Perm).

    blocks records the factor structure of the module part as (offset, dim)
    slices.  elements may be the full product or a subgroup of it.
    """

    def __init__(
        self,
        module: F2GModule,
        group: PermGroup,
        blocks: Sequence[tuple[int, int]],
        elements: Sequence[tuple[int, Perm]],
        generators: Sequence[tuple[int, Perm]],
    ) -> None:
        self.module = module
        self.group = group
        self.blocks = tuple(blocks)
        self.elements = tuple(elements)
        self.generators = tuple(generators)
        self.identity = (0, group.identity)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: tuple[int, Perm], b: tuple[int, Perm]) -> tuple[int, Perm]:
        return (a[0] ^ self.module.act(a[1], b[0]), a[1] * b[1])

    def inv(self, a: tuple[int, Perm]) -> tuple[int, Perm]:
        gi = a[1].inverse()
        return (self.module.act(gi, a[0]), gi)

    def conj(self, a, x):
        return self.mul(self.mul(a, x), self.inv(a))

    def block_of(self, vec: int, t: int) -> int:
        off, d = self.blocks[t]
        return (vec >> off) & ((1 << d) - 1)

    def zero_section(self) -> list[tuple[int, Perm]]:
        return [(0, g) for g in self.group]

    def module_part(self) -> list[tuple[int, Perm]]:
        ident = self.group.identity
        return [x for x in self.elements if x[1] == ident]


def semidirect_product(module: F2GModule, n: int = 1) -> SemidirectGroup:
    """Full semidirect product M^n x| G for a module M over G."""
    group = module.group
    power = module_power(module, n) if n > 1 else module
    d = module.dim
    blocks = [(t * d, d) for t in range(n)]
    elements = [(v, g) for g in group for v in range(1 << (n * d))]
    gens = [(0, s) for s in group.generators]
    # one staggered module generator usually suffices; fall back to the basis
    stagger = 0
    for t in range(n):
        stagger |= 1 << (t * d + (t % d))
    if _module_span_under_group(power, stagger) == (1 << (n * d)) - 1:
        gens.append((stagger, group.identity))
    else:
        gens.extend((1 << k, group.identity) for k in range(n * d))
    return SemidirectGroup(power, group, blocks, elements, gens)


def _module_span_under_group(mod: F2GModule, v: int) -> int:
    """Bitmask test helper: returns a full-space marker via span dimension."""
    elim = Eliminator()
    queue = [v]
    elim.add(v)
    gens = [mod.rows_of(s) for s in mod.group.generators]
    while queue:
        w = queue.pop()
        for m in gens:
            u = elim.reduce(mat_apply(m, w))
            if u:
                elim.add(u)
                queue.append(u)
    return (1 << mod.dim) - 1 if elim.rank == mod.dim else 0


def subgroup_closure(
    seed: Iterable, mul: Callable, identity, limit: int | None = None
) -> set:
    """BFS closure of a subset under multiplication (finite group, so inverses come free).

    Large seeds are handled by generating with a small working subset and
    re-expanding only if some seed element is left outside.
    """
    seed = [x for x in seed if x != identity]
    gens = seed[:8]
    while True:
        out = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for u in frontier:
                for s in gens:
                    w = mul(u, s)
                    if w not in out:
                        out.add(w)
                        nxt.append(w)
                        if limit is not None and len(out) > limit:
                            raise ResourceError("subgroup closure exceeded limit")
            frontier = nxt
        missing = next((x for x in seed if x not in out), None)
        if missing is None:
            return out
        gens.append(missing)


# ---------------------------------------------------------------------------
# cocycles on a finite model
# ---------------------------------------------------------------------------


class Cocycle:
    """1-cochain on a SemidirectGroup with values in the base module M.

    Verification checks c(u s) = c(u) + u c(s) on every Cayley edge, which is
    equivalent to the full-table condition c(gh) = c(g) + g c(h) by induction
    on the word length of h.
    """

    def __init__(self, model: SemidirectGroup, base: F2GModule, values: dict, verify: bool = True):
        self.model = model
        self.base = base
        self.values = values
        if verify:
            self.verify_edges()

    def __call__(self, x: tuple[int, Perm]) -> int:
        return self.values[x]

    def verify_edges(self) -> None:
        act = self.base.rows_of
        mul = self.model.mul
        for u in self.model.elements:
            cu = self.values[u]
            au = act(u[1])
            for s in self.model.generators:
                w = mul(u, s)
                if self.values[w] != cu ^ mat_apply(au, self.values[s]):
                    raise ContractViolation("cochain is not a cocycle")

    def verify_full_table(self) -> None:
        """Quadratic-cost literal check of the cocycle identity on all pairs."""
        act = self.base.rows_of
        mul = self.model.mul
        for u in self.model.elements:
            cu = self.values[u]
            au = act(u[1])
            for w in self.model.elements:
                if self.values[mul(u, w)] != cu ^ mat_apply(au, self.values[w]):
                    raise ContractViolation("cochain is not a cocycle")

    def is_coboundary(self) -> bool:
        """Solvability of c(s) = (phi(s) - 1) m on the generators of the model."""
        d = self.base.dim
        rows: list[int] = []
        rhs: list[int] = []
        for s in self.model.generators:
            a1 = mat_add_identity(self.base.rows_of(s[1]))
            val = self.values[s]
            for r in range(d):
                rows.append(a1[r])
                rhs.append((val >> r) & 1)
        return solve_affine(rows, rhs, d) is not None

    @staticmethod
    def projection(model: SemidirectGroup, base: F2GModule, t: int) -> "Cocycle":
        values = {x: model.block_of(x[0], t) for x in model.elements}
        return Cocycle(model, base, values)

    @staticmethod
    def zero(model: SemidirectGroup, base: F2GModule) -> "Cocycle":
        return Cocycle(model, base, {x: 0 for x in model.elements}, verify=False)

    def __add__(self, other: "Cocycle") -> "Cocycle":
        values = {x: self.values[x] ^ other.values[x] for x in self.model.elements}
        return Cocycle(self.model, self.base, values, verify=False)

    @staticmethod
    def coboundary(model: SemidirectGroup, base: F2GModule, m: int) -> "Cocycle":
        values = {
            x: mat_apply(mat_add_identity(base.rows_of(x[1])), m) for x in model.elements
        }
        return Cocycle(model, base, values, verify=False)


@dataclass
class TorsorModel:
    """A finite model: the group M^n x| G together with n designated cocycles."""

    group: SemidirectGroup
    base: F2GModule
    cocycles: tuple[Cocycle, ...]

    @property
    def n(self) -> int:
        return len(self.cocycles)


def tautological_model(base: F2GModule, n: int) -> TorsorModel:
    """M^n x| G with the n coordinate-projection cocycles."""
    sd = semidirect_product(base, n)
    cocycles = tuple(Cocycle.projection(sd, base, t) for t in range(n))
    return TorsorModel(sd, base, cocycles)


def twisted_model(base: F2GModule, matrix: Sequence[int], shifts: Sequence[int]) -> TorsorModel:
    """Cocycles c_t = sum_j matrix[t] bit j * proj_j + coboundary(shifts[t]).

    Classes are independent exactly when the F2 matrix is invertible; singular
    or zero rows produce the degenerate models used in tests.
    """
    n = len(matrix)
    sd = semidirect_product(base, n)
    cocycles = []
    for t in range(n):
        c = Cocycle.zero(sd, base)
        for j in range(n):
            if (matrix[t] >> j) & 1:
                c = c + Cocycle.projection(sd, base, j)
        if shifts[t]:
            c = c + Cocycle.coboundary(sd, base, shifts[t])
        c.verify_edges()
        cocycles.append(c)
    return TorsorModel(sd, base, cocycles)


# ---------------------------------------------------------------------------
# the five equivalent conditions on a model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndependenceReport:
    """Joint verdict of the five equivalent conditions on a torsor model.

    classes_independent   -- no nonzero combination of the classes is a coboundary
    classes_form_basis    -- independent and dim H^1(model, M) equals n
    restriction_bijective -- the joint restriction W -> M^n is a G-isomorphism
    embedding_bijective   -- (cocycles, projection) is a group isomorphism onto M^n x| G
    factors_disjoint      -- W maps onto each factor and the kernels intersect trivially
    """

    classes_independent: bool
    classes_form_basis: bool
    restriction_bijective: bool
    embedding_bijective: bool
    factors_disjoint: bool

    def all_equal(self) -> bool:
        vals = (
            self.classes_independent,
            self.classes_form_basis,
            self.restriction_bijective,
            self.embedding_bijective,
            self.factors_disjoint,
        )
        return all(vals) or not any(vals)

    def as_tuple(self) -> tuple[bool, ...]:
        return (
            self.classes_independent,
            self.classes_form_basis,
            self.restriction_bijective,
            self.embedding_bijective,
            self.factors_disjoint,
        )


def _check_model_preconditions(model: TorsorModel) -> None:
    base = model.base
    if not is_simple(base):
        raise PreconditionError("base module must be simple")
    if endomorphism_dim(base) != 1:
        raise PreconditionError("base module must have endomorphism algebra F2")
    if h1_dim(base.group, base) != 0:
        raise PreconditionError("H^1(G, M) must vanish")
    if model.n < 1:
        raise PreconditionError("at least one cocycle required")


def independence_equivalences(model: TorsorModel) -> IndependenceReport:
    """Evaluate the five conditions independently and assert they agree."""
    _check_model_preconditions(model)
    sd = model.group
    base = model.base
    n, d = model.n, base.dim
    big = sd.module.dim  # n*d

    # (i) independence: no nonzero subset-sum of the cocycles is a coboundary
    independent = True
    for mask in range(1, 1 << n):
        combo = Cocycle.zero(sd, base)
        for t in range(n):
            if (mask >> t) & 1:
                combo = combo + model.cocycles[t]
        if combo.is_coboundary():
            independent = False
            break

    # (ii) basis: independence plus dim H^1(model, M) = n
    system = build_cocycle_system(
        sd.elements, sd.identity, sd.mul, sd.generators,
        lambda x: base.rows_of(x[1]), d,
    )
    b1 = system.b1_dim([base.rows_of(s[1]) for s in sd.generators])
    model_h1 = system.z1_dim() - b1
    forms_basis = independent and model_h1 == n

    # (iii) joint restriction to the module part W
    ident = sd.group.identity
    images = []
    for k in range(big):
        w = (1 << k, ident)
        vec = 0
        for t, c in enumerate(model.cocycles):
            vec |= c(w) << (t * d)
        images.append(vec)
    restriction_bijective = mat_rank(images) == big and big == n * d
    if restriction_bijective:
        # G-equivariance of the restriction
        for s in sd.group.generators:
            arows = base.rows_of(s)
            prows = sd.module.rows_of(s)
            for k in range(big):
                lhs_vec = 0
                moved = mat_apply(prows, 1 << k)
                for t, c in enumerate(model.cocycles):
                    lhs_vec |= c((moved, ident)) << (t * d)
                rhs_vec = 0
                for t in range(n):
                    blk = (images[k] >> (t * d)) & ((1 << d) - 1)
                    rhs_vec |= mat_apply(arows, blk) << (t * d)
                if lhs_vec != rhs_vec:
                    restriction_bijective = False
                    break
            if not restriction_bijective:
                break

    # (iv) (cocycles, projection) a bijection of the model onto M^n x| G
    seen = set()
    for x in sd.elements:
        vec = 0
        for t, c in enumerate(model.cocycles):
            vec |= c(x) << (t * d)
        seen.add((vec, x[1]))
    embedding_bijective = len(seen) == sd.order and sd.order == (1 << (n * d)) * sd.group.order

    # (v) each factor map surjective with trivially-intersecting kernels
    total_rank = 0
    joint = Eliminator()
    for t, c in enumerate(model.cocycles):
        rows = [c(((1 << k), ident)) for k in range(big)]
        total_rank += mat_rank(rows)
    for k in range(big):
        vec = 0
        for t, c in enumerate(model.cocycles):
            vec |= c(((1 << k), ident)) << (t * d)
        joint.add(vec)
    factors_disjoint = total_rank == big and joint.rank == big

    report = IndependenceReport(
        independent, forms_basis, restriction_bijective, embedding_bijective, factors_disjoint
    )
    if not report.all_equal():
        raise ContractViolation(f"equivalent conditions disagree: {report}")
    return report


# ---------------------------------------------------------------------------
# lifting with prescribed restriction classes
# ---------------------------------------------------------------------------


def quotient_representatives(base: F2GModule, g: Perm) -> list[int]:
    """One representative per class of M/(g-1), in ascending vector order."""
    img = span_basis(
        mat_apply(mat_add_identity(base.rows_of(g)), 1 << k) for k in range(base.dim)
    )
    elim = Eliminator()
    for b in img:
        elim.add(b)
    reps = []
    seen_keys = set()
    for v in range(1 << base.dim):
        key = elim.reduce(v)
        if key not in seen_keys:
            seen_keys.add(key)
            reps.append(v)
    return reps


def same_class(base: F2GModule, g: Perm, a: int, b: int) -> bool:
    elim = Eliminator()
    for k in range(base.dim):
        elim.add(mat_apply(mat_add_identity(base.rows_of(g)), 1 << k))
    return elim.reduce(a ^ b) == 0


def lift_with_targets(
    model: TorsorModel, g: Perm, targets: Sequence[int]
) -> tuple[int, Perm]:
    """First lift of g in the model whose cocycle values hit the target classes.

    targets[t] is a representative of a class in M/(g-1); the returned element
    gamma projects to g and has cocycle values in those classes.  Failure is a
    contract violation: under the independence conditions a lift always exists.
    """
    if len(targets) != model.n:
        raise InputError("one target class per cocycle required")
    report = independence_equivalences(model)
    if not report.classes_independent:
        raise PreconditionError("model classes are not independent")
    base = model.base
    sd = model.group
    elim = Eliminator()
    for k in range(base.dim):
        elim.add(mat_apply(mat_add_identity(base.rows_of(g)), 1 << k))
    for v in range(1 << sd.module.dim):
        x = (v, g)
        if all(
            elim.reduce(model.cocycles[t](x) ^ targets[t]) == 0 for t in range(model.n)
        ):
            return x
    raise ContractViolation("no lift found although the model satisfies the hypotheses")


# ---------------------------------------------------------------------------
# normal subgroup dichotomy
# ---------------------------------------------------------------------------


def conjugacy_classes(sd: SemidirectGroup) -> list[frozenset]:
    """Conjugacy classes via orbit closure under generator conjugation."""
    classified: set = set()
    classes = []
    for x in sd.elements:
        if x in classified:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for s in sd.generators:
                    z = sd.conj(s, y)
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        classified |= orbit
        classes.append(frozenset(orbit))
    return classes


def normal_subgroups(sd: SemidirectGroup) -> list[frozenset]:
    """All normal subgroups: joins of normal closures of single conjugacy classes."""
    if sd.order > MAX_GROUP_ORDER:
        raise ResourceError(f"group order {sd.order} exceeds {MAX_GROUP_ORDER}")
    classes = conjugacy_classes(sd)
    atoms = set()
    for cls in classes:
        closure_set = subgroup_closure(cls, sd.mul, sd.identity)
        atoms.add(frozenset(closure_set))
    normals = set(atoms)
    normals.add(frozenset({sd.identity}))
    changed = True
    while changed:
        changed = False
        current = list(normals)
        for i in range(len(current)):
            for j in range(i + 1, len(current)):
                a, b = current[i], current[j]
                if a <= b or b <= a:
                    continue
                join = frozenset(subgroup_closure(a | b, sd.mul, sd.identity))
                if join not in normals:
                    normals.add(join)
                    changed = True
    return sorted(normals, key=len)


def normal_subgroup_dichotomy(base: F2GModule, n: int = 1) -> bool:
    """Every normal subgroup of M^n x| G contains M^n or is contained in it.

    Requires M simple and faithful; enumerates all normal subgroups
    exhaustively, so the product order must stay within MAX_GROUP_ORDER.
    """
    if not is_simple(base):
        raise PreconditionError("module must be simple")
    if not base.is_faithful():
        raise PreconditionError("module must be faithful")
    sd = semidirect_product(base, n)
    if sd.order > MAX_GROUP_ORDER:
        raise ResourceError(f"product order {sd.order} exceeds {MAX_GROUP_ORDER}")
    module_set = frozenset(sd.module_part())
    for h in normal_subgroups(sd):
        if not (module_set <= h or h <= module_set):
            return False
    return True


# ---------------------------------------------------------------------------
# torsor field: connectedness and quadratic subextensions
# ---------------------------------------------------------------------------


def torsor_subgroup_from_classes(
    modules: Sequence[F2GModule], nonzero: Sequence[bool]
) -> SemidirectGroup:
    """Image subgroup of the semidirect product for a tuple of torsor classes.

    Factors with a zero class contribute nothing to the module part; the
    group is (sum of nonzero factors) x| G inside (sum of all factors) x| G,
    with the zero section as the chosen splitting.
    """
    if len(modules) != len(nonzero) or not modules:
        raise InputError("one flag per module factor required")
    total = modules[0]
    group = modules[0].group
    for m in modules[1:]:
        total, group = module_direct_sum(total, m)
    blocks = []
    off = 0
    for m in modules:
        blocks.append((off, m.dim))
        off += m.dim
    allowed = 0
    for (offset, dim), flag in zip(blocks, nonzero):
        if flag:
            allowed |= ((1 << dim) - 1) << offset
    elements = [
        (v, g)
        for g in group
        for v in range(1 << total.dim)
        if v & ~allowed == 0
    ]
    gens = [(0, s) for s in group.generators]
    gens += [
        (1 << (offset + k), group.identity)
        for (offset, dim), flag in zip(blocks, nonzero)
        if flag
        for k in range(dim)
    ]
    return SemidirectGroup(total, group, blocks, elements, gens)


def no_quadratic_subextension(sd: SemidirectGroup) -> bool:
    """Torsor-field test on a model subgroup with its zero section.

    True iff (1) the affine action of the subgroup on the full module vector
    space is transitive (the torsor is connected, so its algebra is a field)
    and (2) no index-2 subgroup of the model contains the zero section.
    """
    if sd.order > MAX_GROUP_ORDER * 4:
        raise ResourceError("model too large for exhaustive subextension search")
    full = 1 << sd.module.dim
    orbit = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for v, g in sd.generators:
                y = sd.module.act(g, x) ^ v
                if y not in orbit:
                    orbit.add(y)
                    nxt.append(y)
        frontier = nxt
    if len(orbit) != full:
        return False

    # homomorphisms to Z/2 = cocycles for the trivial 1-dim action
    system = build_cocycle_system(
        sd.elements, sd.identity, sd.mul, sd.generators, lambda x: (1,), 1
    )
    homs = nullspace_basis(system.constraints, system.n_unknowns)
    section = [(0, g) for g in sd.group]
    for mask in range(1, 1 << len(homs)):
        sol = 0
        for i, h in enumerate(homs):
            if (mask >> i) & 1:
                sol ^= h
        if sol == 0:
            continue
        if all(
            ((system.symbolic[x][0] & sol).bit_count() & 1) == 0 for x in section
        ):
            return False  # an index-2 subgroup contains the whole section
    return True


# ---------------------------------------------------------------------------
# abelianization
# ---------------------------------------------------------------------------


def commutator_subgroup(sd: SemidirectGroup) -> set:
    """Normal closure of the generator commutators."""
    seed = set()
    for a in sd.generators:
        for b in sd.generators:
            seed.add(sd.mul(sd.mul(a, b), sd.inv(sd.mul(b, a))))
    seed.discard(sd.identity)
    current = subgroup_closure(seed, sd.mul, sd.identity)
    stable = False
    while not stable:
        stable = True
        extra = set()
        for x in current:
            for s in sd.generators:
                y = sd.conj(s, x)
                if y not in current:
                    extra.add(y)
        if extra:
            stable = False
            current = subgroup_closure(current | extra, sd.mul, sd.identity)
    return current


def module_inside_commutators(sd: SemidirectGroup) -> bool:
    """M^n inside [model, model]; equivalently the abelianization equals G^ab.

    Requires a nontrivial point group acting through a simple faithful module.
    """
    if sd.group.order == 1:
        raise PreconditionError("point group must be nontrivial")
    comm = commutator_subgroup(sd)
    ident = sd.group.identity
    return all((1 << k, ident) in comm for k in range(sd.module.dim))
