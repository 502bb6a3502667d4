"""Finite-dimensional algebras by structure constants.

An algebra is a multiplication table e_i e_j = sum_k c[i][j][k] e_k over
the exact scalar field, optionally with an antilinear involution.  The
table is the single source of truth: associativity, non-degeneracy,
idempotency, units, involutions, embeddings and module structures are
all checked against it, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_linear import (
    ONE,
    ZERO,
    LinearMap,
    Rref,
    Scalar,
    vadd,
    vec_conj,
    vscale,
)
from .report import Report

__all__ = [
    "FiniteAlgebra",
    "Multiplier",
    "BaseEmbedding",
    "ModuleStructure",
    "check_algebra",
    "multiplier_algebra",
    "find_unit",
    "automorphism_check",
    "algebra_to_json",
    "algebra_from_json",
    "scalar_to_json",
    "scalar_from_json",
]


class FiniteAlgebra:
    """Associative algebra on basis e_0..e_{n-1} given by its table."""

    def __init__(self, table, labels=None, involution=None):
        # table[i][j]: sparse vector of e_i * e_j
        self.dim = len(table)
        self.table = tuple(
            tuple({k: s for k, s in col.items() if s} for col in row)
            for row in table
        )
        self.labels = list(labels) if labels else [str(i) for i in range(self.dim)]
        self.involution = involution  # LinearMap; star(v) = involution(conj(v))
        self._unit = -1  # not computed yet
        self._lmul = {}
        self._rmul = {}

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_mul(cls, dim, mul, labels=None, involution=None):
        """mul(i, j) -> sparse product vector."""
        return cls(
            [[mul(i, j) for j in range(dim)] for i in range(dim)],
            labels,
            involution,
        )

    @classmethod
    def pointwise(cls, labels, involution=None):
        """Functions on a finite set with pointwise product."""
        n = len(labels)
        return cls(
            [[({i: ONE} if i == j else {}) for j in range(n)] for i in range(n)],
            labels,
            involution,
        )

    def basis_vec(self, i):
        return {i: ONE}

    # -- multiplication ---------------------------------------------------

    def mul(self, u, v):
        w = {}
        for i, s in u.items():
            row = self.table[i]
            for j, t in v.items():
                c = s * t
                if not c:
                    continue
                for k, r in row[j].items():
                    val = w.get(k, ZERO) + c * r
                    if val:
                        w[k] = val
                    else:
                        w.pop(k, None)
        return w

    def mul_many(self, *vs):
        out = vs[0]
        for v in vs[1:]:
            out = self.mul(out, v)
        return out

    def lmul(self, u):
        """Left multiplication operator v -> u*v for a basis index or vector."""
        if isinstance(u, int):
            if u not in self._lmul:
                self._lmul[u] = LinearMap.from_function(
                    self.dim, self.dim, lambda j: dict(self.table[u][j])
                )
            return self._lmul[u]
        out = LinearMap.zero(self.dim, self.dim)
        for i, s in u.items():
            out = out + self.lmul(i).scale(s)
        return out

    def rmul(self, u):
        """Right multiplication operator v -> v*u."""
        if isinstance(u, int):
            if u not in self._rmul:
                self._rmul[u] = LinearMap.from_function(
                    self.dim, self.dim, lambda j: dict(self.table[j][u])
                )
            return self._rmul[u]
        out = LinearMap.zero(self.dim, self.dim)
        for i, s in u.items():
            out = out + self.rmul(i).scale(s)
        return out

    def star(self, v):
        if self.involution is None:
            raise ValueError("algebra has no involution")
        return self.involution.apply(vec_conj(v))

    # -- structural predicates --------------------------------------------

    def is_associative(self):
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.table[i][j]
                for k in range(self.dim):
                    lhs = self.mul(ij, {k: ONE})
                    rhs = self.mul({i: ONE}, self.table[j][k])
                    if lhs != rhs:
                        return False, (i, j, k)
        return True, None

    def nondegenerate_sides(self):
        """(left, right): no a with a*A = 0, no a with A*a = 0."""
        rref_r = Rref()
        right_ann = self._joint_kernel([self.rmul(j) for j in range(self.dim)])
        left_ann = self._joint_kernel([self.lmul(j) for j in range(self.dim)])
        del rref_r
        return not right_ann, not left_ann

    def _joint_kernel(self, maps):
        stacked = []
        n = self.dim
        for j in range(n):
            col = {}
            for t, m in enumerate(maps):
                for i, s in m.col(j).items():
                    col[t * n + i] = s
            stacked.append(col)
        return LinearMap(n * len(maps), n, stacked).kernel_basis()

    def products_span(self):
        rr = Rref()
        for i in range(self.dim):
            for j in range(self.dim):
                rr.add(self.table[i][j])
        return rr.rank == self.dim

    def unit(self):
        """The two-sided unit, or None.  Cached."""
        if self._unit == -1:
            self._unit = find_unit(self)
        return self._unit

    def is_commutative(self):
        return all(
            self.table[i][j] == self.table[j][i]
            for i in range(self.dim)
            for j in range(self.dim)
        )

    def opposite(self):
        """The same space with reversed multiplication."""
        return FiniteAlgebra(
            [[self.table[j][i] for j in range(self.dim)] for i in range(self.dim)],
            labels=[l + "^op" for l in self.labels],
            involution=self.involution,
        )

    def describe(self, v):
        terms = ["(%s)*%s" % (s, self.labels[i]) for i, s in sorted(v.items())]
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return "FiniteAlgebra(dim=%d)" % self.dim


@dataclass
class Multiplier:
    """A pair of maps (left, right) with (a.T)b = a(T.b) for all a, b.

    For a unital algebra every multiplier is multiplication by the
    element ``left(1)``; the pair form is kept so signatures match the
    non-unital calculus.
    """

    algebra: FiniteAlgebra
    left: LinearMap  # b -> T*b
    right: LinearMap  # a -> a*T

    @classmethod
    def from_element(cls, algebra, v):
        return cls(algebra, algebra.lmul(v), algebra.rmul(v))

    def element(self):
        one = self.algebra.unit()
        if one is None:
            raise ValueError("multiplier of a non-unital algebra")
        return self.left.apply(one)

    def is_compatible(self):
        a = self.algebra
        for i in range(a.dim):
            ri = self.right.apply({i: ONE})
            for j in range(a.dim):
                if a.mul(ri, {j: ONE}) != a.mul({i: ONE}, self.left.apply({j: ONE})):
                    return False
        return True


class BaseEmbedding:
    """A base algebra together with its (anti)homomorphic embedding into A."""

    def __init__(self, base, total, embed, anti=False, name="B"):
        self.base = base
        self.total = total
        self.embed = embed  # LinearMap base -> total
        self.anti = anti
        self.name = name

    def __call__(self, v):
        return self.embed.apply(v)

    def validate(self, report=None, axiom_prefix=""):
        rep = report if report is not None else Report()
        pre = axiom_prefix or ("embedding-%s" % self.name)
        rep.check(
            self.embed.is_injective(), "%s-injective" % pre, "mult-hopf-algebroid-2"
        )
        b, a = self.base, self.total
        ok, wit = True, None
        for i in range(b.dim):
            for j in range(b.dim):
                prod = b.table[j][i] if self.anti else b.table[i][j]
                lhs = a.mul(self.embed.apply({i: ONE}), self.embed.apply({j: ONE}))
                if lhs != self.embed.apply(dict(prod)):
                    ok, wit = False, (b.labels[i], b.labels[j])
                    break
            if not ok:
                break
        rep.check(
            ok,
            "%s-%smultiplicative" % (pre, "anti" if self.anti else ""),
            "mult-hopf-algebroid-2",
            wit,
        )
        return rep

    def commutes_with(self, other):
        a = self.total
        for i in range(self.base.dim):
            u = self.embed.apply({i: ONE})
            for j in range(other.base.dim):
                v = other.embed.apply({j: ONE})
                if a.mul(u, v) != a.mul(v, u):
                    return False, (self.base.labels[i], other.base.labels[j])
        return True, None

    def image_rref(self):
        rr = Rref()
        for j in range(self.base.dim):
            rr.add(self.embed.col(j))
        return rr


class ModuleStructure:
    """An action of a base algebra on the total algebra, one side at a time.

    ``acts[x]`` is the operator by which base basis element x acts; the
    ``side`` records whether the action law composes covariantly ("left")
    or contravariantly ("right").
    """

    def __init__(self, base, total, acts, side, name=""):
        self.base = base
        self.total = total
        self.acts = list(acts)
        self.side = side
        self.name = name

    @classmethod
    def by_left_mult(cls, emb, name=""):
        return cls(
            emb.base,
            emb.total,
            [emb.total.lmul(emb.embed.col(x)) for x in range(emb.base.dim)],
            "left",
            name,
        )

    @classmethod
    def by_right_mult(cls, emb, name=""):
        return cls(
            emb.base,
            emb.total,
            [emb.total.rmul(emb.embed.col(x)) for x in range(emb.base.dim)],
            "right",
            name,
        )

    def act(self, x, v):
        out = {}
        for i, s in x.items():
            out = vadd(out, vscale(s, self.acts[i].apply(v)))
        return out

    def check_action(self):
        b = self.base
        for x in range(b.dim):
            for y in range(b.dim):
                prod = b.table[x][y] if self.side == "left" else b.table[y][x]
                composite = self.acts[x].compose(self.acts[y])
                expected = LinearMap.zero(self.total.dim, self.total.dim)
                for k, s in prod.items():
                    expected = expected + self.acts[k].scale(s)
                if composite != expected:
                    return False, (b.labels[x], b.labels[y])
        return True, None

    def is_faithful(self):
        # faithful iff the linear map base -> End(total) is injective
        n = self.total.dim
        cols = []
        for x in range(self.base.dim):
            col = {}
            m = self.acts[x]
            for j in range(m.cols):
                for i, s in m.col(j).items():
                    col[j * n + i] = s
            cols.append(col)
        return LinearMap(n * n, self.base.dim, cols).is_injective()

    def is_idempotent(self):
        rr = Rref()
        for x in range(self.base.dim):
            for j in range(self.total.dim):
                rr.add(self.acts[x].col(j))
        return rr.rank == self.total.dim


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def find_unit(algebra):
    """The unique two-sided unit, or None."""
    n = algebra.dim
    cols = []
    for j in range(n):
        col = {}
        for i in range(n):
            # e * e_i stacked over i (left unit rows), then e_i * e
            for k, s in algebra.table[j][i].items():
                col[i * n + k] = s
            for k, s in algebra.table[i][j].items():
                col[(n + i) * n + k] = s
        cols.append(col)
    target = {}
    for i in range(n):
        target[i * n + i] = ONE
        target[(n + i) * n + i] = ONE
    sol = LinearMap(2 * n * n, n, cols).solve(target)
    return sol


def check_algebra(algebra):
    """Pass/fail report for the algebra axioms the theory relies on."""
    rep = Report()
    ok, wit = algebra.is_associative()
    rep.check(ok, "associativity", "algebra-associative", wit)
    nd_right, nd_left = algebra.nondegenerate_sides()
    rep.check(nd_right, "non-degenerate-right", "algebra-non-degenerate")
    rep.check(nd_left, "non-degenerate-left", "algebra-non-degenerate")
    rep.check(algebra.products_span(), "idempotent", "algebra-idempotent")
    unit = algebra.unit()
    rep.check(
        unit is not None,
        "local-units",
        "algebra-local-units",
        "no two-sided unit in finite dimension",
    )
    if algebra.involution is not None:
        inv_ok = True
        wit = None
        star = algebra.star
        for i in range(algebra.dim):
            ei = {i: ONE}
            if star(star(ei)) != ei:
                inv_ok, wit = False, ("involutive", algebra.labels[i])
                break
            for j in range(algebra.dim):
                ej = {j: ONE}
                if star(algebra.mul(ei, ej)) != algebra.mul(star(ej), star(ei)):
                    inv_ok = False
                    wit = ("anti-multiplicative", algebra.labels[i], algebra.labels[j])
                    break
            if not inv_ok:
                break
        rep.check(inv_ok, "involution", "algebra-involution", wit)
    return rep


def multiplier_algebra(algebra):
    """The multiplier algebra M(A) and the canonical map A -> M(A).

    Solves the compatibility equations (a.T)b = a(T.b) for pairs of
    operators; for unital A the canonical map is an isomorphism.
    """
    nd_right, nd_left = algebra.nondegenerate_sides()
    if not (nd_right and nd_left) or not algebra.products_span():
        raise ValueError("multiplier algebra needs a non-degenerate, idempotent algebra")
    n = algebra.dim
    # unknowns: (L, R) as 2*n*n coordinates, L first, column-major
    def unknown_l(i, j):
        return j * n + i

    def unknown_r(i, j):
        return n * n + j * n + i

    cols = [dict() for _ in range(2 * n * n)]
    eqno = 0
    for a in range(n):
        for b in range(n):
            # sum_i R[i,a] e_i*e_b - sum_j L[j,b] e_a*e_j = 0
            for i in range(n):
                prod = algebra.table[i][b]
                for k, s in prod.items():
                    cols[unknown_r(i, a)][eqno * n + k] = (
                        cols[unknown_r(i, a)].get(eqno * n + k, ZERO) + s
                    )
            for j in range(n):
                prod = algebra.table[a][j]
                for k, s in prod.items():
                    key = eqno * n + k
                    cols[unknown_l(j, b)][key] = (
                        cols[unknown_l(j, b)].get(key, ZERO) - s
                    )
            eqno += 1
    cols = [{k: s for k, s in c.items() if s} for c in cols]
    constraint = LinearMap(eqno * n, 2 * n * n, cols)
    basis = constraint.kernel_basis()

    def unpack(w):
        lcols = [dict() for _ in range(n)]
        rcols = [dict() for _ in range(n)]
        for idx, s in w.items():
            if idx < n * n:
                lcols[idx // n][idx % n] = s
            else:
                idx -= n * n
                rcols[idx // n][idx % n] = s
        return Multiplier(
            algebra, LinearMap(n, n, lcols), LinearMap(n, n, rcols)
        )

    mults = [unpack(w) for w in basis]
    m = len(mults)
    # structure constants of M(A): (L, R)(L', R') = (L o L', R' o R)
    flat = LinearMap(2 * n * n, m, [w for w in basis])

    def pack(mult):
        w = {}
        for j in range(n):
            for i, s in mult.left.col(j).items():
                w[j * n + i] = s
            for i, s in mult.right.col(j).items():
                w[n * n + j * n + i] = s
        return w

    table = []
    for x in range(m):
        row = []
        for y in range(m):
            prod = Multiplier(
                algebra,
                mults[x].left.compose(mults[y].left),
                mults[y].right.compose(mults[x].right),
            )
            coords = flat.solve(pack(prod))
            assert coords is not None, "multiplier product left the solution space"
            row.append(coords)
        table.append(row)
    m_alg = FiniteAlgebra(table, labels=["m%d" % i for i in range(m)])
    canonical = LinearMap.from_function(
        m, n, lambda j: flat.solve(pack(Multiplier.from_element(algebra, {j: ONE})))
    )
    return m_alg, canonical


def automorphism_check(algebra, f, anti=False):
    """(ok, witness): f bijective and (anti)multiplicative on all basis pairs."""
    if f.rows != algebra.dim or f.cols != algebra.dim:
        return False, "dimension mismatch"
    if not f.is_bijective():
        return False, "not bijective"
    for i in range(algebra.dim):
        fi = f.col(i)
        for j in range(algebra.dim):
            fj = f.col(j)
            lhs = f.apply(dict(algebra.table[i][j]))
            rhs = algebra.mul(fj, fi) if anti else algebra.mul(fi, fj)
            if lhs != rhs:
                return False, (algebra.labels[i], algebra.labels[j], "products differ")
    return True, None


# ---------------------------------------------------------------------------
# JSON codecs
# ---------------------------------------------------------------------------


def scalar_to_json(s):
    if s.is_rational():
        return str(s.as_fraction())
    plain_re, plain_im = "0", "0"
    roots = {}
    for m, re, im in s.terms:
        if m == 1:
            plain_re, plain_im = str(re), str(im)
        else:
            roots[str(m)] = {"re": str(re), "im": str(im)}
    out = {"re": plain_re, "im": plain_im}
    if roots:
        out["sqrt_part"] = dict(sorted(roots.items()))
    return out


def scalar_from_json(obj):
    if isinstance(obj, (int, str)):
        return Scalar.rational(Fraction(obj))
    if isinstance(obj, float):
        raise ValueError("decimal scalars are not accepted; use fraction strings")
    s = Scalar.rational(Fraction(obj.get("re", 0)), Fraction(obj.get("im", 0)))
    for m, coeff in obj.get("sqrt_part", {}).items():
        s = s + Scalar.root_term(
            int(m), Fraction(coeff.get("re", 0)), Fraction(coeff.get("im", 0))
        )
    return s


def algebra_to_json(algebra):
    structure = [
        [
            [[k, scalar_to_json(s)] for k, s in sorted(col.items())]
            for col in row
        ]
        for row in algebra.table
    ]
    out = {"dim": algebra.dim, "structure": structure, "labels": algebra.labels}
    if algebra.involution is not None:
        out["involution"] = [
            [scalar_to_json(x) for x in row] for row in algebra.involution.to_dense()
        ]
    return out


def algebra_from_json(obj):
    dim = obj["dim"]
    table = []
    for row in obj["structure"]:
        table_row = []
        for entry in row:
            table_row.append({int(k): scalar_from_json(s) for k, s in entry})
        table.append(table_row)
    involution = None
    if "involution" in obj:
        involution = LinearMap.from_rows(
            [[scalar_from_json(x) for x in row] for row in obj["involution"]]
        )
    return FiniteAlgebra(table, labels=obj.get("labels"), involution=involution)
