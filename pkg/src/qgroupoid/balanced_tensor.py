"""Balanced tensor products of the total algebra with itself.

A balanced product is the quotient of A (x) A by the span of
act1[x](a) (x) b - a (x) act2[x](b) over a pair of module structures; the
six flavors a quantum groupoid needs differ only in which multiplications
act on which leg.  Operators on A (x) A descend to such a quotient only
after an explicit check that they map relations into relations; every
descent here is checked, never assumed, and failures carry a witness.
"""

from __future__ import annotations

from .exact_linear import (
    ONE,
    ZERO,
    LinearMap,
    QuotientSpace,
    Rref,
    kron_vec,
    vadd,
    vscale,
    vsub,
)

__all__ = [
    "BalancedTensor",
    "TripleTensor",
    "build_balanced",
    "slice_left",
    "slice_right",
    "flip",
    "NotBalanced",
]


class NotBalanced(ValueError):
    """An operator fails to descend; carries the witness relation."""

    def __init__(self, message, witness):
        self.witness = witness
        super().__init__("%s; witness relation %s" % (message, witness))


class BalancedTensor:
    """Quotient of A (x) A balancing act1 on the first against act2 on the second leg."""

    def __init__(self, algebra, struct1, struct2, flavor=""):
        if struct1.total is not algebra or struct2.total is not algebra:
            raise ValueError("module structures must act on the given algebra")
        if struct1.base.dim != struct2.base.dim:
            raise ValueError("balancing requires actions of the same base")
        self.algebra = algebra
        self.struct1 = struct1
        self.struct2 = struct2
        self.flavor = flavor
        n = algebra.dim
        self.leg_dim = n
        relations = []
        self.generators = []  # (x, a, b) triples for witness reporting
        for x in range(struct1.base.dim):
            m1, m2 = struct1.acts[x], struct2.acts[x]
            for a in range(n):
                u = m1.col(a)
                for b in range(n):
                    rel = vsub(
                        kron_vec(u, {b: ONE}, n), kron_vec({a: ONE}, m2.col(b), n)
                    )
                    if rel:
                        relations.append(rel)
                        self.generators.append((x, a, b))
        self.space = QuotientSpace(n * n, relations)
        self.dim = self.space.dim
        self._op_cache = {}

    # -- elements -------------------------------------------------------

    def pure(self, u, v):
        """Class of u (x) v."""
        return self.space.project(kron_vec(u, v, self.leg_dim))

    def project(self, w):
        return self.space.project(w)

    def lift(self, q):
        """Canonical A (x) A representative."""
        return self.space.lift(q)

    def relation_vectors(self):
        n = self.leg_dim
        out = []
        for x, a, b in self.generators:
            out.append(
                vsub(
                    kron_vec(self.struct1.acts[x].col(a), {b: ONE}, n),
                    kron_vec({a: ONE}, self.struct2.acts[x].col(b), n),
                )
            )
        return out

    # -- descended operators ---------------------------------------------

    def descend(self, op1, op2, target=None, check=True, what="operator"):
        """Descend (op1 (x) op2) to a map self -> target (default self).

        op1/op2 are LinearMaps on A or None for the identity.  With
        check=True, every relation generator is verified to land in the
        target's relation span; the first failure raises NotBalanced.
        """
        target = target or self
        n = self.leg_dim

        def tensor_apply(w):
            out = {}
            for idx, s in w.items():
                i, j = divmod(idx, n)
                u = op1.col(i) if op1 is not None else {i: ONE}
                v = op2.col(j) if op2 is not None else {j: ONE}
                out = vadd(out, vscale(s, kron_vec(u, v, n)))
            return out

        if check:
            for gen, rel in zip(self.generators, self.relation_vectors()):
                image = tensor_apply(rel)
                if not target.space.contains_relation(image):
                    raise NotBalanced(
                        "%s does not descend between flavors %r -> %r"
                        % (what, self.flavor, target.flavor),
                        gen,
                    )
        return LinearMap.from_function(
            target.dim,
            self.dim,
            lambda q: target.project(tensor_apply(self.lift({q: ONE}))),
        )

    def _leg_op(self, slot, side, elem_index):
        key = (slot, side, elem_index)
        if key not in self._op_cache:
            alg = self.algebra
            m = alg.lmul(elem_index) if side == "l" else alg.rmul(elem_index)
            op1, op2 = (m, None) if slot == 1 else (None, m)
            self._op_cache[key] = self.descend(
                op1, op2, check=True, what="%s-multiplication on leg %d" % (side, slot)
            )
        return self._op_cache[key]

    def _combine(self, slot, side, u):
        items = list(u.items())
        if len(items) == 1 and items[0][1] == ONE:
            return self._leg_op(slot, side, items[0][0])
        out = LinearMap.zero(self.dim, self.dim)
        for i, s in items:
            out = out + self._leg_op(slot, side, i).scale(s)
        return out

    def lmul1(self, u):
        """Descended u*(.) on the first leg."""
        return self._combine(1, "l", u)

    def lmul2(self, u):
        return self._combine(2, "l", u)

    def rmul1(self, u):
        """Descended (.)*u on the first leg."""
        return self._combine(1, "r", u)

    def rmul2(self, u):
        return self._combine(2, "r", u)

    def mul_class(self, q1, q2):
        """Product of canonical representatives, projected back.

        Only meaningful when the caller has verified the representative
        independence (e.g. images of a comultiplication).
        """
        n = self.leg_dim
        u, v = self.lift(q1), self.lift(q2)
        out = {}
        alg = self.algebra
        for idx1, s in u.items():
            i1, j1 = divmod(idx1, n)
            for idx2, t in v.items():
                i2, j2 = divmod(idx2, n)
                c = s * t
                if not c:
                    continue
                prod = kron_vec(
                    alg.mul({i1: ONE}, {i2: ONE}), alg.mul({j1: ONE}, {j2: ONE}), n
                )
                out = vadd(out, vscale(c, prod))
        return self.project(out)

    def slice(self, omega, leg, multiply, check=True, what="slice"):
        """Descend c (x) d -> omega(c).d (and the three sibling patterns) to A.

        omega: LinearMap A -> A (a base-valued map already composed with
        its embedding).  leg selects which tensor factor omega consumes,
        multiply whether the result multiplies the other leg from the
        left or the right.
        """
        alg = self.algebra
        n = self.leg_dim

        def slicer(w):
            out = {}
            for idx, s in w.items():
                i, j = divmod(idx, n)
                if leg == 1:
                    val = omega.apply({i: ONE})
                    other = {j: ONE}
                else:
                    val = omega.apply({j: ONE})
                    other = {i: ONE}
                prod = alg.mul(val, other) if multiply == "left" else alg.mul(other, val)
                out = vadd(out, vscale(s, prod))
            return out

        if check:
            for gen, rel in zip(self.generators, self.relation_vectors()):
                if slicer(rel):
                    raise NotBalanced(
                        "%s is not balanced for flavor %r" % (what, self.flavor), gen
                    )
        return LinearMap.from_function(
            alg.dim, self.dim, lambda q: slicer(self.lift({q: ONE}))
        )

    def flip_to(self, target):
        """The map a (x) b -> b (x) a into the flipped flavor, checked."""
        n = self.leg_dim

        def flipv(w):
            out = {}
            for idx, s in w.items():
                i, j = divmod(idx, n)
                out[j * n + i] = s
            return out

        for gen, rel in zip(self.generators, self.relation_vectors()):
            if not target.space.contains_relation(flipv(rel)):
                raise NotBalanced(
                    "flip does not relate flavors %r -> %r"
                    % (self.flavor, target.flavor),
                    gen,
                )
        return LinearMap.from_function(
            target.dim, self.dim, lambda q: target.project(flipv(self.lift({q: ONE})))
        )

    def __repr__(self):
        return "BalancedTensor(%r, dim=%d)" % (self.flavor, self.dim)


class TripleTensor:
    """Quotient of A (x) A (x) A with balancing on legs (1,2) and (2,3)."""

    def __init__(self, algebra, pair12, pair23, flavor=""):
        self.algebra = algebra
        self.flavor = flavor
        n = algebra.dim
        self.leg_dim = n
        rref = Rref()
        s1a, s1b = pair12
        s2a, s2b = pair23
        for x in range(s1a.base.dim):
            m1, m2 = s1a.acts[x], s1b.acts[x]
            for a in range(n):
                u = m1.col(a)
                for b in range(n):
                    # relations x.a (x) b (x) c - a (x) x.b (x) c for all c
                    for cidx in range(n):
                        rel = {}
                        for i, s in u.items():
                            rel[(i * n + b) * n + cidx] = s
                        for j, s in m2.col(b).items():
                            key = (a * n + j) * n + cidx
                            t = rel.get(key, ZERO) - s
                            if t:
                                rel[key] = t
                            else:
                                rel.pop(key, None)
                        if rel:
                            rref.add(rel)
        for x in range(s2a.base.dim):
            m1, m2 = s2a.acts[x], s2b.acts[x]
            for b in range(n):
                u = m1.col(b)
                for c in range(n):
                    for aidx in range(n):
                        rel = {}
                        for j, s in u.items():
                            rel[(aidx * n + j) * n + c] = s
                        for k, s in m2.col(c).items():
                            key = (aidx * n + b) * n + k
                            t = rel.get(key, ZERO) - s
                            if t:
                                rel[key] = t
                            else:
                                rel.pop(key, None)
                        if rel:
                            rref.add(rel)
        self.rref = rref
        self.dim = n * n * n - rref.rank

    def reduce(self, w):
        return self.rref.reduce(w)

    def equal(self, w1, w2):
        return not self.rref.reduce(vsub(w1, w2))

    def __repr__(self):
        return "TripleTensor(%r, dim=%d)" % (self.flavor, self.dim)


def build_balanced(algebra, struct1, struct2, flavor=""):
    """Balanced tensor product of A with itself over the given structures."""
    return BalancedTensor(algebra, struct1, struct2, flavor)


def slice_left(tensor, omega, check=True):
    """Slice omega (x) id for the standard flavors.

    For a left-comultiplication flavor ("b..." tags) the sliced value
    multiplies the surviving leg from the left; for a right-comultiplication
    flavor ("c..." tags), from the right.  omega must already carry its
    embedding into A.
    """
    multiply = "right" if tensor.flavor.startswith("c") else "left"
    return tensor.slice(omega, 1, multiply, check=check, what="left slice")


def slice_right(tensor, omega, check=True):
    """Slice id (x) omega for the standard flavors."""
    multiply = "right" if tensor.flavor.startswith("c") else "left"
    return tensor.slice(omega, 2, multiply, check=check, what="right slice")


def flip(tensor, target):
    """Flip map between matching flavors (checked); see BalancedTensor.flip_to."""
    return tensor.flip_to(target)
