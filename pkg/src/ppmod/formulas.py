"""Positive-primitive formulas and their calculus.

A pp formula with n free and t bound variables over an m_R-dimensional
algebra is stored as two coefficient arrays

    a: (n, neq, m_R)    b: (t, neq, m_R)

one algebra element per (variable, equation) slot.  For a right-side
formula, equation j reads  sum_i x_i . a[i,j] + sum_k y_k . b[k,j] = 0
with coefficients acting on the right; for the left side the
coefficients act on the left.  Thanks to the row-applied action storage
of :mod:`ppmod.modules`, evaluation code is identical for both sides.

Solution sets are computed by building the F_q-linear system of the
quantifier-free part over the module, taking its kernel, and projecting
to the free coordinates; elements are never enumerated here.

Formulas are normalised on construction: zero equations are dropped,
bound variables that appear in no equation are dropped, and equation
columns are sorted lexicographically.  Equality of formulas is always
semantic (mutual :func:`leq_absolute`); no syntactic equality is
offered.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebras import Algebra
from .errors import (
    AlgebraMismatch,
    ArityMismatch,
    DimensionMismatch,
    EmptyContext,
    LengthMismatch,
    SideMismatch,
)
from .fields import ELEM
from .modules import (
    ModuleRep,
    PointedModule,
    extend_to_generators,
    free_module,
    module_span,
    presentation,
    quotient,
    tuple_rows,
)

_EVAL_CACHE: dict = {}
_FREE_CACHE: dict = {}
_TYPEGEN_CACHE: dict = {}


@dataclass(frozen=True, eq=False)
class PpFormula:
    algebra: Algebra
    side: str
    nfree: int
    nbound: int
    neq: int
    a: np.ndarray  # (nfree, neq, alg.dim)
    b: np.ndarray  # (nbound, neq, alg.dim)

    def fingerprint(self) -> tuple:
        return (
            self.algebra.fingerprint(),
            self.side,
            self.nfree,
            self.nbound,
            self.neq,
            self.a.tobytes(),
            self.b.tobytes(),
        )

    def render(self) -> str:
        """Workspace text syntax, e.g. ``E y1 . x1*t + y1*1 = 0``."""
        alg = self.algebra
        parts = []
        for j in range(self.neq):
            terms = []
            for i in range(self.nfree):
                if np.any(self.a[i, j]):
                    terms.append(_render_term(alg, self.side, f"x{i + 1}", self.a[i, j]))
            for k in range(self.nbound):
                if np.any(self.b[k, j]):
                    terms.append(_render_term(alg, self.side, f"y{k + 1}", self.b[k, j]))
            parts.append((" + ".join(terms) if terms else "0") + " = 0")
        body = " & ".join(parts) if parts else "0 = 0"
        if self.nbound:
            names = " ".join(f"y{k + 1}" for k in range(self.nbound))
            return f"E {names} . {body}"
        return body

    def __repr__(self) -> str:
        return f"PpFormula({self.side}, {self.nfree} free: {self.render()})"


def _render_term(alg: Algebra, side: str, var: str, coeff: np.ndarray) -> str:
    if np.array_equal(coeff, alg.unit):
        return var
    txt = alg.render_elem(coeff)
    return f"{var}*{txt}" if side == "right" else f"{txt}*{var}"


def pp_formula(
    algebra: Algebra, side: str, nfree: int, a, b, normalise: bool = True
) -> PpFormula:
    """Build (and by default normalise) a pp formula."""
    f = algebra.field
    a = f.asarray(a)
    b = f.asarray(b)
    if a.ndim != 3:
        if nfree == 0:
            neq0 = b.shape[1] if b.ndim == 3 else 0
            a = a.reshape(0, neq0, algebra.dim)
        else:
            a = a.reshape(nfree, -1, algebra.dim)
    neq = a.shape[1]
    if b.ndim != 3:
        b = (
            b.reshape(-1, neq, algebra.dim)
            if b.size
            else np.zeros((0, neq, algebra.dim), dtype=ELEM)
        )
    if a.shape != (nfree, neq, algebra.dim) or b.shape[1:] != (neq, algebra.dim):
        raise DimensionMismatch(
            f"coefficient blocks {a.shape} / {b.shape} do not agree"
        )
    if side not in ("right", "left"):
        raise SideMismatch(f"bad side {side!r}")
    if normalise:
        # drop bound variables that never occur
        used = [k for k in range(b.shape[0]) if np.any(b[k])]
        b = b[used] if used else np.zeros((0, neq, algebra.dim), dtype=ELEM)
        # drop all-zero equations, sort the rest lexicographically
        cols = []
        for j in range(neq):
            if np.any(a[:, j]) or np.any(b[:, j]):
                cols.append(j)
        keys = sorted(
            cols, key=lambda j: (a[:, j].tobytes(), b[:, j].tobytes())
        )
        a = a[:, keys]
        b = b[:, keys]
        neq = len(keys)
    return PpFormula(algebra, side, nfree, b.shape[0], neq, a, b)


def top(algebra: Algebra, side: str, nfree: int = 1) -> PpFormula:
    """x = x: no equations."""
    return pp_formula(
        algebra,
        side,
        nfree,
        np.zeros((nfree, 0, algebra.dim), dtype=ELEM),
        np.zeros((0, 0, algebra.dim), dtype=ELEM),
    )


def bot(algebra: Algebra, side: str, nfree: int = 1) -> PpFormula:
    """x = 0 in every free variable."""
    a = np.zeros((nfree, nfree, algebra.dim), dtype=ELEM)
    for i in range(nfree):
        a[i, i] = algebra.unit
    return pp_formula(algebra, side, nfree, a, np.zeros((0, nfree, algebra.dim), ELEM))


def annihilator(algebra: Algebra, side: str, r) -> PpFormula:
    """x . r = 0 (or r . x = 0 on the left)."""
    r = algebra.field.asarray(r)
    a = r.reshape(1, 1, algebra.dim)
    return pp_formula(algebra, side, 1, a, np.zeros((0, 1, algebra.dim), ELEM))


def divisibility(algebra: Algebra, side: str, r) -> PpFormula:
    """r | x: exists y with x = y . r (x = r . y on the left)."""
    f = algebra.field
    r = f.asarray(r)
    a = algebra.unit.reshape(1, 1, algebra.dim)
    b = f.neg(r).reshape(1, 1, algebra.dim)
    return pp_formula(algebra, side, 1, a, b)


# -- evaluation -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SubgroupRep:
    """A pp-definable subgroup of M^arity: canonical echelon basis.

    Rows of ``basis`` are flat vectors of length arity * dim laid out
    slot-major: [x_1 coords | x_2 coords | ...].
    """

    module: ModuleRep
    arity: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, vectors) -> bool:
        flat = np.asarray(vectors, ELEM).reshape(-1)
        if flat.shape[0] != self.arity * self.module.dim:
            raise LengthMismatch(
                f"tuple of length {flat.shape[0]}, "
                f"expected {self.arity} * {self.module.dim}"
            )
        return linalg.in_span(self.module.algebra.field, self.basis, flat)

    def key(self) -> bytes:
        return self.basis.tobytes() + bytes([self.arity % 251])

    def elements(self) -> np.ndarray:
        """All members, shape (q^dim, arity*dim); small subgroups only."""
        f = self.module.algebra.field
        k = self.dim
        width = self.arity * self.module.dim
        out = np.zeros((f.q**k, width), dtype=ELEM)
        for code in range(f.q**k):
            coeffs = [(code // f.q**i) % f.q for i in range(k)]
            v = np.zeros(width, dtype=ELEM)
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = f.add(v, f.mul(c, row))
            out[code] = v
        return out

    def __repr__(self) -> str:
        return f"SubgroupRep(arity={self.arity}, dim={self.dim})"


def _check_formula_module(phi: PpFormula, m: ModuleRep) -> None:
    if phi.algebra.fingerprint() != m.algebra.fingerprint():
        raise AlgebraMismatch("formula and module algebras differ")
    if phi.side != m.side:
        raise SideMismatch(f"{phi.side} formula on a {m.side} module")


def evaluate(phi: PpFormula, m: ModuleRep) -> SubgroupRep:
    """Solution set phi(m) as a canonical subgroup of m^nfree.

    Kernel-then-project: solve the quantifier-free system over F_q in
    all (free + bound) coordinates, then project onto the free block.
    """
    _check_formula_module(phi, m)
    key = (phi.fingerprint(), m.fingerprint())
    hit = _EVAL_CACHE.get(key)
    if hit is not None:
        return hit
    f = m.algebra.field
    n, t, neq, d = phi.nfree, phi.nbound, phi.neq, m.dim
    if d == 0 or n == 0:
        res = SubgroupRep(m, n, linalg.zeros(0, n * d))
        _EVAL_CACHE[key] = res
        return res
    # system rows: one block row per variable; columns: one block per equation
    sys = np.zeros(((n + t) * d, neq * d), dtype=ELEM)
    coeff = np.concatenate([phi.a, phi.b], axis=0) if t else phi.a
    for v in range(n + t):
        for j in range(neq):
            if np.any(coeff[v, j]):
                sys[v * d : (v + 1) * d, j * d : (j + 1) * d] = m.rho(coeff[v, j])
    sols = linalg.null_space(f, sys.T)  # rows u with u @ sys = 0
    proj = sols[:, : n * d]
    res = SubgroupRep(m, n, linalg.row_space(f, proj))
    _EVAL_CACHE[key] = res
    return res


# -- lattice operations ---------------------------------------------------


def _require_same_shape(phi: PpFormula, psi: PpFormula) -> None:
    if phi.algebra.fingerprint() != psi.algebra.fingerprint():
        raise AlgebraMismatch("formulas over different algebras")
    if phi.side != psi.side:
        raise SideMismatch("formulas on different sides")
    if phi.nfree != psi.nfree:
        raise ArityMismatch(f"arity {phi.nfree} vs {psi.nfree}")


def conj(phi: PpFormula, psi: PpFormula) -> PpFormula:
    """phi and psi on shared free variables, bound variables disjoint."""
    _require_same_shape(phi, psi)
    alg = phi.algebra
    n = phi.nfree
    neq = phi.neq + psi.neq
    a = np.concatenate([phi.a, psi.a], axis=1)
    b = np.zeros((phi.nbound + psi.nbound, neq, alg.dim), dtype=ELEM)
    if phi.nbound:
        b[: phi.nbound, : phi.neq] = phi.b
    if psi.nbound:
        b[phi.nbound :, phi.neq :] = psi.b
    return pp_formula(alg, phi.side, n, a, b)


def formula_sum(phi: PpFormula, psi: PpFormula) -> PpFormula:
    """{x : x = x1 + x2, phi(x1), psi(x2)}."""
    _require_same_shape(phi, psi)
    alg = phi.algebra
    f = alg.field
    n = phi.nfree
    neq = n + phi.neq + psi.neq
    nbound = 2 * n + phi.nbound + psi.nbound
    a = np.zeros((n, neq, alg.dim), dtype=ELEM)
    b = np.zeros((nbound, neq, alg.dim), dtype=ELEM)
    neg_unit = f.neg(alg.unit)
    for i in range(n):
        a[i, i] = alg.unit  # x_i - x1_i - x2_i = 0
        b[i, i] = neg_unit
        b[n + i, i] = neg_unit
    # x1 block satisfies phi
    for i in range(n):
        b[i, n : n + phi.neq] = phi.a[i]
    for k in range(phi.nbound):
        b[2 * n + k, n : n + phi.neq] = phi.b[k]
    # x2 block satisfies psi
    for i in range(n):
        b[n + i, n + phi.neq :] = psi.a[i]
    for k in range(psi.nbound):
        b[2 * n + phi.nbound + k, n + phi.neq :] = psi.b[k]
    return pp_formula(alg, phi.side, n, a, b)


def dual(phi: PpFormula) -> PpFormula:
    """Elementary dual, a formula for modules on the other side.

    For right-side phi(x) = E y (x A + y B = 0) this is
    D phi(x) = E z (x = A z  and  B z = 0) with coefficients acting on
    the left; the recipe at the array level is side-uniform and the
    expected identities (involution, exchange of conj and sum) are
    validated semantically by the test suite, not assumed.
    """
    alg = phi.algebra
    f = alg.field
    n, t, m = phi.nfree, phi.nbound, phi.neq
    other = "left" if phi.side == "right" else "right"
    neq = n + t
    a = np.zeros((n, neq, alg.dim), dtype=ELEM)
    for i in range(n):
        a[i, i] = alg.unit
    b = np.zeros((m, neq, alg.dim), dtype=ELEM)
    for j in range(m):
        for i in range(n):
            b[j, i] = f.neg(phi.a[i, j])
        for k in range(t):
            b[j, n + k] = phi.b[k, j]
    return pp_formula(alg, other, n, a, b)


def substitute(phi: PpFormula, t_matrix) -> PpFormula:
    """phi(x . T) for an R-coefficient matrix T with nfree columns.

    The result has one free variable per row of T; on the left side the
    coefficients multiply from the left with the same array layout.
    """
    alg = phi.algebra
    f = alg.field
    t_matrix = f.asarray(t_matrix)
    if t_matrix.ndim == 2:  # allow scalar entries for 1-dim algebras
        t_matrix = t_matrix[:, :, None]
    if t_matrix.shape[1] != phi.nfree or t_matrix.shape[2] != alg.dim:
        raise DimensionMismatch(
            f"substitution matrix {t_matrix.shape} does not match "
            f"arity {phi.nfree} over a dim-{alg.dim} algebra"
        )
    nnew = t_matrix.shape[0]
    n, t, m = phi.nfree, phi.nbound, phi.neq
    neq = n + m
    a = np.zeros((nnew, neq, alg.dim), dtype=ELEM)
    b = np.zeros((n + t, neq, alg.dim), dtype=ELEM)
    neg_unit = f.neg(alg.unit)
    for j in range(n):  # equations x_new . T[:, j] - x_old_j = 0
        for i in range(nnew):
            a[i, j] = t_matrix[i, j]
        b[j, j] = neg_unit
    for j in range(m):  # original system on (x_old, y)
        for i in range(n):
            b[i, n + j] = phi.a[i, j]
        for k in range(t):
            b[n + k, n + j] = phi.b[k, j]
    return pp_formula(alg, phi.side, nnew, a, b)


def prefix_restriction(phi: PpFormula, new_arity: int) -> PpFormula:
    """View an arity-k formula in the first k of new_arity variables."""
    if new_arity < phi.nfree:
        raise ArityMismatch("prefix narrower than the formula arity")
    alg = phi.algebra
    t_mat = np.zeros((new_arity, phi.nfree, alg.dim), dtype=ELEM)
    for i in range(phi.nfree):
        t_mat[i, i] = alg.unit
    return substitute(phi, t_mat)


# -- free realisations and pp-type generators ------------------------------


def free_realisation(phi: PpFormula) -> PointedModule:
    """Finitely presented module with a tuple whose pp-type phi generates.

    The module is R^(nfree+nbound) modulo the submodule generated by the
    equation rows; the tuple is the image of the first nfree slot units.
    Any solution of phi in any module is a morphic image of this tuple.
    """
    key = phi.fingerprint()
    hit = _FREE_CACHE.get(key)
    if hit is not None:
        return hit
    alg = phi.algebra
    f = alg.field
    n, t, m = phi.nfree, phi.nbound, phi.neq
    slots = n + t
    free = free_module(alg, phi.side, slots)
    coeff = np.concatenate([phi.a, phi.b], axis=0) if t else phi.a
    rel_rows = np.zeros((m, slots * alg.dim), dtype=ELEM)
    for j in range(m):
        for v in range(slots):
            rel_rows[j, v * alg.dim : (v + 1) * alg.dim] = coeff[v, j]
    rel_span = module_span(free, rel_rows) if m else linalg.zeros(0, slots * alg.dim)
    q = quotient(free, rel_span)
    tup = np.zeros((n, q.module.dim), dtype=ELEM)
    for i in range(n):
        unit_row = np.zeros(slots * alg.dim, dtype=ELEM)
        unit_row[i * alg.dim : (i + 1) * alg.dim] = alg.unit
        tup[i] = q.projection.apply(unit_row)
    res = PointedModule(q.module, tup)
    _FREE_CACHE[key] = res
    return res


def pp_type_generator(m: ModuleRep, vectors) -> PpFormula:
    """Generator of the pp-type of a tuple (holds in every module).

    Extends the tuple to a generating one, presents the module on it,
    and existentially quantifies the added generators.  When the tuple
    already generates, the result is quantifier-free.
    """
    f = m.algebra.field
    vecs = tuple_rows(vectors, m.dim)
    key = (m.fingerprint(), vecs.tobytes(), vecs.shape[0])
    hit = _TYPEGEN_CACHE.get(key)
    if hit is not None:
        return hit
    n = vecs.shape[0]
    gens = extend_to_generators(m, vecs)
    rels = presentation(m, gens)
    neq = rels.shape[0]
    a = np.transpose(rels[:, :n, :], (1, 0, 2)) if neq else np.zeros(
        (n, 0, m.algebra.dim), dtype=ELEM
    )
    b = np.transpose(rels[:, n:, :], (1, 0, 2)) if neq else np.zeros(
        (0, 0, m.algebra.dim), dtype=ELEM
    )
    res = pp_formula(m.algebra, m.side, n, a, b)
    _TYPEGEN_CACHE[key] = res
    return res


# -- ordering ---------------------------------------------------------------


def leq_absolute(phi: PpFormula, psi: PpFormula) -> bool:
    """phi <= psi in every module: test psi on phi's free realisation."""
    _require_same_shape(phi, psi)
    pointed = free_realisation(phi)
    return evaluate(psi, pointed.module).contains(pointed.tuple)


def leq_relative(phi: PpFormula, psi: PpFormula, ctx) -> bool:
    """phi(G) <= psi(G) on every generator module G of the context.

    Sound and complete for the definable subcategory the generators
    generate; pp-definable subgroups are determined on generators.
    """
    _require_same_shape(phi, psi)
    gens = tuple(ctx.generators)
    if not gens:
        raise EmptyContext("ordering relative to a context needs generators")
    f = phi.algebra.field
    for g in gens:
        sphi = evaluate(phi, g)
        spsi = evaluate(psi, g)
        if not linalg.subspace_le(f, sphi.basis, spsi.basis):
            return False
    return True


def equivalent(phi: PpFormula, psi: PpFormula) -> bool:
    return leq_absolute(phi, psi) and leq_absolute(psi, phi)


def subgroup_sum(s1: SubgroupRep, s2: SubgroupRep) -> SubgroupRep:
    f = s1.module.algebra.field
    return SubgroupRep(
        s1.module, s1.arity, linalg.subspace_sum(f, s1.basis, s2.basis)
    )


def subgroup_intersect(s1: SubgroupRep, s2: SubgroupRep) -> SubgroupRep:
    f = s1.module.algebra.field
    return SubgroupRep(
        s1.module, s1.arity, linalg.subspace_intersect(f, s1.basis, s2.basis)
    )
