"""Finite modules over a structure-constant algebra.

A module of dimension n stores one n x n matrix per algebra basis
element.  Vectors are 1-D numpy arrays and every action is applied on
the right of a row vector: ``v @ actions[i]``.  The side determines the
composition law the matrices must satisfy:

* right module:  actions[i] @ actions[j] == rho(e_i e_j)
* left module:   actions[j] @ actions[i] == rho(e_i e_j)

so a left module is stored through the transposes of its usual
column-convention action matrices.  This makes homomorphisms, solution
sets and duals side-uniform: a map is a matrix applied on the right of
a row vector for both sides, and the dual of a module transposes each
action matrix and flips the side.

All objects are immutable after construction; helper caches are
write-once and idempotent, so concurrent readers are safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebras import Algebra
from .errors import (
    AlgebraMismatch,
    DimensionMismatch,
    LengthMismatch,
    NotARepresentation,
    NotASubmodule,
    NotGenerating,
    SideMismatch,
)
from .fields import ELEM

RIGHT = "right"
LEFT = "left"
SIDES = (RIGHT, LEFT)


@dataclass(frozen=True, eq=False)
class ModuleRep:
    algebra: Algebra
    side: str
    dim: int
    actions: np.ndarray  # (alg.dim, dim, dim), applied as v @ actions[i]

    def rho(self, r: np.ndarray) -> np.ndarray:
        """Matrix of the action of an algebra element (row-applied)."""
        f = self.algebra.field
        out = np.zeros((self.dim, self.dim), dtype=ELEM)
        for i in np.nonzero(np.asarray(r, ELEM))[0]:
            out = f.add(out, f.mul(r[i], self.actions[i]))
        return out

    def act(self, v: np.ndarray, r: np.ndarray) -> np.ndarray:
        """Action of algebra element r on a single vector."""
        return linalg.matvec(self.algebra.field, v, self.rho(r))

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=ELEM)

    def basis_vector(self, j: int) -> np.ndarray:
        v = self.zero()
        v[j] = 1
        return v

    def enumerate_elements(self) -> np.ndarray:
        """All q^dim elements in code order, shape (q^dim, dim)."""
        q = self.algebra.field.q
        out = np.zeros((q**self.dim, self.dim), dtype=ELEM)
        for code in range(q**self.dim):
            out[code] = [(code // q**i) % q for i in range(self.dim)]
        return out

    def fingerprint(self) -> tuple:
        return (
            self.algebra.fingerprint(),
            self.side,
            self.dim,
            self.actions.tobytes(),
        )

    def __repr__(self) -> str:
        return f"ModuleRep({self.side}, dim={self.dim})"


def make_module(
    algebra: Algebra, side: str, dim: int, actions, validate: bool = True
) -> ModuleRep:
    """Build a module after checking the representation law.

    ``actions`` has one dim x dim matrix per algebra basis element and
    acts on row vectors.  For a left module pass the transposes of the
    usual column-convention matrices.

    Raises:
        NotARepresentation: the law or the unit action fails.
    """
    if side not in SIDES:
        raise SideMismatch(f"side must be one of {SIDES}")
    f = algebra.field
    actions = f.asarray(actions)
    if actions.shape != (algebra.dim, dim, dim):
        raise DimensionMismatch(
            f"actions shape {actions.shape}, expected {(algebra.dim, dim, dim)}"
        )
    mod = ModuleRep(algebra, side, dim, actions)
    if validate:
        if not np.array_equal(mod.rho(algebra.unit), np.eye(dim, dtype=ELEM)):
            raise NotARepresentation("unit does not act as the identity")
        for i in range(algebra.dim):
            for j in range(algebra.dim):
                target = mod.rho(algebra.constants[i, j])
                if side == RIGHT:
                    got = linalg.matmul(f, actions[i], actions[j])
                else:
                    got = linalg.matmul(f, actions[j], actions[i])
                if not np.array_equal(got, target):
                    raise NotARepresentation(
                        f"law fails on basis pair "
                        f"({algebra.labels[i]}, {algebra.labels[j]})"
                    )
    return mod


def zero_module(algebra: Algebra, side: str) -> ModuleRep:
    return make_module(
        algebra, side, 0, np.zeros((algebra.dim, 0, 0), dtype=ELEM), validate=False
    )


def regular_module(algebra: Algebra, side: str) -> ModuleRep:
    acts = (
        algebra.right_regular_actions()
        if side == RIGHT
        else algebra.left_regular_actions()
    )
    return make_module(algebra, side, algebra.dim, acts)


def free_module(algebra: Algebra, side: str, slots: int) -> ModuleRep:
    """R^slots as a module; coordinates are slot-major blocks of dim R."""
    if slots == 0:
        return zero_module(algebra, side)
    reg = regular_module(algebra, side)
    return reg if slots == 1 else direct_sum([reg] * slots).module


def dual_module(m: ModuleRep) -> ModuleRep:
    """Vector-space dual with the opposite side.

    In row-applied storage each action matrix is transposed; applying
    the dual twice returns the original arrays.
    """
    acts = np.stack([a.T.copy() for a in m.actions]) if m.dim else m.actions
    other = LEFT if m.side == RIGHT else RIGHT
    return make_module(m.algebra, other, m.dim, acts, validate=False)


# -- maps ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PointedModule:
    """A module with a distinguished tuple of elements, rows of ``tuple``."""

    module: ModuleRep
    tuple: np.ndarray  # (k, module.dim)

    @property
    def arity(self) -> int:
        return self.tuple.shape[0]


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: ModuleRep
    target: ModuleRep
    matrix: np.ndarray  # (source.dim, target.dim), applied as v @ matrix

    def apply(self, v: np.ndarray) -> np.ndarray:
        return linalg.matvec(self.source.algebra.field, v, self.matrix)

    def apply_tuple(self, vectors: np.ndarray) -> np.ndarray:
        vectors = tuple_rows(vectors, self.source.dim)
        return linalg.matmul(self.source.algebra.field, vectors, self.matrix)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self followed by other."""
        if other.source is not self.target and (
            other.source.fingerprint() != self.target.fingerprint()
        ):
            raise DimensionMismatch("composition through mismatched modules")
        f = self.source.algebra.field
        return ModuleMap(
            self.source, other.target, linalg.matmul(f, self.matrix, other.matrix)
        )

    def is_injective(self) -> bool:
        f = self.source.algebra.field
        return linalg.rank(f, self.matrix) == self.source.dim

    def is_surjective(self) -> bool:
        f = self.source.algebra.field
        return linalg.rank(f, self.matrix) == self.target.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def kernel_basis(self) -> np.ndarray:
        """Canonical basis of {v : v @ matrix = 0}."""
        f = self.source.algebra.field
        return linalg.null_space(f, self.matrix.T)

    def fingerprint(self) -> tuple:
        return (
            self.source.fingerprint(),
            self.target.fingerprint(),
            self.matrix.tobytes(),
        )


def _require_compatible(m: ModuleRep, n: ModuleRep) -> None:
    if m.algebra.fingerprint() != n.algebra.fingerprint():
        raise AlgebraMismatch("modules over different algebras")
    if m.side != n.side:
        raise SideMismatch(f"cannot mix a {m.side} module with a {n.side} module")


def make_map(source: ModuleRep, target: ModuleRep, matrix) -> ModuleMap:
    """Validated homomorphism (commutes with every basis action)."""
    _require_compatible(source, target)
    f = source.algebra.field
    matrix = f.asarray(matrix).reshape(source.dim, target.dim)
    for i in range(source.algebra.dim):
        lhs = linalg.matmul(f, source.actions[i], matrix)
        rhs = linalg.matmul(f, matrix, target.actions[i])
        if not np.array_equal(lhs, rhs):
            raise NotARepresentation(
                f"matrix does not commute with {source.algebra.labels[i]!r}"
            )
    return ModuleMap(source, target, matrix)


def identity_map(m: ModuleRep) -> ModuleMap:
    return ModuleMap(m, m, np.eye(m.dim, dtype=ELEM))


def _field_kron(field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with field multiplication."""
    ma, na = a.shape
    mb, nb = b.shape
    if min(ma, na, mb, nb) == 0:
        return np.zeros((ma * mb, na * nb), dtype=ELEM)
    out = field.mul(a[:, None, :, None], b[None, :, None, :])
    return out.reshape(ma * mb, na * nb)


def _hom_constraint_matrix(m: ModuleRep, n: ModuleRep) -> np.ndarray:
    """Rows: flattened (row-major) F with act_m[i] F = F act_n[i] for all i.

    Returns the matrix C with C @ vec(F) = 0 characterising homomorphisms.
    """
    f = m.algebra.field
    blocks = []
    ident_m = np.eye(m.dim, dtype=ELEM)
    ident_n = np.eye(n.dim, dtype=ELEM)
    for i in range(m.algebra.dim):
        t1 = _field_kron(f, m.actions[i], ident_n)
        t2 = _field_kron(f, ident_m, n.actions[i].T)
        blocks.append(f.sub(t1, t2))
    if not blocks:
        return np.zeros((0, m.dim * n.dim), dtype=ELEM)
    return np.concatenate(blocks, axis=0)


def hom_space(m: ModuleRep, n: ModuleRep) -> list[ModuleMap]:
    """Canonical F_q-basis of Hom(m, n)."""
    _require_compatible(m, n)
    if m.dim == 0 or n.dim == 0:
        return []
    c = _hom_constraint_matrix(m, n)
    basis = linalg.null_space(m.algebra.field, c)
    return [ModuleMap(m, n, row.reshape(m.dim, n.dim)) for row in basis]


def constrained_hom(
    m: ModuleRep,
    n: ModuleRep,
    source_tuple: np.ndarray,
    target_tuple: np.ndarray,
) -> ModuleMap | None:
    """A homomorphism sending source_tuple to target_tuple, or None."""
    _require_compatible(m, n)
    f = m.algebra.field
    src = tuple_rows(source_tuple, m.dim)
    tgt = tuple_rows(target_tuple, n.dim)
    if src.shape[0] != tgt.shape[0]:
        raise LengthMismatch("tuples of unequal length")
    if n.dim == 0:
        if np.any(tgt):
            return None
        return ModuleMap(m, n, np.zeros((m.dim, 0), dtype=ELEM))
    if m.dim == 0:
        if np.any(tgt):
            return None
        return ModuleMap(m, n, np.zeros((0, n.dim), dtype=ELEM))
    hom_rows = _hom_constraint_matrix(m, n)
    ident_n = np.eye(n.dim, dtype=ELEM)
    cons = [
        _field_kron(f, v.reshape(1, m.dim), ident_n) for v in src
    ]  # (v @ F) flattened
    lhs = np.concatenate([hom_rows] + cons, axis=0)
    rhs = np.concatenate(
        [np.zeros(hom_rows.shape[0], dtype=ELEM), tgt.reshape(-1)]
    )
    x = linalg.solve(f, lhs, rhs)
    if x is None:
        return None
    return ModuleMap(m, n, x.reshape(m.dim, n.dim))


# -- span and generation -------------------------------------------------


def module_span(m: ModuleRep, rows: np.ndarray) -> np.ndarray:
    """Canonical basis of the submodule generated by the given vectors."""
    f = m.algebra.field
    rows = tuple_rows(rows, m.dim)
    if rows.shape[0] == 0 or m.dim == 0:
        return linalg.zeros(0, m.dim)
    orbit = [linalg.matmul(f, rows, m.actions[i]) for i in range(m.algebra.dim)]
    orbit.append(rows)
    return linalg.row_space(f, np.concatenate(orbit, axis=0))


def is_submodule(m: ModuleRep, basis: np.ndarray) -> bool:
    span = module_span(m, basis)
    f = m.algebra.field
    return linalg.subspace_le(f, span, linalg.row_space(f, basis))


def extend_to_generators(m: ModuleRep, vectors: np.ndarray) -> np.ndarray:
    """Append standard basis vectors (in order) until the tuple generates."""
    f = m.algebra.field
    vectors = tuple_rows(vectors, m.dim)
    out = [v for v in vectors]
    span = module_span(m, vectors)
    for j in range(m.dim):
        if span.shape[0] == m.dim:
            break
        ej = m.basis_vector(j)
        if not linalg.in_span(f, span, ej):
            out.append(ej)
            span = module_span(m, np.stack(out))
    return np.stack(out) if out else np.zeros((0, m.dim), dtype=ELEM)


def presentation(m: ModuleRep, generators: np.ndarray) -> np.ndarray:
    """Relation rows of the free cover on the given generating tuple.

    Returns an array of shape (k, s, alg.dim): each row is an s-tuple of
    algebra elements r with ``sum_i g_i . r_i = 0`` (coefficients acting
    on the module side).  The rows generate the whole kernel of
    R^s -> m as a module; a greedy pass keeps the list short.

    Raises:
        NotGenerating: the tuple does not generate (witness attached).
    """
    f = m.algebra.field
    alg = m.algebra
    gens = tuple_rows(generators, m.dim)
    s = gens.shape[0]
    span = module_span(m, gens)
    if span.shape[0] != m.dim:
        for j in range(m.dim):
            if not linalg.in_span(f, span, m.basis_vector(j)):
                raise NotGenerating(m.basis_vector(j))
    # row (i, l) of the cover matrix is g_i acted on by e_l
    cover = np.zeros((s * alg.dim, m.dim), dtype=ELEM)
    for i in range(s):
        for l in range(alg.dim):
            cover[i * alg.dim + l] = linalg.matvec(f, gens[i], m.actions[l])
    kernel = linalg.null_space(f, cover.T)
    free = free_module(alg, m.side, s) if s else zero_module(alg, m.side)
    chosen: list[np.ndarray] = []
    closure = linalg.zeros(0, s * alg.dim)
    for row in kernel:
        if not linalg.in_span(f, closure, row):
            chosen.append(row)
            closure = module_span(free, np.stack(chosen)) if s else closure
    if not chosen:
        return np.zeros((0, s, alg.dim), dtype=ELEM)
    return np.stack(chosen).reshape(-1, s, alg.dim)


# -- sums, submodules, quotients -----------------------------------------


@dataclass(frozen=True, eq=False)
class DirectSum:
    module: ModuleRep
    injections: tuple[ModuleMap, ...]
    projections: tuple[ModuleMap, ...]


def direct_sum(parts: list[ModuleRep]) -> DirectSum:
    if not parts:
        raise DimensionMismatch("direct sum of an empty list")
    first = parts[0]
    for p in parts[1:]:
        _require_compatible(first, p)
    alg = first.algebra
    total = sum(p.dim for p in parts)
    actions = np.zeros((alg.dim, total, total), dtype=ELEM)
    offsets = []
    pos = 0
    for p in parts:
        offsets.append(pos)
        for i in range(alg.dim):
            actions[i, pos : pos + p.dim, pos : pos + p.dim] = p.actions[i]
        pos += p.dim
    module = make_module(alg, first.side, total, actions, validate=False)
    injections = []
    projections = []
    for p, off in zip(parts, offsets):
        inj = np.zeros((p.dim, total), dtype=ELEM)
        inj[:, off : off + p.dim] = np.eye(p.dim, dtype=ELEM)
        injections.append(ModuleMap(p, module, inj))
        projections.append(ModuleMap(module, p, inj.T.copy()))
    return DirectSum(module, tuple(injections), tuple(projections))


@dataclass(frozen=True, eq=False)
class Submodule:
    module: ModuleRep
    inclusion: ModuleMap  # submodule -> ambient


def submodule(m: ModuleRep, rows: np.ndarray) -> Submodule:
    """Action-closed subspace as a module with its inclusion."""
    f = m.algebra.field
    basis = linalg.row_space(f, tuple_rows(rows, m.dim))
    if not is_submodule(m, basis):
        raise NotASubmodule("subspace is not closed under the action")
    k = basis.shape[0]
    actions = np.zeros((m.algebra.dim, k, k), dtype=ELEM)
    for i in range(m.algebra.dim):
        moved = linalg.matmul(f, basis, m.actions[i])
        for r in range(k):
            coords = linalg.coords_in_rref(f, basis, moved[r])
            actions[i, r] = coords
    sub = make_module(m.algebra, m.side, k, actions, validate=False)
    return Submodule(sub, ModuleMap(sub, m, basis.copy()))


@dataclass(frozen=True, eq=False)
class Quotient:
    module: ModuleRep
    projection: ModuleMap  # ambient -> quotient


def quotient(m: ModuleRep, rows: np.ndarray) -> Quotient:
    """Quotient by an action-closed subspace, with the canonical map."""
    f = m.algebra.field
    sub_basis = linalg.row_space(f, tuple_rows(rows, m.dim))
    if not is_submodule(m, sub_basis):
        raise NotASubmodule("relations are not closed under the action")
    pivots = [int(np.nonzero(r)[0][0]) for r in sub_basis]
    keep = [c for c in range(m.dim) if c not in pivots]
    qdim = len(keep)

    def project(v: np.ndarray) -> np.ndarray:
        return linalg.reduce_mod(f, sub_basis, v)[keep]

    proj = np.zeros((m.dim, qdim), dtype=ELEM)
    for j in range(m.dim):
        proj[j] = project(m.basis_vector(j))
    actions = np.zeros((m.algebra.dim, qdim, qdim), dtype=ELEM)
    for i in range(m.algebra.dim):
        for r, c in enumerate(keep):
            actions[i, r] = project(
                linalg.matvec(f, m.basis_vector(c), m.actions[i])
            )
    q = make_module(m.algebra, m.side, qdim, actions, validate=False)
    return Quotient(q, ModuleMap(m, q, proj))


def sum_quotient(
    parts: list[ModuleRep], relations: np.ndarray | None = None
) -> DirectSum | Quotient:
    """Direct sum of the parts, optionally followed by a quotient.

    With relations given they are rows in the coordinates of the sum;
    the returned Quotient's projection starts from the sum module.
    """
    ds = direct_sum(parts)
    if relations is None:
        return ds
    return quotient(ds.module, relations)


def are_isomorphic(m: ModuleRep, n: ModuleRep) -> bool:
    """Search Hom(m, n) for an invertible element (exhaustive, small q)."""
    if m.dim != n.dim:
        return False
    if m.dim == 0:
        return True
    basis = hom_space(m, n)
    if not basis:
        return False
    f = m.algebra.field
    # iterate all field combinations of the hom basis
    k = len(basis)
    for code in range(1, f.q**k):
        coeffs = [(code // f.q**i) % f.q for i in range(k)]
        mat = np.zeros((m.dim, n.dim), dtype=ELEM)
        for c, h in zip(coeffs, basis):
            if c:
                mat = f.add(mat, f.mul(c, h.matrix))
        if linalg.rank(f, mat) == m.dim:
            return True
    return False


def tuple_rows(vectors, dim: int) -> np.ndarray:
    """Normalize a tuple of module elements to a (k, dim) array.

    Accepts a (k, dim) array, a flat array of length k*dim, or any
    nested sequence with those shapes.  Over a 0-dimensional module
    only 2-D input can convey the tuple length; flat input means the
    empty tuple.
    """
    arr = np.asarray(vectors, ELEM)
    if arr.ndim == 2:
        if arr.shape[1] != dim:
            raise DimensionMismatch(
                f"tuple rows of length {arr.shape[1]}, module dim {dim}"
            )
        return arr
    arr = arr.reshape(-1)
    if dim == 0:
        return np.zeros((0, 0), dtype=ELEM)
    if arr.shape[0] % dim:
        raise DimensionMismatch(
            f"flat tuple of size {arr.shape[0]} over module dim {dim}"
        )
    return arr.reshape(-1, dim)


def flatten_tuple(vectors: np.ndarray, dim: int) -> np.ndarray:
    """Concatenate a (k, dim) tuple into a flat k*dim vector."""
    return tuple_rows(vectors, dim).reshape(-1)


def unflatten_tuple(flat: np.ndarray, dim: int) -> np.ndarray:
    flat = np.asarray(flat, ELEM)
    if dim == 0:
        return np.zeros((0, 0), dtype=ELEM)
    return flat.reshape(-1, dim)
