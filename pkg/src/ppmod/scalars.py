"""Endomorphism rings, their commutants, and definable scalars.

Endomorphisms of a finite module act by matrices on row vectors; the
biendomorphism ring is the commutant of that matrix algebra.  A
biendomorphism g becomes a definable scalar by a fully explicit
two-variable formula: fix a tuple of generators of the module over its
endomorphism ring, take a generator phi of the pp-type of the tuple
joined with its g-image, and say that u and v decompose as sums whose
i-th summand pair satisfies phi's i-th coordinate projection.  The
graph of that formula is the graph of g, which is checked rather than
assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import linalg
from .errors import CapExceeded, ValidationFailure
from .fields import ELEM, Field
from .formulas import PpFormula, evaluate, pp_formula, pp_type_generator
from .modules import ModuleRep, RIGHT, _field_kron, hom_space


@dataclass(frozen=True, eq=False)
class RingTable:
    """A finite-dimensional algebra of matrices, with structure table.

    ``basis[i]`` acts on row vectors by right multiplication; ``table``
    holds structure constants (basis[i] basis[j] expanded over the
    basis); ``from_r`` maps algebra basis elements to coordinate rows
    when the base algebra acts through this ring.
    """

    labels: tuple[str, ...]
    basis: np.ndarray  # (k, d, d)
    table: np.ndarray  # (k, k, k)
    unit: np.ndarray  # (k,)
    from_r: np.ndarray | None = None  # (algebra dim, k)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two coordinate rows via the structure table."""
        field = _table_field(self)
        acc = np.zeros(self.dim, dtype=ELEM)
        for i in range(self.dim):
            if not x[i]:
                continue
            for j in range(self.dim):
                if not y[j]:
                    continue
                coeff = field.mul(int(x[i]), int(y[j]))
                acc = field.add(
                    acc, field.mul(np.full(self.dim, coeff, ELEM), self.table[i, j])
                )
        return acc


def _table_field(rt: RingTable) -> Field:
    return rt._field  # attached at construction


def _make_ring_table(
    field: Field,
    mats: np.ndarray,
    prefix: str,
    from_r: np.ndarray | None = None,
) -> RingTable:
    """Structure table of a matrix algebra given by a canonical basis.

    The basis rows (flattened matrices) must be in RREF so products can
    be re-expanded by pivot extraction; closure under products and
    presence of the identity are verified.
    """
    k, d = mats.shape[0], (mats.shape[1] if mats.ndim == 3 else 0)
    vec = mats.reshape(k, d * d)
    table = np.zeros((k, k, k), dtype=ELEM)
    for i in range(k):
        for j in range(k):
            prod = linalg.matmul(field, mats[i], mats[j]).reshape(-1)
            coords = linalg.coords_in_rref(field, vec, prod)
            if coords is None:
                raise ValidationFailure("matrix set is not closed under products")
            table[i, j] = coords
    if d:
        unit = linalg.coords_in_rref(field, vec, linalg.eye(field, d).reshape(-1))
        if unit is None:
            raise ValidationFailure("matrix ring does not contain the identity")
    else:
        unit = np.zeros(0, dtype=ELEM)
    rt = RingTable(
        tuple(f"{prefix}{i}" for i in range(k)), mats, table, unit, from_r
    )
    object.__setattr__(rt, "_field", field)
    return rt


@dataclass(frozen=True, eq=False)
class EndBiend:
    end: RingTable
    biend: RingTable
    generators: np.ndarray  # (g, dim): module generators over End


def _commutant(field: Field, mats, d: int) -> np.ndarray:
    """Canonical basis of {G : G m = m G for all given m}, as (k, d, d)."""
    if d == 0:
        return np.zeros((0, 0, 0), dtype=ELEM)
    ident = linalg.eye(field, d)
    blocks = []
    for m in mats:
        lhs = _field_kron(field, m, ident)
        rhs = _field_kron(field, ident, m.T)
        blocks.append(field.sub(lhs, rhs))
    if not blocks:
        blocks = [np.zeros((0, d * d), dtype=ELEM)]
    rows = linalg.null_space(field, np.concatenate(blocks, axis=0))
    return rows.reshape(-1, d, d)


def end_and_biend(m: ModuleRep) -> EndBiend:
    """End(M), its commutant, and greedy module generators over End."""
    field = m.algebra.field
    d = m.dim
    end_maps = hom_space(m, m)
    end_mats = (
        np.stack([h.matrix for h in end_maps])
        if end_maps
        else np.zeros((0, d, d), dtype=ELEM)
    )
    end = _make_ring_table(field, end_mats, "f")
    biend_mats = _commutant(field, end_mats, d)
    from_r = None
    if m.side == RIGHT and d:
        vec = biend_mats.reshape(biend_mats.shape[0], d * d)
        from_r = np.zeros((m.algebra.dim, biend_mats.shape[0]), dtype=ELEM)
        for l in range(m.algebra.dim):
            coords = linalg.coords_in_rref(
                field, vec, m.actions[l].reshape(-1)
            )
            if coords is None:
                raise ValidationFailure(
                    "module action does not land in the commutant"
                )
            from_r[l] = coords
    biend = _make_ring_table(field, biend_mats, "g", from_r)
    generators = _greedy_generators(m, end_mats)
    return EndBiend(end, biend, generators)


def _greedy_generators(m: ModuleRep, end_mats: np.ndarray) -> np.ndarray:
    """Module generators over End, greedy by orbit-dimension descent."""
    field = m.algebra.field
    d = m.dim
    span = np.zeros((0, d), dtype=ELEM)
    chosen: list[np.ndarray] = []
    elements = m.enumerate_elements()
    while span.shape[0] < d:
        best = None
        best_gain = 0
        best_span = span
        for v in elements:
            rows = np.stack([
                linalg.matvec(field, v, h) for h in end_mats
            ]) if end_mats.shape[0] else np.zeros((0, d), dtype=ELEM)
            cand = linalg.row_space(
                field, np.concatenate([span, rows], axis=0)
            )
            gain = cand.shape[0] - span.shape[0]
            if gain > best_gain:
                best, best_gain, best_span = v, gain, cand
        if best is None:
            raise ValidationFailure("no element extends the End-orbit span")
        chosen.append(best)
        span = best_span
    return (
        np.stack(chosen)
        if chosen
        else np.zeros((0, d), dtype=ELEM)
    )


_ENDBIEND_CACHE: dict = {}


def cached_end_and_biend(m: ModuleRep) -> EndBiend:
    key = m.fingerprint()
    hit = _ENDBIEND_CACHE.get(key)
    if hit is None:
        hit = end_and_biend(m)
        _ENDBIEND_CACHE[key] = hit
    return hit


@dataclass(frozen=True, eq=False)
class ScalarSynthesis:
    formula: PpFormula  # rho(u, v)
    type_generator: PpFormula  # phi for the joined tuple
    generators: np.ndarray
    matrix: np.ndarray  # the biendomorphism realised
    total: bool
    functional: bool


def synthesize_scalar(m: ModuleRep, g, eb: EndBiend | None = None) -> ScalarSynthesis:
    """The two-variable formula whose graph is the graph of g on M."""
    field = m.algebra.field
    alg = m.algebra
    d = m.dim
    g = field.asarray(g).reshape(d, d)
    eb = eb or cached_end_and_biend(m)
    for h in eb.end.basis:
        if not np.array_equal(
            linalg.matmul(field, g, h), linalg.matmul(field, h, g)
        ):
            raise ValidationFailure("matrix is not a biendomorphism")
    gens = eb.generators
    k = gens.shape[0]
    joined = np.concatenate([gens, linalg.matmul(field, gens, g)], axis=0)
    phi = pp_type_generator(m, joined)
    # rho(u, v): bounds are x_1..x_k, y_1..y_k, then per conjunct i the
    # 2k-2 unshared slot variables of phi plus phi's own bound block
    per_conj = (2 * k - 2) + phi.nbound
    nbound = 2 * k + k * per_conj
    neq = 2 + k * phi.neq
    a = np.zeros((2, neq, alg.dim), dtype=ELEM)
    b = np.zeros((nbound, neq, alg.dim), dtype=ELEM)
    a[0, 0] = alg.unit
    a[1, 1] = alg.unit
    for i in range(k):
        b[i, 0] = field.neg(alg.unit)
        b[k + i, 1] = field.neg(alg.unit)
    for i in range(k):
        base = 2 * k + i * per_conj
        fresh = iter(range(base, base + 2 * k - 2))
        slot_row = {}
        for s in range(2 * k):
            if s == i:
                slot_row[s] = i
            elif s == k + i:
                slot_row[s] = k + i
            else:
                slot_row[s] = next(fresh)
        col0 = 2 + i * phi.neq
        for s in range(2 * k):
            b[slot_row[s], col0 : col0 + phi.neq] = phi.a[s]
        for r in range(phi.nbound):
            b[base + 2 * k - 2 + r, col0 : col0 + phi.neq] = phi.b[r]
    rho = pp_formula(alg, m.side, 2, a, b)
    sol = evaluate(rho, m).basis
    graph = linalg.row_space(
        field,
        np.concatenate(
            [linalg.eye(field, d), g], axis=1
        ),
    )
    if not linalg.subspace_eq(sol, graph):
        raise ValidationFailure(
            "synthesized formula does not define the intended scalar"
        )
    domain = linalg.row_space(field, sol[:, :d])
    total = domain.shape[0] == d
    functional = sol.shape[0] == domain.shape[0]
    return ScalarSynthesis(rho, phi, gens, g, total, functional)


def zero_section(m: ModuleRep, rho: PpFormula) -> np.ndarray:
    """Canonical basis of {v : rho(0, v)}; zero iff rho is functional."""
    field = m.algebra.field
    alg = m.algebra
    pin = np.zeros((2, 1, alg.dim), dtype=ELEM)
    pin[0, 0] = alg.unit
    u_zero = pp_formula(alg, m.side, 2, pin, np.zeros((0, 1, alg.dim), ELEM))
    from .formulas import conj

    sol = evaluate(conj(rho, u_zero), m).basis
    return linalg.row_space(field, sol[:, m.dim :])


@dataclass(frozen=True, eq=False)
class ScalarRing:
    ring: RingTable
    end: RingTable
    biend: RingTable
    generators: np.ndarray
    syntheses: tuple[ScalarSynthesis, ...]
    matches_biend: bool


def scalar_ring(m: ModuleRep) -> ScalarRing:
    """Definable scalars of M, assembled one biendomorphism at a time."""
    field = m.algebra.field
    d = m.dim
    eb = cached_end_and_biend(m)
    synths = []
    induced = []
    for g in eb.biend.basis:
        s = synthesize_scalar(m, g, eb)
        synths.append(s)
        sol = evaluate(s.formula, m).basis
        mat = np.zeros((d, d), dtype=ELEM)
        for j in range(d):
            coeffs = linalg.solve(field, sol[:, :d].T, linalg.eye(field, d)[j])
            if coeffs is None:
                raise ValidationFailure("synthesized scalar is not total")
            mat[j] = linalg.matvec(field, coeffs, sol[:, d:])
        induced.append(mat)
    induced_mats = (
        np.stack(induced) if induced else np.zeros((0, d, d), dtype=ELEM)
    )
    matches = np.array_equal(induced_mats, eb.biend.basis)
    ring = _make_ring_table(field, induced_mats, "r", eb.biend.from_r)
    return ScalarRing(
        ring, eb.end, eb.biend, eb.generators, tuple(synths), matches
    )


def annihilator_basis(m: ModuleRep) -> np.ndarray:
    """Canonical basis of {r in the algebra : M r = 0}."""
    field = m.algebra.field
    if m.dim == 0:
        return linalg.eye(field, m.algebra.dim).astype(ELEM)
    stacked = np.stack(
        [m.actions[l].reshape(-1) for l in range(m.algebra.dim)]
    )
    return linalg.null_space(field, stacked.T)


def ring_kernel(rt: RingTable, algebra_dim: int) -> np.ndarray:
    """Kernel of the structural map from the base algebra, as rows."""
    field = _table_field(rt)
    if rt.from_r is None:
        raise ValidationFailure("ring table has no structural map")
    if rt.from_r.shape[1] == 0:
        return linalg.eye(field, algebra_dim).astype(ELEM)
    return linalg.null_space(field, rt.from_r.T)


def ring_isomorphic(
    field: Field,
    table_a: np.ndarray,
    unit_a: np.ndarray,
    table_b: np.ndarray,
    unit_b: np.ndarray,
    cap: int = 2**20,
) -> bool:
    """Brute-force F-algebra isomorphism test on structure tables."""
    k = table_a.shape[0]
    if table_b.shape[0] != k:
        return False
    if k == 0:
        return True
    if field.q ** (k * k) > cap:
        raise CapExceeded("isomorphism search space exceeds the cap")
    unit_a = np.asarray(unit_a, ELEM)
    unit_b = np.asarray(unit_b, ELEM)

    def mult(table, x, y):
        acc = np.zeros(k, dtype=ELEM)
        for i in range(k):
            if not x[i]:
                continue
            for j in range(k):
                if not y[j]:
                    continue
                c = field.mul(int(x[i]), int(y[j]))
                acc = field.add(acc, field.mul(np.full(k, c, ELEM), table[i, j]))
        return acc

    eye_k = [np.eye(k, dtype=ELEM)[i] for i in range(k)]
    for flat in product(range(field.q), repeat=k * k):
        t_mat = np.array(flat, dtype=ELEM).reshape(k, k)
        if linalg.rank(field, t_mat) != k:
            continue
        if not np.array_equal(linalg.matvec(field, unit_a, t_mat), unit_b):
            continue
        ok = True
        for i in range(k):
            for j in range(k):
                lhs = linalg.matvec(field, table_a[i, j], t_mat)
                rhs = mult(
                    table_b,
                    linalg.matvec(field, eye_k[i], t_mat),
                    linalg.matvec(field, eye_k[j], t_mat),
                )
                if not np.array_equal(lhs, rhs):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False
