"""The lattice of pp-definable subgroups of a finite module.

Definability of a subspace S <= M^n is decided by the pointed-power
method: point the k-th power of M by the diagonal tuple collecting the
coordinates of a spanning set of S, take the generator of that tuple's
pp-type, and evaluate it back on M.  The result is the least
pp-definable subgroup containing S, so S is definable iff the closure
is S itself.  Whole lattices are then assembled by enumerating
subspace candidates; the candidates are pre-filtered by closure under
the diagonal endomorphism action, which every pp-definable subgroup
satisfies (the module action itself is not a sound filter once the
algebra is noncommutative).

Filters of the finite lattice are exactly the principal up-sets, so
filter analysis (neg-isolation with respect to an avoided element, and
the join/meet irreducibility test) runs over generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import linalg
from .errors import CapExceeded, ValidationFailure
from .fields import ELEM, Field
from .formulas import (
    PpFormula,
    SubgroupRep,
    bot,
    evaluate,
    pp_type_generator,
)
from .modules import ModuleRep, direct_sum, hom_space, tuple_rows

DEFAULT_CAP = 2**16


def enumerate_subspaces(field: Field, n: int):
    """All subspaces of the row space F^n, as canonical RREF bases.

    Yields one basis per subspace: for each pivot-column set, the free
    entries (right of each pivot, off the other pivot columns) range
    over the field.
    """
    yield np.zeros((0, n), dtype=ELEM)
    for k in range(1, n + 1):
        for pivots in combinations(range(n), k):
            free = [
                (r, c)
                for r in range(k)
                for c in range(n)
                if c > pivots[r] and c not in pivots
            ]
            for values in product(range(field.q), repeat=len(free)):
                basis = np.zeros((k, n), dtype=ELEM)
                for r, p in enumerate(pivots):
                    basis[r, p] = 1
                for (r, c), v in zip(free, values):
                    basis[r, c] = v
                yield basis


def count_subspaces(field: Field, n: int) -> int:
    """Sum of Gaussian binomials: number of subspaces of F^n."""
    q = field.q
    total = 0
    for k in range(n + 1):
        num = den = 1
        for i in range(k):
            num *= q ** (n - i) - 1
            den *= q ** (i + 1) - 1
        total += num // den
    return total


@dataclass(frozen=True)
class DefinabilityResult:
    definable: bool
    witness: PpFormula  # defines the closure; on success, defines S
    closure: np.ndarray  # canonical basis of the least definable superset


def is_pp_definable(
    m: ModuleRep, basis, arity: int = 1, cap: int = DEFAULT_CAP
) -> DefinabilityResult:
    """Is the subspace spanned by ``basis`` rows pp-definable in M^arity?

    The rows live in M^arity, flattened.  Cost is governed by the
    pointed power M^k with k the spanning-set size; the cap bounds
    |M|^k.
    """
    field = m.algebra.field
    rows = linalg.row_space(
        field, tuple_rows(basis, m.dim * arity)
    )
    k = rows.shape[0]
    if k == 0:
        phi = bot(m.algebra, m.side, arity)
        return DefinabilityResult(True, phi, rows)
    if field.q ** (m.dim * k) > cap:
        raise CapExceeded(
            f"pointed power needs |M|^{k} = {field.q ** (m.dim * k)} > cap {cap}"
        )
    power = direct_sum([m] * k).module
    # diagonal tuple: the j-th entry collects the j-th coordinate block
    # of every spanning row
    diag = np.zeros((arity, power.dim), dtype=ELEM)
    for j in range(arity):
        for s in range(k):
            diag[j, s * m.dim : (s + 1) * m.dim] = rows[
                s, j * m.dim : (j + 1) * m.dim
            ]
    phi = pp_type_generator(power, diag)
    closure = evaluate(phi, m).basis
    definable = linalg.subspace_eq(closure, rows)
    return DefinabilityResult(definable, phi, closure)


@dataclass(frozen=True, eq=False)
class PpLattice:
    """All pp-definable subgroups of M^arity with order and operations.

    Elements are canonical subspace bases sorted by (dimension, bytes);
    ``leq``, ``meet``, ``join`` are dense tables over element indices.
    """

    module: ModuleRep
    arity: int
    elements: tuple[SubgroupRep, ...]
    witnesses: tuple[PpFormula, ...]
    leq: np.ndarray  # bool (k, k)
    meet: np.ndarray  # int (k, k)
    join: np.ndarray  # int (k, k)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.elements) - 1

    def index_of(self, basis: np.ndarray) -> int:
        for i, el in enumerate(self.elements):
            if linalg.subspace_eq(el.basis, basis):
                return i
        raise ValidationFailure("subspace is not a lattice element")


def _end_closed(field, end_basis, arity, basis) -> bool:
    """Is the subspace closed under the diagonal endomorphism action?"""
    if basis.shape[0] == 0:
        return True
    for h in end_basis:
        for row in basis:
            blocks = row.reshape(arity, -1)
            image = linalg.matmul(field, blocks, h.matrix).reshape(-1)
            if not linalg.in_span(field, basis, image):
                return False
    return True


def pp_lattice(
    m: ModuleRep, arity: int = 1, cap: int = DEFAULT_CAP
) -> PpLattice:
    """The full lattice of pp-definable subgroups of M^arity."""
    field = m.algebra.field
    total_dim = m.dim * arity
    n_subspaces = count_subspaces(field, total_dim)
    if n_subspaces > cap:
        raise CapExceeded(
            f"{n_subspaces} subspace candidates exceed cap {cap}"
        )
    end_basis = hom_space(m, m)
    found: list[tuple[np.ndarray, PpFormula]] = []
    for basis in enumerate_subspaces(field, total_dim):
        if not _end_closed(field, end_basis, arity, basis):
            continue
        res = is_pp_definable(m, basis, arity, cap)
        if res.definable:
            found.append((basis, res.witness))
    found.sort(key=lambda bw: (bw[0].shape[0], bw[0].tobytes()))
    elements = tuple(
        SubgroupRep(m, arity, basis) for basis, _ in found
    )
    witnesses = tuple(w for _, w in found)
    k = len(elements)
    leq = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(k):
            leq[i, j] = linalg.subspace_le(
                field, elements[i].basis, elements[j].basis
            )
    meet = np.zeros((k, k), dtype=np.int32)
    join = np.zeros((k, k), dtype=np.int32)
    index = {el.basis.tobytes(): i for i, el in enumerate(elements)}

    def _find(basis: np.ndarray, what: str) -> int:
        got = index.get(basis.tobytes())
        if got is None:
            raise ValidationFailure(
                f"lattice is not closed under {what}; definability filter broken"
            )
        return got

    for i in range(k):
        for j in range(k):
            cap_basis = linalg.subspace_intersect(
                field, elements[i].basis, elements[j].basis
            )
            sum_basis = linalg.subspace_sum(
                field, elements[i].basis, elements[j].basis
            )
            meet[i, j] = _find(cap_basis, "intersection")
            join[i, j] = _find(sum_basis, "sum")
    return PpLattice(m, arity, elements, witnesses, leq, meet, join)


def hasse_edges(lat: PpLattice) -> list[tuple[int, int]]:
    """Covering pairs (i, j) with element i covered by element j."""
    edges = []
    k = lat.size
    for i in range(k):
        for j in range(k):
            if i == j or not lat.leq[i, j]:
                continue
            if any(
                lat.leq[i, between] and lat.leq[between, j]
                for between in range(k)
                if between not in (i, j)
            ):
                continue
            edges.append((i, j))
    return edges


@dataclass(frozen=True, eq=False)
class PpFilter:
    """An upward-closed, meet-closed nonempty subset of a PpLattice."""

    lattice: PpLattice
    members: frozenset[int]

    @property
    def generator(self) -> int:
        """Least member; finite filters are principal."""
        lat = self.lattice
        for i in sorted(self.members):
            if all(lat.leq[i, j] for j in self.members):
                return i
        raise ValidationFailure("filter has no least element")


def make_filter(lat: PpLattice, members) -> PpFilter:
    members = frozenset(int(i) for i in members)
    if not members:
        raise ValidationFailure("filters are nonempty")
    for i in members:
        for j in range(lat.size):
            if lat.leq[i, j] and j not in members:
                raise ValidationFailure("filter is not upward closed")
        for j in members:
            if int(lat.meet[i, j]) not in members:
                raise ValidationFailure("filter is not meet closed")
    return PpFilter(lat, members)


def principal_filter(lat: PpLattice, g: int) -> PpFilter:
    return make_filter(
        lat, [j for j in range(lat.size) if lat.leq[g, j]]
    )


def all_filters(lat: PpLattice) -> list[PpFilter]:
    """Every filter of the finite lattice, i.e. every principal up-set."""
    return [principal_filter(lat, g) for g in range(lat.size)]


def ziegler_irreducible(filt: PpFilter) -> bool:
    """Irreducibility, read off the lattice literally.

    For every pair outside the filter there must be a member whose
    meets with the two stay jointly outside after summing.
    """
    lat = filt.lattice
    outside = [i for i in range(lat.size) if i not in filt.members]
    for p1 in outside:
        for p2 in outside:
            if not any(
                int(lat.join[lat.meet[p1, c], lat.meet[p2, c]])
                not in filt.members
                for c in filt.members
            ):
                return False
    return True


@dataclass(frozen=True, eq=False)
class NegIsolatedFilter:
    filter: PpFilter
    ziegler: bool


def filter_analysis(lat: PpLattice, avoid: int) -> list[NegIsolatedFilter]:
    """Filters maximal with respect to excluding ``avoid``, with flags."""
    if not 0 <= avoid < lat.size:
        raise ValidationFailure("avoided element is not in the lattice")
    candidates = [
        f for f in all_filters(lat) if avoid not in f.members
    ]
    out = []
    for f in candidates:
        if any(
            other.members > f.members for other in candidates
        ):
            continue
        out.append(NegIsolatedFilter(f, ziegler_irreducible(f)))
    return out
