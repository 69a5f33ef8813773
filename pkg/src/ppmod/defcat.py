"""Definable contexts, pp-pair closure, and purity.

A definable subcategory is presented here in either (or both) of two
finite ways: by generator modules, or by an explicit list of ordered
pp-pairs (phi, psi) with psi <= phi that every member must close
(equal solution sets).  Membership testing demands the explicit list;
with generators only it is refused rather than approximated.

Purity is decided one element at a time: a map preserves pp-types of
single elements iff it is a pure embedding, and a surjection is a pure
epimorphism iff every element of the target lifts inside the solution
set of its pp-type generator.  Both reductions are to one free
variable; the tuple versions are exercised by tests, not used at
runtime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    AlgebraMismatch,
    EmptyContext,
    LengthMismatch,
    NoExplicitPairs,
    NotInSolutionSet,
    SideMismatch,
    ValidationFailure,
)
from .fields import ELEM
from .formulas import PpFormula, evaluate, leq_absolute, pp_type_generator
from .modules import (
    ModuleMap,
    ModuleRep,
    PointedModule,
    constrained_hom,
    direct_sum,
    quotient,
    submodule,
    tuple_rows,
)


@dataclass(frozen=True, eq=False)
class DefinableContext:
    """Generators and/or explicit closed pairs cutting out a subcategory."""

    algebra: object
    side: str
    generators: tuple[ModuleRep, ...] = ()
    pairs: tuple[tuple[PpFormula, PpFormula], ...] = ()


def make_context(
    generators=(), pairs=(), validate_pairs: bool = True
) -> DefinableContext:
    """Validated context; needs at least one generator or pair.

    Every pair (phi, psi) must be ordered (psi <= phi absolutely) and
    closed on every generator.
    """
    generators = tuple(generators)
    pairs = tuple((p, q) for p, q in pairs)
    if not generators and not pairs:
        raise EmptyContext("a context needs generators or pairs")
    if generators:
        alg = generators[0].algebra
        side = generators[0].side
    else:
        alg = pairs[0][0].algebra
        side = pairs[0][0].side
    for g in generators:
        if g.algebra.fingerprint() != alg.fingerprint():
            raise AlgebraMismatch("context generators over different algebras")
        if g.side != side:
            raise SideMismatch("context generators on different sides")
    for phi, psi in pairs:
        if phi.algebra.fingerprint() != alg.fingerprint():
            raise AlgebraMismatch("context pair over a different algebra")
        if phi.side != side or psi.side != side:
            raise SideMismatch("context pair on the wrong side")
        if validate_pairs:
            if not leq_absolute(psi, phi):
                raise ValidationFailure(
                    f"pair not ordered: {psi.render()} is not below {phi.render()}"
                )
            for g in generators:
                if not pair_closed(phi, psi, g):
                    raise ValidationFailure(
                        f"pair ({phi.render()}, {psi.render()}) "
                        "is open on a generator"
                    )
    return DefinableContext(alg, side, generators, pairs)


def pair_closed(phi: PpFormula, psi: PpFormula, m: ModuleRep) -> bool:
    """Does the pp-pair phi/psi close on m (equal solution sets)?

    Callers supply an ordered pair (psi <= phi); only solution-set
    equality is tested here.
    """
    return linalg.subspace_eq(evaluate(phi, m).basis, evaluate(psi, m).basis)


def member_check(n: ModuleRep, ctx: DefinableContext) -> bool:
    """Is n in the subcategory cut out by the explicit pairs?

    Raises:
        NoExplicitPairs: the context carries generators only; a finite
            generator list does not decide membership, so refuse.
    """
    if not ctx.pairs:
        raise NoExplicitPairs(
            "membership needs an explicit pair list; generators alone "
            "do not decide it"
        )
    return all(pair_closed(phi, psi, n) for phi, psi in ctx.pairs)


# -- purity ------------------------------------------------------------------


@dataclass(frozen=True)
class PurityReport:
    pure_mono: bool
    pure_epi: bool
    mono_witness: tuple | None  # (element, formula) with type not preserved
    epi_witness: tuple | None  # (element, formula) with no lift in phi(source)


def purity_check(f_map: ModuleMap) -> PurityReport:
    """Single-element purity tests on a finite map.

    pure_mono: every source element satisfies (in the source) the
    generator of its image's pp-type.  pure_epi: every target element
    has a preimage inside the solution set of its pp-type generator.
    """
    m, n = f_map.source, f_map.target
    field = m.algebra.field
    mono_ok, mono_wit = True, None
    for a in m.enumerate_elements():
        fa = f_map.apply(a)
        psi = pp_type_generator(n, fa.reshape(1, -1))
        if not evaluate(psi, m).contains(a):
            mono_ok, mono_wit = False, (a, psi)
            break
    epi_ok, epi_wit = True, None
    for aa in n.enumerate_elements():
        phi = pp_type_generator(n, aa.reshape(1, -1))
        sol = evaluate(phi, m)
        # affine solve: b in phi(m) with b @ f = aa
        lhs = (
            linalg.matmul(field, sol.basis, f_map.matrix).T
            if sol.dim
            else np.zeros((n.dim, 0), dtype=ELEM)
        )
        if linalg.solve(field, lhs, aa) is None:
            epi_ok, epi_wit = False, (aa, phi)
            break
    return PurityReport(mono_ok, epi_ok, mono_wit, epi_wit)


@dataclass(frozen=True, eq=False)
class PullbackResult:
    module: ModuleRep
    to_source: ModuleMap  # X -> M
    to_cover: ModuleMap  # X -> D
    inclusion: ModuleMap  # X -> M (+) D
    inclusion_report: PurityReport
    to_source_report: PurityReport


def pullback_pure(f_map: ModuleMap, p_map: ModuleMap) -> PullbackResult:
    """Pullback X = {(m, d) : f m = p d} with its purity reports.

    With p a pure epimorphism, X -> M is again a pure epimorphism and
    pp-pairs closed on the corner modules close on X.
    """
    if f_map.target.fingerprint() != p_map.target.fingerprint():
        raise AlgebraMismatch("pullback needs a common codomain")
    m, d = f_map.source, p_map.source
    field = m.algebra.field
    ds = direct_sum([m, d])
    amb = ds.module
    # rows: basis of the kernel of (x, y) |-> f x - p y
    diff = np.concatenate(
        [f_map.matrix, field.neg(p_map.matrix)], axis=0
    )  # (m.dim + d.dim, target.dim)
    ker = linalg.null_space(field, diff.T)
    sub = submodule(amb, ker)
    x = sub.module
    incl = sub.inclusion
    to_m = incl.compose(ds.projections[0])
    to_d = incl.compose(ds.projections[1])
    return PullbackResult(
        x, to_m, to_d, incl, purity_check(incl), purity_check(to_m)
    )


@dataclass(frozen=True, eq=False)
class PushoutResult:
    module: ModuleRep
    from_source: ModuleMap  # M -> Y
    from_cover: ModuleMap  # D -> Y
    antidiagonal: ModuleMap  # D' -> M (+) D, d |-> (f d, -i d)
    antidiagonal_report: PurityReport
    from_source_report: PurityReport


def pushout_pure(i_map: ModuleMap, f_map: ModuleMap) -> PushoutResult:
    """Pushout Y = (M (+) D) / {(f d', -i d')} with purity reports.

    i: D' -> D and f: D' -> M share the source D'.  With i a pure
    monomorphism the antidiagonal embedding is one too, and so is the
    pushed-out map M -> Y; pairs closed on the corners close on Y.
    """
    if i_map.source.fingerprint() != f_map.source.fingerprint():
        raise AlgebraMismatch("pushout needs a common domain")
    dprime = i_map.source
    d, m = i_map.target, f_map.target
    field = m.algebra.field
    ds = direct_sum([m, d])
    anti = np.concatenate(
        [f_map.matrix, field.neg(i_map.matrix)], axis=1
    )  # (dprime.dim, m.dim + d.dim)
    anti_map = ModuleMap(dprime, ds.module, anti)
    q = quotient(ds.module, anti)
    from_m = ds.injections[0].compose(q.projection)
    from_d = ds.injections[1].compose(q.projection)
    return PushoutResult(
        q.module,
        from_m,
        from_d,
        anti_map,
        purity_check(anti_map),
        purity_check(from_m),
    )


def strict_atomic_witness(
    m: ModuleRep,
    vectors,
    ctx: DefinableContext,
    n: ModuleRep,
    target_vectors,
) -> ModuleMap:
    """Morphism m -> n carrying the tuple to the target tuple.

    The generator of the tuple's pp-type must hold of the target tuple
    in n; finite modules are strictly atomic in any ambient context, so
    the morphism then exists and is found by a constrained solve.

    Raises:
        NotInSolutionSet: the target tuple fails the generator formula
            (an input mismatch, not a strictness failure).
    """
    f = m.algebra.field
    vecs = tuple_rows(vectors, m.dim)
    tgt = tuple_rows(target_vectors, n.dim)
    if vecs.shape[0] != tgt.shape[0]:
        raise LengthMismatch("tuples of different lengths")
    phi = pp_type_generator(m, vecs)
    if not evaluate(phi, n).contains(tgt):
        raise NotInSolutionSet(
            "target tuple does not satisfy the pp-type generator"
        )
    hom = constrained_hom(m, n, vecs, tgt)
    if hom is None:
        raise ValidationFailure(
            "no constrained morphism despite a satisfied generator; "
            "this contradicts strict atomicity of finite modules"
        )
    return hom
