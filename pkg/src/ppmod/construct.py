"""Staged preenvelope construction inside a definable context.

The construction grows a chain A = B_0 -> B_1 -> ... by freely
realising, at stage n, the conjunction of scheduled consequence
formulas phi_{1,n+1} and phi_{2,n} and ... and phi_{n+1,1}, where row
i enumerates the context-closed strengthenings of theta_{i-1}, the
generator of the pp-type of the stage-(i-1) generating tuple.  The
diagonal schedule guarantees every consequence of every theta is
eventually realised, which is what makes the limit a preenvelope; at
finite stage the same bookkeeping yields machine-checkable factor and
generator properties.

Enumerations here are finite and budgeted.  A consequence list always
starts with theta itself, and the schedule reads row i at position
j mod len(row i): a finite set enumerated as an infinite sequence
repeats, so the schedule never starves.  What a budget can do is
truncate a row (more closed strengthenings existed than the candidate
allowance); that is reported as ``budget_exhausted`` on the state, a
first-class outcome rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import linalg
from .errors import (
    AlgebraMismatch,
    EmptyContext,
    NotGenerating,
    SideMismatch,
    ValidationFailure,
)
from .fields import ELEM
from .defcat import DefinableContext, pair_closed
from .formulas import (
    PpFormula,
    conj,
    equivalent,
    evaluate,
    free_realisation,
    leq_absolute,
    leq_relative,
    pp_formula,
    pp_type_generator,
    prefix_restriction,
)
from .modules import (
    ModuleMap,
    ModuleRep,
    constrained_hom,
    extend_to_generators,
    hom_space,
    identity_map,
    module_span,
    tuple_rows,
)


@dataclass(frozen=True)
class Budget:
    """Finite allowances for consequence enumeration and staging."""

    bound_vars: int
    equations: int
    candidates: int
    stages: int

    def __post_init__(self):
        for name in ("bound_vars", "equations", "candidates", "stages"):
            if getattr(self, name) < 1:
                raise ValidationFailure(f"budget field {name} must be positive")


@dataclass(frozen=True, eq=False)
class ConsequenceList:
    """Budgeted enumeration of the context-closed strengthenings of theta."""

    theta: PpFormula
    formulas: tuple[PpFormula, ...]
    truncated: bool

    def __len__(self) -> int:
        return len(self.formulas)

    def scheduled(self, j: int) -> PpFormula:
        """The j-th scheduled formula (1-based), cycling the finite list."""
        return self.formulas[j % len(self.formulas)]


def consequence_enum(
    theta: PpFormula, ctx: DefinableContext, budget: Budget
) -> ConsequenceList:
    """Strengthenings of theta that stay closed on the context generators.

    Candidates are conjunctions theta and chi with chi ranging over all
    canonical formulas in theta's free variables within the budget's
    bound-variable and equation allowances, in code order.  Results are
    deduplicated by their solution sets on (C_theta, generators) where
    C_theta is the free realisation of theta, and capped at
    budget.candidates; theta itself is element 0.
    """
    if not ctx.generators:
        raise EmptyContext("consequence enumeration needs context generators")
    alg = theta.algebra
    field = alg.field
    probes = [free_realisation(theta).module] + list(ctx.generators)

    def signature(psi: PpFormula) -> tuple:
        return tuple(evaluate(psi, x).basis.tobytes() for x in probes)

    results = [theta]
    seen = {signature(theta)}
    n = theta.nfree
    q_elem = field.q**alg.dim
    truncated = False
    for t in range(budget.bound_vars + 1):
        for neq in range(1, budget.equations + 1):
            slots = (n + t) * neq
            for codes in product(range(q_elem), repeat=slots):
                coeffs = np.array(
                    [alg.elem_from_code(c) for c in codes], dtype=ELEM
                ).reshape(n + t, neq, alg.dim)
                chi = pp_formula(alg, theta.side, n, coeffs[:n], coeffs[n:])
                psi = conj(theta, chi)
                if any(
                    not pair_closed(theta, psi, g) for g in ctx.generators
                ):
                    continue
                sig = signature(psi)
                if sig in seen:
                    continue
                if len(results) >= budget.candidates:
                    truncated = True
                    return ConsequenceList(theta, tuple(results), truncated)
                seen.add(sig)
                results.append(psi)
    return ConsequenceList(theta, tuple(results), truncated)


@dataclass(frozen=True, eq=False)
class Stage:
    """One rung of the chain: module, tuples, type generator, schedule."""

    index: int
    module: ModuleRep
    realised: PpFormula | None  # conjunction this stage freely realises
    scheduled: tuple[tuple[int, int, PpFormula], ...]  # (row i, slot j, formula)
    a_tuple: np.ndarray  # realisation tuple of the conjunction
    b_tuple: np.ndarray  # generating tuple extending a_tuple
    theta: PpFormula  # generator of the pp-type of b_tuple
    a_image: np.ndarray  # image of the distinguished initial tuple


@dataclass(frozen=True, eq=False)
class ConstructionState:
    ctx: DefinableContext
    budget: Budget
    initial_tuple: np.ndarray
    stages: tuple[Stage, ...]
    maps: tuple[ModuleMap, ...]  # maps[n]: B_n -> B_{n+1}
    rows: tuple[ConsequenceList, ...]  # rows[i-1] enumerates theta_{i-1}
    budget_exhausted: bool
    iso_stable_at: int | None  # least n with maps[n] an isomorphism

    @property
    def final(self) -> ModuleRep:
        return self.stages[-1].module

    def composite(self, n: int, m: int) -> ModuleMap:
        """The chain map B_n -> B_m (identity when n == m)."""
        out = identity_map(self.stages[n].module)
        for k in range(n, m):
            out = out.compose(self.maps[k])
        return out


def run_construction(
    a_mod: ModuleRep, a_tuple, ctx: DefinableContext, budget: Budget
) -> ConstructionState:
    """Execute the diagonal schedule for budget.stages stages."""
    if a_mod.algebra.fingerprint() != ctx.algebra.fingerprint():
        raise AlgebraMismatch("module and context over different algebras")
    if a_mod.side != ctx.side:
        raise SideMismatch("module and context on different sides")
    field = a_mod.algebra.field
    a_vecs = tuple_rows(a_tuple, a_mod.dim)
    if module_span(a_mod, a_vecs).shape[0] != a_mod.dim:
        raise NotGenerating("initial tuple must generate the module")
    theta0 = pp_type_generator(a_mod, a_vecs)
    stages = [
        Stage(
            0,
            a_mod,
            None,
            (),
            a_vecs,
            a_vecs,
            theta0,
            a_vecs,
        )
    ]
    rows = [consequence_enum(theta0, ctx, budget)]
    maps: list[ModuleMap] = []
    iso_stable_at: int | None = None
    for n in range(budget.stages):
        current = stages[n]
        width = current.b_tuple.shape[0]
        scheduled = []
        conjunction = None
        for i in range(1, n + 2):
            j = n + 2 - i
            phi_ij = rows[i - 1].scheduled(j)
            scheduled.append((i, j, phi_ij))
            padded = prefix_restriction(phi_ij, width)
            conjunction = (
                padded if conjunction is None else conj(conjunction, padded)
            )
        realised = free_realisation(conjunction)
        b_next = realised.module
        a_next = realised.tuple
        f_n = constrained_hom(current.module, b_next, current.b_tuple, a_next)
        if f_n is None:
            raise ValidationFailure(
                "no connecting morphism: the realised tuple must satisfy "
                "the stage type generator"
            )
        b_tuple = extend_to_generators(b_next, a_next)
        theta = pp_type_generator(b_next, b_tuple)
        a_image = f_n.apply_tuple(current.a_image)
        stages.append(
            Stage(
                n + 1,
                b_next,
                conjunction,
                tuple(scheduled),
                a_next,
                b_tuple,
                theta,
                a_image,
            )
        )
        maps.append(f_n)
        rows.append(consequence_enum(theta, ctx, budget))
        if iso_stable_at is None and f_n.is_isomorphism():
            iso_stable_at = n
    return ConstructionState(
        ctx,
        budget,
        a_vecs,
        tuple(stages),
        tuple(maps),
        tuple(rows),
        any(r.truncated for r in rows),
        iso_stable_at,
    )


@dataclass(frozen=True, eq=False)
class FactorisationReport:
    ok: bool
    checked: int
    failures: tuple  # (stage n, target index, unfactorable ModuleMap)


def verify_factorisation(
    state: ConstructionState, targets
) -> FactorisationReport:
    """Does every map B_n -> target factor through f_n, for all n?

    Factoring is linear in the map, so checking a hom-space basis
    decides all maps at once.  Targets are expected to lie in the
    context (generators, or modules closing its explicit pairs); when
    the context carries explicit pairs, that is enforced.
    """
    targets = list(targets)
    field = state.ctx.algebra.field
    for target in targets:
        if state.ctx.pairs and not all(
            pair_closed(phi, psi, target) for phi, psi in state.ctx.pairs
        ):
            raise ValidationFailure("target does not close the context pairs")
    failures = []
    checked = 0
    for n, f_n in enumerate(state.maps):
        b_n = state.stages[n].module
        b_next = state.stages[n + 1].module
        for t_idx, target in enumerate(targets):
            down = hom_space(b_next, target)
            if down:
                columns = np.stack(
                    [
                        linalg.matmul(field, f_n.matrix, h.matrix).reshape(-1)
                        for h in down
                    ],
                    axis=1,
                )
            else:
                columns = np.zeros((b_n.dim * target.dim, 0), dtype=ELEM)
            for g in hom_space(b_n, target):
                checked += 1
                if linalg.solve(field, columns, g.matrix.reshape(-1)) is None:
                    failures.append((n, t_idx, g))
    return FactorisationReport(not failures, checked, tuple(failures))


def verify_generator(state: ConstructionState, phi: PpFormula) -> bool:
    """Does the image type of the initial tuple stay generated by phi?

    At every stage m the generator psi_m of the image tuple's pp-type
    must be below phi absolutely and above it relative to the context.
    phi itself must generate the initial tuple's pp-type.
    """
    theta0 = state.stages[0].theta
    if not equivalent(phi, theta0):
        raise ValidationFailure(
            "formula does not generate the initial tuple's pp-type"
        )
    for stage in state.stages:
        psi_m = pp_type_generator(stage.module, stage.a_image)
        if not leq_relative(phi, psi_m, state.ctx):
            return False
        if not leq_absolute(psi_m, phi):
            return False
    return True
