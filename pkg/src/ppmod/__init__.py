"""pp-formula calculus over finite modules.

Evaluation of positive-primitive formulas on finite modules over
structure-constant algebras, with elementary duality, purity tests,
tensor-vanishing criteria, pp-lattices, a countable preenvelope
construction, and rings of definable scalars.
"""

from .algebras import Algebra, make_algebra
from .construct import (
    Budget,
    ConsequenceList,
    ConstructionState,
    consequence_enum,
    run_construction,
    verify_factorisation,
    verify_generator,
)
from .defcat import (
    DefinableContext,
    PullbackResult,
    PurityReport,
    PushoutResult,
    make_context,
    member_check,
    pair_closed,
    pullback_pure,
    purity_check,
    pushout_pure,
    strict_atomic_witness,
)
from .fields import Field
from .formulas import (
    PpFormula,
    SubgroupRep,
    annihilator,
    bot,
    conj,
    divisibility,
    dual,
    equivalent,
    evaluate,
    formula_sum,
    free_realisation,
    leq_absolute,
    leq_relative,
    pp_formula,
    pp_type_generator,
    substitute,
    top,
)
from .lattice import (
    PpFilter,
    PpLattice,
    all_filters,
    filter_analysis,
    hasse_edges,
    is_pp_definable,
    make_filter,
    pp_lattice,
    principal_filter,
    ziegler_irreducible,
)
from .modules import (
    ModuleMap,
    ModuleRep,
    PointedModule,
    are_isomorphic,
    constrained_hom,
    direct_sum,
    dual_module,
    hom_space,
    make_map,
    make_module,
    presentation,
    quotient,
    regular_module,
    submodule,
    sum_quotient,
    zero_module,
)
from .scalars import (
    RingTable,
    ScalarRing,
    ScalarSynthesis,
    end_and_biend,
    ring_isomorphic,
    scalar_ring,
    synthesize_scalar,
)
from .tensor import (
    MittagLefflerReport,
    TensorResult,
    dual_satisfies,
    herzog_zero_test,
    relative_ml_check,
    tensor_product,
)
from .workspace import (
    Workspace,
    load_workspace,
    parse_formula_text,
    parse_workspace,
    render_workspace,
    save_workspace,
)

__all__ = [
    "Algebra",
    "Budget",
    "ConsequenceList",
    "ConstructionState",
    "DefinableContext",
    "Field",
    "MittagLefflerReport",
    "ModuleMap",
    "ModuleRep",
    "PointedModule",
    "PpFilter",
    "PpFormula",
    "PpLattice",
    "PullbackResult",
    "PurityReport",
    "PushoutResult",
    "RingTable",
    "ScalarRing",
    "ScalarSynthesis",
    "SubgroupRep",
    "TensorResult",
    "Workspace",
    "all_filters",
    "annihilator",
    "are_isomorphic",
    "bot",
    "conj",
    "consequence_enum",
    "constrained_hom",
    "direct_sum",
    "divisibility",
    "dual",
    "dual_module",
    "dual_satisfies",
    "end_and_biend",
    "equivalent",
    "evaluate",
    "filter_analysis",
    "formula_sum",
    "free_realisation",
    "hasse_edges",
    "herzog_zero_test",
    "hom_space",
    "is_pp_definable",
    "leq_absolute",
    "leq_relative",
    "load_workspace",
    "make_algebra",
    "make_context",
    "make_filter",
    "make_map",
    "make_module",
    "member_check",
    "pair_closed",
    "parse_formula_text",
    "parse_workspace",
    "pp_formula",
    "pp_lattice",
    "pp_type_generator",
    "presentation",
    "principal_filter",
    "pullback_pure",
    "purity_check",
    "pushout_pure",
    "quotient",
    "regular_module",
    "relative_ml_check",
    "render_workspace",
    "ring_isomorphic",
    "run_construction",
    "save_workspace",
    "scalar_ring",
    "strict_atomic_witness",
    "submodule",
    "substitute",
    "sum_quotient",
    "synthesize_scalar",
    "tensor_product",
    "top",
    "verify_factorisation",
    "verify_generator",
    "zero_module",
    "ziegler_irreducible",
]

__version__ = "0.1.0"
