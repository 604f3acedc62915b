"""Exact quadratic form theory on chain complexes over small fields.

Six form theories (flavor in {quadratic, even, symmetric} x duality sign
eps) over F_2, F_3, F_5, and Q, with exact linear algebra throughout:
quadratic spaces and their complete invariants, Witt and GW_0 classes,
signed chain duality with cone/path/gamma structure, quadratic Poincare
complexes, surgery reduction to degree 0, and exhaustive classification
oracles used to cross-check everything.
"""

from .fields import F2, F3, F5, QQ, Field, field_by_name
from .forms import (
    AxiomReport,
    FormError,
    FormParam,
    QForm,
    all_params,
    check_form_axioms,
    orthogonal_sum_q,
    q_basis,
    q_coords,
    q_dim,
    q_from_coords,
    restrict,
    rho,
    sigma,
    tau,
)
from .spaces import (
    DegenerateFormError,
    GWClass,
    Invariants,
    QSpace,
    WittClass,
    arf_invariant,
    gw0_class,
    h_mu,
    hyperbolic,
    hyperbolic_can,
    invariants,
    isometric,
    isotropic_vector,
    orthogonal_sum,
    rand_metabolic,
    rand_qspace,
    sublagrangian_reduce,
    witt_class,
    witt_decompose,
    zero_space,
)
from .complexes import (
    ChainComplex,
    ChainError,
    ChainMap,
    GammaReport,
    PoincareComplex,
    PoincareError,
    can_map,
    check_gamma_identities,
    compose,
    cone_map,
    cone_obj,
    direct_sum,
    dualize,
    dualize_map,
    embed_degree0,
    gamma_map,
    gamma_maps,
    homology_rank,
    homology_ranks,
    hyp_complex,
    identity_map,
    is_acyclic,
    is_quis,
    is_quis_degreewise,
    make_poincare,
    module_complex,
    path_map,
    path_obj,
    poincare_sum,
    rand_complex,
    restrict_poincare,
    shift,
    tau_cx,
)
from .surgery import (
    HyperbolicLedger,
    LedgerEntry,
    ReductionResult,
    RelationReport,
    SurgeryError,
    check_presentation,
    eval_ledger,
    gw0_of_complex,
    reduce_full,
    reduce_step,
)
from .functors import (
    FunctorError,
    HPair,
    MorForm,
    S2Object,
    forget,
    hyper,
    mor_to_hyp,
    mor_transport,
    s2_class,
)
from .oracles import (
    OracleError,
    WittTableResult,
    all_forms,
    all_gl,
    brute_isotropic,
    brute_reduce,
    brute_split,
    orbit_classes,
    witt_table,
)
from .serialize import (
    Document,
    DocumentError,
    ExpectCheck,
    ParseError,
    evaluate_expectations,
    load,
    parse,
    serialize,
)
from .rng import SplitMix64

__version__ = "0.1.0"
