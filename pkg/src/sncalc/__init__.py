"""Exact intersection calculus for snc divisors on rational surfaces.

The package computes discriminants, barks and boundary classifications of
weighted dual graphs, performs blow-up surgery and fiber analysis, builds
blown-up plane lattices from declarative programs, checks exact projective
incidence over a quadratic extension of the rationals, and ships two fully
scripted surface constructions plus a thirteen-case boundary table as
reproducible verification scenarios.
"""

from .calculus import (
    BoundaryTag,
    BoundaryType,
    ChainInvariants,
    bark,
    bark_chain,
    chain_invariants,
    classify_boundary,
    det_branch_formula,
    det_join_formula,
    discriminant,
    kobayashi_check,
    sharp,
)
from .casetable import run_case_table
from .graphs import (
    Chain,
    DualGraph,
    QDivisor,
    branching_number,
    build_fork,
    canonical_form,
    emit_dot,
    maximal_twigs,
    parse_graph,
    serialize_graph,
)
from .lattice import (
    BlowupProgram,
    SurfaceLattice,
    euler_numbers,
    extract_boundary_graph,
    h1_order,
    k_plus_sharp_class,
    parse_arrangement,
    ruling_decompose,
    run_program,
    solve_curve_class,
)
from .linalg import (
    TorsionGroup,
    det_exact,
    is_negative_definite,
    kernel_basis,
    smith_normal_form,
    solve_integer,
    solve_rational,
    torsion_of_cokernel,
)
from .scenarios import load_fixture, run_scenario
from .surgery import (
    FiberGraph,
    RulingBookkeeping,
    blowup_graph,
    contract_minus_one,
    fiber_multiplicities,
    fujita_check,
    is_valid_fiber,
    unique_minus_one_checks,
)

__version__ = "0.1.0"
