"""Periods, period-problem solvers and meshes for the oD / oDelta families of
genus-3 triply periodic minimal surfaces."""

from .gauss import BranchValueSet, antipodality_test, branch_values
from .periods import (
    EdgePeriods,
    FamilyParams,
    WeierstrassData,
    closed_form_periods_diagonal,
    dq_db_diagonal,
    edge_periods,
    q_value,
    solve_rho,
)
from .quad import SingularIntegrand, integrate_improper_tail, integrate_singular
from .solver import (
    SolveReport,
    boundary_curve,
    count_roots,
    solve_odelta,
    solve_tdelta,
    solve_tstar,
)
from .specfun import ModuliPair, ellip_e, ellip_e_bar, ellip_k, ellip_k_bar, moduli_from_at
from .surface import (
    BoxReport,
    SurfaceMesh,
    conjugate_cell_ratio,
    export_mesh,
    extend_to_lattice_cell,
    fundamental_hexagon,
    weierstrass_point,
)

__version__ = "0.1.0"

__all__ = [
    "BoxReport", "BranchValueSet", "EdgePeriods", "FamilyParams", "ModuliPair",
    "SingularIntegrand", "SolveReport", "SurfaceMesh", "WeierstrassData",
    "antipodality_test", "boundary_curve", "branch_values",
    "closed_form_periods_diagonal", "conjugate_cell_ratio", "count_roots",
    "dq_db_diagonal", "edge_periods", "ellip_e", "ellip_e_bar", "ellip_k",
    "ellip_k_bar", "export_mesh", "extend_to_lattice_cell", "fundamental_hexagon",
    "integrate_improper_tail", "integrate_singular", "moduli_from_at", "q_value",
    "solve_odelta", "solve_rho", "solve_tdelta", "solve_tstar", "weierstrass_point",
]
