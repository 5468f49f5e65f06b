"""ptower: p-class field tower analysis over imaginary quadratic fields.

Library layout:

- quadforms: class groups as reduced binary quadratic forms, p-ranks
- groupcore: finite p-groups as tables, group algebras, Zassenhaus filtration
- magnus: free-group words, truncated Magnus expansions, relation levels
- gsineq: exact Golod-Shafarevich sign tests and admissible level pairs
- towerdecide: the tower-length decision procedure
- cli: the `ptower` command
"""

from . import errors
from .gsineq import (
    AdmissibleTypes,
    RootReport,
    ZassenhausPolynomial,
    ZassenhausType,
    admissible_types,
    evaluate,
    gs_contradiction,
    medium_bound,
    medium_contradiction,
)
from .groupcore import (
    AlgebraElement,
    GroupTable,
    Subgroup,
    Subspace,
    augmentation_ideal,
    builtin_group,
    dim_g3_mod_g4,
    dimension_factors,
    dimension_subgroup_lazard,
    dimension_subgroup_oracle,
    ideal_power,
    ideal_powers,
    lower_central_series,
    power_subgroup,
    subgroup_join,
)
from .magnus import (
    Deg3Coefficients,
    FreeQuotient,
    LevelProfile,
    TruncatedSeries,
    Word,
    commutator,
    deg3_coefficients,
    expand,
    free_dimension_factor_deg3,
    free_quotient_table,
    koch_venkov_violations,
    level,
    level_profile,
    massey_trace_matrix,
)
from .quadforms import (
    AbelianStructure,
    FieldSpec,
    QuadForm,
    class_group_structure,
    compose,
    enumerate_reduced_forms,
    form_pow,
    fundamental_discriminant,
    p_rank,
    principal_form,
    reduce,
    two_rank_genus,
)
from .towerdecide import (
    TowerInput,
    TowerVerdict,
    conjectural_g4_decision,
    conjectural_matrix_decision,
    decide,
    massey_vanishing_criterion,
    rank_verdict,
)

__version__ = "0.1.0"
