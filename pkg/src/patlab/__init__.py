"""patlab: exact, desk-scale study of permutation classes defined by distant
and almost-distant patterns.

The package enumerates avoidance classes with a pruned generating tree (with
a brute-force oracle alongside), implements the structure maps F, G, and H
between the monotone classes M(k,j,i) together with their inverses where
they exist, constructs and discovers forbidden-pattern bases for the image
of H, and verifies equivalences and count sandwiches by exhaustive
computation.
"""

from .enumeration import (
    BRUTE_FORCE_CAP,
    DEFAULT_NODE_BUDGET,
    CountSequence,
    avoids_basis,
    brute_force_avoiders,
    brute_force_counts,
    count_sequence,
    enumerate_avoiders,
    levels_avoiders,
    walk_avoiders,
)
from .errors import (
    BudgetExceededError,
    ClassExpressionError,
    DomainError,
    InternalCheckError,
    NotInImageError,
    PatlabError,
    UsageError,
    VerificationFailure,
)
from .maps import (
    MapResult,
    RoleSets,
    apply_named_map,
    invert_F,
    map_F,
    map_G,
    map_H,
    map_H_conjugate,
    naive_reverse_H,
    role_sets,
)
from .patterns import (
    AlmostDistantPattern,
    DistantPattern,
    MonotoneSpec,
    PatternBasis,
    basis_reverse_complement,
    basis_union,
    check_minimal,
    distant_monotone_basis,
    expand_almost_distant,
    expand_distant,
    insert_value,
    make_basis,
    monotone_basis,
    monotone_class,
    monotone_distant,
    parse_class_expression,
)
from .perms import (
    Perm,
    RankCapabilityTable,
    avoids,
    can_act_as_rank,
    check_perm,
    contains,
    deletions,
    direct_sum,
    format_perm,
    identity,
    lis_tables,
    parse_perm,
    pattern_of,
    rank_capability,
    reverse_complement,
)
from .verification import (
    BasisResult,
    CertifyReport,
    GrowthDiagnostics,
    SandwichReport,
    SurveyReport,
    WilfReport,
    certify_map,
    construct_S_explicit,
    discover_basis,
    distant_growth_bounds,
    growth_diagnostics,
    reference_growth_rate,
    sandwich_check,
    survey_almost_distant,
    verify_wilf,
)

__version__ = "0.1.0"
