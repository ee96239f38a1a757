"""Finite-scale toolkit for colored Schreier graphs: canonical ball patterns,
nonrepetitive colorings, colored automorphisms and sofic-stage statistics."""

from .builders import (
    GroupFamily,
    cayley_ball,
    cycle_graph,
    path_graph,
    random_schreier,
    read_graph,
    schreier_from_permutations,
    write_graph,
)
from .coloring import (
    PathWitness,
    adaptive_color,
    exhaustive_min_alphabet,
    find_repetitive_path,
    is_nonrepetitive,
    is_repetitive_path,
    lll_threshold,
    moser_tardos_color,
    paper_constant,
)
from .dynamics import (
    BOUNDARY,
    Automorphism,
    apply_word,
    colored_automorphisms,
    extract_repetition,
    fixes_root,
    is_z_proper,
    stabilizer_words,
)
from .errors import (
    BoundaryError,
    BudgetExceeded,
    IncomparableError,
    ResampleCapExceeded,
    SchreierError,
    UnsupportedFamily,
    ValidationError,
)
from .graph_core import (
    BallPattern,
    Coloring,
    GeneratorSet,
    Rooted,
    SchreierGraph,
    ball,
    canonical_pattern,
    distance,
    forget_colors,
    rooted_isomorphic,
    validate,
)
from .sofic_measures import (
    BallDistribution,
    WindowPattern,
    clopen_U_fraction,
    clopen_V_fraction,
    empirical_measure,
    gamma_r_vertex_fraction,
    invariance_defect,
    is_sofic_stage,
    subshift_window,
    tv_distance,
)

__version__ = "0.1.0"
