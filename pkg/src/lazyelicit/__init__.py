"""Plan pruning with partial multi-attribute utility models and lazy elicitation."""

from .elicitation import (
    Answer,
    DirectRatioAnswer,
    ElicitationSession,
    FinalReport,
    MatchingValueAnswer,
    MergeRecord,
    ProbabilityAnswer,
    Question,
    StandardGambleQuestion,
    ValueMatchQuestion,
    accept,
    apply_answer,
    apply_direct_ratio,
    coefficient_from_indifference,
    merge_columns,
    next_question,
    ratio_from_coefficients,
    ratio_from_matching,
    render_question,
    replay_answers,
    start_session,
)
from .frontier import (
    ColumnDescriptor,
    FrontierResult,
    PlanMatrix,
    PlanRecord,
    Ranking,
    efficient_frontier,
    most_conflicting_pair,
    rank_correlation,
    rank_descending,
)
from .simulate import (
    AnytimeReport,
    ExperimentReport,
    Instance,
    TrialConfig,
    first_merge_eliminations,
    generate_instance,
    run_anytime_experiment,
    run_first_merge_comparison,
)
from .utility import (
    AdditiveModel,
    Attribute,
    DominanceVerdict,
    MuiModel,
    MultilinearModel,
    Outcome,
    Prospect,
    SubutilityFunction,
    additive_expected_utility,
    componentwise_dominance,
    expected_subutilities,
    multilinear_expected_utility,
    multilinear_on_marginals,
    overall_dominance,
    solve_multiplicative_constant,
)

__version__ = "0.1.0"
