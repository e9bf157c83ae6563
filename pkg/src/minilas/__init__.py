"""Desk-scale learning from answer sets.

The toolkit parses a compact ASP subset, grounds it, enumerates stable
models, learns minimum-cost hypotheses from weighted noisy examples
under a mode bias, draws explanation graphs, and turns numeric time
series into learning tasks with cross-validation and a baseline.
"""

from .explain import (
    Edge,
    ExplanationDAG,
    ExplanationError,
    Node,
    explain_absence,
    explain_atom,
    to_graph_text,
)
from .ground import (
    GroundProgram,
    GroundingError,
    HerbrandUniverse,
    eval_builtin,
    ground,
    herbrand_universe,
)
from .learner import (
    ExampleOutcome,
    Hypothesis,
    LasTask,
    LearnConfig,
    LearnResult,
    PartialInterpretation,
    WCDPI,
    accepts,
    default_scoring,
    extends,
    learn,
    multi_timestamp_scoring,
    score,
    task_text,
)
from .logic import (
    ArityError,
    Atom,
    ChoiceHead,
    Literal,
    MiniLasError,
    Program,
    ProgramError,
    Rule,
    SafetyError,
    Term,
    canonical_text,
)
from .modes import (
    HypothesisSpace,
    ModeBias,
    ModeDeclaration,
    ScoringFunction,
    SpaceBounds,
    SpaceCapError,
    compatible,
    enumerate_space,
    rule_cost,
    space_for_bias,
)
from .parser import ParseError, parse_ground_atom, parse_program, parse_task
from .solver import (
    AnswerSetResult,
    BaseLimitError,
    answer_sets,
    brave_entails,
    cautious_entails,
    is_stable,
    least_model,
    reduct,
    translate_choice,
)
from .weather import (
    BaselineReport,
    ColumnSpec,
    CrossvalReport,
    DataError,
    DiscretizationSpec,
    FoldReport,
    SeriesTable,
    TaskSource,
    TaskTemplate,
    WindowSpec,
    baseline_compare,
    build_task,
    crossval,
    default_scoring_for,
    discretize,
    ingest,
    level_atom,
    level_of,
    load_discretization,
    series_to_csv,
    synthesize_series,
)

__version__ = "0.1.0"
