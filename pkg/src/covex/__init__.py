"""Coverage-aware abductive explanations for finite-domain classifiers.

The package computes, enumerates and property-checks several kinds of
abductive explanation for decisions of classifiers over finite feature
domains, with optional hard domain constraints, either against the full
(feasible) feature space or against a labeled dataset.
"""

from .classifiers import (
    Classifier,
    ExpressionClassifier,
    TableClassifier,
    assert_non_constant,
)
from .constraints import (
    ConstraintSet,
    Implication,
    compile_implication,
    empty_constraints,
    nogoods_from_expression,
)
from .coverage import Coverage, InstanceSpace, cov, equivalent, strictly_subsumes, subsumes
from .datasets import D_KINDS, Dataset, DatasetEngine
from .errors import (
    CapacityError,
    ConstantClassifierError,
    ExplanationError,
    InfeasibleInstanceError,
    ParseError,
    PreconditionError,
    StructuralError,
    UnsatisfiableConstraintsError,
)
from .exact import (
    KINDS,
    EntailmentOracle,
    ExactEngine,
    ExhaustiveOracle,
    ExplanationResult,
)
from .expressions import parse_expression
from .formats import (
    load_classifier,
    load_constraints,
    load_dataset,
    load_theory,
    parse_instance_spec,
    render_assignment,
    render_instance,
)
from .properties import (
    EXPECTED_PROFILE,
    MATRIX_KINDS,
    PROPERTIES,
    MatrixResult,
    PropertyReport,
    ScenarioContext,
    compute_matrix,
)
from .scenarios import (
    BUILTIN_SCENARIOS,
    ScenarioBundle,
    builtin_scenario,
    builtin_scenarios,
    load_fixture,
    majority_scenario,
    random_scenario,
    write_fixture,
)
from .theory import (
    Budgets,
    ClassificationTheory,
    Feature,
    Instance,
    Literal,
    PartialAssignment,
    enumerate_feature_space,
    extends,
    subassignments,
    unrank_instance,
)

__version__ = "0.1.0"

__all__ = [
    "Budgets",
    "BUILTIN_SCENARIOS",
    "CapacityError",
    "ClassificationTheory",
    "Classifier",
    "ConstantClassifierError",
    "ConstraintSet",
    "Coverage",
    "D_KINDS",
    "Dataset",
    "DatasetEngine",
    "EntailmentOracle",
    "ExactEngine",
    "ExhaustiveOracle",
    "EXPECTED_PROFILE",
    "ExplanationError",
    "ExplanationResult",
    "ExpressionClassifier",
    "Feature",
    "Implication",
    "InfeasibleInstanceError",
    "Instance",
    "InstanceSpace",
    "KINDS",
    "Literal",
    "MATRIX_KINDS",
    "MatrixResult",
    "ParseError",
    "PartialAssignment",
    "PreconditionError",
    "PROPERTIES",
    "PropertyReport",
    "ScenarioBundle",
    "ScenarioContext",
    "StructuralError",
    "TableClassifier",
    "UnsatisfiableConstraintsError",
    "assert_non_constant",
    "builtin_scenario",
    "builtin_scenarios",
    "compile_implication",
    "compute_matrix",
    "cov",
    "empty_constraints",
    "enumerate_feature_space",
    "equivalent",
    "extends",
    "load_classifier",
    "load_constraints",
    "load_dataset",
    "load_fixture",
    "load_theory",
    "majority_scenario",
    "nogoods_from_expression",
    "parse_expression",
    "parse_instance_spec",
    "random_scenario",
    "render_assignment",
    "render_instance",
    "strictly_subsumes",
    "subassignments",
    "subsumes",
    "unrank_instance",
    "write_fixture",
]
