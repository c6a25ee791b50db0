"""Shared helpers for the test suite."""

from pathlib import Path

from covex.theory import ClassificationTheory, Instance, PartialAssignment

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


def pa(theory: ClassificationTheory, text: str) -> PartialAssignment:
    """Build a partial assignment from "f1=0,f2=1" notation."""
    if not text:
        return PartialAssignment(theory, [])
    literals = []
    for part in text.split(","):
        name, _, token = part.strip().partition("=")
        literals.append(theory.literal(name, token))
    return PartialAssignment(theory, literals)


def inst(theory: ClassificationTheory, text: str) -> Instance:
    """Build an instance from "f1=0,f2=1" notation covering every feature."""
    assignment = pa(theory, text)
    if len(assignment) != theory.n_features:
        raise ValueError("instance text must assign every feature")
    return Instance(theory, (v for _, v in assignment.literals))


def binary_theory(n: int) -> ClassificationTheory:
    return ClassificationTheory(
        [(f"f{i + 1}", ("0", "1")) for i in range(n)], ("0", "1")
    )
