"""Regenerate the on-disk fixture directories from the built-in scenarios.

Run from the repository root:

    python3 scripts/make_fixtures.py

Each built-in scenario is written to fixtures/<name>/ as theory.json plus
whichever of classifier.json, constraints.json and dataset.csv the scenario
defines. The test suite asserts that loading these directories reproduces the
built-in objects, so rerun this script after changing a scenario builder.
"""

from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from covex.scenarios import builtin_scenarios, write_fixture


def main() -> None:
    root = Path(__file__).resolve().parent.parent / "fixtures"
    root.mkdir(exist_ok=True)
    for bundle in builtin_scenarios():
        target = root / bundle.name
        write_fixture(bundle, target)
        print(f"wrote {target}")


if __name__ == "__main__":
    main()
