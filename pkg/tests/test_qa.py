from choicestruct.errors import SpecError
from choicestruct.qa import (
    CheckResult,
    _guarded,
    check_constructions,
    check_example_tables,
    check_functor_laws,
    check_hierarchy,
    check_maximization,
    check_nonredundancy,
    check_rationalization,
)


def _failures(results):
    return [r for r in results if not r.ok]


def test_example_tables(fixtures_dir):
    assert check_example_tables(fixtures_dir).ok


def test_rationalization(fixtures_dir):
    res = check_rationalization(fixtures_dir)
    assert res.ok, res.counterexample


def test_nonredundancy(fixtures_dir, bounds):
    assert check_nonredundancy(fixtures_dir, bounds).ok


def test_functor_laws():
    assert _failures(check_functor_laws(seed=0)) == []


def test_maximization_small_carriers():
    assert _failures(check_maximization(seed=0, max_carrier=3)) == []


def test_categorical_constructions():
    assert _failures(check_constructions(seed=0)) == []


def test_hierarchy_checks(fixtures_dir, bounds):
    results = check_hierarchy(fixtures_dir, bounds, depth=2)
    assert [r.name for r in results] == ["coherence", "duplicate types share levels", "coherence mutation"]
    assert _failures(results) == []


def test_guarded_turns_errors_into_failures():
    def boom():
        raise SpecError("broken fixture", line=3)

    (res,) = _guarded("example tables", boom)
    assert res == CheckResult("example tables", False, "SpecError", "line 3: broken fixture")
