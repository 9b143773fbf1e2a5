from fractions import Fraction

import pytest

from shiprisk.bundled import (
    reference_fleet_raw,
    reference_lists,
    reference_session,
    srp_baseline,
)
from shiprisk.dataio import fleet_performances
from shiprisk.errors import JudgmentError, MissingReferenceError
from shiprisk.robustness import (
    ScenarioGrid,
    compare_to_baseline,
    default_grid,
    sweep,
)
from shiprisk.session import derive

F = Fraction


@pytest.fixture(scope="module")
def sample():
    document = reference_session()
    derived = derive(document)
    lists, _ = reference_lists()
    perfs, _ = fleet_performances(reference_fleet_raw(), lists)
    return document, derived, perfs


def test_grid_axes_must_increase():
    with pytest.raises(JudgmentError):
        ScenarioGrid(lambda_values=(F(40), F(35)), z_values=(F(4),))
    with pytest.raises(JudgmentError):
        ScenarioGrid(lambda_values=(F(35),), z_values=(F(4), F(4)))
    with pytest.raises(JudgmentError):
        ScenarioGrid(lambda_values=(), z_values=(F(4),))


def test_default_grid_shape():
    grid = default_grid()
    assert grid.lambda_values == tuple(F(v) for v in range(35, 46))
    assert grid.z_values == tuple(F(13, 4) + F(i, 2) for i in range(5))


def test_sweep_cells_cover_the_grid_row_major(sample):
    document, derived, perfs = sample
    grid = ScenarioGrid(
        lambda_values=(F(38), F(40)), z_values=(F(13, 4), F(17, 4))
    )
    result = sweep(
        perfs,
        derived.value_functions,
        document.swing_ranking,
        document.closeness,
        grid,
        document.policy,
    )
    assert [(c.z, c.lambda_23) for c in result.cells] == [
        (F(13, 4), F(38)),
        (F(13, 4), F(40)),
        (F(17, 4), F(38)),
        (F(17, 4), F(40)),
    ]
    assert result.cell(F(17, 4), F(40)).categories["a6"] == "C3"
    with pytest.raises(MissingReferenceError):
        result.cell(F(99), F(40))


def test_totals_depend_only_on_z(sample):
    from shiprisk.bundled import expected
    from shiprisk.exact import display

    document, derived, perfs = sample
    result = sweep(
        perfs,
        derived.value_functions,
        document.swing_ranking,
        document.closeness,
        default_grid(),
        document.policy,
    )
    assert set(result.totals_by_z) == set(default_grid().z_values)
    for z_key, total in expected.SCENARIO_TOTALS.items():
        got = result.totals_by_z[F(z_key)][expected.SCENARIO_SHIP]
        assert display(got) == total


def test_c1_membership_constant_across_cells(sample):
    document, derived, perfs = sample
    result = sweep(
        perfs,
        derived.value_functions,
        document.swing_ranking,
        document.closeness,
        default_grid(),
        document.policy,
    )
    c1_sets = {
        frozenset(s for s, cat in cell.categories.items() if cat == "C1")
        for cell in result.cells
    }
    assert c1_sets == {frozenset({"a4", "a10"})}


def test_compare_to_baseline_over_the_labeled_subset(sample):
    document, derived, perfs = sample
    grid = ScenarioGrid(lambda_values=(F(35), F(40)), z_values=(F(17, 4),))
    result = sweep(
        perfs,
        derived.value_functions,
        document.swing_ranking,
        document.closeness,
        grid,
        document.policy,
    )
    baseline = dict(srp_baseline())
    diff = compare_to_baseline(result, baseline)
    assert len(diff.flags) == len(result.cells)
    # a6 is C2 at the 35 cutoff (differs from its C3 label) and C3 at 40
    assert diff.flags[0] == {"a6": True}
    assert diff.flags[1] == {"a6": False}
    assert diff.count_deltas[0] == {"C1": 0, "C2": 1, "C3": -1}
    assert diff.count_deltas[1] == {"C1": 0, "C2": 0, "C3": 0}


def test_compare_to_baseline_rejects_unknown_or_empty(sample):
    document, derived, perfs = sample
    grid = ScenarioGrid(lambda_values=(F(40),), z_values=(F(17, 4),))
    result = sweep(
        perfs,
        derived.value_functions,
        document.swing_ranking,
        document.closeness,
        grid,
        document.policy,
    )
    with pytest.raises(JudgmentError):
        compare_to_baseline(result, {})
    with pytest.raises(MissingReferenceError):
        compare_to_baseline(result, {"zz9": "C1"})
    with pytest.raises(JudgmentError):
        compare_to_baseline(result, {"a6": "C9"})
