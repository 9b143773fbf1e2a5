import json
from fractions import Fraction

import pytest

from shiprisk.bundled import reference_session
from shiprisk.dataio import canonical_json
from shiprisk.errors import JudgmentError, MissingReferenceError, SchemaError
from shiprisk.scale import ReferenceAssignment
from shiprisk.session import (
    ZSource,
    derive,
    document_from_dict,
    document_to_dict,
    new_blank_document,
    validate_session,
    with_closeness,
    with_policy,
    with_ranking,
    with_references,
    with_table_cards,
    with_z_source,
)

F = Fraction


@pytest.fixture()
def full():
    return reference_session()


def test_blank_document_is_inspectable_but_incomplete():
    document = new_blank_document()
    derived = derive(document)
    assert set(derived.value_functions) == set(document.framework.valued_ids())
    assert derived.swings is not None
    assert derived.weights is None
    assert derived.problems == (
        "no swing ranking",
        "no closeness judgments",
        "no z statement",
    )
    report = validate_session(document)
    assert report.ok and not report.complete


def test_full_document_derives_weights(full):
    derived = derive(full)
    assert derived.problems == ()
    assert derived.complete
    assert derived.z == F(17, 4)
    assert sum(derived.weights.normalized.values()) == 1
    report = validate_session(full)
    assert report.ok and report.complete
    assert report.closeness_report is not None and report.closeness_report.ok


def test_zsource_validation():
    with pytest.raises(JudgmentError):
        ZSource(kind="guesswork")
    with pytest.raises(JudgmentError):
        ZSource(kind="indifference")
    with pytest.raises(JudgmentError):
        ZSource(kind="explicit")
    assert ZSource(kind="explicit", value=F(4)).value == 4


def test_with_table_cards_replaces_and_validates(full):
    changed = with_table_cards(full, "g2", [0, 2, 3, 3, 5])
    assert changed.tables["g2"].adjacent_cards == (0, 2, 3, 3, 5)
    assert full.tables["g2"].adjacent_cards == (0, 2, 3, 3, 4)
    with pytest.raises(JudgmentError, match="judged by rule"):
        with_table_cards(full, "g7", [1])
    with pytest.raises(MissingReferenceError):
        with_table_cards(full, "g99", [1])


def test_with_table_cards_drops_stale_direct_judgments(full):
    stated = with_table_cards(full, "g3", [2, 4], {("low", "high"): 7})
    assert stated.tables["g3"].direct_cards
    restated = with_table_cards(stated, "g3", [2, 4])
    assert not restated.tables["g3"].direct_cards


def test_with_table_cards_rejects_inconsistent_direct(full):
    with pytest.raises(JudgmentError) as err:
        with_table_cards(full, "g3", [2, 4], {("low", "high"): 9})
    assert err.value.violations


def test_with_references_checks_the_anchors(full):
    # g3 orders its levels worst to best: high risk, medium, low
    changed = with_references(
        full, "g3", ReferenceAssignment(low_level="high", high_level="medium")
    )
    assert changed.references["g3"].high_level == "medium"
    with pytest.raises(JudgmentError, match="must precede"):
        with_references(
            full, "g3", ReferenceAssignment(low_level="low", high_level="high")
        )
    with pytest.raises(JudgmentError, match="distinct"):
        with_references(
            full, "g3", ReferenceAssignment(low_level="low", high_level="low")
        )


def test_with_ranking_must_cover_every_weighted_criterion(full):
    with pytest.raises(JudgmentError, match="missing: g8"):
        with_ranking(full, ["g3", "g4", "g6", "g1", "g5", "g2"])
    with pytest.raises(JudgmentError, match="unknown: g7"):
        with_ranking(full, ["g3", "g4", "g6", "g1", "g8", "g5", "g2", "g7"])
    with pytest.raises(JudgmentError):
        with_ranking(full, ["g3", "g3", "g4", "g6", "g1", "g8", "g5"])


def test_with_ranking_keeps_compatible_closeness_and_drops_the_rest(full):
    same = with_ranking(full, [list(group) for group in full.swing_ranking])
    assert same.closeness == full.closeness
    reversed_groups = [list(group) for group in reversed(full.swing_ranking)]
    rearranged = with_ranking(full, reversed_groups)
    assert rearranged.closeness is None


def test_with_closeness_needs_a_ranking_first():
    with pytest.raises(JudgmentError, match="swing ranking"):
        with_closeness(new_blank_document(), "g2", {"g1": 1})


def test_with_closeness_keeps_direct_judgments_unless_replaced(full):
    cards = dict(full.closeness.cards_to_reference)
    kept = with_closeness(full, "g2", cards)
    assert kept.closeness.direct_cards == full.closeness.direct_cards
    cleared = with_closeness(full, "g2", cards, direct_cards={})
    assert cleared.closeness.direct_cards == {}
    restated = with_closeness(
        full, "g2", cards, direct_cards={("g4", "g8"): 9}
    )
    assert restated.closeness.direct_cards == {("g4", "g8"): 9}


def test_with_closeness_rejects_violations_and_leaves_the_document(full):
    cards = dict(full.closeness.cards_to_reference)
    cards["g8"] = 8  # breaks the stored direct judgments
    with pytest.raises(JudgmentError) as err:
        with_closeness(full, "g2", cards)
    assert err.value.violations
    assert full.closeness.cards_to_reference["g8"] == 7


def test_with_z_source_surfaces_resolution_failures(full):
    explicit = with_z_source(full, ZSource(kind="explicit", value=F(3)))
    assert derive(explicit).z == 3
    with pytest.raises(JudgmentError, match="top-ranked"):
        with_z_source(
            full,
            ZSource(kind="indifference", criterion="g3", performance="15"),
        )
    with pytest.raises(JudgmentError, match="closeness cards are zero"):
        with_z_source(
            full,
            ZSource(kind="indifference", criterion="g2", performance="0"),
        )


def test_with_z_source_requires_naming_the_criterion_for_top_ties(full):
    tied = with_ranking(full, [["g3"], ["g4"], ["g6"], ["g1"], ["g8"], ["g5", "g2"]])
    assert tied.closeness is None
    with pytest.raises(JudgmentError, match="must name its criterion"):
        with_z_source(tied, ZSource(kind="indifference", performance="15"))


def test_with_policy_rejects_crossed_cutoffs(full):
    lowered = with_policy(full, lambda_23=F(35))
    assert lowered.policy.lambda_23 == 35
    with pytest.raises(JudgmentError):
        with_policy(full, lambda_12=F(30))


def test_round_trip_preserves_the_document(full):
    data = document_to_dict(full)
    text = canonical_json(data)
    reloaded = document_from_dict(json.loads(text))
    assert document_to_dict(reloaded) == data
    assert canonical_json(document_to_dict(reloaded)) == text
    assert derive(reloaded).z == F(17, 4)


def test_round_trip_of_a_blank_document():
    document = new_blank_document(provenance={"author": "test"})
    data = document_to_dict(document)
    reloaded = document_from_dict(data)
    assert document_to_dict(reloaded) == data
    assert reloaded.provenance == {"author": "test"}


def test_document_from_dict_rejects_malformed_input(full):
    with pytest.raises(SchemaError, match="JSON object"):
        document_from_dict([])
    with pytest.raises(SchemaError, match="format"):
        document_from_dict({"format": "something-else", "version": 1})
    data = document_to_dict(full)
    with pytest.raises(SchemaError, match="version"):
        document_from_dict({**data, "version": 99})
    broken = json.loads(canonical_json(data))
    del broken["framework"]["criteria"][0]["direction"]
    with pytest.raises(SchemaError, match="malformed criteria framework"):
        document_from_dict(broken)
    broken = json.loads(canonical_json(data))
    del broken["policy"]["lambda_23"]
    with pytest.raises(SchemaError, match="malformed classification policy"):
        document_from_dict(broken)
