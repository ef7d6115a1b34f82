import pytest

from deckforge.errors import AmbiguityError, InvalidChoiceError
from deckforge.kb import RobustKB
from deckforge.mapping import (
    ClarificationRequest,
    ResolvedIntent,
    SessionState,
    apply_clarification,
    concept_spans,
    is_run_trigger,
    parse_parameter_edits,
    resolve,
    update_parameters,
)
from deckforge.parser import TaggedCommand


def tagged(*pairs):
    tokens, labels = zip(*pairs)
    return TaggedCommand(tokens, labels)


def seeded_kb():
    kb = RobustKB()
    kb.learn("object", "piechart", "piechart")
    kb.learn("object", "barchart", "barchart")
    kb.learn("object", "briefing deck", "company_briefing_deck")
    kb.learn("action", "create", "create")
    kb.learn("action", "delete", "delete")
    return kb


def test_run_trigger_variants():
    assert is_run_trigger("Run the analysis")
    assert is_run_trigger("  run the analysis!  ")
    assert not is_run_trigger("run the numbers")


def test_concept_spans_merge_adjacent_tokens():
    t = tagged(
        ("create", "ACTION"), ("a", "OUTSIDE"),
        ("briefing", "OBJECT"), ("deck", "OBJECT"),
        ("about", "OUTSIDE"), ("TSLA", "DATA"),
    )
    assert ("OBJECT", "briefing deck") in concept_spans(t)


def test_resolve_full_command():
    t = tagged(
        ("create", "ACTION"), ("a", "OUTSIDE"), ("piechart", "OBJECT"),
        ("using", "OUTSIDE"), ("sales", "DATA"),
        ("in", "OUTSIDE"), ("weeklyreport", "PRESENTATION"),
    )
    intent = resolve(t, seeded_kb(), SessionState())
    assert intent == ResolvedIntent("create", "piechart", "sales", "weeklyreport", {})


def test_action_defaults_to_create():
    t = tagged(("piechart", "OBJECT"), ("using", "OUTSIDE"), ("sales", "DATA"))
    intent = resolve(t, seeded_kb(), SessionState())
    assert intent.action == "create"


def test_presentation_defaults_to_report():
    t = tagged(("create", "ACTION"), ("piechart", "OBJECT"), ("sales", "DATA"))
    assert resolve(t, seeded_kb(), SessionState()).presentation == "report"


def test_unknown_object_word_triggers_clarification_with_candidates():
    t = tagged(("create", "ACTION"), ("pizzachart", "OBJECT"), ("sales", "DATA"))
    out = resolve(t, seeded_kb(), SessionState())
    assert isinstance(out, ClarificationRequest)
    assert out.missing == "object"
    assert out.unknown_word == "pizzachart"
    assert set(out.candidates) == {
        "piechart", "barchart", "linechart", "table", "company_briefing_deck",
    }


def test_clarification_answer_teaches_kb_and_resumes():
    kb = seeded_kb()
    state = SessionState()
    t = tagged(("create", "ACTION"), ("pizzachart", "OBJECT"), ("sales", "DATA"))
    assert isinstance(resolve(t, kb, state), ClarificationRequest)
    intent = apply_clarification(state, "piechart", kb)
    assert intent == ResolvedIntent("create", "piechart", "sales", "report", {})
    assert kb.infer("object", "pizzachart") == "piechart"
    # the same word now resolves without a round trip
    assert resolve(t, kb, SessionState()).object == "piechart"


def test_invalid_clarification_choice_keeps_session_usable():
    kb = seeded_kb()
    state = SessionState()
    t = tagged(("create", "ACTION"), ("pizzachart", "OBJECT"), ("sales", "DATA"))
    resolve(t, kb, state)
    with pytest.raises(InvalidChoiceError):
        apply_clarification(state, "hologram", kb)
    state.pending = ClarificationRequest("object", "pizzachart", kb.ontology.subs("object"))
    intent = apply_clarification(state, "piechart", kb)
    assert intent.object == "piechart"


def test_briefing_deck_with_ticker_like_data_needs_no_clarification():
    t = tagged(
        ("create", "ACTION"), ("briefing", "OBJECT"), ("deck", "OBJECT"),
        ("about", "OUTSIDE"), ("TSLA", "DATA"),
    )
    intent = resolve(t, seeded_kb(), SessionState())
    assert intent.object == "company_briefing_deck"
    assert intent.data_ref == "TSLA"


def test_unknown_company_name_asks_for_ticker_then_learns_alias():
    kb = seeded_kb()
    state = SessionState()
    aliases = {}
    t = tagged(
        ("create", "ACTION"), ("briefing", "OBJECT"), ("deck", "OBJECT"),
        ("about", "OUTSIDE"), ("Tesla", "DATA"),
    )
    out = resolve(t, kb, state, aliases)
    assert isinstance(out, ClarificationRequest)
    assert out.missing == "ticker"
    intent = apply_clarification(state, "tsla", kb, aliases)
    assert intent.data_ref == "TSLA"
    assert aliases["tesla"] == "TSLA"
    # the alias short-circuits future sessions
    assert resolve(t, kb, SessionState(), aliases).data_ref == "TSLA"


def test_two_object_spans_are_ambiguous():
    t = tagged(
        ("create", "ACTION"), ("piechart", "OBJECT"),
        ("or", "OUTSIDE"), ("barchart", "OBJECT"), ("sales", "DATA"),
    )
    with pytest.raises(AmbiguityError):
        resolve(t, seeded_kb(), SessionState())


def test_missing_data_slot_asks_for_it():
    t = tagged(("create", "ACTION"), ("piechart", "OBJECT"))
    out = resolve(t, seeded_kb(), SessionState())
    assert isinstance(out, ClarificationRequest)
    assert out.missing == "data"
    assert out.candidates == ()


class TestParameterEdits:
    def test_non_edit_text_returns_none(self):
        assert parse_parameter_edits("create a piechart using sales") is None

    def test_horizon_change(self):
        assert parse_parameter_edits("Change the time horizon of the analysis to 6 months") == [
            ("horizon_months", "set", 6)
        ]

    def test_metric_change(self):
        assert parse_parameter_edits("use the Median instead") == [
            ("aggregation_metric", "set", "median")
        ]

    def test_firm_add_and_remove(self):
        edits = parse_parameter_edits("Change the comparable firms by adding F and removing GM")
        assert ("comparable_firms", "add", "F") in edits
        assert ("comparable_firms", "remove", "GM") in edits

    def test_update_parameters_applies_edits(self):
        state = SessionState()
        update_parameters(state, [("comparable_firms", "add", "F")])
        update_parameters(state, [("horizon_months", "set", 6)])
        params = update_parameters(state, [("aggregation_metric", "set", "median")])
        assert params.comparable_firms == ("F",)
        assert params.horizon_months == 6
        assert params.aggregation_metric == "median"

    def test_remove_keeps_other_firms(self):
        state = SessionState()
        update_parameters(
            state,
            [("comparable_firms", "add", "F"), ("comparable_firms", "add", "GM")],
        )
        params = update_parameters(state, [("comparable_firms", "remove", "F")])
        assert params.comparable_firms == ("GM",)
