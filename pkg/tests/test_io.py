"""Wire formats: attribute schemas, plan CSV, answer scripts."""

from __future__ import annotations

import pytest

from lazyelicit.elicitation import (
    DirectRatioAnswer,
    MatchingValueAnswer,
    ProbabilityAnswer,
)
from lazyelicit.errors import DataFormatError
from lazyelicit.io import (
    answer_from_dict,
    answer_to_dict,
    answers_from_json,
    attributes_from_json,
    plans_from_csv,
    plans_from_json,
)


class TestAttributeSchema:
    def test_parses_the_clinical_schema(self):
        attributes, subutilities = attributes_from_json(
            open("fixtures/dvt_attributes.json").read()
        )
        assert [a.name for a in attributes] == ["DEATH", "BLEED", "PE", "COST"]
        assert attributes[3].kind == "continuous"
        assert subutilities[3].evaluate(25000) == pytest.approx(0.5)

    def test_rejects_missing_fields(self):
        with pytest.raises(DataFormatError):
            attributes_from_json([{"name": "x"}])

    def test_rejects_non_list(self):
        with pytest.raises(DataFormatError):
            attributes_from_json({"name": "x"})

    def test_rejects_invalid_json(self):
        with pytest.raises(DataFormatError):
            attributes_from_json("{not json")


class TestPlanCsv:
    def test_header_and_order(self):
        plans, columns = plans_from_csv("plan_id,a,b\np0,0.1,0.2\np1,0.3,0.4\n")
        assert columns == ("a", "b")
        assert plans[0].label == "p0"
        assert plans[1].w == (0.3, 0.4)

    def test_header_must_start_with_plan_id(self):
        with pytest.raises(DataFormatError):
            plans_from_csv("id,a\n1,0.5\n")

    def test_rows_must_match_width(self):
        with pytest.raises(DataFormatError, match="row 2"):
            plans_from_csv("plan_id,a,b\np0,0.1\n")

    def test_cells_must_be_numeric(self):
        with pytest.raises(DataFormatError):
            plans_from_csv("plan_id,a\np0,zebra\n")

    def test_attribute_cross_check(self):
        with pytest.raises(DataFormatError, match="do not match"):
            plans_from_csv("plan_id,a\np0,0.5\n", attribute_names=["b"])

    def test_inline_json_plans(self):
        plans = plans_from_json([{"label": "x", "w": [0.1, 0.2]}, {"w": [0.3, 0.4]}])
        assert plans[0].label == "x"
        assert plans[1].label == "1"


class TestAnswers:
    @pytest.mark.parametrize(
        "answer",
        [
            ProbabilityAnswer(p=0.25),
            MatchingValueAnswer(value=42.0),
            DirectRatioAnswer(ratio=1.5, pair=(0, 2)),
            DirectRatioAnswer(ratio=2.0),
        ],
    )
    def test_round_trip(self, answer):
        assert answer_from_dict(answer_to_dict(answer)) == answer

    def test_script_parsing(self):
        answers = answers_from_json('[{"type": "probability", "p": 0.5}]')
        assert answers == (ProbabilityAnswer(p=0.5),)

    def test_unknown_type(self):
        with pytest.raises(DataFormatError):
            answer_from_dict({"type": "telepathy"})

    def test_script_must_be_a_list(self):
        with pytest.raises(DataFormatError):
            answers_from_json('{"type": "probability"}')
