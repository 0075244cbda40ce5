import pytest

from sqlbridge.errors import ParseError
from sqlbridge.extension import (
    AttrValue,
    ExplainClause,
    ModelRef,
    ModelTarget,
    PredictClause,
    TrainClause,
    parse_attributes,
    parse_extension,
    parse_model_ref,
    render_extension,
)


class TestParseExtension:
    def test_full_train_clause(self):
        source = ("TO TRAIN DNNRegressor WITH learning_rate=0.01, "
                  "hidden_units=[10, 100, 15] LABEL y INTO m;")
        clause, stop_at, err = parse_extension(source)
        assert err is None
        assert stop_at == len(source)
        assert isinstance(clause, TrainClause)
        assert clause.model == ModelRef(name="DNNRegressor")
        assert clause.attributes["learning_rate"] == AttrValue("float", 0.01)
        assert clause.attributes["hidden_units"] == AttrValue(
            "list", [AttrValue("int", 10), AttrValue("int", 100), AttrValue("int", 15)])
        assert clause.columns is None
        assert clause.label == "y"
        assert clause.into == ModelTarget("local_name", "m")

    def test_predict_clause(self):
        clause, stop_at, err = parse_extension(
            "TO PREDICT iris.predicted_class USING my_model;")
        assert err is None
        assert isinstance(clause, PredictClause)
        assert clause.result_field == ("iris", "predicted_class")
        assert clause.model == ModelTarget("local_name", "my_model")

    def test_explain_clause_without_with(self):
        clause, stop_at, err = parse_extension("TO EXPLAIN my_model;")
        assert err is None
        assert isinstance(clause, ExplainClause)
        assert clause.model.value == "my_model"
        assert clause.attributes == {}

    def test_missing_into_reports_semicolon_offset(self):
        source = "TO TRAIN m LABEL y;"
        clause, _, err = parse_extension(source)
        assert clause is None
        assert "INTO" in err.message
        assert err.position == source.index(";")

    def test_missing_using_on_predict(self):
        _, _, err = parse_extension("TO PREDICT p my_model;")
        assert err is not None
        assert "USING" in err.message

    def test_unknown_verb_after_to(self):
        _, _, err = parse_extension("TO CLUSTER m;")
        assert err is not None
        assert err.position == 3

    def test_duplicate_subclause(self):
        _, _, err = parse_extension("TO TRAIN m WITH a=1 WITH b=2 INTO x;")
        assert err is not None
        assert "duplicate WITH" in err.message

    def test_out_of_order_subclause(self):
        _, _, err = parse_extension("TO TRAIN m LABEL y WITH a=1 INTO x;")
        assert err is not None
        assert "WITH" in err.message

    def test_column_list(self):
        clause, _, err = parse_extension("TO TRAIN m COLUMN a, b LABEL y INTO x;")
        assert err is None
        assert clause.columns == ("a", "b")

    def test_unsupervised_train_without_label(self):
        clause, _, err = parse_extension("TO TRAIN m INTO x;")
        assert err is None
        assert clause.label is None

    def test_stop_at_first_semicolon_only(self):
        source = "TO TRAIN m INTO x; SELECT 1;"
        clause, stop_at, err = parse_extension(source)
        assert err is None
        assert stop_at == source.index(";") + 1

    def test_url_model_target(self):
        clause, _, err = parse_extension("TO TRAIN m INTO s3://bucket/path;")
        assert err is None
        assert clause.into == ModelTarget("url", "s3://bucket/path")

    def test_keywords_case_insensitive(self):
        clause, _, err = parse_extension("to train m label y into x;")
        assert err is None
        assert clause.label == "y"


class TestParseAttributes:
    def test_typing_by_literal_form(self):
        attrs = parse_attributes(
            "learning_rate=0.01, hidden_units=[10, 100, 15]")
        assert attrs["learning_rate"].kind == "float"
        assert attrs["hidden_units"].kind == "list"
        assert [v.value for v in attrs["hidden_units"].value] == [10, 100, 15]

    def test_dotted_key_and_string_value(self):
        attrs = parse_attributes('validation.select="SELECT 1"')
        assert attrs["validation.select"] == AttrValue("string", "SELECT 1")

    def test_single_quoted_string_value(self):
        attrs = parse_attributes("validation.select='SELECT 1'")
        assert attrs["validation.select"] == AttrValue("string", "SELECT 1")

    def test_bool_and_identifier_values(self):
        attrs = parse_attributes("shuffle=true, optimizer=adam")
        assert attrs["shuffle"] == AttrValue("bool", True)
        assert attrs["optimizer"] == AttrValue("identifier", "adam")

    def test_negative_and_exponent_numbers(self):
        attrs = parse_attributes("a=-3, b=1e-4")
        assert attrs["a"] == AttrValue("int", -3)
        assert attrs["b"] == AttrValue("float", 1e-4)

    def test_duplicate_key_reports_second_position(self):
        source = "a=1, a=2"
        with pytest.raises(ParseError) as exc:
            parse_attributes(source)
        assert exc.value.position == source.rindex("a")

    def test_heterogeneous_list_rejected(self):
        with pytest.raises(ParseError, match="heterogeneous"):
            parse_attributes("a=[1, 'x']")

    def test_empty_input_rejected(self):
        with pytest.raises(ParseError):
            parse_attributes("")


class TestParseModelRef:
    def test_plain_name(self):
        assert parse_model_ref("DNNRegressor") == ModelRef(name="DNNRegressor")

    def test_package_qualified(self):
        assert parse_model_ref("dnn.Regressor") == ModelRef(
            name="Regressor", package="dnn")

    def test_image_qualified(self):
        assert parse_model_ref("sqlflow/models.dnn.Regressor") == ModelRef(
            name="Regressor", package="dnn", image="sqlflow/models")

    def test_image_always_contains_slash(self):
        ref = parse_model_ref("repo/img.Model")
        assert ref.image is not None and "/" in ref.image

    def test_empty_name_component_rejected(self):
        with pytest.raises(ParseError):
            parse_model_ref("dnn..Regressor")
        with pytest.raises(ParseError):
            parse_model_ref("repo/img")

    def test_illegal_characters_rejected(self):
        with pytest.raises(ParseError):
            parse_model_ref("a b")


ROUND_TRIP_SOURCES = [
    "TO TRAIN DNNRegressor WITH learning_rate=0.01, hidden_units=[10, 100, 15] LABEL y INTO m;",
    "TO TRAIN sqlflow/models.dnn.Regressor COLUMN a, b LABEL y INTO m;",
    "TO TRAIN m WITH s='it''s', flag=false INTO x;",
    "TO PREDICT db.tbl.col USING my_model;",
    "TO EXPLAIN m WITH plot=bar;",
    "TO TRAIN m INTO s3://bucket/key;",
]


@pytest.mark.parametrize("source", ROUND_TRIP_SOURCES)
def test_render_parse_round_trip(source):
    clause, _, err = parse_extension(source)
    assert err is None
    text = render_extension(clause)
    again, stop_at, err = parse_extension(text)
    assert err is None
    assert again == clause
    assert text[stop_at - 1] == ";"
