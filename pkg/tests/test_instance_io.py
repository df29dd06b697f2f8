import json
import random
import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from blweight.errors import InputError, PreconditionError
from blweight.feasibility import IndexVector, check_subspace, check_sufficient
from blweight.instance_io import (bundled_names, fit_to_csv, format_rational, load_bundled,
                                  make_report, parse_instance, parse_rational, read_report,
                                  serialize_instance, verdict_to_dict, write_report)
from blweight.estimator import fit_growth
from blweight.structure import VectorSet
from helpers import EXAMPLE3, EXAMPLE3_IX, TRIANGLE, random_scaling_index


def _doc(**over):
    doc = {"schema_version": 1, "m": 2, "k": 1, "N": 3, "vectors": [["1", "0"], [0, 1], ["2/4", "1/2"]],
           "indices": {"p_inv": ["2/3"] * 3, "lambda": ["0", "0", "0"]}}
    doc.update(over)
    return json.dumps(doc)


class TestRationals:
    def test_reduction(self):
        assert parse_rational("2/4") == F(1, 2) and format_rational(F(2, 4)) == "1/2"

    @pytest.mark.parametrize("bad", ["1/0", "x", "1.5", "", "1/-2"])
    def test_malformed(self, bad):
        with pytest.raises(InputError):
            parse_rational(bad)

    @pytest.mark.parametrize("bad", [0.5, True, None, [1]])
    def test_wrong_types(self, bad):
        with pytest.raises(InputError):
            parse_rational(bad)


class TestParse:
    def test_example3_fixture(self):
        inst = load_bundled("example3_counterexample.json")
        E, ix = inst
        assert E == EXAMPLE3 and ix == EXAMPLE3_IX

    def test_reduced_and_reserialized(self):
        E, ix = parse_instance(_doc())
        assert E.vectors[2] == (F(1, 2), F(1, 2))
        assert '"1/2"' in serialize_instance(E, ix) and '"2/4"' not in serialize_instance(E, ix)

    def test_zero_row(self):
        with pytest.raises(InputError, match="zero vector at index 1"):
            parse_instance(_doc(vectors=[["1", "0"], ["0", "0"], ["1", "1"]]))

    def test_error_carries_path(self):
        with pytest.raises(InputError, match=r"\$\.vectors\[2\]\[1\]"):
            parse_instance(_doc(vectors=[["1", "0"], [0, 1], ["1", "1/0"]]))

    def test_float_rejected(self):
        with pytest.raises(InputError, match=r"\$\.indices\.p_inv\[0\]"):
            parse_instance(_doc(indices={"p_inv": [0.5, "1", "1"], "lambda": [0, 0, 0]}))

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            parse_instance(_doc(N=4))
        with pytest.raises(InputError):
            parse_instance(_doc(vectors=[["1"], ["0", "1"], ["1", "1"]]))

    def test_schema_version_required(self):
        doc = json.loads(_doc())
        del doc["schema_version"]
        with pytest.raises(InputError):
            parse_instance(json.dumps(doc))

    def test_bad_json(self):
        with pytest.raises(InputError):
            parse_instance("{")

    def test_collinear_warns_or_fails(self):
        text = _doc(vectors=[["1", "0"], ["2", "0"], ["1", "1"]])
        with pytest.warns(UserWarning):
            parse_instance(text)
        with pytest.raises(PreconditionError):
            parse_instance(text, require_noncollinear=True)

    def test_indices_optional(self):
        doc = json.loads(_doc())
        del doc["indices"]
        assert parse_instance(json.dumps(doc)).indices is None


@given(st.integers(0, 10 ** 6))
def test_instance_round_trip(seed):
    rng = random.Random(seed)
    rows = [[F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(3)] for _ in range(4)]
    rows = [r if any(r) else [F(1), F(0), F(0)] for r in rows]
    E = VectorSet.from_rows(rows)
    ix = random_scaling_index(rng, 3, 4)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        text = serialize_instance(E, ix, {"name": "r"})
        inst = parse_instance(text)
        assert (inst.vectors, inst.indices) == (E, ix)
        assert serialize_instance(inst.vectors, inst.indices, inst.metadata) == text


class TestReports:
    def test_verdict_round_trip(self):
        rep = make_report("check", sufficient=verdict_to_dict(check_sufficient(TRIANGLE, IndexVector([F(2, 3)] * 3, [0] * 3))))
        text = write_report(rep)
        assert write_report(read_report(text)) == text
        assert '"violations": []' in text

    def test_fourteen_fifteenths(self):
        v = check_subspace(EXAMPLE3, EXAMPLE3_IX.with_lambda((0, 0, 0, F(2, 15), 0)))
        text = write_report(make_report("x", violations=[{"lhs": x.lhs} for x in v]))
        assert '"14/15"' in text

    def test_canonical_sorted(self):
        text = write_report({"schema_version": 1, "b": F(1, 3), "a": 1})
        assert text.index('"a"') < text.index('"b"') and '"1/3"' in text

    def test_schema_version_required(self):
        with pytest.raises(InputError):
            write_report({"a": 1})

    def test_csv(self):
        text = fit_to_csv(fit_growth([1, 2, 4], [1.0, 2.0, 4.0], [0.1, 0.1, 0.1]))
        assert text.splitlines()[0] == "scale,estimate,stderr" and len(text.splitlines()) == 4


def test_bundled_fixtures_parse():
    names = bundled_names()
    assert {"example1_generic.json", "example3_counterexample.json", "generic_family.json"} <= set(names)
    for name in names:
        inst = load_bundled(name)
        assert inst.indices is not None and inst.metadata["name"] + ".json" == name


def test_fixtures_match_schema():
    import jsonschema
    from pathlib import Path
    schema = json.loads((Path(__file__).parents[1] / "docs" / "instance.schema.json").read_text())
    from blweight.instance_io import bundled_path
    for name in bundled_names():
        jsonschema.validate(json.loads(bundled_path(name).read_text()), schema)
