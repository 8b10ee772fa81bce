import json
from fractions import Fraction

import pytest

from conftest import FIXTURES, corpus_path
from tropical_rubber.document import (
    Model,
    ParseError,
    SchemaError,
    ValidationError,
    build_model,
    load_input,
    parse_json,
    to_document,
)


def same_model(a: Model, b: Model) -> bool:
    Ea, Eb = a.expansion, b.expansion
    return (
        {n: Ea.upsilon[n].key for n in Ea.upsilon.names()} == {n: Eb.upsilon[n].key for n in Eb.upsilon.names()}
        and {n: Ea.upsilon[n].lattice for n in Ea.upsilon.names()} == {n: Eb.upsilon[n].lattice for n in Eb.upsilon.names()}
        and {n: Ea.sigma[n].key for n in Ea.sigma.names()} == {n: Eb.sigma[n].key for n in Eb.sigma.names()}
        and Ea.tau.key == Eb.tau.key
        and Ea.tau_labels == Eb.tau_labels and Ea.sigma_labels == Eb.sigma_labels
        and Ea.one_complex_vertices == Eb.one_complex_vertices
        and a.maps == b.maps and a.sample_point == b.sample_point and a.name == b.name
    )


def roundtrip(model: Model) -> Model:
    text = json.dumps(to_document(model), sort_keys=True)
    return build_model(parse_json(text), require_valid=False)


def test_corpus_round_trip(corpus):
    for model in corpus.values():
        again = roundtrip(model)
        assert same_model(model, again)
        assert to_document(again) == to_document(model)


def test_random_round_trip(random_expansions):
    for i, E in enumerate(random_expansions):
        model = Model(name=f"r{i}", expansion=E)
        assert same_model(model, roundtrip(model))


def test_explicit_lattice_round_trip():
    model = load_input(FIXTURES / "sublattice.json", require_valid=False)
    doc = to_document(model)
    assert any("lattice" in c for c in doc["upsilon"]["cones"])
    assert same_model(model, roundtrip(model))


def test_introduction_has_four_vertex_cones():
    model = load_input(corpus_path("introduction"))
    assert sorted(model.expansion.vertices()) == ["v0", "v1", "v2", "v3"]


def test_float_entry_is_a_schema_error():
    with pytest.raises(SchemaError) as err:
        load_input(FIXTURES / "float_entry.json")
    assert err.value.key == "tau.gens.0.0"
    assert err.value.exit_status == 2


def test_improper_overlap_is_a_validation_error_with_witness():
    with pytest.raises(ValidationError) as err:
        load_input(FIXTURES / "improper_overlap.json")
    detail = err.value.detail
    assert detail["code"] == "IMPROPER_INTERSECTION"
    assert sorted(detail["cones"]) == ["A", "B"]
    assert len(detail["witness"]) == 2


@pytest.mark.parametrize("mutate, key", [
    (lambda d: d["tau"].pop("gens"), "tau"),
    (lambda d: d["sigma"].update(rank="two"), "sigma.rank"),
    (lambda d: d.update(extra=1), ""),
    (lambda d: d["upsilon"]["cones"][0]["gens"].append([1, 2]), "upsilon.cones.0.gens.2"),
    (lambda d: d["upsilon"]["cones"][1].update(name=d["upsilon"]["cones"][0]["name"]), "upsilon.cones.1.name"),
    (lambda d: d["tau"].update(labels=["only"]), "tau.labels"),
])
def test_schema_errors_name_the_key(mutate, key):
    doc = json.loads(corpus_path("rank_one").read_text())
    mutate(doc)
    with pytest.raises(SchemaError) as err:
        build_model(doc)
    assert err.value.key == key


def test_rational_fields():
    doc = json.loads(corpus_path("rank_one").read_text())
    doc["sample_point"] = [{"num": 1, "den": 2}, 3]
    assert build_model(doc).sample_point == (Fraction(1, 2), 3)
    doc["sample_point"] = [{"num": 1, "den": 0}, 3]
    with pytest.raises(SchemaError):
        build_model(doc)


def test_unreadable_and_malformed_files(tmp_path):
    with pytest.raises(ParseError):
        load_input(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ParseError):
        load_input(bad)
