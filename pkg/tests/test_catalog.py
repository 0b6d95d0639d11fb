import json

import jsonschema
import pytest

from g2forge import catalog as cat
from g2forge.catalog import (
    CERTIFICATE_SCHEMA,
    Catalog,
    UnknownEntry,
    abelian_control_certificate,
    obstruction_polynomial,
    prop45_certificate,
    report_json,
    verify_paper,
)
from g2forge.exterior import e
from g2forge.notation import parse_structure_tuple, render_tuple


@pytest.fixture(scope="module")
def certs():
    return verify_paper()


def test_every_entry_builds(catalog):
    for name in cat.names():
        ent = catalog.get(name)
        assert parse_structure_tuple(ent.tuple_text) == ent.algebra
        assert render_tuple(ent.algebra) == ent.tuple_text


def test_nilpotent_entries(catalog):
    for name in cat.NILPOTENT:
        g = catalog.get(name).algebra
        assert g.dim == 7 and g.is_nilpotent


def test_example_entries(catalog):
    ent = catalog.get("ex5.3")
    assert ent.base == "h1" and ent.theta == e(7, "7")
    assert ent.tuple_text == "(e37,e47,2e17,2e27,e14+e23,e13-e24,0)"


def test_unknown_name_lists_choices():
    with pytest.raises(UnknownEntry) as info:
        cat.get("n12")
    assert "n11" in str(info.value) and "ex5.2" in str(info.value)
    with pytest.raises(UnknownEntry):
        Catalog({"bogus": "(0)"})


def test_all_certificates_verified(certs):
    failed = [c.claim_id for c in certs if not c.verified]
    assert not failed
    ids = [c.claim_id for c in certs]
    assert len(ids) == len(set(ids))
    assert ids[0].startswith("jacobi-")


def test_certificates_are_deterministic(certs):
    again = verify_paper()
    assert [c.digest() for c in certs] == [c.digest() for c in again]
    assert report_json(certs) == report_json(again)


def test_certificate_schema(certs):
    for c in certs:
        jsonschema.validate(c.to_dict(), CERTIFICATE_SCHEMA)
    doc = json.loads(report_json(certs))
    assert all(len(d["evidence"]["digest"]) == 16 for d in doc)


def test_mutated_n3_fails_jacobi_first():
    # e15 -> e16 breaks d^2 = 0 since de6 has an e13 term
    bad = verify_paper({"n3": "(0,0,e12,0,0,e13+e24,e16)"})
    failed = [c.claim_id for c in bad if not c.verified]
    assert failed and failed[0] == "jacobi-n3"


@pytest.mark.parametrize("mutant", [
    "(0,0,0,0,-e14+e23,e13-e24)",
    "(0,0,0,0,e14-e23,e13-e24)",
    "(0,0,0,0,e14+e23,-e13-e24)",
    "(0,0,0,0,e14+e23,e13+e24)",
])
def test_h1_sign_flips_detected(mutant):
    bad = verify_paper({"h1": mutant})
    failed = {c.claim_id for c in bad if not c.verified}
    assert "h1-coupled" in failed


def test_prop45_single():
    c = prop45_certificate("n1")
    assert c.verified and c.evidence["polynomial"] == "0"
    with pytest.raises(ValueError):
        prop45_certificate("h1")


def test_abelian_control_nonzero():
    c = abelian_control_certificate()
    assert c.verified and c.evidence["terms"] > 0
    g = parse_structure_tuple("(0,0,0,0,0,0,0)")
    assert not obstruction_polynomial(g, 6).is_zero()
