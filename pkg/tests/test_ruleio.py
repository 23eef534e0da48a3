import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cauchyquad.errors import RuleFormatError
from cauchyquad.quadgen import QuadratureRule, apply_rule
from cauchyquad.ruleio import (CSV_HEADER, export_rule, import_rule, rule_from_csv,
                               rule_from_json, rule_to_csv, rule_to_json)
from conftest import recipe_result

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def sample_rule():
    return QuadratureRule([0.1 + 0.2j, -1 / 3, 1e-300 - 7e200j], [1 / 7, 2j, -0.0 + 3.5j],
                          constant=0.25 - 1j, approx_error=1.5e-10,
                          contour_length=6.283185307179586, provenance="test abc123")


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_roundtrip_byte_identical(tmp_path, fmt):
    rule = sample_rule()
    p1, p2 = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
    export_rule(rule, p1)
    back = import_rule(p1)
    export_rule(back, p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert np.array_equal(back.nodes, rule.nodes)
    assert np.array_equal(back.weights, rule.weights)


def test_json_metadata(tmp_path):
    rule = sample_rule()
    doc = json.loads(rule_to_json(rule))
    for key in ("degree", "approx_error", "contour_length", "provenance", "tool_version"):
        assert key in doc
    back = rule_from_json(rule_to_json(rule))
    assert back.constant == rule.constant
    assert back.approx_error == rule.approx_error
    assert back.contour_length == rule.contour_length
    assert back.provenance == rule.provenance


def test_degree_one_csv():
    text = rule_to_csv(QuadratureRule([2.0], [1.0]))
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 2


@given(st.lists(st.tuples(finite, finite, finite, finite), min_size=1, max_size=20))
def test_csv_roundtrip_bits(rows):
    z = [complex(a, b) for a, b, _, _ in rows]
    c = [complex(x, y) for _, _, x, y in rows]
    rule = QuadratureRule(z, c)
    back = rule_from_csv(rule_to_csv(rule))
    assert back.nodes.tobytes() == rule.nodes.tobytes()
    assert back.weights.tobytes() == rule.weights.tobytes()


def test_hankel_rule_reapplied_identically(tmp_path):
    rule = recipe_result("hankel").rule
    f = lambda z: -np.e / (1 + z)
    for fmt in ("csv", "json"):
        p = tmp_path / f"h.{fmt}"
        export_rule(rule, p)
        again = apply_rule(import_rule(p), f)
        assert again == apply_rule(rule, f)


def test_malformed_csv_line_number():
    text = rule_to_csv(sample_rule()).splitlines()
    text[2] = "1.0,abc,2.0,3.0"
    with pytest.raises(RuleFormatError) as info:
        rule_from_csv("\n".join(text) + "\n")
    assert info.value.line == 3
    with pytest.raises(RuleFormatError) as info:
        rule_from_csv("x,y\n")
    assert info.value.line == 1
    with pytest.raises(RuleFormatError) as info:
        rule_from_csv(",".join(CSV_HEADER) + "\n1,2,3\n")
    assert info.value.line == 2


def test_malformed_json_line_number():
    text = rule_to_json(sample_rule())
    broken = text.replace('"degree": 3', '"degree": 3,,', 1)
    with pytest.raises(RuleFormatError) as info:
        rule_from_json(broken)
    assert info.value.line == broken[:broken.index(",,")].count("\n") + 1
    doc = json.loads(text)
    doc["weights"][1] = ["x", 1.0]
    bad = json.dumps(doc, indent=1)
    with pytest.raises(RuleFormatError) as info:
        rule_from_json(bad)
    lines = bad.splitlines()
    # the reported line opens the offending pair
    assert '"x"' in "\n".join(lines[info.value.line - 1:info.value.line + 1])
    assert lines[info.value.line - 1].strip() == "["
    compact = json.dumps(doc).replace("], [", "],\n[")
    with pytest.raises(RuleFormatError) as info:
        rule_from_json(compact)
    assert '"x"' in compact.splitlines()[info.value.line - 1]


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        export_rule(sample_rule(), tmp_path / "r.txt")
    with pytest.raises(RuleFormatError):
        rule_from_json('{"format": "other"}')
