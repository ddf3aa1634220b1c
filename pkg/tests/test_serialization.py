import json
import random

import pytest

from ilwlax import DiffPoly, LaxData, Scalar, ShiftOperator, VerificationReport
from ilwlax.errors import ConstructionFailure

from conftest import random_operator, random_poly

K = 6


def test_diffpoly_round_trip():
    rng = random.Random(30)
    for _ in range(20):
        p = random_poly(rng, K)
        assert DiffPoly.from_json(p.to_json()) == p


def test_diffpoly_json_shape():
    p = DiffPoly.monomial({2: 1, 0: 1}, Scalar.term(1, K, tau=1, eps=2))
    doc = p.to_json()
    assert doc["K"] == K
    assert doc["terms"][0]["vars"] == [[2, 1], [0, 1]]
    coeff = doc["terms"][0]["coeff"]
    assert coeff["terms"] == [{"i": 0, "tau": 1, "eps": 2, "num": "1", "den": "1"}]


def test_shift_operator_round_trip():
    rng = random.Random(31)
    for _ in range(10):
        op = random_operator(rng, K, with_first=rng.random() < 0.5)
        assert ShiftOperator.from_json(op.to_json()) == op


def test_lax_round_trip(lax):
    doc = lax.to_json()
    clone = LaxData.from_json(doc)
    assert clone.config == lax.config
    for n in range(lax.config.lambda_depth + 1):
        assert clone.a(n) == lax.a(n)
        assert clone.a_guard(n) == lax.a_guard(n)
    assert clone.flow(1) == lax.flow(1)
    assert clone.flow_via_commutator(1) == lax.flow_via_commutator(1)


def test_lax_json_is_deterministic(lax):
    a = json.dumps(lax.to_json(), sort_keys=True)
    b = json.dumps(LaxData.from_json(lax.to_json()).to_json(), sort_keys=True)
    assert a == b


def test_lax_load_rejects_tampered_a0(lax):
    doc = json.loads(json.dumps(lax.to_json()))
    doc["guard"]["a"][0]["terms"][0]["coeff"]["terms"][0]["num"] = "2"
    with pytest.raises(ConstructionFailure):
        LaxData.from_json(doc)


def test_lax_load_rejects_guard_mismatch(lax):
    doc = json.loads(json.dumps(lax.to_json()))
    doc["a"][1]["terms"][0]["coeff"]["terms"][0]["num"] = "17"
    with pytest.raises(ConstructionFailure):
        LaxData.from_json(doc)


def test_lax_load_d_max_override(lax):
    doc = lax.to_json()
    narrower = LaxData.from_json(doc, d_max=1)
    assert narrower.config.d_max == 1
    from ilwlax.errors import DepthInsufficient
    with pytest.raises(DepthInsufficient):
        LaxData.from_json(doc, d_max=lax.config.lambda_depth)


def test_report_shape():
    report = VerificationReport("demo", (1, 2), True, None, 5)
    assert report.to_json() == {"check": "demo", "params": [1, 2], "pass": True,
                                "witness": None, "millis": 5}
    with pytest.raises(ValueError):
        VerificationReport("demo", (), False, None, 1)
