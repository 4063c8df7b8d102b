from fractions import Fraction

import pytest

import leglab


def test_expand_and_evaluate_round_trip():
    assert leglab.expand(Fraction(5, 8)) == [0, 1, 1, 1, 2]
    assert leglab.expand("-7/5") == [-2, 1, 1, 2]
    assert leglab.expand("cf:[1;(2)]", terms=4) == [1, 2, 2, 2]
    assert leglab.evaluate([0, 1, 1, 1, 2]) == Fraction(5, 8)
    assert leglab.evaluate([0, 1, 1, 1, 1, 1]) == Fraction(5, 8)


def test_big_integers_are_exact():
    big = Fraction(2**100 + 1, 3**70)
    assert leglab.evaluate(leglab.expand(big)) == big


def test_convergents_and_mediants():
    assert leglab.convergents("cf:[1;(2)]", count=4) == [
        Fraction(1), Fraction(3, 2), Fraction(7, 5), Fraction(17, 12)
    ]
    meds = leglab.mediants("2/7", 1)
    assert [m["value"] for m in meds] == [Fraction(1, 4)]
    assert meds[0]["first"] and meds[0]["nearest"]


def test_classify_and_check():
    c = leglab.classify(Fraction(1, 3), Fraction(2, 5))
    assert c["kind"] == "nearest_mediant" and c["first"] is True
    v = leglab.check("refined-t2", Fraction(1, 2), Fraction(1, 3))
    assert v["hypothesis"] == "holds_equality"
    assert v["exception"] == 4
    assert v["equality"] is True
    assert Fraction(v["bound"]) == leglab.bound("refined-t2", 2) == Fraction(1, 6)
    assert leglab.bound("refined-t3", 3, q_prev=1) == Fraction(1, 15)


def test_errors():
    with pytest.raises(ValueError):
        leglab.check("hurwitz", "1/2", "1/3")
    with pytest.raises(leglab.InapplicableError):
        leglab.check("refined-t3", "2", "1/3")
    with pytest.raises(ValueError):
        leglab.audit("legendre", 0)


def test_series_examples():
    assert leglab.partial_sum("ex1", 1, 3) == Fraction(81, 128)
    assert leglab.classify(Fraction(81, 128), "series:ex1:A=1")["kind"] == "convergent"


def test_audit_reports():
    clean = leglab.audit("legendre", 20, "rationals:20")
    assert clean["passed"] is True
    assert clean["counterexamples"]["total"] == 0
    t2 = leglab.audit("refined-t2", 6, "rationals:8", jobs=2)
    assert t2["passed"] is False
    first = t2["counterexamples"]["entries"][0]
    assert (first["p"], first["q"], first["alpha"]) == (2, 3, "rat:3/5")


def test_sharpness_and_cross_order():
    witnesses = leglab.sharpness_scan("koksma", 30, "shapes:3:3")
    assert all(Fraction(w["scaled_error"]) >= Fraction(2, 3) for w in witnesses)
    order = leglab.cross_order_check(100)
    assert order["ok"] is True and order["rows_checked"] == 99
    assert "refined-t6" in leglab.THEOREMS
