import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polyfact.bhargava import BhargavaRHS, BhargavaSet
from polyfact.formclass import parse_form
from polyfact.genfact import HSeq, PiK
from polyfact.hunt import (
    Entry,
    SearchUnknown,
    bertrand_gap_check,
    brocard_naive,
    brocard_search,
    certificate_search,
    family_check,
    integer_roots,
    parity_blocker,
    parse_rhs,
    verify_entry,
)

from oracles import naive_primes

FACT = HSeq("factorial")


def test_integer_roots_examples():
    assert integer_roots([1, 0, -1], 5040) == [71, -71]
    assert integer_roots([1, 0, -1], 120) == [11, -11]
    assert integer_roots([1, 0, 0, 0], 8) == [2]


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=5), st.integers(-40, 40))
def test_integer_roots_against_scan(P, x0):
    if P[0] == 0:
        return
    N = sum(c * x0 ** (len(P) - 1 - i) for i, c in enumerate(P))
    found = integer_roots(P, N)
    assert x0 in found
    for x in found:
        assert sum(c * x ** (len(P) - 1 - i) for i, c in enumerate(P)) == N
    scan = [x for x in range(-200, 201) if sum(c * x ** (len(P) - 1 - i) for i, c in enumerate(P)) == N]
    assert sorted(scan) == sorted(x for x in found if abs(x) <= 200)


def test_integer_roots_huge_target():
    x = 10**400 + 7
    assert integer_roots([3, 0, -5, 1], 3 * x**3 - 5 * x + 1) == [x]


def test_integer_roots_unmaterializable():
    from polyfact.genfact import FactorizationVector

    with pytest.raises(SearchUnknown):
        integer_roots([1, 0, -1], FactorizationVector({2: 10**7}))


def test_brocard_examples():
    assert set(brocard_search([1, 0, -1], 100).solutions) == {(5, 4), (-5, 4), (11, 5), (-11, 5), (71, 7), (-71, 7)}
    assert brocard_search([1, 0, 0, 0, -1], 100).solutions == []
    # 2^2 - 2 = 2! is the only hit below 50
    assert brocard_search([1, 0, -2], 50).solutions == [(2, 2), (-2, 2)]


@pytest.mark.parametrize("P", [[1, 0, -1], [1, 0, 0, 0, -1], [1, 0, -2], [1, 1, 0], [2, 0, 0, -2], [1, -1, 1]])
def test_brocard_sieve_matches_naive(P):
    assert sorted(brocard_search(P, 25).solutions) == sorted(brocard_naive(P, 25))


def test_brocard_rejects():
    with pytest.raises(ValueError):
        brocard_search([1, 5], 10)
    with pytest.raises(ValueError):
        brocard_search([1, 0, -1], 2001)


def test_brocard_report_partitions_range():
    r = brocard_search([1, 1, 0], 40)
    assert [e.l for e in r.entries] == list(range(1, 41))
    # x(x + 1) = l!: 1*2 = 2!, 2*3 = 3!
    assert {(x, l) for x, l in r.solutions} == {(1, 2), (-2, 2), (2, 3), (-3, 3)}


def test_certify_examples():
    F = parse_form("x^2+y^2")
    r = certificate_search(F, FACT, 7, 10)
    assert [(e.verdict, e.prime, e.exponent) for e in r.entries] == [("Blocked", 7, 1)] * 4
    six = certificate_search(F, FACT, 6, 6).entries[0]
    assert six.verdict == "Representable" and F(*six.witness) == 720


def test_certify_eisenstein_pik():
    e = certificate_search(parse_form("x^2+xy+y^2"), PiK.quadratic(-3), 2, 2).entries[0]
    assert e.verdict == "Representable" and e.witness == (1, 0)


def test_certify_soundness_small_grid():
    for text, rhs in [("x^2+y^2", FACT), ("x^2+xy+y^2", FACT), ("x^2+2y^2", HSeq("lcm")),
                      ("x^2+xy+2y^2", HSeq("multinomial", 2)), ("x^2+y^2", PiK.quadratic(-3)),
                      ("x^3-2y^3", FACT), ("x^2+xy+y^2", PiK.quadratic(-4))]:
        F = parse_form(text)
        for e in certificate_search(F, rhs, 1, 60).entries:
            assert verify_entry(F, rhs, e), (text, str(rhs), e)


def test_certify_constructive_witness():
    # large l: value beyond brute force, witness assembled from prime norms
    F = parse_form("x^2+xy+y^2")
    rhs = PiK.quadratic(-3)
    reps = [e for e in certificate_search(F, rhs, 1, 200).entries if e.verdict == "Representable"]
    assert reps
    for e in reps:
        assert F(*e.witness) == rhs.profile(e.l).value()


def test_verify_rejects_tampered_certificates():
    F = parse_form("x^2+y^2")
    assert not verify_entry(F, FACT, Entry(7, "Blocked", "exponent-criterion", 7, 2))
    assert not verify_entry(F, FACT, Entry(7, "Blocked", "exponent-criterion", 5, 1))
    assert not verify_entry(F, FACT, Entry(6, "Representable", "x", witness=(1, 2)))


def test_certify_cubic_unknown_when_passing():
    F = parse_form("x^3-2y^3")
    r = certificate_search(F, FACT, 1, 4)
    assert all(e.verdict in ("Blocked", "Unknown") for e in r.entries)


def test_certify_indefinite_never_representable():
    F = parse_form("x^2-2y^2")
    r = certificate_search(F, FACT, 1, 40)
    assert all(e.verdict != "Representable" for e in r.entries)


def test_certify_norm_mode():
    F = parse_form("x^3+2y^3")
    r = certificate_search(F, FACT, 5, 30, mode="norm")
    for e in r.entries:
        assert verify_entry(F, FACT, e, mode="norm")
        if e.verdict == "Blocked":
            assert e.exponent == 1


def test_certify_bhargava_truncated():
    rhs = BhargavaRHS(BhargavaSet("POLY", (1, 0, 0)), 13)
    F = parse_form("x^2+y^2")
    r = certificate_search(F, rhs, 3, 12)
    assert r.truncation
    for e in r.entries:
        assert e.verdict in ("Blocked", "Unknown")
        if e.verdict == "Blocked":
            assert e.prime <= 13 and verify_entry(F, rhs, e)


def test_certify_parallel_matches_serial():
    F = parse_form("x^2+y^2")
    a = certificate_search(F, FACT, 7, 300)
    b = certificate_search(F, FACT, 7, 300, workers=2)
    assert a.to_dict(meta=False) == b.to_dict(meta=False)


def test_report_json_schema():
    r = certificate_search(parse_form("x^2+y^2"), FACT, 5, 7)
    d = json.loads(r.to_json())
    assert set(d) == {"equation", "range", "entries", "meta"}
    assert d["range"] == {"lo": 5, "hi": 7}
    assert set(d["meta"]) == {"runtime_ms", "truncation"}
    assert "meta" not in json.loads(r.to_json(meta=False))


def test_parse_rhs():
    assert str(parse_rhs("factorial")) == "factorial"
    assert str(parse_rhs("multinomial:3")) == "multinomial:3"
    assert str(parse_rhs("pik:-4")) == "pik:-4"
    assert str(parse_rhs("bharg:AP 2 1@11")) == "bharg:AP 2 1@11"
    with pytest.raises(ValueError):
        parse_rhs("bogus")


def test_family_examples():
    rows = family_check(4, 30)
    assert [(r["x"], r["y"]) for r in rows[:3]] == [(7, 5), (31, 29), (181, 179)]
    assert all(r["ok"] for r in rows)
    with pytest.raises(ValueError):
        family_check(3, 5)


def test_gaps_examples():
    assert bertrand_gap_check((3, 4), 11, 10**5) == []
    # 5 is followed by 13 in the class 1 mod 4, a genuine gap at the low end
    assert bertrand_gap_check((1, 4), 5, 10**5) == [(5, 13)]
    assert bertrand_gap_check((1, 4), 11, 10**5) == []
    assert bertrand_gap_check((3, 4), 11, 100, 1.05)


def test_gaps_against_naive():
    ps = [p for p in naive_primes(2000) if p % 3 == 2]
    expect = []
    for i, p in enumerate(ps):
        if p < 5 or p > 900:
            continue
        q = ps[i + 1]
        if Fraction(q) >= Fraction(13, 10) * p:
            expect.append((p, q))
    assert bertrand_gap_check((2, 3), 5, 900, Fraction(13, 10)) == expect


def test_gaps_form_based():
    F = parse_form("x^2+y^2")
    assert bertrand_gap_check(F, 3, 10**4) == bertrand_gap_check((3, 4), 3, 10**4)


def test_parity_blocker_examples():
    rows = parity_blocker(-4, PiK.quadratic(-4), 5, 5)
    assert rows[0]["passes"]
    seven = parity_blocker(-4, FACT, 7, 7)[0]
    assert not seven["passes"] and seven["prime"] == 7
    assert parity_blocker(-4, FACT, 2, 2)[0]["passes"]


def test_certify_table_field_is_flagged(tmp_path):
    from polyfact.genfact import load_splitting_table

    lines = ["2 1^2"] + [f"{p} {'1,1' if p % 4 == 1 else '2'}" for p in naive_primes(60)[1:]]
    path = tmp_path / "gauss.txt"
    path.write_text("\n".join(lines) + "\n")
    rhs = PiK(load_splitting_table(path))
    F = parse_form("x^2+y^2")
    r = certificate_search(F, rhs, 1, 40)
    assert r.truncation
    direct = certificate_search(F, PiK.quadratic(-4), 1, 40)
    assert [e.verdict for e in r.entries] == [e.verdict for e in direct.entries]
