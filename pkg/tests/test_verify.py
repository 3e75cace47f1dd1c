import json

import pytest

from lsmword.errors import ConfigError
from lsmword.parikh import ScanPolicy, spectrum
from lsmword.verify import (
    FAIL,
    PASS,
    VerifyConfig,
    check_ac,
    check_balance,
    check_counting,
    check_oracle,
    check_preimage,
    check_structure,
    oracle_spectrum,
    run_all,
)
from lsmword.words import prefix

from conftest import naive_vectors


@pytest.mark.parametrize("p", [2, 3, 5])
def test_structure_passes(p):
    results = check_structure(p, 200_000)
    assert [r.claim for r in results] == ["adjacency", "s-gaps", "m-gaps", "m-density"]
    assert all(r.status == PASS for r in results)


def test_m_gap_bounds_p5():
    gaps = {r.claim: r for r in check_structure(5, 200_000)}["m-gaps"]
    lo, hi = gaps.evidence["gap_lengths"]
    assert 29 <= lo and hi <= 35


def test_structure_precondition():
    with pytest.raises(ConfigError):
        check_structure(2, 5)


def _flip(u, i, c):
    return u[:i] + c + u[i + 1:]


@pytest.mark.parametrize("i", [101, 1000, 2345, 7777])
def test_negative_control(i):
    u = prefix(2, 10_000)
    for c in "LSM":
        if c == u[i]:
            continue
        results = check_structure(2, len(u), word=_flip(u, i, c))
        failed = [r for r in results if r.status == FAIL]
        assert failed, (i, c)
        ev = failed[0].evidence["counterexample"]
        assert ev["offset"] <= i < ev["end"]
        assert ev["letters"] == _flip(u, i, c)[ev["offset"]:ev["end"]]


def test_m_density_counterexample():
    p = 2
    u = prefix(p, 5000)
    # move two M's closer by deleting the letters between them
    first = u.index("M", 100)
    second = u.index("M", first + 1)
    bad = u[:first + 1] + u[second - 2:]
    results = {r.claim: r for r in check_structure(p, len(bad), word=bad)}
    assert results["m-density"].status == FAIL
    assert results["m-density"].evidence["counterexample"]["m_count"] >= 2


def test_counting():
    assert check_counting(2, 200, seed=1).status == PASS
    assert check_counting(3, 200, seed=1, max_factor_len=50).status == PASS
    with pytest.raises(ConfigError):
        check_counting(2, 0)


def test_preimage_check():
    r = check_preimage(2, samples=100, max_k=10)
    assert r.status == PASS
    assert r.evidence["iterates_checked"] == list(range(1, 11))


def test_preimage_check_respects_cap():
    r = check_preimage(3, samples=10, max_k=12, max_len=10_000)
    assert r.status == PASS
    assert r.evidence["cap_limited_from_k"] == 8


def test_oracle_spectrum():
    u = prefix(2, 36)
    assert oracle_spectrum(2, 2, 36).vectors == spectrum(2, 2, ScanPolicy(prefix_len=36)).vectors
    assert {tuple(v) for v in oracle_spectrum(2, 2, 36).vectors} == naive_vectors(u, 2)
    assert len(oracle_spectrum(3, 1, 500).vectors) <= 3
    assert check_oracle(2, 20, 2000).status == PASS


def test_balance_and_ac_checks():
    bal = check_balance(2, 120)
    assert bal.status == PASS
    assert bal.evidence["first_attaining_bound"] == {"M": 7, "S": 10, "L": 37}
    ac = check_ac(2, 120)
    assert [r.claim for r in ac] == ["ac-bounds", "ac-values"]
    assert ac[0].status == PASS
    assert ac[1].evidence["attained"] == [3, 4, 5, 6, 7]


def test_run_all_config_errors():
    with pytest.raises(ConfigError):
        run_all(VerifyConfig(ps=(1,)))
    with pytest.raises(ConfigError):
        run_all(VerifyConfig(prefix_len=100, max_n=200))
    with pytest.raises(ConfigError):
        run_all(VerifyConfig(checks=("nope",)))


def test_run_all_empty():
    report = run_all(VerifyConfig(checks=()))
    assert report.results == [] and report.ok


def _strip_timing(doc):
    for r in doc["results"]:
        r["elapsed"] = 0
    return doc


def test_run_all_small_and_deterministic():
    cfg = VerifyConfig(ps=(2, 3), max_n=200, prefix_len=50_000, samples=100, preimage_samples=50, Ns=(1,))
    a = run_all(cfg)
    b = run_all(cfg)
    assert json.dumps(_strip_timing(a.to_json())) == json.dumps(_strip_timing(b.to_json()))
    assert a.ok
    flagged = {(r.params["p"], r.claim) for r in a.results if r.flagged}
    assert flagged == {(2, "witness-S-formula"), (3, "witness-S-formula"), (3, "witness-L-stated-length")}
    assert all(r.status == PASS for r in a.results if not r.flagged)
    assert a.to_json()["config"]["seed"] == 0
