import json
from fractions import Fraction

import pytest

import jterw


def test_binomial_and_eigenvalues():
    assert jterw.binomial(5, 2) == 10
    assert jterw.eigenvalue_p1(5, 2, 1) == Fraction(1)


def test_idempotent_is_exact():
    e0 = jterw.primitive_idempotent(5, 2, 0)
    assert len(e0) == 10
    assert all(x == Fraction(1, 10) for row in e0 for x in row)


def test_intersection_matrix():
    h = jterw.intersection_matrix(3, 1, 1, 0)
    assert h == [[Fraction(int(i != j)) for j in range(3)] for i in range(3)]


def test_decompose_j52():
    dec = jterw.decompose(5, 2)
    assert dec["regime"] == "2d<n<3d"
    assert [(b["r"], b["s"], b["e"], b["block_size"]) for b in dec["blocks"]] == [
        (0, 0, 0, 3), (0, 1, 1, 2), (1, 0, 1, 1), (1, 1, 1, 1)]
    assert dec["dim_T_formula"] == dec["dim_T_closure"] == 15
    assert jterw.decompose(5, 2, base_point=[3, 5])["blocks"] == dec["blocks"]


def test_terwilliger_dimension():
    assert jterw.terwilliger_dimension(4, 2) == 11


def test_run_suite_report():
    report = json.loads(jterw.run_suite("thm51-T-equals-N", scheme=(4, 2)))
    assert report["passed"]
    assert report["facts"]["J(4,2).dim_T"] == "11"
    assert "lemma21" in jterw.suite_names()


def test_errors():
    with pytest.raises(ValueError):
        jterw.run_suite("no-such-suite")
    with pytest.raises(ValueError):
        jterw.run_suite("thm51-T-equals-N", scheme=(7, 3))
