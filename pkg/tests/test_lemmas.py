import io

import pytest

from linres.lemmas import TRIALS, run_trials, write_trials_csv


@pytest.mark.parametrize("lemma", sorted(TRIALS))
def test_lemma_trials_find_no_counterexample(lemma):
    rows = list(run_trials(lemma, 4, seed=100))
    assert [row["trial"] for row in rows] == [0, 1, 2, 3]
    assert [row["seed"] for row in rows] == [100, 101, 102, 103]
    assert all(row["outcome"] for row in rows)


def test_trials_are_reproducible():
    first = io.StringIO()
    second = io.StringIO()
    write_trials_csv(run_trials("addcomb", 3, seed=5), first)
    write_trials_csv(run_trials("addcomb", 3, seed=5), second)
    assert first.getvalue() == second.getvalue()
    assert first.getvalue().splitlines()[0] == "seed,lemma,trial,p,params,outcome"


def test_timing_adds_an_elapsed_column():
    stream = io.StringIO()
    failures = write_trials_csv(run_trials("imglb", 2, seed=0, timing=True), stream, timing=True)
    assert failures == 0
    lines = stream.getvalue().splitlines()
    assert lines[0].endswith(",elapsed")
    assert len(lines) == 3


@pytest.mark.slow
@pytest.mark.parametrize("lemma", sorted(TRIALS))
def test_five_hundred_trials_per_lemma(lemma):
    stream = io.StringIO()
    assert write_trials_csv(run_trials(lemma, 500, seed=0), stream) == 0
    assert len(stream.getvalue().splitlines()) == 501


def test_shortdim_reports_the_weaker_condition_separately():
    rows = list(run_trials("shortdim", 6, seed=3))
    assert all(row["outcome"] for row in rows)
    assert all(" literal=gap" in row["params"] or " literal=held" in row["params"] for row in rows)
