import numpy as np
import pytest
from hypothesis import assume, example, given, settings, strategies as st

from metasoc.constructions import cluster
from metasoc.errors import LengthMismatch, ZeroVariance
from metasoc.stats import (MetaphorRow, batch_fit_summary, correlation_matrix, loglog_regression,
                           metaphor_row, pearson, rank_frequency, read_table)

from test_constructions import inst


@pytest.fixture
def metaphors(metaphors_path):
    with open(metaphors_path, encoding="utf-8") as fh:
        return read_table(fh)


def profile_with(freqs, lemma="v"):
    insts, k = [], 0
    for g, n in enumerate(freqs):
        for _ in range(n):
            insts.append(inst("ROOT", ["DEP"] * g, year=1950 + g, sent=f"s{k}", lemma=lemma))
            k += 1
    return cluster(insts, 1, 0.0)


# -- rank-frequency --------------------------------------------------------

def test_rank_frequency_examples():
    assert rank_frequency(profile_with([10, 50, 20])).points == [(1, 50), (2, 20), (3, 10)]
    assert rank_frequency(profile_with([7])).points == [(1, 7)]


def test_rank_frequency_ties_follow_profile_order():
    profile = profile_with([10, 5, 10])
    assert rank_frequency(profile).points == [(1, 10), (2, 10), (3, 5)]
    assert [c.frequency for c in profile.constructions] == [10, 10, 5]
    assert [c.first_occurrence_year for c in profile.constructions] == [1950, 1952, 1951]


# -- pearson ---------------------------------------------------------------

def test_bundled_coefficients(metaphors):
    col = lambda name: [getattr(r, name) for r in metaphors]
    assert len(metaphors) == 12
    assert pearson(col("b"), col("frequency")) == pytest.approx(0.529680999, abs=1e-6)
    assert pearson(col("b"), col("foy")) == pytest.approx(-0.554363698, abs=1e-6)
    assert pearson(col("foy"), col("frequency")) == pytest.approx(-0.459786631, abs=1e-6)


def test_perfect_linearity():
    xs = [0.5, 1.0, 3.0, 7.0]
    assert pearson(xs, [2 * x + 1 for x in xs]) == 1.0


def test_constant_series():
    with pytest.raises(ZeroVariance) as info:
        pearson([1, 2, 3], [4, 4, 4], names=("b", "foy"))
    assert info.value.variable == "foy"


def test_length_errors():
    with pytest.raises(LengthMismatch):
        pearson([1, 2, 3], [1, 2])
    with pytest.raises(LengthMismatch):
        pearson([1], [1])


def test_correlation_matrix_of_bundled_rows(metaphors):
    m = correlation_matrix(metaphors)
    assert m.variables == ("b", "foy", "frequency")
    assert m["b", "frequency"] == pytest.approx(0.529680999, abs=1e-6)
    assert m["foy", "b"] == pytest.approx(-0.554363698, abs=1e-6)
    assert np.array_equal(m.r, m.r.T)
    assert np.all(np.diag(m.r) == 1.0)
    lines = m.to_csv().splitlines()
    assert lines[0] == ",b,foy,frequency"
    assert lines[1].startswith("b,1.000000000,-0.554363698,0.529680999")


def test_two_row_matrix():
    m = correlation_matrix([MetaphorRow("a", 1.0, 1950, 10), MetaphorRow("b", 2.0, 1960, 30)])
    assert np.all(np.abs(m.r) <= 1)


def test_constant_foy_is_named():
    rows = [MetaphorRow(f"m{i}", 1.0 + i, 1960, 10 * (i + 1)) for i in range(4)]
    with pytest.raises(ZeroVariance, match="foy"):
        correlation_matrix(rows)


def test_one_row_is_too_few():
    with pytest.raises(LengthMismatch):
        correlation_matrix([MetaphorRow("a", 1.0, 1950, 10)])


def test_read_table_requires_columns():
    with pytest.raises(ValueError, match="frequency"):
        read_table("lemma,b,foy\nx,1,1950\n")


# -- batch fits ------------------------------------------------------------

def test_batch_of_exact_power_laws():
    # a divisible by 60^b (60 = lcm of 1..6) keeps every frequency an exact integer
    profiles = [profile_with([a // r ** b for r in range(1, 7)], lemma=f"m{i}")
                for i, (a, b) in enumerate([(60, 1), (120, 1), (3600, 2)])]
    summary = batch_fit_summary(profiles)
    assert summary.errors == {}
    for value in (summary.mean_r_squared, summary.min_r_squared, summary.max_r_squared):
        assert value == pytest.approx(1.0, abs=1e-12)


def test_batch_excludes_too_few_points():
    good = profile_with([60, 30, 20, 15], lemma="good")
    single = profile_with([9], lemma="single")
    summary = batch_fit_summary([good, single])
    assert list(summary.fits) == ["good"]
    assert summary.errors["single"].startswith("TooFewPoints")
    assert summary.mean_r_squared == summary.fits["good"].quality.r_squared


def test_batch_of_nothing():
    summary = batch_fit_summary([])
    assert summary.mean_r_squared is None and summary.max_r_squared is None


def test_metaphor_row_from_profile():
    profile = profile_with([60, 30, 20, 15, 12, 10])
    fit = batch_fit_summary([profile]).fits["v"]
    row = metaphor_row(profile, fit)
    assert (row.foy, row.frequency) == (1950, 147)
    assert row.b == pytest.approx(1.0)


def test_loglog_regression():
    slope, intercept, r2 = loglog_regression([1, 2, 4, 8], [16, 8, 4, 2])
    assert slope == pytest.approx(-1) and np.exp(intercept) == pytest.approx(16)
    assert r2 == pytest.approx(1)


# -- properties ------------------------------------------------------------

finite = st.floats(-1e3, 1e3, allow_nan=False)
series = st.lists(st.tuples(finite, finite), min_size=3, max_size=30)


def _spread(v):
    v = np.asarray(v)
    return np.ptp(v) > 1e-3 * max(1.0, np.max(np.abs(v)))


@settings(max_examples=200, deadline=None)
@given(series, st.floats(0.01, 100), finite, st.floats(0.01, 100), finite)
@example([(0.0, 0.0), (0.0, 0.04), (1.0, 0.0625)], 1.0, 0.0, 0.01171875, 32.0)
def test_pearson_affine_invariance(pairs, sx, tx, sy, ty):
    xs, ys = map(np.array, zip(*pairs))
    assume(_spread(xs) and _spread(ys))
    r = pearson(xs, ys)
    assert -1 <= r <= 1
    assert pearson(ys, xs) == r
    u, v = sx * xs + tx, sy * ys + ty
    # centring a shifted series cancels digits in proportion to offset / spread
    cond = max(np.max(np.abs(w)) / np.ptp(w) for w in (u, v))
    assert pearson(u, v) == pytest.approx(r, abs=1e-13 * max(1.0, cond))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=8))
def test_rank_frequency_shape(freqs):
    profile = profile_with(freqs)
    pts = rank_frequency(profile)
    assert len(pts) == len(profile.constructions)
    assert list(pts.xs) == list(range(1, len(pts) + 1))
    assert all(u >= v for u, v in zip(pts.ys, pts.ys[1:]))
