import pathlib

import pytest

import mcdc_forge as mf

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


@pytest.fixture(scope="module")
def model():
    return mf.Model.load(str(DATA / "gcs_model.json"))


@pytest.fixture(scope="module")
def constraints(model):
    return mf.parse((DATA / "gcs_constraints.ocl").read_text(), model)


def by_id(constraints, cid):
    return next(c for c in constraints if c.id == cid)


def test_model_classes(model):
    assert {"GCS", "Mission", "Route"} <= set(model.classes)
    cfg = model.instantiate("GCS")
    assert cfg


def test_c1_variants(constraints):
    c1 = by_id(constraints, "C1")
    assert c1.clause_count == 3
    assert [v.combination for v in mf.reformulate(c1)] == ["TTF", "TFT", "TFF", "FTF"]


def test_solve_c2(constraints):
    v = mf.variant(by_id(constraints, "C2"), "T")
    r = mf.solve(v, mode="avmo", budget=2000, seed=1)
    assert r["status"] == "solved"
    assert r["best_fitness"] == 0.0
    assert 1 <= r["iterations"] <= 2000


def test_solve_is_deterministic(constraints):
    v = mf.reformulate(by_id(constraints, "C1"))[0]
    a = mf.solve(v, mode="avmrc", seed=5, trace=True)
    b = mf.solve(v, mode="avmrc", seed=5, trace=True)
    assert a == b
    assert len(a["trace"]) == a["iterations"]


def test_similarity_and_ranges(constraints):
    vs = {v.combination: v for v in mf.reformulate(by_id(constraints, "C1"))}
    assert mf.similarity(vs["TTF"], vs["TFF"]) == 2
    ranges = mf.reduce_ranges(vs["TTF"], sf=1, seed=0)
    assert ranges


def test_stats():
    p, odds = mf.fisher_exact(10, 0, 0, 10)
    assert p == pytest.approx(2 / 184756, rel=1e-9)
    assert mf.a12([2.0, 3.0], [1.0, 1.0]) == 1.0
    with pytest.raises(ValueError):
        mf.wilcoxon([1.0], [2.0])


def test_errors(model):
    with pytest.raises(mf.ParseError):
        mf.parse("C: context GCS inv: self.mission.", model)
    with pytest.raises(mf.McdcError):
        mf.Model.from_json("{")


def test_bench_csv(model):
    text = "C2: context GCS inv: self.mission.waypoints>self.mission.MIN_WP_LIMIT"
    csv = mf.bench(model, text, modes="avmo,rs", reps=2, budget=100, threads=1)
    lines = csv.strip().splitlines()
    assert len(lines) == 1 + 2 * 2 * 2
