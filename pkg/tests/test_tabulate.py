import json
import shutil
from pathlib import Path

import pytest

from knottab.codes import PairCode, parse_code
from knottab.colortests import (InvariantVector, irreducible, same_test,
                                validate)
from knottab.moves import classify
from knottab.tabulate import (ConfigMismatch, CorruptCheckpoint, RunConfig,
                              TableRow, build_suite, census_classes,
                              distinguish, emit_table, parse_invariants,
                              resume, run, serialize_invariants)

TREFOIL = parse_code("3;(1,4)(3,6)(5,2)")


def small_config(**kw):
    return RunConfig(max_crossings=6, max_colors=3, affine_mods=(3,),
                     sym_max=3, **kw)


def checkpoint_files(base):
    return sorted(p.name for p in Path(base).iterdir())


def read_all(base):
    return {p.name: p.read_bytes() for p in Path(base).iterdir()}


@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    base = tmp_path_factory.mktemp("ck") / "run6"
    report = run(small_config(checkpoint_path=str(base)))
    return base, report


def test_run_zero_crossings(tmp_path):
    report = run(RunConfig(max_crossings=0))
    assert report.rows == [TableRow(0, 1, 1)]
    assert report.stats["unresolved"] == 0


def test_small_run_counts(small_run):
    _, report = small_run
    counts = [r.class_count for r in report.rows]
    dist = [r.distinguished_count for r in report.rows]
    assert counts == [1, 0, 0, 1]
    assert dist == counts
    assert report.stats["unresolved"] == 0
    assert report.table.splitlines()[0].split() == \
        ["crossings", "knots", "distinguished"]


def test_growing_bound_keeps_settled_rows():
    per_n = {}
    for big in (7, 8):
        report = run(RunConfig(max_crossings=big, max_colors=3,
                               affine_mods=(3,), sym_max=3))
        per_n[big] = [r.class_count for r in report.rows]
    assert per_n[7] == [1, 0, 0, 1, 1]
    assert per_n[8] == [1, 0, 0, 1, 1, 2]


def test_checkpoint_layout(small_run):
    base, _ = small_run
    assert checkpoint_files(base) == [
        "classes.tsv", "codes.txt", "config.json", "invariants.tsv",
        "status.json", "table.txt"]
    status = json.loads((base / "status.json").read_text())
    assert status["stage"] == "table"
    assert set(status["files"]) == set(checkpoint_files(base)) - \
        {"status.json"}


def test_rerun_is_byte_identical(small_run, tmp_path):
    base, _ = small_run
    other = tmp_path / "again"
    run(small_config(checkpoint_path=str(other)))
    assert read_all(base) == read_all(other)


def test_jobs_do_not_change_output(small_run, tmp_path):
    base, _ = small_run
    other = tmp_path / "par"
    run(small_config(checkpoint_path=str(other), jobs=2))
    assert read_all(base) == read_all(other)


@pytest.mark.parametrize("stage", ["codes", "classes", "invariants", "table"])
def test_resume_from_each_stage(small_run, tmp_path, stage):
    base, report = small_run
    part = tmp_path / f"part_{stage}"
    shutil.copytree(base, part)
    status = json.loads((part / "status.json").read_text())
    status["stage"] = stage
    (part / "status.json").write_text(
        json.dumps(status, sort_keys=True) + "\n")
    state = resume(part)
    assert state.covers(stage)
    again = run(small_config(checkpoint_path=str(part)), resume_from=state)
    assert again.table == report.table
    assert again.rows == report.rows
    assert read_all(part) == read_all(base)


def test_resume_empty_checkpoint(tmp_path):
    missing = tmp_path / "nothing"
    with pytest.raises(CorruptCheckpoint):
        resume(missing)


def test_config_mismatch(small_run):
    base, _ = small_run
    state = resume(base)
    with pytest.raises(ConfigMismatch):
        run(RunConfig(max_crossings=6, max_colors=4, affine_mods=(3,),
                      sym_max=3), resume_from=state)


def test_corrupt_checkpoint_detected(small_run, tmp_path):
    base, _ = small_run
    bad = tmp_path / "bad"
    shutil.copytree(base, bad)
    with open(bad / "classes.tsv", "a") as fh:
        fh.write("3;(1,4)(3,6)(5,2)\t999\t999\n")
    with pytest.raises(CorruptCheckpoint):
        resume(bad)


def test_census_skips_kinked_only_classes():
    # a class whose minimal members all carry a split point never shows up
    # in the census rows, but its records stay in the store
    store = classify(iter([PairCode([]), TREFOIL]), maxN=6)
    rows = census_classes(store)
    assert [(mn, str(rep)) for _, rep, mn in rows] == \
        [(0, "0;"), (3, "3;(1,4)(3,6)(5,2)")]


def test_distinguish_reports_collisions():
    store = classify(iter([PairCode([]), TREFOIL]), maxN=6)
    census = census_classes(store)
    tied = InvariantVector((("t0:n3", 3),), (1,))
    vectors = {perm: tied for perm, _, _ in census}
    rows = distinguish(store, vectors)
    assert rows[0] == TableRow(0, 1, 0)
    assert rows[3].class_count == 1
    assert rows[3].distinguished_count == 0
    assert len(rows[3].unresolved_pairs) == 1
    text = emit_table(rows)
    a, b = rows[3].unresolved_pairs[0]
    assert "unresolved pairs:" in text
    assert f"  {a} ~ {b}  (3 crossings)" in text


def test_distinguish_separates_unknot_and_trefoil():
    store = classify(iter([PairCode([]), TREFOIL]), maxN=6)
    census = census_classes(store)
    vectors = {}
    for perm, _, mn in census:
        count = 9 if mn == 3 else 3
        vectors[perm] = InvariantVector((("t0:n3", count),), (1,))
    rows = distinguish(store, vectors)
    assert all(r.distinguished_count == r.class_count for r in rows)
    assert "unresolved" not in emit_table(rows)


def test_build_suite_deduplicates():
    suite = build_suite(5, (3, 5, 7), 5)
    assert len(suite) == 13
    assert sorted(M.size for M in suite) == \
        [1, 3, 4, 5, 5, 6, 6, 7, 10, 15, 20, 20, 30]
    assert all(validate(M) and irreducible(M) for M in suite)
    for i, a in enumerate(suite):
        for b in suite[i + 1:]:
            if a.size == b.size:
                assert not same_test(a, b)
    # tricolor arrives via enumeration; affine(3,1) must not repeat it
    assert sum(1 for M in suite if M.size == 3) == 1


def test_invariants_round_trip(small_run):
    base, _ = small_run
    state = resume(base)
    rows = state.invariants
    assert rows
    text = serialize_invariants(rows)
    assert parse_invariants(text) == rows


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(max_crossings=-1)
    with pytest.raises(ValueError):
        RunConfig(max_crossings=3, jobs=0)
    with pytest.raises(ValueError):
        RunConfig(max_crossings=3, affine_mods=(0,))
    assert RunConfig(max_crossings=10).enumerate_limit == 7
    assert RunConfig(max_crossings=2).enumerate_limit == 0
