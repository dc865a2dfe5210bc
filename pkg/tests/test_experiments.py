import json
import math

import pytest

from cubeperc.errors import ConfigError
from cubeperc.experiments import (
    ExperimentConfig,
    parse_config_file,
    read_report_csv,
    run_experiment,
    run_gw,
    run_hitprob,
    run_sprinkling,
    run_subcritical,
    run_supercritical,
    write_report,
)
from cubeperc.theory import gw_extinction, solve_y


def _small_super(trials=4, seed=0):
    return ExperimentConfig(kind="supercritical", d=8, c=2.0, trials=trials, seed=seed)


def test_config_validation_collects_problems():
    with pytest.raises(ConfigError) as err:
        ExperimentConfig(kind="nope", d=1, trials=0)
    message = str(err.value)
    assert "kind" in message and "d" in message and "trials" in message


def test_config_requires_matching_parameter():
    with pytest.raises(ConfigError):
        ExperimentConfig(kind="supercritical", d=8)  # c missing
    with pytest.raises(ConfigError):
        ExperimentConfig(kind="supercritical", d=8, c=0.9)  # not supercritical
    with pytest.raises(ConfigError):
        ExperimentConfig(kind="subcritical", d=8, eps=1.2)
    with pytest.raises(ConfigError):
        ExperimentConfig(kind="subcritical", d=8, eps=0.3, c=2.0)  # both set


def test_config_defaults():
    cfg = _small_super()
    assert cfg.resolved_w_threshold() == 64
    lo, hi = cfg.resolved_gap_window()
    assert lo == math.ceil(8 / (1.0 - math.log(2.0)))
    assert hi == lo  # 0.01 n < bound at tiny d: window clamps to a point
    big = ExperimentConfig(kind="supercritical", d=18, c=2.0)
    assert big.resolved_gap_window() == (59, math.floor(0.01 * 2**18))


def test_from_mapping_rejects_unknown_keys():
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_mapping({"kind": "gw", "d": 3, "c": 2, "bogus": 1})
    assert "bogus" in str(err.value)


def test_from_mapping_requires_kind():
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_mapping({"d": 8})
    assert "kind" in str(err.value)


def test_parse_config_file(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("# comment\nkind = supercritical\nd = 8\nc = 2.0\ntrials = 3  # inline\n\n")
    mapping = parse_config_file(path)
    cfg = ExperimentConfig.from_mapping(mapping)
    assert cfg.kind == "supercritical"
    assert cfg.d == 8 and cfg.c == 2.0 and cfg.trials == 3


def test_parse_config_file_rejects_garbage(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("kind supercritical\n")
    with pytest.raises(ConfigError):
        parse_config_file(path)


def test_report_shape_and_determinism():
    a = run_supercritical(_small_super())
    b = run_supercritical(_small_super())
    assert len(a.rows) == 4
    assert a.to_json_bytes() == b.to_json_bytes()
    doc = json.loads(a.to_json_bytes())
    assert set(doc) == {"config", "theory", "rows", "aggregates"}
    assert doc["theory"]["y"] == pytest.approx(solve_y(2.0), abs=1e-9)


def test_rows_depend_only_on_seed_and_trial():
    short = run_supercritical(_small_super(trials=3, seed=7)).rows
    longer = run_supercritical(_small_super(trials=5, seed=7)).rows
    assert short == longer[:3]
    other_seed = run_supercritical(_small_super(trials=3, seed=8)).rows
    assert short != other_seed


def test_workers_do_not_change_output():
    sequential = run_supercritical(_small_super(trials=6))
    parallel = run_supercritical(_small_super(trials=6), workers=2)
    assert sequential.to_json_bytes() == parallel.to_json_bytes()


def test_aggregates_recomputable_from_rows():
    report = run_supercritical(_small_super(trials=5))
    l1s = [r["l1"] for r in report.rows]
    assert report.aggregates["l1_mean"] == float(f"{sum(l1s) / len(l1s):.12g}")
    assert report.aggregates["l1_min"] == min(l1s)
    assert report.aggregates["l1_max"] == max(l1s)


def test_on_trial_counter():
    seen = []
    run_supercritical(_small_super(trials=3), on_trial=lambda done, total: seen.append((done, total)))
    assert seen == [(1, 3), (2, 3), (3, 3)]


def test_subcritical_runner():
    cfg = ExperimentConfig(kind="subcritical", d=8, eps=0.4, trials=5, seed=0)
    report = run_subcritical(cfg)
    assert report.theory["p"] == pytest.approx(0.6 / 7)
    assert all(r["l1"] >= 1 for r in report.rows)
    assert report.aggregates["exceed_count"] == sum(r["exceeds_bound"] for r in report.rows)


def test_supercritical_deviation_shrinks_with_dimension():
    # the asymptotic law tightens: |mean l1/n - y| at d=18 stays within
    # the d=12 deviation plus slack
    y = solve_y(2.0)
    deviations = {}
    for d in (12, 18):
        cfg = ExperimentConfig(kind="supercritical", d=d, c=2.0, trials=20, seed=0)
        report = run_supercritical(cfg, workers=2)
        mean_fraction = sum(r["l1"] for r in report.rows) / (20 * 2**d)
        deviations[d] = abs(mean_fraction - y)
    assert deviations[18] <= deviations[12] + 0.02


def test_sprinkling_negligible_second_round_still_merges():
    # with p2 ~ 0 the union is G1 itself; premerged trials must report merge_ok
    cfg = ExperimentConfig(kind="sprinkling", d=10, c=2.0, trials=8, seed=0, p2_exponent=30.0)
    report = run_sprinkling(cfg)
    for row in report.rows:
        if row["g1_premerged"]:
            assert row["merge_ok"] == 1


def test_sprinkling_runner_coupling():
    cfg = ExperimentConfig(kind="sprinkling", d=10, c=2.0, trials=10, seed=0)
    report = run_sprinkling(cfg)
    p = 2.0 / 10
    m = 10 * 2**9
    rate = report.aggregates["union_open_rate_pooled"]
    se = math.sqrt(p * (1 - p) / (10 * m))
    assert abs(rate - p) <= 4 * se
    assert report.theory["p2"] == pytest.approx(10.0**-5)
    for row in report.rows:
        assert row["merge_ok"] in (0, 1)
        assert row["w1_size"] >= 0


def test_gw_runner_against_exact():
    cfg = ExperimentConfig(kind="gw", d=3, c=2.0, trials=4000, seed=0, gw_progeny_cap=5000)
    report = run_gw(cfg)
    exact = gw_extinction(3, 2 / 3).survival
    rate = report.aggregates["survival_rate"]
    se = math.sqrt(exact * (1 - exact) / 4000)
    assert abs(rate - exact) <= 3 * se


def test_gw_runner_p_zero():
    cfg = ExperimentConfig(kind="gw", d=3, c=0.0, trials=50, seed=0)
    report = run_gw(cfg)
    assert report.aggregates["survived_count"] == 0
    assert report.theory["exact_survival"] == 0.0


def test_gw_large_d_matches_y():
    cfg = ExperimentConfig(kind="gw", d=1000, c=2.0, trials=10_000, seed=0)
    report = run_gw(cfg, workers=2)
    y = solve_y(2.0)
    se = math.sqrt(y * (1 - y) / 10_000)
    assert abs(report.aggregates["survival_rate"] - y) <= 3 * se + 1e-3


def test_hitprob_runner():
    cfg = ExperimentConfig(kind="hitprob", d=10, c=2.0, trials=400, seed=0)
    report = run_hitprob(cfg)
    assert report.theory["threshold"] == 100
    rate = report.aggregates["hit_rate"]
    assert 0.5 < rate < 1.0  # supercritical: a solid fraction reach the cap


def test_run_experiment_dispatch():
    report = run_experiment(_small_super(trials=2))
    assert report.config["kind"] == "supercritical"


def test_csv_round_trip(tmp_path):
    report = run_supercritical(_small_super(trials=5, seed=3))
    path = tmp_path / "report.csv"
    write_report(report, path, "csv")
    meta, rows = read_report_csv(path)
    assert rows == report.rows
    assert meta["kind"] == "supercritical"
    header = path.read_text().splitlines()
    assert header[0].startswith("#")
    assert "trial,l1,l2,n_components,w_density,gap_count,max_dist_w" in header


def test_json_report_write(tmp_path):
    report = run_supercritical(_small_super(trials=3))
    path = tmp_path / "report.json"
    write_report(report, path, "json")
    assert path.read_bytes() == report.to_json_bytes()


def test_write_report_bad_format(tmp_path):
    report = run_supercritical(_small_super(trials=2))
    with pytest.raises(ValueError):
        write_report(report, tmp_path / "x", "yaml")


def test_write_report_path_context():
    report = run_supercritical(_small_super(trials=2))
    with pytest.raises(OSError) as err:
        write_report(report, "/nonexistent-dir/report.json", "json")
    assert "/nonexistent-dir/report.json" in str(err.value)
