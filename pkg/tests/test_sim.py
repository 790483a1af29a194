import json

import numpy as np
import pytest

from capolar.polar import CodeDims
from capolar.sim import (
    CALIBRATION_EDGES,
    SCHEMA_VERSION,
    SimConfig,
    run_bler_sweep,
    run_calibration,
    run_llr_profile,
    run_uer_sweep,
    wilson_interval,
)

DIMS = CodeDims(16, 9, 3)  # CRC-6, small enough for thousands of trials


def small_cfg(tmp_path, **kw):
    base = dict(dims=DIMS, snr_grid_db=(3.0,), list_size=2,
                trials=2048, min_errors=10**6, master_seed=5,
                outer_max_queries=256, batch_size=256, round_trials=512,
                out_dir=str(tmp_path))
    base.update(kw)
    return SimConfig(**base)


def test_wilson_interval_values():
    assert wilson_interval(0, 0) == (0.0, 1.0)
    lo, hi = wilson_interval(5, 100)
    assert lo == pytest.approx(0.02154367915436797, rel=1e-12)
    assert hi == pytest.approx(0.11175046923191914, rel=1e-12)
    lo, hi = wilson_interval(0, 50)
    assert lo == 0.0
    assert hi == pytest.approx(0.07134759913335871, rel=1e-12)
    full = wilson_interval(50, 50)
    assert full[1] == 1.0 and full[0] > 0.9


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(DIMS, ())
    with pytest.raises(ValueError):
        SimConfig(DIMS, (3.0,), trials=0)
    with pytest.raises(ValueError):
        SimConfig(DIMS, (3.0,), decoder="scl")
    with pytest.raises(ValueError):
        SimConfig(DIMS, (3.0,), outer_decoder="ml")
    with pytest.raises(ValueError):
        SimConfig(DIMS, (3.0,), min_errors=0)
    with pytest.raises(ValueError):
        SimConfig(DIMS, (3.0,), batch_size=64, round_trials=32)
    with pytest.raises(ValueError):
        SimConfig(DIMS, (3.0,), workers=0)
    with pytest.raises(ValueError):
        SimConfig(DIMS, (3.0,), epsilon_grid=(1.0,))
    with pytest.raises(ValueError):
        SimConfig(DIMS, (3.0,), retry_on_threshold_fail=True)


def test_missing_out_dir_fails_before_decoding(tmp_path):
    cfg = small_cfg(tmp_path / "nope", trials=10**9)
    with pytest.raises(FileNotFoundError):
        run_bler_sweep(cfg)


def test_noiseless_point_is_error_free(tmp_path):
    cfg = small_cfg(tmp_path, snr_grid_db=(25.0,), trials=512)
    (rec,) = run_bler_sweep(cfg)
    assert rec.trials == 512
    assert rec.block_errors == 0 and rec.bler == 0.0
    assert rec.inner_crc_failures == 0 and rec.outer_rescues == 0
    assert rec.mean_outer_queries == 0.0


def test_stop_rule_rounds_off_early(tmp_path):
    cfg = small_cfg(tmp_path, snr_grid_db=(0.0,), trials=100_000, min_errors=20)
    (rec,) = run_bler_sweep(cfg)
    assert rec.block_errors >= 20
    assert rec.trials < 100_000
    assert rec.trials % cfg.round_trials == 0


def test_worker_count_never_changes_the_csv(tmp_path):
    outs = []
    for w, stem in ((1, "a"), (2, "b")):
        cfg = small_cfg(tmp_path, workers=w, out_stem=stem)
        run_bler_sweep(cfg)
        outs.append((tmp_path / f"{stem}.csv").read_bytes())
    assert outs[0] == outs[1]


def test_rerun_is_byte_identical(tmp_path):
    cfg = small_cfg(tmp_path, out_stem="x")
    run_bler_sweep(cfg)
    first = (tmp_path / "x.csv").read_bytes()
    run_bler_sweep(cfg)
    assert (tmp_path / "x.csv").read_bytes() == first


def test_paired_decoders_share_the_error_budget(tmp_path):
    # same master seed means identical channels, so the complete decoder's
    # errors are the plain decoder's errors minus the outer rescues
    ca = run_bler_sweep(small_cfg(tmp_path, decoder="ca_scl", out_stem="ca"))
    cca = run_bler_sweep(small_cfg(tmp_path, decoder="cca_scl", out_stem="cca"))
    for a, b in zip(ca, cca):
        assert a.inner_crc_failures == b.inner_crc_failures
        assert b.block_errors == a.block_errors - b.outer_rescues
        assert a.undetected_errors + a.erasures == a.block_errors
        assert b.erasures == 0 and b.undetected_errors == b.block_errors


def test_bler_csv_shape(tmp_path):
    cfg = small_cfg(tmp_path, snr_grid_db=(3.0, 25.0), out_stem="shape",
                    emit_plot=True)
    run_bler_sweep(cfg)
    raw = (tmp_path / "shape.csv").read_bytes()
    lines = raw.decode().split("\r\n")
    assert raw.count(b"\r\n") == 3 and lines[-1] == ""
    assert lines[0] == ("schema_version,snr_db,trials,block_errors,"
                        "undetected_errors,erasures,inner_crc_failures,"
                        "outer_rescues,mean_outer_queries,bler,bler_lo,bler_hi")
    assert len(lines) == 4  # header + one row per SNR + trailing terminator
    assert lines[1].startswith(f"{SCHEMA_VERSION},3.0,")

    blob = json.loads((tmp_path / "shape.json").read_text())
    assert blob["schema_version"] == SCHEMA_VERSION
    assert blob["kind"] == "bler"
    assert blob["config"]["dims"] == [16, 9, 3]
    assert blob["config"]["master_seed"] == 5
    assert len(blob["wall_time"]) == 2
    assert b"wall" not in raw

    dat = (tmp_path / "shape.dat").read_text().splitlines()
    assert dat[0] == "# snr_db bler bler_lo bler_hi"
    assert len(dat) == 3 and len(dat[1].split()) == 4


def test_calibration_bins(tmp_path):
    assert len(CALIBRATION_EDGES) == 11
    assert CALIBRATION_EDGES[0] == pytest.approx(1e-5)
    assert CALIBRATION_EDGES[-1] == 1.0
    cfg = small_cfg(tmp_path, snr_grid_db=(25.0,), trials=512, out_stem="cal")
    result = run_calibration(cfg)
    assert set(result) == {"so", "so_forney"}
    for key in result:
        bins = result[key]
        assert len(bins) == len(CALIBRATION_EDGES)
        assert bins[0].lower == 0.0 and bins[-1].upper == 1.0
        assert all(b.upper == pytest.approx(e)
                   for b, e in zip(bins, CALIBRATION_EDGES))
        assert sum(b.count for b in bins) == 512
        # noiseless: every prediction collapses into the underflow bin
        assert bins[0].count == 512 and bins[0].errors == 0
    rows = (tmp_path / "cal.csv").read_bytes().decode().split("\r\n")
    assert len(rows) == 2 + 2 * len(CALIBRATION_EDGES)


def test_calibration_rejects_bad_edges(tmp_path):
    cfg = small_cfg(tmp_path, trials=8)
    with pytest.raises(ValueError):
        run_calibration(cfg, edges=(0.5, 0.1, 1.0))
    with pytest.raises(ValueError):
        run_calibration(cfg, edges=(0.0, 0.5, 1.0))
    with pytest.raises(ValueError):
        run_calibration(cfg, edges=(0.5, 1.5))


def test_uer_threshold_algebra(tmp_path):
    eps_grid = (0.0, 1e-3, 1e-1, 0.999999)
    cfg = small_cfg(tmp_path, epsilon_grid=eps_grid, trials=1024, out_stem="u")
    recs = run_uer_sweep(cfg)
    assert len(recs) == len(eps_grid)
    assert [r.epsilon for r in recs] == list(eps_grid)
    for r in recs:
        assert r.trials == 1024  # no early stop on the threshold sweep
        assert r.undetected_errors + r.erasures >= r.block_errors - r.outer_rescues
    zero, *_, loosest = recs
    # epsilon 0 accepts nothing; a near-1 threshold accepts nearly everything
    assert zero.undetected_errors == 0 and zero.erasures == 1024
    assert loosest.erasures == 0
    # one decode feeds every threshold, so the counts are monotone in epsilon
    for a, b in zip(recs, recs[1:]):
        assert a.undetected_errors <= b.undetected_errors
        assert a.erasures >= b.erasures
        assert a.block_errors == b.block_errors
    rows = (tmp_path / "u.csv").read_bytes().decode().split("\r\n")
    assert rows[0].startswith("schema_version,snr_db,epsilon,")
    assert len(rows) == 2 + len(eps_grid)


def test_uer_needs_grid_and_complete_decoder(tmp_path):
    with pytest.raises(ValueError):
        run_uer_sweep(small_cfg(tmp_path))
    with pytest.raises(ValueError):
        run_uer_sweep(small_cfg(tmp_path, decoder="ca_scl",
                                epsilon_grid=(1e-2,)))


def test_uer_retry_only_converts_erasures(tmp_path):
    eps = (1e-2, 1e-1)
    plain = run_uer_sweep(small_cfg(tmp_path, epsilon_grid=eps, trials=512,
                                    out_stem="p"))
    retry = run_uer_sweep(small_cfg(tmp_path, epsilon_grid=eps, trials=512,
                                    retry_on_threshold_fail=True,
                                    out_stem="r"))
    for a, b in zip(plain, retry):
        assert b.erasures <= a.erasures
        assert b.undetected_errors >= a.undetected_errors


def test_llr_profile_orders_reliability(tmp_path):
    cfg = SimConfig(CodeDims(128, 114, 90), (6.0,), trials=400,
                    list_size=1, master_seed=3, out_dir=str(tmp_path),
                    out_stem="prof")
    profile = run_llr_profile(cfg)
    inner, outer = profile["inner"], profile["outer"]
    assert inner.shape == (128,) and outer.shape == (114,)
    assert (np.diff(inner) >= 0).all() and (np.diff(outer) >= 0).all()
    # contraction: the sorted outer curve sits below the inner curve
    assert (outer <= inner[:114] + 1e-9).all()
    assert outer.mean() < inner.mean()
    rows = (tmp_path / "prof.csv").read_bytes().decode().split("\r\n")
    assert len(rows) == 2 + 128 + 114


def test_default_stem_names_the_experiment(tmp_path):
    cfg = small_cfg(tmp_path, trials=8, min_errors=1)
    run_bler_sweep(cfg)
    expect = "bler_n16k9m3_nonsys_L2_cca_scl_seed5"
    assert (tmp_path / f"{expect}.csv").exists()
    assert (tmp_path / f"{expect}.json").exists()
