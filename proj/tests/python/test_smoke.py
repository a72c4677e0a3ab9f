import math

import numpy as np
import pytest

import frozenperc as fp


def test_lattice_helpers():
    assert fp.embed(0, 2) == pytest.approx((1.0, math.sqrt(3)))
    assert sorted(fp.neighbors(0, 0)) == sorted([(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)])
    assert fp.tau(7, 3, -2) == fp.tau(7, 3, -2)
    assert 0.0 <= fp.tau(7, 3, -2) < 1.0
    assert fp.replica_seed(1, 0) != fp.replica_seed(1, 1)


def test_simulate_matches_reference_and_is_deterministic():
    a = fp.simulate("diam", "modified", N=6, domain=10, seed=3)
    b = fp.reference_simulate("diam", "modified", N=6, domain=10, seed=3)
    assert a.serialize() == b.serialize()
    assert a.serialize() == fp.simulate("diam", "modified", N=6, domain=10, seed=3).serialize()
    assert a.coords.shape == (a.size, 2)
    assert set(np.unique(a.state)) <= {fp.WHITE, fp.BLACK, fp.FROZEN}
    frozen = a.state == fp.FROZEN
    assert np.all(np.isnan(a.freeze_time[~frozen]))
    assert np.all((a.freeze_time[frozen] >= 0) & (a.freeze_time[frozen] <= 1))


def test_unreachable_threshold_leaves_everything_black():
    f = fp.simulate("vol", "original", N=float("inf"), domain=5, seed=1)
    assert np.all(f.state == fp.BLACK)
    assert not f.origin_frozen
    assert f.origin_freeze_time is None


def test_save_load_and_png(tmp_path):
    f = fp.simulate("diam", "modified", N=8, seed=2)
    f.save(tmp_path / "run.bin")
    assert fp.load_final_state(tmp_path / "run.bin").serialize() == f.serialize()
    png = f.png()
    assert png.startswith(b"\x89PNG")
    f.render(str(tmp_path / "run.png"))
    assert (tmp_path / "run.png").read_bytes() == png


def test_estimates_return_records():
    e = fp.estimate_crossing(8, 4, p=1.0, replicas=20)
    assert e["value"] == 1.0 and e["replicas"] == 20
    assert fp.estimate_L(0.3, replicas=200, seed=2)["value"] == fp.estimate_L(0.7, replicas=200, seed=2)["value"]
    assert fp.estimate_pi4(4, replicas=200)["estimand"] == "pi4"
    assert fp.p_lambda(100.0, 1.0, 0.01)[0] == pytest.approx(0.51)
    lo, hi = fp.wilson_interval(50, 100)
    assert lo < 0.5 < hi


def test_experiment_dicts(tmp_path):
    r = fp.origin_freeze(5, replicas=6, seed=4, out_dir=tmp_path)
    assert r["name"] == "origin_freeze"
    assert len(r["rows"]) == 24
    assert set(r["summary"]["per_variant"]) == {
        "diameter/original", "diameter/modified", "volume/original", "volume/modified"}
    assert (tmp_path / "origin_freeze.csv").exists()
    m = fp.macro_cluster(1e9, epsilons=[0.0], replicas=3, domain=5)
    assert m["summary"]["per_epsilon"][0]["p_hat"] == 1.0


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        fp.simulate("area", "original", N=5)
    with pytest.raises(ValueError):
        fp.estimate_crossing(8, 4, p=1.5, replicas=10)
