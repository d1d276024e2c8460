import math
import os

import numpy as np
import pytest

import fsibench


def test_config_defaults_and_theta():
    c = fsibench.Config.from_string("[time]\ntheta = shifted_cn\ndt = 0.005\n")
    assert c.benchmark == "fsi2"
    assert math.isclose(c.theta_value, 0.505)
    again = fsibench.Config.from_string(c.to_string())
    assert again.to_string() == c.to_string()


def test_config_error_is_value_error():
    with pytest.raises(ValueError, match="dt"):
        fsibench.Config.from_string("[time]\ndt = -1\n")


def test_zero_inflow_steps_stay_at_rest():
    c = fsibench.Config()
    c.mean_velocity = 0.0
    sim = fsibench.Simulation(c)
    row, stats = sim.step(0.005)
    assert stats["iterations"] == 0
    assert all(v == 0.0 for v in row[1:])
    assert not np.any(sim.state())


def test_run_writes_csv(tmp_path):
    c = fsibench.Config()
    c.mean_velocity = 0.0
    c.end_time = 0.01
    c.output_dir = str(tmp_path)
    os.environ.pop("FSI_OUTPUT_DIR", None)
    res = fsibench.run(c)
    assert res["exit_code"] == 0
    ts = fsibench.read_time_series(res["csv_path"])
    assert ts["columns"][:3] == ["t", "ux", "uy"]
    assert len(ts["rows"]) == 2


def test_gmres_diagonal():
    x, its = fsibench.gmres(np.diag([1.0, 2.0, 4.0]), np.ones(3), rel_reduction=1e12)
    assert its <= 3
    np.testing.assert_allclose(x, [1.0, 0.5, 0.25], rtol=1e-10)


def test_exact_ldu_and_partition():
    assert fsibench.exact_ldu_residual([5, 8, 11], 3) < 1e-10
    split = fsibench.imbalance("fsi2", 1, 2, "split")
    shared = fsibench.imbalance("fsi2", 1, 2, "shared")
    assert split["ratio"] >= shared["ratio"] >= 1.0


def test_verify_subset():
    res = fsibench.verify([1, 10])
    assert [r["id"] for r in res] == [1, 10]
    assert all(r["passed"] for r in res)
    tampered = fsibench.verify([2], tamper_stvk=True)
    assert not tampered[0]["passed"]
