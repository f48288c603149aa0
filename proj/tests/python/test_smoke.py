import json
import math
import os
import pathlib
import subprocess

import pytest

import gravchan as gc

EXAMPLES = pathlib.Path(__file__).resolve().parents[2] / "docs" / "examples"


def test_version():
    assert gc.__version__ == "0.1.0"


def test_bell_fringe_through_channel():
    params = gc.InterferometerParams()
    for dphi, expected in [(0.0, 0.5), (math.pi / 2, 0.25), (math.pi, 0.0)]:
        out = gc.run_transfer(gc.BellChannel(), params, delta_phi=dphi)
        assert out.p_joint_g == pytest.approx(expected, abs=1e-12)
        assert out.p_cond_g == pytest.approx(0.5 if dphi < 3 else 0.0, abs=1e-12)


def test_direct_fringe():
    params = gc.InterferometerParams()
    assert gc.direct_measurement(params, 2 * math.pi / 3) == pytest.approx(0.25, abs=1e-12)


def test_total_phase():
    timing = gc.PulseTiming(T=0.1, k=1e7)
    assert gc.total_phase(timing, gc.GravityModel(9.8)) == pytest.approx(9.8e5, rel=1e-15)


def test_composite_block_is_unitary():
    a1, a2, b1, b2 = gc.composite_coefficients(gc.LaserPhases(0.3, -1.2, 2.0), 0.7)
    assert abs(a1) ** 2 + abs(a2) ** 2 == pytest.approx(1.0, abs=1e-12)
    assert abs(a1 * b1.conjugate() + a2 * b2.conjugate()) < 1e-12


def test_bell_preparation():
    assert gc.bell_preparation_fidelity() == pytest.approx(1.0, abs=1e-12)
    kets = dict(gc.prepare_bell())
    assert set(kets) == {"|g,e;0>", "|e,g;0>"}


def test_cat_remote_equivalence():
    grid = [i * 2 * math.pi / 16 for i in range(16)]
    params = gc.InterferometerParams()
    first = gc.fringe_scan(gc.CatChannel(4), params, grid, 0)
    other = gc.fringe_scan(gc.CatChannel(4), params, grid, 2)
    for x, y in zip(first, other):
        assert x.p_joint_g == pytest.approx(y.p_joint_g, abs=1e-12)


def test_invalid_channel_raises():
    with pytest.raises(gc.GravchanError):
        gc.run_transfer(gc.GeneralChannel(0.6, 0.9), gc.InterferometerParams())
    with pytest.raises(ValueError):
        gc.estimate_phase(0.9, 0.5)


def test_noise_report():
    p = gc.NoiseParams()
    p.n_runs = 2000
    r = gc.snr_report(p)
    assert r.shot_ratio == pytest.approx(math.sqrt(2), abs=1e-15)
    assert r.phase_ratio == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert r.mc_phase_ratio.value == pytest.approx(1 / math.sqrt(2), rel=0.02)


def test_optimizers_agree():
    assert gc.optimize_entropy(1e-4).a_star == pytest.approx(1 / math.sqrt(2), abs=1e-4)
    assert gc.png_ratio_extremum().a_star == 1 / math.sqrt(2)


@pytest.fixture
def exe():
    path = os.environ.get("GRAVCHAN_EXE")
    if not path:
        pytest.skip("GRAVCHAN_EXE not set")
    return path


def test_cli_exit_codes(exe, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"channel": {"type": "general", "a": 0.6, "b": 0.9}}))
    assert subprocess.run([exe, "prepare", "--config", str(bad)], capture_output=True).returncode == 2
    missing = tmp_path / "missing.json"
    assert subprocess.run([exe, "prepare", "--config", str(missing)], capture_output=True).returncode == 3


def test_cli_fringe_example(exe, tmp_path):
    out = tmp_path / "fringe.csv"
    res = subprocess.run(
        [exe, "fringe", "--config", str(EXAMPLES / "general.json"), "--out", str(out)],
        capture_output=True,
        text=True,
        check=True,
    )
    summary = json.loads(res.stdout)
    assert summary["max_abs_error"] < 1e-12
    rows = out.read_text().splitlines()[1:]
    assert [float(r.split(",")[2]) for r in rows] == pytest.approx([0.36, 0.18, 0.0], abs=1e-12)


def test_cli_thread_cap_does_not_change_output(exe, tmp_path):
    outputs = []
    for threads in ("1", "3"):
        out = tmp_path / f"noise_{threads}.csv"
        env = dict(os.environ, GRAVCHAN_THREADS=threads)
        subprocess.run(
            [exe, "noise", "--config", str(EXAMPLES / "noise.json"), "--out", str(out)],
            capture_output=True,
            env=env,
            check=True,
        )
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
