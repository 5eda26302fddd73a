import json
import os

import pytest

from lrperc import load_config
from lrperc.cli import main as cli_main
from lrperc.experiments import ConfigError, parse_config, run
from lrperc.plots import PlotError, plot


def write_config(tmp_path, text, name="exp.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


BASIC_PBAD = """
# bad-block probability estimate
kind = p-bad
beta = 1.5
lambda = 3
sizes = 8
theta = 0.8
samples = 200
seed = 11
"""


def test_parse_basic(tmp_path):
    cfg = parse_config(write_config(tmp_path, BASIC_PBAD))
    assert cfg.kind == "p-bad"
    assert cfg.betas == [1.5] and cfg.sizes == [8]
    assert cfg.extras["theta"] == 0.8


def test_parse_rejects_unknown_key(tmp_path):
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(write_config(tmp_path, "kind = p-bad\nwat = 1\n"))


def test_parse_rejects_bad_kind(tmp_path):
    with pytest.raises(ConfigError, match="unknown experiment kind"):
        parse_config(write_config(tmp_path, "kind = frobnicate\n"))


def test_parse_rejects_kind_mismatch(tmp_path):
    with pytest.raises(ConfigError, match="contradicts"):
        parse_config(write_config(tmp_path, BASIC_PBAD), kind="pbar")


def test_parse_rejects_invalid_params(tmp_path):
    bad = "kind = p-bad\nbeta = -1\nsizes = 8\ntheta = 0.8\n"
    with pytest.raises(ConfigError, match="beta must be positive"):
        parse_config(write_config(tmp_path, bad))


def test_parse_requires_sizes(tmp_path):
    with pytest.raises(ConfigError, match="sizes"):
        parse_config(write_config(tmp_path, "kind = p-bad\ntheta = 0.8\n"))


def test_parse_kind_q_compatibility(tmp_path):
    with pytest.raises(ConfigError, match="q = 1"):
        parse_config(write_config(tmp_path, "kind = theta-scan\nq = 2\nsizes = 16\n"))
    with pytest.raises(ConfigError, match="integer q >= 2"):
        parse_config(write_config(tmp_path, "kind = magnetization\nq = 2.5\nsizes = 8\n"))
    with pytest.raises(ConfigError, match="integer q >= 2"):
        parse_config(write_config(tmp_path, "kind = magnetization\nq = 1\nsizes = 8\n"))
    # fk-theta accepts the q = 1 route
    cfg = parse_config(write_config(tmp_path, "kind = fk-theta\nq = 1\nsizes = 8\n"))
    assert cfg.qs == [1.0]


def test_run_pbad_writes_csv_and_manifest(tmp_path):
    cfg = parse_config(write_config(tmp_path, BASIC_PBAD))
    paths = run(cfg, out_dir=tmp_path / "out")
    csv_path, man_path = paths
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "# schema=p-bad/v1"
    assert lines[1].startswith("K,theta,beta,lambda,q,n,p_hat")
    assert len(lines) == 3
    man = json.loads(man_path.read_text())
    assert man["kind"] == "p-bad" and "version" in man and "created" in man


def test_run_is_deterministic(tmp_path):
    cfg = parse_config(write_config(tmp_path, BASIC_PBAD))
    a = run(cfg, out_dir=tmp_path / "a")[0].read_bytes()
    b = run(cfg, out_dir=tmp_path / "b")[0].read_bytes()
    assert a == b


def test_run_threads_match_serial(tmp_path):
    text = BASIC_PBAD.replace("beta = 1.5", "beta = 1.0,1.5").replace("sizes = 8", "sizes = 4,8")
    cfg = parse_config(write_config(tmp_path, text))
    a = run(cfg, out_dir=tmp_path / "s")[0].read_bytes()
    b = run(cfg, threads=4, out_dir=tmp_path / "t")[0].read_bytes()
    assert a == b


def test_env_seed_override(tmp_path):
    cfg = parse_config(write_config(tmp_path, BASIC_PBAD))
    a = run(cfg, out_dir=tmp_path / "a")[0].read_bytes()
    os.environ["LRPERC_SEED"] = "999"
    try:
        b_paths = run(cfg, out_dir=tmp_path / "b")
        b = b_paths[0].read_bytes()
        man = json.loads(b_paths[1].read_text())
    finally:
        del os.environ["LRPERC_SEED"]
    assert a != b
    assert man["effective_seed"] == 999


def test_sample_kind_round_trip(tmp_path):
    text = "kind = sample\nbeta = 1\nlambda = 1\nsizes = 32\nseed = 5\n"
    cfg = parse_config(write_config(tmp_path, text))
    csv_path, _ = run(cfg, out_dir=tmp_path / "out")
    lines = csv_path.read_text().splitlines()
    fname = lines[2].split(",")[6]
    back = load_config(tmp_path / "out" / fname)
    assert back.box.lo == 0 and back.box.hi == 32


def test_theta_scan_run_and_plot(tmp_path):
    text = (
        "kind = theta-scan\nbeta = 0.5,2\nlambda = 2\nsizes = 16,32\n"
        "samples = 150\nseed = 3\n"
    )
    cfg = parse_config(write_config(tmp_path, text))
    csv_path, _ = run(cfg, out_dir=tmp_path / "out")
    svg = plot(csv_path, "theta-scan", tmp_path / "scan.svg")
    content = svg.read_text()
    assert "1/sqrt(beta)" in content  # the discontinuity-floor reference curve
    assert "beta=1" in content


def test_plot_rejects_empty_and_mismatched(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("# schema=theta-scan/v1\nbeta,lambda,q,s,L,n,estimate,stderr,seed\n")
    with pytest.raises(PlotError, match="no data"):
        plot(p, "theta-scan", tmp_path / "x.svg")
    assert not (tmp_path / "x.svg").exists()
    q = tmp_path / "wrong.csv"
    q.write_text("# schema=fk/v1\nq,beta\n1,2\n")
    with pytest.raises(PlotError, match="schema"):
        plot(q, "theta-scan", tmp_path / "y.svg")


def test_multiscale_kind(tmp_path):
    text = (
        "kind = multiscale\nbeta = 2\nlambda = 13\nsamples = 120\nseed = 2\n"
        "C1 = 4\ntheta1 = 0.9\nC0 = 0.3\ntheta_inf = 0.8\nmax_level = 2\n"
    )
    cfg = parse_config(write_config(tmp_path, text))
    csv_path, _ = run(cfg, out_dir=tmp_path / "out")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "# schema=multiscale/v1"
    assert len(lines) == 4  # two levels
    assert "pass_flags" in lines[1]


def test_estimator_result_validation():
    from lrperc import EstimatorResult

    r = EstimatorResult(mean=0.5, stderr=0.01, n=100, seed=7, metadata={"k": 1})
    assert r.metadata["k"] == 1
    with pytest.raises(ValueError):
        EstimatorResult(mean=0.5, stderr=-0.01, n=100, seed=7)
    with pytest.raises(ValueError):
        EstimatorResult(mean=0.5, stderr=0.01, n=0, seed=7)


def test_lemma2_and_fk_kinds(tmp_path):
    text = (
        "kind = lemma2\nbeta = 0.5\nlambda = 0.5\nsizes = 4\nC = 4\nR = 2\n"
        "theta = 0.9\nsamples = 120\nseed = 6\n"
    )
    cfg = parse_config(write_config(tmp_path, text, "l2.cfg"))
    csv_path, _ = run(cfg, out_dir=tmp_path / "l2")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "# schema=crossing/v1"
    assert lines[2].startswith("lemma2,4,4,2,")

    text = (
        "kind = fk-theta\nbeta = 2\nlambda = 3\nq = 2\nsizes = 8\n"
        "n_sweeps = 300\nburn_in = 60\nseed = 4\n"
    )
    cfg = parse_config(write_config(tmp_path, text, "fk.cfg"))
    csv_path, _ = run(cfg, out_dir=tmp_path / "fk")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "# schema=fk/v1"
    assert ",wired," in lines[2] and ",theta_fk," in lines[2]


def test_cli_exit_codes(tmp_path):
    assert cli_main(["p-bad"]) == 2  # missing --config
    bad = write_config(tmp_path, "kind = p-bad\nwat = 1\n")
    assert cli_main(["p-bad", "--config", str(bad)]) == 2
    good = write_config(tmp_path, BASIC_PBAD)
    assert cli_main(["p-bad", "--config", str(good), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "p-bad.csv").exists()


def test_plot_pbad_and_multiscale(tmp_path):
    cfg = parse_config(write_config(tmp_path, BASIC_PBAD.replace("sizes = 8", "sizes = 4,8")))
    csv_path, _ = run(cfg, out_dir=tmp_path / "pb")
    svg = plot(csv_path, "p-bad", tmp_path / "pb.svg")
    assert svg.exists() and svg.stat().st_size > 0
    ms = (
        "kind = multiscale\nbeta = 2\nlambda = 13\nsamples = 120\nseed = 2\n"
        "C1 = 4\ntheta1 = 0.9\nC0 = 0.3\ntheta_inf = 0.8\nmax_level = 2\n"
    )
    cfg = parse_config(write_config(tmp_path, ms, "ms.cfg"))
    csv_path, _ = run(cfg, out_dir=tmp_path / "ms")
    svg = plot(csv_path, "multiscale", tmp_path / "ms.svg")
    assert "1/(400 C_n^2)" in svg.read_text()


def test_cli_resource_cap_exit_code(tmp_path):
    text = (
        "kind = multiscale\nbeta = 2\nlambda = 13\nsamples = 120\nseed = 2\n"
        "C1 = 20000002\ntheta1 = 0.9\nC0 = 0.3\ntheta_inf = 0.8\nmax_level = 1\n"
    )
    cfg_file = write_config(tmp_path, text, "cap.cfg")
    assert cli_main(["multiscale", "--config", str(cfg_file), "--out", str(tmp_path)]) == 3


def test_cli_plot_mode(tmp_path):
    good = write_config(
        tmp_path,
        "kind = theta-scan\nbeta = 0.5\nlambda = 2\nsizes = 16\nsamples = 120\nseed = 1\n",
    )
    assert cli_main(["theta-scan", "--config", str(good), "--out", str(tmp_path / "o")]) == 0
    rc = cli_main([
        "plot", "--csv", str(tmp_path / "o" / "theta-scan.csv"),
        "--plot-kind", "theta-scan", "--out", str(tmp_path / "o"),
    ])
    assert rc == 0
    assert (tmp_path / "o" / "theta-scan.svg").exists()
    assert cli_main(["plot", "--csv", "nope.csv"]) == 2
