import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from quadcover import channel, cli, placement, scenario
from quadcover.errors import ParseError, UnknownPreset, ValidationError

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, text, name="s.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def assert_close_tree(got, want, rel=1e-6, abs_=1e-9, path=""):
    """Same keys and strings, floats equal to ``rel``."""
    if isinstance(want, dict):
        assert set(got) == set(want), path
        for k in want:
            assert_close_tree(got[k], want[k], rel, abs_, f"{path}.{k}")
    elif isinstance(want, list):
        assert len(got) == len(want), path
        for i, (g, w) in enumerate(zip(got, want)):
            assert_close_tree(g, w, rel, abs_, f"{path}[{i}]")
    elif isinstance(want, float) and not isinstance(want, bool):
        assert got == pytest.approx(want, rel=rel, abs=abs_), path
    else:
        assert got == want, path


# -- scenario loading ---------------------------------------------------------

def test_bundled_case_study_verbatim():
    sc = scenario.load_scenario("case_study")
    assert sc.quadrilateral.labeled == ((-200.0, -100.0), (-150.0, 300.0),
                                        (150.0, 350.0), (200.0, 30.0))
    assert sc.link == channel.LinkBudget(2e9, 20.0, -120.0, 5.0, 2.0, 0.0)
    assert sc.environment == channel.environment("suburban")
    assert sc.mission.bandwidth_hz == 1e6
    assert sc.propulsion.u_tip == 120.0 and sc.propulsion.weight_n == 20.0
    assert sc.payload_list == (1e7, 1e8, 1e9)


def test_defaults_for_omitted_sections(tmp_path):
    sc = scenario.load_scenario(write(tmp_path, "[quadrilateral]\n"
                                      "vertices = [[0,0],[0,1],[1,1],[1,0]]\n"))
    assert sc.optimizer.h_min == 1.0 and sc.optimizer.grid_points == 64
    assert sc.transit_model == "horizontal"


def test_missing_quadrilateral(tmp_path):
    with pytest.raises(ValidationError) as exc:
        scenario.load_scenario(write(tmp_path, "[link]\nfreq = 2e9\n"))
    assert exc.value.field == "quadrilateral"


def test_custom_environment_kappa_zero(tmp_path):
    text = ("[quadrilateral]\nvertices = [[0,0],[0,1],[1,1],[1,0]]\n"
            "[environment]\nxi_los = 1\nxi_nlos = 20\neta = 9.6\nkappa = 0\n")
    with pytest.raises(ValidationError) as exc:
        scenario.load_scenario(write(tmp_path, text))
    assert exc.value.field == "environment.kappa"


def test_custom_environment_ok(tmp_path):
    text = ("[quadrilateral]\nvertices = [[0,0],[0,1],[1,1],[1,0]]\n"
            "[environment]\nname = \"mine\"\nxi_los = 1\nxi_nlos = 20\neta = 9.6\n"
            "kappa = 0.2\n")
    sc = scenario.load_scenario(write(tmp_path, text))
    assert sc.environment.name == "mine" and sc.custom_environment


@pytest.mark.parametrize("text, field", [
    ("[quadrilateral]\nvertices = [[0,0],[0,1],[1,1],[1,0]]\n[link]\nfreqq = 1\n", "link.freqq"),
    ("[quadrilateral]\nvertices = [[0,0],[0,1],[1,1],[1,0]]\n[link]\nfreq = \"x\"\n", "link.freq"),
    ("[quadrilateral]\nvertices = [[0,0],[0,1],[1,1],[1,0]]\n[optimizer]\nh_min = 5\nh_max = 1\n",
     "optimizer.h_min"),
    ("[quadrilateral]\nvertices = [[0,0],[0,1],[1,1],[1,0]]\n[mission]\ntransit_model = \"x\"\n",
     "mission.transit_model"),
    ("[quadrilateral]\nvertices = [[0,0],[0,1],[1,1],[1,0]]\n[propulsion]\nrho = -1\n",
     "propulsion.rho"),
    ("[quadrilateral]\nvertices = [[0,0],[0,1],[1,1],[1,0]]\n[bogus]\n", "bogus"),
    ("[quadrilateral]\nvertices = [[0,0],[0,1]]\n", "quadrilateral.vertices"),
])
def test_field_addressed_errors(tmp_path, text, field):
    with pytest.raises(ValidationError) as exc:
        scenario.load_scenario(write(tmp_path, text))
    assert exc.value.field == field


def test_unknown_preset(tmp_path):
    text = "[quadrilateral]\nvertices = [[0,0],[0,1],[1,1],[1,0]]\n[environment]\npreset = \"moon\"\n"
    with pytest.raises(UnknownPreset):
        scenario.load_scenario(write(tmp_path, text))


def test_parse_error_has_line(tmp_path):
    with pytest.raises(ParseError, match="line 2"):
        scenario.load_scenario(write(tmp_path, "[quadrilateral]\nvertices = = 3\n"))


def test_report_round_trip(tmp_path, capsys):
    # values emitted by the report re-validate through the loaders
    code, out, _ = run(capsys, "report")
    rep = json.loads(out)
    text = "[quadrilateral]\nvertices = %s\n[environment]\npreset = \"%s\"\n" % (
        json.dumps(rep["quadrilateral"]["vertices"]), rep["settings"]["environment"])
    sc = scenario.load_scenario(write(tmp_path, text))
    assert sc.quadrilateral.area == rep["quadrilateral"]["area"]
    e = rep["ellipses"]["inscribed"]
    placement.beam_geometry(e["a"], e["b"], 100.0)


# -- commands ---------------------------------------------------------------

def test_ellipse_inscribed(capsys):
    code, out, _ = run(capsys, "ellipse", "--mode", "inscribed")
    assert code == 0
    d = json.loads(out)
    assert d["a"] == pytest.approx(200.3, abs=0.5) and d["b"] == pytest.approx(155.2, abs=0.5)
    assert d["area_ratio"] == pytest.approx(0.7747, abs=1e-3)
    assert set(d["conic"]) == {"c1", "c2", "c3", "c4", "c5", "c6"}


def test_ellipse_unit_square(capsys):
    code, out, _ = run(capsys, "ellipse", "--config", "unit_square")
    d = json.loads(out)
    assert d["a"] == pytest.approx(0.5) and d["area_ratio"] == pytest.approx(math.pi / 4)


def test_ellipse_circumscribed_published_route(capsys):
    code, out, _ = run(capsys, "ellipse", "--mode", "circumscribed-published")
    d = json.loads(out)
    assert d["a"] == pytest.approx(294.3, abs=0.5) and d["b"] == pytest.approx(223.5, abs=0.5)


def test_ellipse_csv(capsys):
    code, out, _ = run(capsys, "ellipse", "--format", "csv")
    rows = dict(csv.reader(io.StringIO(out)))
    assert float(rows["a"]) == pytest.approx(200.27, abs=0.01)


def test_altitude_pathloss_suburban(capsys):
    code, out, _ = run(capsys, "altitude", "--objective", "pathloss")
    d = json.loads(out)
    assert d["result"]["h_opt"] == pytest.approx(116.9, abs=1.0)
    assert d["at_optimum"]["theta_deg"] == pytest.approx(45.8, abs=0.1)
    assert d["at_optimum"]["psi_deg"] == pytest.approx(26.1, abs=0.1)
    assert d["result"]["stationarity_residual"] < 1e-3


def test_altitude_dense_urban_published_route(capsys):
    code, out, _ = run(capsys, "altitude", "--mode", "circumscribed-published", "--env", "dense-urban")
    assert json.loads(out)["result"]["h_opt"] == pytest.approx(653.3, abs=1.0)


def test_altitude_energy_fields(capsys):
    code, out, _ = run(capsys, "altitude", "--objective", "energy", "--h-min", "5",
                       "--h-max", "2000")
    d = json.loads(out)
    assert d["energy"]["transit_model"] == "horizontal"
    assert d["energy"]["p_hov_W"] == pytest.approx(168.5, abs=0.1)
    assert d["result"]["interior"]


def test_altitude_snr_m0_matches_pathloss(tmp_path, capsys):
    text = scenario.bundled_text("case_study").replace("m = 2.0", "m = 0.0")
    path = write(tmp_path, text)
    _, a, _ = run(capsys, "altitude", "--config", path, "--objective", "snr")
    _, b, _ = run(capsys, "altitude", "--config", path, "--objective", "pathloss")
    assert json.loads(a)["result"]["h_opt"] == pytest.approx(
        json.loads(b)["result"]["h_opt"], abs=0.01)


def test_sweep_csv_format(capsys):
    code, out, err = run(capsys, "sweep", "--h-min", "10", "--h-max", "1000", "--steps", "100")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(cli.SWEEP_HEADER)
    assert len(lines) == 101
    assert not any(line.endswith(",") for line in lines[1:] if line.split(",")[3])
    rows = list(csv.DictReader(io.StringIO(out)))
    pl = [float(r["pl_max_db"]) for r in rows]
    h = [float(r["H_m"]) for r in rows]
    best = h[pl.index(min(pl))]
    nearest = min(h, key=lambda x: abs(x - 116.9))
    assert best == nearest


def test_sweep_rows_recompute(capsys):
    code, out, _ = run(capsys, "sweep", "--steps", "20", "--h-max", "3000")
    env, link = channel.environment("suburban"), channel.LinkBudget()
    sc = scenario.load_scenario("case_study")
    from quadcover import geometry
    e = geometry.max_inscribed_ellipse(sc.quadrilateral).ellipse
    for r in csv.DictReader(io.StringIO(out)):
        h = float(r["H_m"])
        assert float(r["pl_max_db"]) == pytest.approx(
            channel.composed_max_path_loss(e.a, e.b, h, link, env), abs=1e-9)


def test_sweep_circle_zero_offset(tmp_path, capsys):
    text = "[quadrilateral]\nvertices = [[0,0],[0,10],[10,10],[10,0]]\n"
    code, out, _ = run(capsys, "sweep", "--config", write(tmp_path, text), "--steps", "5")
    assert all(float(r["x0_m"]) == 0.0 for r in csv.DictReader(io.StringIO(out)))


def test_sweep_empty_energy_column(tmp_path, capsys):
    text = scenario.bundled_text("case_study").replace("pn_dbm = -120.0", "pn_dbm = 4000.0")
    code, out, _ = run(capsys, "sweep", "--config", write(tmp_path, text), "--steps", "3")
    assert code == 0
    assert all(r["energy_J"] == "" for r in csv.DictReader(io.StringIO(out)))


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "--steps", "3", "--format", "json")
    rows = json.loads(out)
    assert len(rows) == 3 and list(rows[0]) == sorted(cli.SWEEP_HEADER)


def test_report_text(capsys):
    code, out, _ = run(capsys, "report", "--format", "text")
    assert code == 0 and "Table II" in out and "38.99%" in out


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "ellipse", "--out", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["mode"] == "inscribed"


# -- golden files and determinism --------------------------------------------

def test_report_matches_golden(capsys):
    _, out, _ = run(capsys, "report")
    assert_close_tree(json.loads(out), json.loads((GOLDEN / "case_study_report.json").read_text()))


@pytest.mark.parametrize("mode", ["inscribed", "circumscribed"])
def test_ellipse_matches_golden(capsys, mode):
    _, out, _ = run(capsys, "ellipse", "--mode", mode)
    assert_close_tree(json.loads(out),
                      json.loads((GOLDEN / f"ellipse_{mode}.json").read_text()))


def test_sweep_matches_golden(capsys):
    _, out, _ = run(capsys, "sweep", "--h-min", "10", "--h-max", "1000", "--steps", "100")
    got = list(csv.reader(io.StringIO(out)))
    want = list(csv.reader((GOLDEN / "suburban_inscribed_sweep.csv").open()))
    assert got[0] == want[0] and len(got) == len(want)
    for g, w in zip(got[1:], want[1:]):
        assert [float(x) for x in g] == pytest.approx([float(x) for x in w], rel=1e-9)


def test_report_table_ii_block_against_printed(capsys):
    _, out, _ = run(capsys, "report")
    rows = json.loads(out)["table_ii"]["inscribed"]["rows"]
    for env, r in rows.items():
        p = r["printed"]
        assert abs(r["H_m"] - p["H_m"]) <= 1.0
        assert abs(r["theta_deg"] - p["theta_deg"]) <= 0.1
        assert abs(r["psi_deg"] - p["psi_deg"]) <= 0.1


def test_report_byte_identical(capsys):
    _, a, _ = run(capsys, "report")
    _, b, _ = run(capsys, "report")
    assert a == b


# -- exit codes ---------------------------------------------------------------

@pytest.mark.parametrize("text, code", [
    ("[quadrilateral\n", cli.EXIT_PARSE),
    ("[link]\nfreq = 1e9\n", cli.EXIT_VALIDATION),
    ("[quadrilateral]\nvertices = [[0,0],[1,0],[0.5,0.5],[0,1]]\n", cli.EXIT_GEOMETRY),
])
def test_exit_codes(tmp_path, capsys, text, code):
    got, _, err = run(capsys, "ellipse", "--config", write(tmp_path, text))
    assert got == code and err.startswith("quadcover:")


def test_exit_code_infeasible(tmp_path, capsys):
    text = scenario.bundled_text("case_study").replace("pn_dbm = -120.0", "pn_dbm = 4000.0")
    got, _, err = run(capsys, "altitude", "--objective", "energy",
                      "--config", write(tmp_path, text))
    assert got == cli.EXIT_INFEASIBLE and "feasible" in err


def test_exit_code_missing_file(capsys):
    assert run(capsys, "ellipse", "--config", "/nonexistent.toml")[0] == cli.EXIT_PARSE


def test_exit_code_unknown_env(capsys):
    assert run(capsys, "ellipse", "--env", "moon")[0] == cli.EXIT_VALIDATION


def test_exit_code_custom_without_parameters(capsys):
    assert run(capsys, "ellipse", "--env", "custom")[0] == cli.EXIT_VALIDATION


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--format", "xml"])
    assert exc.value.code == 2


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "quadcover.cli", "ellipse", "--config",
                          "unit_square"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["a"] == pytest.approx(0.5)
