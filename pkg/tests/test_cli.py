import json

import pytest

from gwel.cli import main
from gwel.errors import ConvergenceError


def run_json(capsysbinary, argv):
    code = main(argv)
    out = capsysbinary.readouterr().out
    assert code == 0, out
    return json.loads(out)


def test_walk_entropy_json(capsysbinary):
    obj = run_json(capsysbinary, ["walk-entropy", "--rank", "2", "--steps", "5"])
    assert obj["command"] == "walk-entropy"
    assert obj["series"]["columns"] == ["n", "H", "H_over_n", "increment"]
    assert len(obj["series"]["rows"]) == 5
    assert obj["series"]["rows"][0][1] == pytest.approx(1.38629436112)
    assert obj["summary"]["h_rw_exact"] == pytest.approx(0.549306144334)
    # scheduling and output options are not part of the result identity
    assert "threads" not in obj["params"]
    assert "out" not in obj["params"]
    assert obj["seed"] == 0xD0DD5


def test_walk_entropy_quotient(capsysbinary):
    obj = run_json(
        capsysbinary,
        ["walk-entropy", "--steps", "4", "--quotient", "relators: aa, bb, abab"],
    )
    assert obj["summary"]["walk_on"] == "perm-quotient of size 4"
    # the Klein walk maxes out at log 4 minus the lazy-free parity split
    assert obj["series"]["rows"][3][1] <= 1.3862943612


def test_growth_csv(capsysbinary):
    code = main(["growth", "--steps", "3", "--format", "csv"])
    out = capsysbinary.readouterr().out.decode()
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,count,log_count_over_n"
    assert lines[1] == "0,1,"
    assert lines[4].startswith("3,53,")


def test_drift_deterministic_across_threads(capsysbinary, monkeypatch):
    outs = []
    for threads in ("1", "4", "8"):
        code = main(
            ["drift", "--steps", "500", "--trials", "50", "--threads", threads]
        )
        assert code == 0
        outs.append(capsysbinary.readouterr().out)
    assert outs[0] == outs[1] == outs[2]
    monkeypatch.setenv("GWEL_THREADS", "6")
    assert main(["drift", "--steps", "500", "--trials", "50"]) == 0
    assert capsysbinary.readouterr().out == outs[0]


def test_seed_changes_output(capsysbinary):
    a = run_json(capsysbinary, ["drift", "--steps", "300", "--trials", "40"])
    b = run_json(
        capsysbinary, ["drift", "--steps", "300", "--trials", "40", "--seed", "9"]
    )
    assert a["seed"] == 0xD0DD5 and b["seed"] == 9
    assert a["summary"]["estimate"] != b["summary"]["estimate"]


def test_out_file(tmp_path, capsysbinary):
    path = tmp_path / "report.json"
    code = main(["theorem-a", "--rank", "3", "--out", str(path)])
    assert code == 0
    assert capsysbinary.readouterr().out == b""
    obj = json.loads(path.read_bytes())
    assert obj["summary"]["bound"] == pytest.approx(0.268239652072)
    assert obj["summary"]["coefficient_of_log"] == {"num": 1, "den": 6}


def test_cogrowth_verbs(capsysbinary):
    obj = run_json(
        capsysbinary,
        ["cogrowth", "--quotient", "relators: aa, bb, abab", "--steps", "8",
         "--method", "both"],
    )
    assert obj["series"]["rows"][2][1] == 4
    assert obj["summary"]["delta"] == pytest.approx(1.09861228867)
    assert obj["summary"]["bound_holds"] is True
    abel = run_json(
        capsysbinary, ["cogrowth", "--quotient", "abelian", "--steps", "8"]
    )
    assert abel["series"]["rows"][4][1] == 8
    assert "amenable" in abel["summary"]["delta_method"]


def test_gap_check_reports_warning(capsysbinary):
    obj = run_json(
        capsysbinary,
        ["gap-check", "--quotient", "relators: aa, bb, abab", "--steps", "3"],
    )
    assert obj["summary"]["lemma_holds"] is True
    assert any("k=2" in w for w in obj["warnings"])


def test_boundary_entropy_and_guivarch(capsysbinary):
    b = run_json(capsysbinary, ["boundary-entropy", "--rank", "4"])
    assert b["summary"]["coefficient"] == {"num": 3, "den": 4}
    assert b["summary"]["matches_h_rw_exact"] is True
    g = run_json(capsysbinary, ["guivarch", "--steps", "1000", "--trials", "100"])
    assert g["summary"]["residual"] < 0.05
    assert g["summary"]["holds_within_3se"] is True


def test_proximality_rows(capsysbinary):
    obj = run_json(
        capsysbinary,
        ["proximality", "--steps", "12", "--trials", "3", "--prefix-depth", "2"],
    )
    assert len(obj["series"]["rows"]) == 36
    assert obj["summary"]["final_mass_min"] > 0.9


def test_lattice_experiment(tmp_path, capsysbinary):
    cfg = tmp_path / "chain.cfg"
    cfg.write_text(
        "points 4\nweights uniform\naction a=(1 2)(3 4)\n"
        "direction increasing\nchain 1,2,3,4\nchain 1,2|3,4\n"
    )
    obj = run_json(capsysbinary, ["lattice-experiment", "--config", str(cfg)])
    assert obj["summary"]["limit_blocks"] == 2
    assert obj["series"]["rows"][-1][2] == 0.0
    assert obj["summary"]["functional_monotone"] is True


def test_parameter_errors_exit_2(capsys):
    assert main(["walk-entropy", "--rank", "1"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: ") and err.count("\n") == 1
    assert main(["cogrowth", "--steps", "4"]) == 2  # missing --quotient
    assert main(["walk-entropy", "--quotient", "relators: a!"]) == 2
    assert main(["drift", "--steps", "notanint"]) == 2
    assert main(["no-such-verb"]) == 2
    assert main(["lattice-experiment", "--config", "/no/such/file.cfg"]) == 2


def test_resource_guard_exit_3(capsys):
    code = main(
        ["cogrowth", "--quotient", "relators: abAB", "--max-cosets", "100"]
    )
    assert code == 3
    assert "error:" in capsys.readouterr().err


def test_convergence_maps_to_exit_4(capsys, monkeypatch):
    import gwel.cli as cli

    def boom(args):
        raise ConvergenceError("power iteration stalled")

    monkeypatch.setitem(cli._HANDLERS, "growth", boom)
    assert main(["growth"]) == 4
    assert "stalled" in capsys.readouterr().err


def test_bad_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("GWEL_THREADS", "zero?")
    assert main(["growth"]) == 2
    monkeypatch.setenv("GWEL_THREADS", "0")
    assert main(["growth"]) == 2


def test_help_documents_seed(capsys):
    with pytest.raises(SystemExit) as e:
        main(["drift", "--help"])
    assert e.value.code == 0
    assert "0xD0DD5" in capsys.readouterr().out
