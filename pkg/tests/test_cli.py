import csv
import io
import json
import math

import jsonschema
import pytest

from qls.cli import main
from qls.crystal import IonPair, load_species, mode_ratios
from qls.io import data_path, load_schema

SPECIES = str(data_path("species", "ca40.json")), str(data_path("species", "n2plus.json"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_version_and_help(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and "qls" in out
    code, out, _ = run(capsys, "--help")
    assert code == 0
    for cmd in ("zeeman", "moments", "modes", "phase", "kicks", "optimize", "optical", "magnetic", "hybrid",
                "ramsey", "validate"):
        assert cmd in out


def test_modes_json(capsys):
    code, out, _ = run(capsys, "modes")
    assert code == 0
    obj = json.loads(out)
    jsonschema.validate(obj, load_schema("modes"))
    pair = IonPair(load_species(SPECIES[0]), load_species(SPECIES[1]), 2 * math.pi * 574e3)
    c, s = mode_ratios(pair.mu)
    assert obj["omega_com_over_omega"] == pytest.approx(c, rel=1e-14)
    assert obj["omega_str_over_omega"] == pytest.approx(s, rel=1e-14)


def test_modes_csv(capsys):
    code, out, _ = run(capsys, "modes", "--format", "csv")
    table = rows(out)
    assert code == 0
    assert table[0] == ["mode", "omega_rad_s", "omega_over_omega", "v_C", "v_T"]
    assert [r[0] for r in table[1:]] == ["com", "str"]


def test_zeeman_csv(capsys):
    code, out, _ = run(capsys, "zeeman", "--bmax-mT", "2", "--steps", "21")
    table = rows(out)
    assert code == 0
    assert table[0] == ["B_T", "label", "E_MHz", "mu_muB"]
    # 12 N=0 levels plus 60 N=2 levels, 21 fields each
    assert len(table) - 1 == 72 * 21
    zero = [r for r in table[1:] if float(r[0]) == 0.0 and r[1].startswith("N=0")]
    assert len(zero) == 12


def test_zeeman_coarse_grid_is_usage_error(capsys):
    code, _, err = run(capsys, "zeeman", "--steps", "3")
    assert code == 2
    assert "refine" in err


def test_moments_json(capsys):
    code, out, _ = run(capsys, "moments")
    assert code == 0
    jsonschema.validate(json.loads(out), load_schema("moments"))


def test_phase_sweep_and_single(capsys):
    code, out, _ = run(capsys, "phase", "--steps", "5")
    table = rows(out)
    assert code == 0 and table[0] == ["nu_rad_s", "Xi", "phi_CT_rad", "restored"]
    assert len(table) == 6
    code, out, err = run(capsys, "phase", "--nu-over-omega-com", "1.01", "--numeric", "--T-us", "400")
    assert code == 0
    obj = json.loads(out)
    jsonschema.validate(obj, load_schema("phase"))
    assert obj["Xi"] == pytest.approx(-43.3466, abs=1e-4)
    assert obj["phi_CT_numeric"] == pytest.approx(obj["phi_CT_exact"], rel=1e-5)


def test_phase_unrestored_warns(capsys):
    code, out, err = run(capsys, "phase", "--nu-over-omega-com", "1.01", "--T-us", "250")
    assert code == 0 and "warning" in err
    assert json.loads(out)["restored"] is False


def test_phase_trajectory(capsys):
    code, out, _ = run(capsys, "phase", "--nu-over-omega-com", "0", "--trajectory", "com")
    table = rows(out)
    assert code == 0 and table[0] == ["t_s", "Re_z", "Im_z"]
    assert len(table) > 100
    code, _, _ = run(capsys, "phase", "--trajectory", "com")
    assert code == 2


def test_kicks_closes_single_mode(capsys):
    code, out, _ = run(capsys, "kicks")
    table = rows(out)
    assert code == 0 and table[0] == ["t_s", "Re_z", "Im_z"]
    last = table[-1]
    assert abs(complex(float(last[1]), float(last[2]))) < 1e-12
    code, out, _ = run(capsys, "kicks", "--format", "json")
    jsonschema.validate(json.loads(out), load_schema("kicks"))


def test_optimize_json(capsys):
    code, out, _ = run(capsys, "optimize")
    assert code == 0
    obj = json.loads(out)
    jsonschema.validate(obj, load_schema("optimize"))
    assert abs(obj["G"]) == pytest.approx(1.82547, abs=1e-5)


def test_optical_feasible_and_infeasible(capsys):
    code, out, _ = run(capsys, "optical", "--steps", "4")
    table = rows(out)
    assert code == 0
    assert table[0] == ["omega_Hz", "detuning_Hz", "pulse_s", "total_s", "feasible"]
    assert table[1][4] == "true"
    # detuning scales as sqrt(omega)
    d = [float(r[1]) for r in table[1:]]
    w = [float(r[0]) for r in table[1:]]
    slope = math.log(d[-1] / d[0]) / math.log(w[-1] / w[0])
    assert slope == pytest.approx(0.5, abs=1e-12)
    code, _, err = run(capsys, "optical", "--ell-um", "0.1985", "--steps", "3")
    assert code == 3 and "feasible" in err


def test_magnetic_both_readings(capsys):
    code, out, _ = run(capsys, "magnetic", "--steps", "3")
    table = rows(out)
    assert code == 0
    assert table[0] == ["omega_Hz", "gradient_Tpm", "time_s", "nu_over_omega", "nu_reference"]
    assert {r[4] for r in table[1:]} == {"com", "omega"}
    code, out, _ = run(capsys, "magnetic", "--steps", "1", "--omega-min-hz", "574e3", "--omega-max-hz", "574e3",
                       "--T-us", "250", "--nu-ref", "com")
    (row,) = rows(out)[1:]
    assert float(row[1]) == pytest.approx(14.085, abs=1e-3)
    code, out, _ = run(capsys, "magnetic", "--steps", "1", "--omega-min-hz", "574e3", "--omega-max-hz", "574e3",
                       "--T-us", "250", "--nu-ref", "com", "--closed-form")
    (row,) = rows(out)[1:]
    assert float(row[1]) == pytest.approx(14.429, abs=1e-3)


def test_hybrid(capsys):
    code, _, _ = run(capsys, "hybrid", "--weak-kick-per-m", "1e5")
    assert code == 2
    code, out, _ = run(capsys, "hybrid", "--weak-kick-per-m", "1e5", "--baseline-kick-C-per-m", "1e6")
    assert code == 0
    jsonschema.validate(json.loads(out), load_schema("hybrid"))


def test_ramsey_single_and_reproducible(capsys):
    code, _, _ = run(capsys, "ramsey")
    assert code == 2
    code, out, _ = run(capsys, "ramsey", "--phi", "0.3", "--shots", "50")
    obj = json.loads(out)
    jsonschema.validate(obj, load_schema("ramsey"))
    assert obj["P_up"] == pytest.approx(math.sin(0.3) ** 2, abs=1e-12)
    args = ("ramsey", "--sweep", "phi", "--shots", "100", "--seed", "7", "--steps", "9")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    assert rows(a)[0] == ["phi_rad", "P_up", "stderr"]
    _, c, _ = run(capsys, "ramsey", "--sweep", "phi", "--shots", "100", "--seed", "8", "--steps", "9")
    assert c != a
    _, x, _ = run(capsys, "ramsey", "--sweep", "xi", "--phi", "0.2", "--steps", "3")
    assert rows(x)[0] == ["xi_rad", "P_up", "stderr"]


def test_out_file_atomic_and_identical(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    args = ["ramsey", "--sweep", "phi", "--shots", "20", "--steps", "5", "--out", str(target)]
    assert main(args) == 0
    first = target.read_bytes()
    assert main(args) == 0
    assert target.read_bytes() == first
    # no temporary files left beside the output
    assert [p.name for p in tmp_path.iterdir()] == ["sweep.csv"]
    _, out, _ = run(capsys, *args[:-2])
    assert out.encode() == first


def test_json_table_format(capsys):
    code, out, _ = run(capsys, "optical", "--steps", "3", "--format", "json")
    obj = json.loads(out)
    jsonschema.validate(obj, load_schema("table"))
    assert obj["columns"][0] == "omega_Hz" and len(obj["rows"]) == 3


@pytest.mark.parametrize("argv", [
    ["modes", "--omega-hz", "-1"],
    ["modes", "--species", "ca40.json"],
    ["modes", "--species", "nope.json,n2plus.json"],
    ["phase", "--T-us", "0"],
    ["phase", "--nu-min-over-omega-com", "2", "--nu-max-over-omega-com", "1"],
    ["optical", "--steps", "0"],
    ["modes", "--no-such-flag"],
    ["zeeman", "--bmax-mT", "-5"],
])
def test_bad_arguments_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_unknown_keys_need_flag(tmp_path, capsys):
    raw = json.loads(data_path("species", "n2plus.json").read_text())
    raw["comment"] = "extra"
    p = tmp_path / "n2.json"
    p.write_text(json.dumps(raw))
    species = f"{SPECIES[0]},{p}"
    assert run(capsys, "modes", "--species", species)[0] == 2
    assert run(capsys, "modes", "--species", species, "--allow-unknown")[0] == 0


def test_validate_command(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", *SPECIES, str(data_path("hyperfine", "n2plus.json")))
    assert code == 0 and out.startswith("ok: 3")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "x", "mass": 40.0, "charge_e": 1}))
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 2 and out.startswith("unit-suffix:")
    code, out, _ = run(capsys, "validate", "--format", "json", str(bad))
    report = json.loads(out)
    jsonschema.validate(report, load_schema("validate"))
    assert [e["kind"] for e in report["errors"]] == ["unit-suffix"]
