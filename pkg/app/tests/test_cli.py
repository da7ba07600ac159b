import json

import pytest

from app.cli import attach_negative_values


def test_compute_log_dilog_json(cli_json):
    rows = cli_json("compute", "--construction", "log-dilog", "--z=-1", "--n", "2")
    assert [row["n"] for row in rows] == [0, 1, 2]
    assert [row["a"] for row in rows] == ["1", "5", "55"]
    assert [row["b"] for row in rows] == ["0", "-7/2", "-305/8"]
    assert [row["b_tilde"] for row in rows] == ["0", "-4", "-181/4"]
    assert rows[1]["r"].startswith("0.03426409")
    assert rows[0]["b_tilde2"] is None
    assert all(row["source"] == "construction" for row in rows)


def test_compute_well_poised(cli_json):
    rows = cli_json("compute", "--construction", "well-poised", "--n", "1", "--digits", "20")
    assert rows[1]["a"] == "8"
    assert rows[1]["b"] == "13/2"
    assert rows[1]["b_tilde"] == "29/2"
    assert rows[1]["z"] == "-1"
    assert rows[1]["r_tilde"].startswith("-0.0753")


def test_compute_trilog_theorem_mode(cli_json):
    rows = cli_json("compute", "--construction", "trilog", "--n", "2")
    assert [row["a"] for row in rows] == ["1", "7", "163"]
    assert rows[2]["b_tilde"] == "2145/8"
    assert rows[2]["b_tilde2"] == "3135/16"
    assert rows[2]["b"] is None
    assert all(row["source"] == "recurrence" and row["z"] == "1" for row in rows)


def test_compute_trilog_inside_disc(cli_json):
    rows = cli_json("compute", "--construction", "trilog", "--z=-1/2", "--n", "0")
    assert rows == [
        {
            "a": "1", "b": "0", "b_tilde": "0", "b_tilde2": "0",
            "construction": "trilog", "n": 0, "source": "construction", "z": "-1/2",
            "r": rows[0]["r"], "r_tilde": rows[0]["r_tilde"], "r_tilde2": rows[0]["r_tilde2"],
        }
    ]
    assert rows[0]["r"].startswith("-0.405465108")


def test_compute_csv(cli):
    code, out, _ = cli("compute", "--construction", "log-dilog", "--z", "1/2", "--n", "1", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,construction,z,source,a,b,b_tilde,b_tilde2,r,r_tilde,r_tilde2"
    assert len(lines) == 3
    assert lines[1].startswith("0,log-dilog,1/2,construction,1,0,0,,")


def test_compute_is_deterministic(cli):
    first = cli("compute", "--construction", "log-dilog", "--z=-1/2", "--n", "4")
    second = cli("compute", "--construction", "log-dilog", "--z=-1/2", "--n", "4")
    assert first[0] == 0
    assert first[1] == second[1]


def test_compute_writes_file(cli, tmp_path):
    path = tmp_path / "table.json"
    code, out, _ = cli("compute", "--construction", "well-poised", "--n", "2", "--out", str(path))
    assert code == 0
    assert out == ""
    rows = json.loads(path.read_text(encoding="utf-8"))
    assert rows[2]["b"] == "1737/8"


@pytest.mark.parametrize(
    "argv",
    [
        ("compute", "--construction", "log-dilog", "--z", "2", "--n", "2"),
        ("compute", "--construction", "log-dilog", "--z", "0", "--n", "2"),
        ("compute", "--construction", "log-dilog", "--z", "1", "--n", "2"),
        ("compute", "--construction", "log-dilog", "--n", "2"),
        ("compute", "--construction", "well-poised", "--z=-1", "--n", "2"),
        ("compute", "--construction", "log-dilog", "--z", "abc", "--n", "2"),
        ("compute", "--construction", "log-dilog", "--z=-1", "--n", "-1"),
    ],
)
def test_compute_rejects_bad_configuration(cli, argv):
    code, out, err = cli(*argv)
    assert code == 2
    assert out == ""
    assert '"detail"' in err


def test_roots(cli_json):
    report = cli_json("roots", "--recurrence", "thm1", "--digits", "20")
    assert report["recurrence"] == "thm1"
    assert report["char_poly"] == ["2", "-39", "-5", "-1"]
    assert report["roots"][0]["modulus"].startswith("19.628662")
    assert report["roots"][1]["modulus"].startswith("0.1596024")
    assert report["roots"][1]["modulus"] == report["roots"][2]["modulus"]


def test_roots_rejects_low_precision(cli):
    code, _, err = cli("roots", "--recurrence", "thm3", "--digits", "5")
    assert code == 2
    assert "detail" in err


@pytest.mark.parametrize(
    "constant, digits, via",
    [
        ("zeta2", 10, None),
        ("log2", 12, None),
        ("zeta3", 8, None),
        ("pi2_12", 10, "thm3"),
        ("zeta3", 8, "thm2"),
    ],
)
def test_digits(cli_json, constant, digits, via):
    argv = ["digits", "--constant", constant, "--digits", str(digits)]
    if via:
        argv += ["--via", via]
    report = cli_json(*argv)
    assert report["constant"] == constant
    assert report["achieved"] is True
    assert report["approximation"][:digits] == report["reference"][:digits]


def test_digits_rejects_unknown_route(cli):
    code, _, err = cli("digits", "--constant", "log2", "--digits", "5", "--via", "thm3")
    assert code == 2
    assert "log2" in err


def test_verify_identities(cli):
    code, out, _ = cli("verify", "--suite", "identities", "--max-n", "4")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["suite"] == "identities"
    assert all(check["passed"] for check in report["checks"])


def test_verify_integrality_csv(cli):
    code, out, _ = cli("verify", "--suite", "integrality", "--max-n", "3", "--format", "csv")
    assert code == 0
    header = out.splitlines()[0]
    assert header == "name,suite,passed,strict,detail,counterexample"
    assert "trilog z=-1 (z1 z2)^n D b" in out


@pytest.mark.parametrize("z", ["-1/2", "-1"])
def test_compute_accepts_separate_negative_z(cli_json, z):
    separate = cli_json("compute", "--construction", "log-dilog", "--z", z, "--n", "2")
    attached = cli_json("compute", "--construction", "log-dilog", f"--z={z}", "--n", "2")
    assert separate == attached
    assert separate[0]["z"] == z


def test_attach_negative_values():
    assert attach_negative_values(["compute", "--z", "-1/2", "--n", "3"]) == ["compute", "--z=-1/2", "--n", "3"]
    assert attach_negative_values(["compute", "--z", "1/2"]) == ["compute", "--z", "1/2"]
    assert attach_negative_values(["compute", "--z", "--n", "3"]) == ["compute", "--z", "--n", "3"]
