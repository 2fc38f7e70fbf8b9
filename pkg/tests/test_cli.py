import json
import subprocess
import sys

import jsonschema
import pytest

from dpflex import cli, reporting
from dpflex.errors import CapExceeded, ConfigError
from dpflex.lattice import new_surface

COLLINEAR = {"degree": 6, "collinear_triples": [[1, 2, 3]]}


@pytest.fixture
def cache(tmp_path):
    return str(tmp_path / "cache")


@pytest.fixture
def collinear(tmp_path):
    p = tmp_path / "collinear.json"
    p.write_text(json.dumps(COLLINEAR))
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    rep = json.loads(out)
    jsonschema.validate(rep, reporting.load_schema("report"))
    return rep


class TestConfig:
    def test_schema_accepts_examples(self):
        schema = reporting.load_schema("config")
        for cfg in (COLLINEAR, {"degree": 1, "cusp_cubics": [[1, [2, 3, 4, 5, 6, 7, 8]]]},
                    {"degree": 2, "flags": {"admits_cuspidal_anticanonical": False}}):
            jsonschema.validate(cfg, schema)
            reporting.parse_config(cfg)

    @pytest.mark.parametrize("data, where", [
        ({"degree": 9}, "config.degree"),
        ({"degree": 3, "collinear_triples": [[1, 2]]}, "config.collinear_triples[0]"),
        ({"degree": 3, "infinitely_near": [[2, "a"]]}, "config.infinitely_near[0][1]"),
        ({"degree": 3, "colinear_triples": []}, "config"),
        ([], "config"),
    ])
    def test_field_addressed_errors(self, data, where):
        with pytest.raises(ConfigError) as exc:
            reporting.parse_config(data)
        assert str(exc.value).startswith(where + ":")

    def test_degree_contradiction(self, collinear):
        with pytest.raises(ConfigError, match="contradicts"):
            reporting.read_config(collinear, 5)

    def test_malformed_json_has_line(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"degree": 3,\n "collinear_triples": [}')
        with pytest.raises(ConfigError, match=r"bad\.json:2:"):
            reporting.read_config(str(p), None)


class TestCommands:
    def test_surface(self, capsys, cache):
        rep = report(capsys, "surface", "--degree", "3", "--cache-dir", cache)
        assert rep["surface"]["curve_counts"] == {"minus_one": 27, "minus_two": 0}
        assert rep["surface"]["anticanonical"] == [3, -1, -1, -1, -1, -1, -1]
        assert len(rep["surface"]["cone_types"]) == 16

    def test_curves(self, capsys, collinear, cache):
        rep = report(capsys, "curves", "--config", collinear, "--cache-dir", cache)
        assert rep["curves"]["minus_two"] == [[1, -1, -1, -1]]
        assert sorted(rep["curves"]["minus_one"]) == [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]]

    def test_collinear_ample(self, capsys, collinear, cache):
        rep = report(capsys, "cones", "--config", collinear, "--cone", "Ample", "--cache-dir", cache)
        assert sorted(rep["cone"]["rays"]) == sorted([[1, 0, 0, 0], [1, -1, 0, 0], [1, 0, -1, 0],
                                                      [1, 0, 0, -1]])

    def test_check_cubic(self, capsys, cache):
        rep = report(capsys, "check", "--degree", "3", "--construction", "cuspcubic:last4",
                     "--cone", "B(3)", "--cache-dir", cache)
        assert rep["collection"]["verdicts"] == {"polar": False, "complete": True,
                                                 "transversal": True, "generically_flexible": False}
        assert rep["collection"]["compatible_representatives"] == ["B(2)", "C(2)"]

    def test_check_quartic(self, capsys, cache):
        rep = report(capsys, "check", "--degree", "4", "--construction", "cuspcubic:last4",
                     "--cone", "B(1)", "--cache-dir", cache)
        assert rep["collection"]["verdicts"]["generically_flexible"] is True

    def test_check_tangent_spec(self, capsys, cache):
        rep = report(capsys, "check", "--degree", "1", "--no-cache", "--cone", "C(P)",
                     "--construction", "tangent:conic=4..8,tangent=3,groups=[1|2]")
        (U,) = rep["collection"]["cylinders"]
        assert U["construction"] == "tangent" and U["transversal"] is True
        assert len(rep["collection"]["pol"]["rays"]) == 12

    def test_check_volume(self, capsys, cache):
        rep = report(capsys, "check", "--degree", "4", "--construction", "cuspcubic:last4",
                     "--cone", "B(1)", "--volume", "--cache-dir", cache)
        num, den = rep["collection"]["coverage"]
        assert 0 < num <= den

    def test_cover(self, capsys, cache):
        rep = report(capsys, "cover", "--degree", "6", "--construction", "lines",
                     "--cone", "NE", "--reduce", "--cache-dir", cache)
        col = rep["collection"]
        assert col["constructions"] == ["lines"]
        assert col["options"] == {"reduce": True, "polar_filter": False, "volume": False}
        assert 1 <= col["size"] <= 6

    def test_text_output(self, capsys, cache):
        code, out, _ = run(capsys, "check", "--degree", "3", "--construction", "cuspcubic:last4",
                           "--cone", "B(3)", "--cache-dir", cache)
        assert code == 0
        assert "polar: False" in out and "compatible representatives: B(2) C(2)" in out
        assert "very ampleness" in out


class TestExitCodes:
    @pytest.mark.parametrize("argv, name", [
        (["surface", "--degree", "9"], "ConfigError"),
        (["check", "--degree", "6", "--construction", "cuspcubic:last4", "--cone", "B(1)"],
         "WrongDegree"),
        (["check", "--degree", "3", "--construction", "spiral:1", "--cone", "B(1)"], "ConfigError"),
        (["cones", "--degree", "3", "--cone", "B(9)"], "UnknownLabel"),
        (["check", "--degree", "3", "--construction", "lines:1", "--cone", "[[1,0]]"],
         "DimensionMismatch"),
        (["surface"], "ConfigError"),
    ])
    def test_invalid_input(self, capsys, argv, name):
        code, out, err = run(capsys, *argv, "--no-cache")
        assert code == 2 and out == ""
        assert err.startswith(f"dpflex: error: {name}:")

    def test_cap(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise CapExceeded("too many pieces")
        monkeypatch.setattr(reporting, "cmd_surface", boom)
        code, _, err = run(capsys, "surface", "--degree", "3", "--no-cache")
        assert code == 3 and "CapExceeded" in err

    def test_subprocess_entry_point(self):
        res = subprocess.run([sys.executable, "-m", "dpflex.cli", "surface", "--degree", "0",
                              "--no-cache"], capture_output=True, text=True)
        assert res.returncode == 2 and "error" in res.stderr


class TestDeterminism:
    ARGS = [
        ["surface", "--degree", "2"],
        ["curves", "--degree", "4"],
        ["cones", "--degree", "5"],
        ["check", "--degree", "3", "--construction", "cuspcubic:last4", "--cone", "B(3)", "--volume"],
        ["cover", "--degree", "5", "--construction", "cuspcubic", "--cone", "B(1)", "--polar-filter"],
    ]

    @pytest.mark.parametrize("argv", ARGS, ids=lambda a: a[0])
    @pytest.mark.parametrize("fmt", ["json", "text"])
    def test_byte_identical_and_cache_parity(self, capsys, tmp_path, argv, fmt):
        cache = str(tmp_path / "c")
        outs = []
        for extra in (["--cache-dir", cache], ["--cache-dir", cache], ["--no-cache"]):
            code, out, _ = run(capsys, *argv, *extra, "--format", fmt)
            assert code == 0
            outs.append(out)
        assert outs[0] == outs[1] == outs[2]

    def test_cache_written_and_reused(self, tmp_path, capsys):
        cache = tmp_path / "c"
        run(capsys, "cover", "--degree", "5", "--construction", "lines", "--cone", "B(1)",
            "--cache-dir", str(cache))
        (entry,) = cache.glob("curves-*.json")
        data = json.loads(entry.read_text())
        assert len(data["minus_one"]) == 10 and len(data["contractions"]) == 5

    def test_damaged_cache_ignored(self, tmp_path, capsys):
        cache = tmp_path / "c"
        _, first, _ = run(capsys, "curves", "--degree", "4", "--cache-dir", str(cache))
        (entry,) = cache.glob("curves-*.json")
        entry.write_text('{"minus_one": [[1, 2]], "minus_two": []}')
        _, second, _ = run(capsys, "curves", "--degree", "4", "--cache-dir", str(cache))
        assert first == second


class TestRoundTrip:
    def test_pol_rays_reingested(self, capsys, tmp_path):
        base = ["check", "--degree", "1", "--no-cache", "--construction", "lines:7",
                "--construction", "lines:8"]
        first = report(capsys, *base, "--cone", "C(P)")
        rays = first["collection"]["pol"]["rays"]
        again = report(capsys, *base, "--cone", json.dumps(rays))
        same = report(capsys, *base, "--cone", json.dumps(rays))
        assert again["collection"]["verdicts"] == same["collection"]["verdicts"]
        assert again["collection"]["verdicts"]["generically_flexible"] is True
        assert sorted(again["cone"]["rays"]) == sorted(rays)

    def test_cone_rays_reingested(self, capsys, tmp_path):
        base = ["check", "--degree", "3", "--no-cache", "--construction", "cuspcubic:last4"]
        first = report(capsys, *base, "--cone", "B(2)")
        p = tmp_path / "cone.json"
        p.write_text(json.dumps(first["cone"]["rays"]))
        second = report(capsys, *base, "--cone", f"@{p}")
        assert second["collection"]["verdicts"] == first["collection"]["verdicts"]

    def test_generic_file(self, capsys, tmp_path):
        S = new_surface(6, collinear_triples=[[1, 2, 3]])
        spec = {"complement": [list(e) for e in S.E],
                "support": [list(e) for e in S.E] + [list(S.L - e) for e in S.E],
                "fiber": list(S.L), "transversal": True}
        g = tmp_path / "generic.json"
        g.write_text(json.dumps(spec))
        c = tmp_path / "cfg.json"
        c.write_text(json.dumps(COLLINEAR))
        rep = report(capsys, "check", "--config", str(c), "--no-cache",
                     "--construction", f"generic:@{g}", "--cone", "Ample")
        assert rep["collection"]["verdicts"]["generically_flexible"] is True
