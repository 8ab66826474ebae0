import json

import pytest

from stortho import suites
from stortho.cli import main
from stortho.config import ConfigError, InstanceConfig, load_config, parse_config_text, parse_inline


def test_config_text(tmp_path):
    text = "ring = Z/4  # local ring\nell = 3\nr = 1\nq0 = 1\nseed = 5\nsuites = orbit, tc\n"
    cfg = parse_config_text(text)
    assert cfg.ring == "Z/4" and cfg.q0 == (1,) and cfg.seed == 5 and cfg.suites == ("orbit", "tc")
    path = tmp_path / "c.cfg"
    path.write_text(text)
    assert load_config(str(path)) == cfg
    assert load_config(None) == InstanceConfig()
    assert parse_inline("ring=Z/3;ell=2").space.n == 3


@pytest.mark.parametrize("bad", ["ring = F_2", "colour = red", "ell = three", "justtext", "ell = 0"])
def test_config_rejects(bad):
    with pytest.raises(ConfigError):
        parse_config_text(bad)


def test_rank_guard():
    with pytest.raises(ConfigError):
        suites.verify_star(parse_inline("ring=Z/2;ell=2"))
    with pytest.raises(SystemExit) as exc:
        main(["verify-star", "--config", "ring=Z/2;ell=2"])
    assert exc.value.code == 2


def test_esd_lift_rejects_non_orthogonal_pair():
    with pytest.raises(SystemExit) as exc:
        main(["esd-lift", "--config", "ring=Z/2;ell=3", "--u", "e1", "--v", "e-1"])
    assert exc.value.code == 2


def test_minimal_identity_run(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify-lemma1", "--json", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] and rep["seed"] == 0 and "timings" in rep


def test_orbit_dump(capsys):
    assert main(["orbit", "--start", "e1", "--dump"]) == 0
    rep = json.loads(capsys.readouterr().out)
    table = rep["results"]["orbit"]["table"]
    assert len(table) == 35
    assert all(step[0] in ("long", "short") for e in table for step in e["witness"])


def test_tc_from_file(tmp_path, capsys):
    pres = tmp_path / "s3.txt"
    pres.write_text("g0 g0\ng1 g1\ng0 g1 g0 g1 g0 g1\n")
    dump = tmp_path / "t.bin"
    assert main(["tc", "--presentation", str(pres), "--dump", str(dump)]) == 0
    assert json.loads(capsys.readouterr().out)["results"]["tc"]["order"] == 6
    assert dump.stat().st_size == 6 * 4 * 4


def test_overflow_is_a_failure(tmp_path, capsys):
    pres = tmp_path / "free.txt"
    pres.write_text("# generators: 2\ng0 g0\n")
    assert main(["tc", "--presentation", str(pres), "--max-cosets", "40"]) == 1
    assert "Overflow" in json.loads(capsys.readouterr().out)["error"]


def test_all_with_selection(capsys):
    assert main(["all", "--config", "ring=Z/2;ell=3;suites=orbit,verify-lemma1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["order"] == ["verify-lemma1", "orbit"] and set(rep["results"]) == set(rep["order"])


def test_unknown_suite_rejected():
    with pytest.raises(SystemExit):
        main(["all", "--config", "ring=Z/2;suites=nonsense"])
