import math

import pytest

from nevlab.cli import (
    ConfigError,
    RunConfig,
    main,
    parse_config,
    run,
    serialize_config,
)

GOOD = """
[curve]
coords = 1; z; z^2

[hyperplanes]
forms = 1, 0, 0; 0, 1, 0; 0, 0, 1; 1, 1, 1

[sweep]
r_min = 2
r_max = 50
r_points = 3
tol = 1e-6
"""


@pytest.fixture
def cfg():
    return parse_config(GOOD)


class TestConfigParsing:
    def test_fields(self, cfg):
        assert cfg.n == 2
        assert len(cfg.hyperplanes) == 4
        assert cfg.r_points == 3

    def test_radii_log_spaced(self, cfg):
        radii = cfg.radii()
        assert radii[0] == pytest.approx(2.0)
        assert radii[-1] == pytest.approx(50.0)
        ratios = [b / a for a, b in zip(radii, radii[1:])]
        assert ratios[0] == pytest.approx(ratios[1], rel=1e-12)

    def test_round_trip(self, cfg):
        assert parse_config(serialize_config(cfg)) == cfg

    @pytest.mark.parametrize(
        "mutation,message",
        [
            ("r_min = 0", "r_min"),
            ("r_min = -3", "r_min"),
            ("r_points = 1", "r_points"),
            ("tol = 0", "tol"),
        ],
    )
    def test_sweep_validation(self, mutation, message):
        key = mutation.split(" =")[0]
        text = "\n".join(
            mutation if line.startswith(key) else line
            for line in GOOD.splitlines()
        )
        with pytest.raises(ConfigError, match=message):
            parse_config(text)

    def test_r_max_must_exceed_r_min(self):
        text = GOOD.replace("r_max = 50", "r_max = 1")
        with pytest.raises(ConfigError, match="r_max"):
            parse_config(text)

    def test_dimension_mismatch(self):
        text = GOOD.replace("1, 0, 0;", "1, 0;")
        with pytest.raises(ConfigError, match="coefficients"):
            parse_config(text)

    def test_grammar_error_reports_position(self):
        text = GOOD.replace("z^2", "z^")
        with pytest.raises(ConfigError, match="column"):
            parse_config(text)

    def test_missing_section(self):
        with pytest.raises(ConfigError, match="sweep"):
            parse_config("[curve]\ncoords = 1; z\n[hyperplanes]\nforms = 1, 0\n")


class TestRun:
    def test_check_ok(self, cfg, capsys):
        assert run("check", cfg) == 0
        out = capsys.readouterr().out
        assert "nondegenerate: yes" in out

    def test_check_degenerate_curve(self, capsys):
        text = GOOD.replace("coords = 1; z; z^2", "coords = 1; z; 2z")
        code = run("check", parse_config(text))
        assert code == 1
        assert "hyperplane" in capsys.readouterr().out

    def test_compute_csv(self, cfg, capsys):
        assert run("compute", cfg, r=10.0) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0].startswith("r,T_1,T_2,T_3,m_0,m_1,m_2,m_3,N_W,N_Ram")
        assert len(lines) == 2
        assert lines[1].split(",")[-1] == "1"

    def test_compute_needs_radius(self, cfg):
        with pytest.raises(ConfigError, match="--r"):
            run("compute", cfg)

    def test_sweep_rows(self, cfg, capsys):
        assert run("sweep", cfg) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert len(lines) == 1 + cfg.r_points

    def test_sweep_to_file(self, cfg, tmp_path):
        path = tmp_path / "sweep.csv"
        assert run("sweep", cfg, out=str(path)) == 0
        text = path.read_text(encoding="utf-8")
        assert text.startswith("r,")
        assert "\r" not in text

    def test_verify_names(self, cfg, capsys):
        for name in ("cartan", "lemma55", "growth", "mcquillan"):
            assert run("verify", cfg, r=5.0, verify_name=name) == 0
            capsys.readouterr()

    def test_verify_prop62_has_level_column(self, cfg, capsys):
        assert run("verify", cfg, r=5.0, verify_name="prop62") == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0].startswith("d,r,")
        assert [line.split(",")[0] for line in lines[1:]] == ["1", "2"]

    def test_verify_identities(self, cfg, capsys):
        assert run("verify", cfg, verify_name="identities") == 0
        out = capsys.readouterr().out
        assert "two_row" in out
        assert ",0\n" not in out  # no failed residuals

    def test_verify_unknown_name(self, cfg):
        with pytest.raises(ConfigError, match="unknown verify"):
            run("verify", cfg, verify_name="nope")

    def test_margin_never_errors(self, capsys):
        # degenerate-looking margins still exit 0 as long as quadrature
        # converges; use a tiny radius where margins can go negative
        cfg = parse_config(GOOD.replace("r_min = 2", "r_min = 0.2")
                           .replace("r_max = 50", "r_max = 0.5"))
        assert run("verify", cfg, verify_name="mcquillan") == 0

    def test_tol_override(self, cfg, capsys):
        assert run("compute", cfg, r=5.0, tol=1e-4) == 0
        capsys.readouterr()
        with pytest.raises(ConfigError, match="tol"):
            run("compute", cfg, r=5.0, tol=-1.0)


class TestMain:
    def test_end_to_end(self, tmp_path, capsys):
        path = tmp_path / "cfg.ini"
        path.write_text(GOOD, encoding="utf-8")
        assert main(["check", "--config", str(path)]) == 0
        capsys.readouterr()
        out = tmp_path / "row.csv"
        assert main(["compute", "--config", str(path), "--r", "10",
                     "--out", str(out)]) == 0
        assert out.read_text(encoding="utf-8").count("\n") == 2

    def test_missing_config_file(self, capsys):
        assert main(["check", "--config", "/does/not/exist.ini"]) == 1
        assert "error" in capsys.readouterr().err

    def test_bad_config_is_exit_one(self, tmp_path, capsys):
        path = tmp_path / "bad.ini"
        path.write_text(GOOD.replace("r_min = 2", "r_min = -1"),
                        encoding="utf-8")
        assert main(["sweep", "--config", str(path)]) == 1
        assert "r_min" in capsys.readouterr().err
