import pytest

from gradcontact.config import PRESETS, ConfigError, load_config, preset_text, problem_from


def test_defaults_build_a_problem():
    cfg = load_config()
    prob = problem_from(cfg.values)
    assert prob.body1.alpha == 0.5 and prob.body2.alpha == 0.25 and prob.N == 16


def test_override_precedence(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[problem]\nalpha1 = 0.8\nP = 2\n[numerics]\nN = 12\n")
    cfg = load_config(ini, preset="fig5-a1-0.3", overrides=["P=3", "numerics.eps=1e-5"])
    assert cfg.get("alpha1") == 0.8  # file beats preset
    assert cfg.get("alpha2") == 0.1  # preset beats defaults
    assert cfg.get("P") == 3.0  # --set beats file
    assert cfg.get("N") == 12 and cfg.get("eps") == 1e-5
    assert "preset:fig5-a1-0.3" in cfg.source and "file:" in cfg.source


def test_sweep_section(tmp_path):
    ini = tmp_path / "sweep.ini"
    ini.write_text("[problem]\nalpha1 = 0.7\n[sweep]\nalpha2 = 0.1, 0.2, 0.3\nP = 1, 2\n")
    pts = load_config(ini).points()
    assert len(pts) == 6
    assert {(p["alpha2"], p["P"]) for p in pts} == {(a, P) for a in (0.1, 0.2, 0.3) for P in (1.0, 2.0)}


def test_alpha_shortcuts():
    cfg = load_config(overrides=["alpha1=0.8", "alpha2_ratio=0.25"])
    assert problem_from(cfg.values).body2.alpha == pytest.approx(0.2)
    cfg = load_config(overrides=["alpha=0.35"])
    prob = problem_from(cfg.values)
    assert prob.body1.alpha == prob.body2.alpha == 0.35


@pytest.mark.parametrize(
    "overrides, field",
    [
        (["bogus=1"], "bogus"),
        (["problem.P=abc"], "problem.P"),
        (["alpha1=1.5"], "exponent"),
        (["nu1=0.7"], "Poisson"),
        (["N=0"], "N"),
        (["sweep.tag=a,b"], "tag"),
        (["branch=fast"], "branch"),
        (["Q0=0", "Q1=0"], "Q0"),
        (["noequals"], "key=value"),
    ],
)
def test_field_level_errors(overrides, field):
    with pytest.raises(ConfigError, match=field):
        load_config(overrides=overrides)


def test_sweep_points_validated():
    with pytest.raises(ConfigError):
        load_config(overrides=["sweep.alpha1=0.5,1.2"])


def test_bad_file(tmp_path):
    ini = tmp_path / "bad.ini"
    ini.write_text("[geometry]\nx = 1\n")
    with pytest.raises(ConfigError, match="geometry"):
        load_config(ini)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.ini")


def test_presets_all_load():
    for name in PRESETS:
        cfg = load_config(preset=name)
        assert cfg.points()
        text = preset_text(name)
        assert text.startswith("# ")


def test_preset_text_roundtrip(tmp_path):
    for name in ("fig2a", "fig11b", "fig8-alpha-0.3"):
        ini = tmp_path / f"{name}.ini"
        ini.write_text(preset_text(name))
        a = load_config(preset=name)
        b = load_config(ini)
        assert a.axes == b.axes
        assert {k: v for k, v in a.values.items() if k != "tag"} == {k: v for k, v in b.values.items() if k != "tag"}


def test_reference_preset_names():
    for name in ("fig2a", "fig5", "fig5-a1-0.9", "fig8", "fig8-alpha-0.3", "fig9a", "fig11a", "jkr-ref", "jkr-0.5-0.25"):
        assert name in PRESETS
    assert PRESETS["jkr-ref"] is PRESETS["jkr-0.5-0.25"]
    with pytest.raises(ConfigError):
        load_config(preset="fig99")
