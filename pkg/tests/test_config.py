import pytest

from g3pd.config import (
    REQUIRED_KEYS,
    ConfigError,
    MorphologyConfig,
    SolverConfig,
    apply_overrides,
    format_config,
    load_config,
    parse_assignments,
)


def test_round_trip(tmp_path):
    text = format_config(SolverConfig(C=0.02), MorphologyConfig())
    path = tmp_path / "c.cfg"
    path.write_text(text)
    solver, morph = load_config(path)
    assert solver == SolverConfig(C=0.02)
    assert morph == MorphologyConfig()


def test_missing_key_named(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("".join(f"{k}=1\n" for k in REQUIRED_KEYS if k != "beta2"))
    with pytest.raises(ConfigError, match="beta2"):
        load_config(path)


@pytest.mark.parametrize("line,msg", [("nope=1", "unknown"), ("C", "key=value"), ("s=2.5", "int")])
def test_bad_lines(line, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_assignments([line])


def test_duplicate_and_comments():
    assert parse_assignments(["# header", "C = 0.1  # inline", ""]) == {"C": 0.1}
    with pytest.raises(ConfigError, match="duplicate"):
        parse_assignments(["C=1", "C=2"])


def test_validation():
    with pytest.raises(ConfigError):
        SolverConfig(beta1=0)
    with pytest.raises(ConfigError):
        MorphologyConfig(s=8)
    with pytest.raises(ConfigError):
        MorphologyConfig(b=9)


def test_overrides():
    solver, morph = apply_overrides(SolverConfig(), MorphologyConfig(), ["C=0.07", "b=5"])
    assert solver.C == 0.07 and morph.b == 5
    with pytest.raises(ConfigError):
        apply_overrides(SolverConfig(), MorphologyConfig(), ["gamma_x=1"])
