"""
配置加载、校验、覆盖和环境变量
"""

from pathlib import Path

import pytest

from conftest import small_config_data
from lightqrng.config.settings import (
    SESSION_SEED_ORDER,
    PipelineConfig,
    apply_overrides,
    build_config,
    load_config,
    parse_override,
)
from lightqrng.domain.exceptions import ConfigError
from lightqrng.domain.models.acquisition import ConfigurationTag

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


class TestDefaults:
    def test_minimal_config(self):
        config = build_config({"extractor": {"seed_source": "os"}})
        assert config.quantizer.bits == 12
        assert config.entropy.epsilon == 1e-10
        assert config.entropy.epsilon_hash == 1e-20
        assert config.extractor.input_len == 900
        assert config.extractor.output_len == 200
        assert config.battery.alpha == 0.01
        assert not config.sessions.sweep.enabled

    def test_seed_source_required(self):
        with pytest.raises(ConfigError, match="seed_source"):
            build_config({"extractor": {"input_len": 900}})
        with pytest.raises(ConfigError):
            build_config({})

    @pytest.mark.parametrize("name", ["default.toml", "calibrated_12bit.toml"])
    def test_shipped_configs_load(self, name):
        config = load_config(CONFIG_DIR / name)
        assert isinstance(config, PipelineConfig)


class TestValidation:
    @pytest.mark.parametrize(
        "section, values",
        [
            ("quantizer", {"bits": 1}),
            ("quantizer", {"bits": 17}),
            ("quantizer", {"range": 0}),
            ("noise", {"gain": -1}),
            ("noise", {"gain": 0}),
            ("sessions", {"sample_count": 0}),
            ("entropy", {"epsilon": 0}),
            ("entropy", {"epsilon": 2}),
            ("entropy", {"epsilon_hash": 1}),
            ("extractor", {"seed_source": "dice"}),
            ("extractor", {"seed_source": "hex"}),
            ("extractor", {"seed_source": "file"}),
            ("extractor", {"input_len": 100, "output_len": 200}),
            ("battery", {"alpha": 1.0}),
            ("noise", {"calibrate_lo_on_shannon": 4.5}),
        ],
    )
    def test_rejects(self, section, values):
        with pytest.raises(ConfigError):
            build_config(small_config_data(**{section: values}))

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="colour"):
            build_config(small_config_data(quantizer={"colour": "blue"}))

    def test_duplicate_output_paths(self):
        data = small_config_data(output={"bits_file": "report.json"})
        with pytest.raises(ConfigError, match="distinct"):
            build_config(data)

    def test_epsilon_one_is_allowed(self):
        assert build_config(small_config_data(entropy={"epsilon": 1.0})).entropy.epsilon == 1.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "nope.toml")

    def test_bad_toml(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("[quantizer\nbits = 8\n")
        with pytest.raises(ConfigError):
            load_config(path)


class TestOverrides:
    @pytest.mark.parametrize(
        "item, path, value",
        [
            ("quantizer.bits=8", ["quantizer", "bits"], 8),
            ("entropy.epsilon=1e-6", ["entropy", "epsilon"], 1e-6),
            ("plots.enabled=true", ["plots", "enabled"], True),
            ("sessions.sweep.gains=[0.5, 1.0]", ["sessions", "sweep", "gains"], [0.5, 1.0]),
            ("extractor.seed_source=derived", ["extractor", "seed_source"], "derived"),
            ('output.run_dir="a=b"', ["output", "run_dir"], "a=b"),
        ],
    )
    def test_parse(self, item, path, value):
        assert parse_override(item) == (path, value)

    @pytest.mark.parametrize("item", ["quantizer.bits", "=3", "a..b=1"])
    def test_parse_invalid(self, item):
        with pytest.raises(ConfigError):
            parse_override(item)

    def test_apply(self):
        data = apply_overrides({"quantizer": {"bits": 12}}, ["quantizer.bits=8", "noise.gain=0.5"])
        assert data == {"quantizer": {"bits": 8}, "noise": {"gain": 0.5}}

    def test_apply_into_scalar(self):
        with pytest.raises(ConfigError):
            apply_overrides({"quantizer": 3}, ["quantizer.bits=8"])

    def test_load_with_overrides_and_seed(self):
        config = load_config(
            CONFIG_DIR / "default.toml", overrides=["quantizer.bits=10"], seed=99
        )
        assert config.quantizer.bits == 10
        assert config.sessions.seed == 99


class TestEnvironment:
    def test_env_fills_missing_keys(self, monkeypatch):
        monkeypatch.setenv("QRNG_LOGGING__LEVEL", "DEBUG")
        monkeypatch.setenv("QRNG_SESSIONS__SEED", "77")
        config = build_config({"extractor": {"seed_source": "os"}})
        assert config.logging.level == "DEBUG"
        assert config.sessions.seed == 77

    def test_explicit_values_win(self, monkeypatch):
        monkeypatch.setenv("QRNG_QUANTIZER__BITS", "10")
        config = build_config(small_config_data())
        assert config.quantizer.bits == 8


class TestDerivedValues:
    def test_echo_has_no_run_dir(self, small_config):
        echo = small_config.echo()
        assert "run_dir" not in echo["output"]
        assert echo["quantizer"] == {"range": 4.0, "bits": 8}
        assert echo["extractor"]["seed_source"] == "derived"

    def test_session_seeds(self, small_config):
        seeds = small_config.session_seeds()
        assert list(seeds) == list(SESSION_SEED_ORDER)
        assert len(set(seeds.values())) == 3
        assert seeds == small_config.session_seeds()
        other = build_config(small_config_data(sessions={"seed": 1235}))
        assert other.session_seeds() != seeds

    def test_session_config(self, small_config):
        cfg = small_config.session_config(ConfigurationTag.LO_ON)
        assert cfg.sample_count == 20_000
        assert cfg.quantizer.bits == 8
        assert cfg.rng_seed == small_config.session_seeds()[ConfigurationTag.LO_ON]
        assert cfg.sweep_gains == ()
        sweep = small_config.session_config(ConfigurationTag.LO_SWEEP)
        assert sweep.sweep_gains == (0.25, 0.5, 0.75, 1.0)

    def test_noise_model_direct(self, small_config):
        model = small_config.build_noise_model()
        assert model.gain == 1.0
        assert model.electronic_variance == 0.1

    def test_noise_model_calibrated(self):
        config = build_config(
            small_config_data(
                quantizer={"bits": 12},
                noise={"calibrate_lo_on_shannon": 4.518, "calibrate_lo_off_shannon": 2.520},
            )
        )
        model = config.build_noise_model()
        assert model.gain > 0
        assert model.electronic_variance > 0

    def test_entropy_params(self, small_config):
        params = small_config.entropy_params(small_config.build_noise_model())
        assert params.gain == 1.0
        assert params.epsilon == 1e-10
        histogram_config = build_config(small_config_data(entropy={"width_from": "histogram"}))
        assert histogram_config.entropy_params(histogram_config.build_noise_model()).gain is None

    def test_output_path(self, small_config, tmp_path):
        assert small_config.output.path("report_file") == Path(small_config.output.run_dir) / "report.json"
        assert small_config.output.path("bits_file", tmp_path) == tmp_path / "extracted.bin"
