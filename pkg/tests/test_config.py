"""
Tests for configuration: units, validation, overrides, hashing, settings and
the scenario catalog.
"""
import math

import pytest

from config.scenarios import CATALOG, describe_catalog, get_scenario, scenario_names
from config.settings import get_settings
from models.enums import Scheme, SweepParameter
from schemas.network_config_schema import Decibel, RawNetworkConfig
from services.config_service import (
    apply_config_values,
    build_config,
    config_content_hash,
    default_config,
    parse_overrides,
    validate,
)
from utils.exceptions import (
    AntennaCountError,
    ConfigParseError,
    NonPositiveDensityError,
    NonPositivePowerError,
    PathLossExponentError,
    UnknownConfigKeyError,
    UnknownScenarioError,
    WindowAreaError,
)
from utils.seeding import derive_seed, spawn_streams
from utils.units import db_to_linear, linear_to_db


@pytest.mark.unit
class TestUnits:
    """dB <-> linear conversion"""

    def test_known_values(self):
        assert db_to_linear(20.0) == pytest.approx(100.0)
        assert db_to_linear(-100.0) == pytest.approx(1e-10)
        assert linear_to_db(1e-7) == pytest.approx(-70.0)

    def test_round_trip(self):
        for value in (-80.0, -3.0, 0.0, 17.5):
            assert linear_to_db(db_to_linear(value)) == pytest.approx(value)

    def test_non_positive_rejected(self):
        with pytest.raises(ValueError):
            linear_to_db(0.0)

    def test_decibel_value(self):
        assert Decibel(value=-70.0, unit="dBm").to_linear() == pytest.approx(1e-7)
        level = Decibel.from_linear(100.0, unit="dBm")
        assert level.value == pytest.approx(20.0)
        assert level.unit == "dBm"

    def test_describe_restores_db(self, reference_cfg):
        view = reference_cfg.describe()
        assert view["pcs_dbm"] == pytest.approx(-70.0)
        assert view["si_atten_db"] == pytest.approx(-80.0)


@pytest.mark.unit
class TestValidate:
    """Each invariant names its field"""

    def test_defaults_are_valid(self, reference_cfg):
        assert validate(reference_cfg) == reference_cfg
        assert reference_cfg.p_tx == pytest.approx(100.0)
        assert reference_cfg.pcs == pytest.approx(1e-7)
        assert reference_cfg.lambda_fd == pytest.approx(0.8)

    def test_validate_is_idempotent(self, reference_cfg):
        assert validate(validate(reference_cfg)) == reference_cfg

    def test_raw_config_accepted(self):
        assert validate(RawNetworkConfig()) == default_config()

    def test_alpha_at_two_rejected(self, reference_cfg):
        with pytest.raises(PathLossExponentError) as excinfo:
            validate(reference_cfg.with_overrides(alpha=2.0))
        assert excinfo.value.field == "alpha"

    def test_zero_density_rejected(self, reference_cfg):
        with pytest.raises(NonPositiveDensityError) as excinfo:
            validate(reference_cfg.with_overrides(lambda_a=0.0))
        assert excinfo.value.field == "lambda_a"

    def test_zero_antennas_rejected(self, reference_cfg):
        with pytest.raises(AntennaCountError):
            validate(reference_cfg.with_overrides(n_rx=0))

    def test_non_positive_power_rejected(self, reference_cfg):
        with pytest.raises(NonPositivePowerError) as excinfo:
            validate(reference_cfg.with_overrides(pcs=0.0))
        assert excinfo.value.field == "pcs"

    def test_empty_window_rejected(self, reference_cfg):
        with pytest.raises(WindowAreaError):
            validate(reference_cfg.with_overrides(window=(0.0, 5.0)))


@pytest.mark.unit
class TestOverrides:
    """Config-file values and --set overrides"""

    def test_db_keys_convert_to_linear(self, reference_cfg):
        cfg = apply_config_values(reference_cfg, {"pcs_dbm": "-60", "gamma_db": 10})
        assert cfg.pcs == pytest.approx(1e-6)
        assert cfg.gamma == pytest.approx(10.0)

    def test_aliases_and_composites(self, reference_cfg):
        cfg = apply_config_values(reference_cfg, {"pcs": "-30", "antennas": "8", "window": "5,6"})
        assert cfg.pcs == pytest.approx(1e-3)
        assert (cfg.m_tx, cfg.n_rx) == (8, 8)
        assert cfg.window == (5.0, 6.0)

    def test_unknown_key(self, reference_cfg):
        with pytest.raises(UnknownConfigKeyError):
            apply_config_values(reference_cfg, {"lambda_x": 1})

    def test_unparseable_value(self, reference_cfg):
        with pytest.raises(ConfigParseError):
            apply_config_values(reference_cfg, {"alpha": "steep"})

    def test_non_integer_antennas(self, reference_cfg):
        with pytest.raises(ConfigParseError):
            apply_config_values(reference_cfg, {"m_tx": "2.5"})

    def test_parse_overrides_later_wins(self):
        assert parse_overrides(["alpha=3", "alpha=4"]) == {"alpha": "4"}

    def test_parse_overrides_needs_equals(self):
        with pytest.raises(ConfigParseError):
            parse_overrides(["alpha"])

    def test_build_config_precedence(self):
        cfg = build_config({"alpha": "3.0", "lambda_s": "0.2"}, ["alpha=4.0"], seed=7)
        assert cfg.alpha == 4.0
        assert cfg.lambda_s == 0.2
        assert cfg.seed == 7

    def test_build_config_validates(self):
        with pytest.raises(PathLossExponentError):
            build_config({"alpha": "1.5"})


@pytest.mark.unit
class TestContentHash:
    """Git blob-style config hash"""

    def test_hash_is_stable(self, reference_cfg):
        assert config_content_hash(reference_cfg) == config_content_hash(default_config())
        assert len(config_content_hash(reference_cfg)) == 40

    def test_hash_changes_with_content(self, reference_cfg):
        assert config_content_hash(reference_cfg) != config_content_hash(reference_cfg.with_overrides(seed=1))


@pytest.mark.unit
class TestSeeding:
    """Per-realization seed derivation"""

    def test_derive_seed_is_deterministic(self):
        assert derive_seed(3, 10) == derive_seed(3, 10)
        assert derive_seed(3, 10) != derive_seed(3, 11)
        assert derive_seed(3, 10) != derive_seed(4, 10)

    def test_derive_seed_range(self):
        for k in range(20):
            assert 0 <= derive_seed(0, k) < 2 ** 63

    def test_spawn_streams_reproducible(self):
        first = [g.uniform() for g in spawn_streams(5, 3)]
        second = [g.uniform() for g in spawn_streams(5, 3)]
        assert first == second
        assert len(set(first)) == 3


@pytest.mark.unit
class TestSettings:
    """Environment settings"""

    def test_threads_clamped(self, monkeypatch):
        monkeypatch.setenv("DENSEWLAN_THREADS", "0")
        assert get_settings().threads == 1

    def test_threads_garbage_falls_back(self, monkeypatch):
        monkeypatch.setenv("DENSEWLAN_THREADS", "many")
        assert get_settings().threads == 1

    def test_out_dir(self, monkeypatch):
        monkeypatch.setenv("DENSEWLAN_OUT_DIR", "/tmp/curves")
        assert get_settings().out_dir == "/tmp/curves"


@pytest.mark.unit
class TestScenarioCatalog:
    """Experiment presets"""

    def test_every_family_present(self):
        assert set(scenario_names()) == {
            "cap_vs_density",
            "stp_vs_sinr",
            "stp_vs_density",
            "rate_vs_sinr",
            "rate_vs_sinr_antennas",
            "rate_vs_density",
        }
        assert len(describe_catalog()) == len(CATALOG)

    def test_cap_vs_density_variants(self):
        scenario = get_scenario("cap_vs_density", n_realizations=5)
        assert scenario.sweep_param is SweepParameter.LAMBDA_S
        assert scenario.sweep_values[0] == pytest.approx(0.1)
        assert scenario.sweep_values[-1] == pytest.approx(0.9)
        assert set(scenario.variants) == {"pcs=-30dBm", "pcs=-70dBm"}

    def test_rate_vs_density_base(self):
        scenario = get_scenario("rate_vs_density", n_realizations=5)
        assert scenario.base.gamma == pytest.approx(10.0)
        assert (scenario.base.m_tx, scenario.base.n_rx) == (2, 2)
        assert scenario.schemes == (Scheme.SSF, Scheme.FD_ASSOC_FIXED_PCS, Scheme.JAPO, Scheme.HD_JAPO)

    def test_rate_vs_sinr_antennas_shape(self):
        scenario = get_scenario("rate_vs_sinr_antennas", n_realizations=5)
        assert len(scenario.sweep_values) == 8
        assert len(scenario.schemes) == 2
        assert len(scenario.variants) == 2

    def test_base_seed_follows_config(self, reference_cfg):
        scenario = get_scenario("rate_vs_sinr", n_realizations=5, base=reference_cfg.with_overrides(seed=9))
        assert scenario.base_seed == 9

    def test_unknown_scenario(self):
        with pytest.raises(UnknownScenarioError) as excinfo:
            get_scenario("fig9")
        assert "rate_vs_sinr" in str(excinfo.value)

    def test_sweep_values_finite(self):
        for name in scenario_names():
            scenario = get_scenario(name, n_realizations=1)
            assert all(math.isfinite(v) for v in scenario.sweep_values)
