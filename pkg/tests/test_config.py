import pytest

from cohabitat.config import (ConfigError, config_to_scenario,
                              load_scenario_file, scenario_to_config)
from cohabitat.experiments import scenario, scenario_names


class TestRoundTrip:
    @pytest.mark.parametrize("name", scenario_names())
    def test_registry_scenarios_survive_a_round_trip(self, name):
        spec = scenario(name)
        assert config_to_scenario(scenario_to_config(spec)) == spec

    def test_file_round_trip(self, tmp_path):
        spec = scenario("exp5_tight")
        path = tmp_path / "s.ini"
        path.write_text(scenario_to_config(spec), encoding="utf-8")
        assert load_scenario_file(str(path)) == spec


def mutate(text: str, old: str, new: str) -> str:
    assert old in text
    return text.replace(old, new, 1)


class TestErrors:
    BASE = scenario_to_config(scenario("exp1"))

    def test_unparseable_text(self):
        with pytest.raises(ConfigError):
            config_to_scenario("not ini at all [[[")

    def test_missing_section(self):
        broken = self.BASE.replace("[grid]", "[grud]")
        with pytest.raises(ConfigError, match="missing"):
            config_to_scenario(broken)

    def test_bad_boolean(self):
        broken = mutate(self.BASE, "coupling = true", "coupling = yes")
        with pytest.raises(ConfigError, match="coupling"):
            config_to_scenario(broken)

    def test_bad_number(self):
        broken = mutate(self.BASE, "seed = 0", "seed = zero")
        with pytest.raises(ConfigError, match="seed"):
            config_to_scenario(broken)

    def test_unknown_profile(self):
        broken = mutate(self.BASE, "humans = H_A", "humans = H_Z")
        with pytest.raises(ConfigError, match="H_Z"):
            config_to_scenario(broken)

    def test_mismatched_band_list(self):
        broken = mutate(self.BASE, "bands = 0.5", "bands = 0.5,0.25")
        with pytest.raises(ConfigError, match="length"):
            config_to_scenario(broken)

    def test_domain_validation_still_applies(self):
        broken = mutate(self.BASE, "gamma = 0.9", "gamma = 1.5")
        with pytest.raises(ConfigError):
            config_to_scenario(broken)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_scenario_file(str(tmp_path / "absent.ini"))


class TestOverrides:
    def test_band_override_propagates(self):
        text = mutate(self.reference(), "bands = 0.5", "bands = 0.3")
        spec = config_to_scenario(text)
        assert spec.humans[0].band_halfwidth == 0.3

    def test_learner_section_applies_to_all_occupants(self):
        text = scenario_to_config(scenario("exp4"))
        text = mutate(text, "alpha = 0.2", "alpha = 0.4")
        spec = config_to_scenario(text)
        assert all(h.learner.alpha == 0.4 for h in spec.humans)

    @staticmethod
    def reference() -> str:
        return scenario_to_config(scenario("exp1"))
