"""Config model, flat-file round trip, command resolution."""

import pytest

from odeverify.config import (
    ExperimentConfig,
    dumps_config,
    loads_config,
    resolve_config,
)
from odeverify.errors import ConfigurationError


class TestRoundTrip:
    CASES = [
        ExperimentConfig(command="run", model="linear-decay", method="euler", dt=0.05, t_end=0.3),
        ExperimentConfig(model="lorenz1990", method="taylor:5", dt=1e-7, dt2=1e-6,
             t_end=50.0, out_interval=0.01, norm="component:0"),
        ExperimentConfig(u0=[2.0, 1.0, 0.0], dt=0.30000000000000004, epsilon=1e-12),
        ExperimentConfig(dt_ladder=[1e-2, 5e-3, 2.5e-3, 1.25e-3], t_probe=0.1,
             ratio=10, max_levels=7),
        ExperimentConfig(scale="paper", threshold=1e-2, growth_floor=1e-12,
             growth_ceiling=1e-2, out_dir="some/dir"),
    ]

    @pytest.mark.parametrize("cfg", CASES)
    def test_dumps_loads_identity(self, cfg):
        assert loads_config(dumps_config(cfg)) == cfg

    def test_floats_survive_exactly(self):
        # shortest-repr rendering must round-trip the exact binary64
        cfg = ExperimentConfig(dt=0.1 + 0.2, epsilon=5e-324, t_end=1e308)
        again = loads_config(dumps_config(cfg))
        assert again.dt == cfg.dt
        assert again.epsilon == 5e-324
        assert again.t_end == 1e308


class TestParsing:
    def test_comments_and_blanks_ignored(self):
        text = "# hello\n\nmodel = linear-decay\n  \ndt = 0.05\n"
        cfg = loads_config(text)
        assert cfg.model == "linear-decay"
        assert cfg.dt == 0.05

    def test_u0_comma_list(self):
        assert loads_config("u0 = 2,1,0\n").u0 == [2.0, 1.0, 0.0]

    def test_ladder_comma_list(self):
        assert loads_config("dt_ladder = 1e-2,5e-3\n").dt_ladder == [0.01, 0.005]

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError):
            loads_config("tdelta = 0.05\n")

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigurationError, match="key = value"):
            loads_config("just some words\n")

    def test_bad_float_rejected(self):
        with pytest.raises(ConfigurationError):
            loads_config("dt = fast\n")


class TestResolve:
    def test_run_requires_model(self):
        with pytest.raises(ConfigurationError, match="model"):
            resolve_config(ExperimentConfig(method="euler", dt=0.1, t_end=1.0), "run")

    def test_run_out_interval_defaults_to_dt(self):
        cfg = resolve_config(
            ExperimentConfig(model="linear-decay", method="euler", dt=0.05, t_end=0.3), "run"
        )
        assert cfg.out_interval == 0.05
        assert cfg.norm == "inf"
        assert cfg.command == "run"

    def test_fig1_defaults(self):
        cfg = resolve_config(ExperimentConfig(), "fig1")
        assert (cfg.model, cfg.method) == ("linear-decay", "euler")
        assert (cfg.dt, cfg.dt2, cfg.t_end) == (0.05, 0.06, 0.6)

    def test_fig2_desk_pair(self):
        cfg = resolve_config(ExperimentConfig(), "fig2")
        assert cfg.scale == "desk"
        assert (cfg.dt, cfg.dt2) == (1e-4, 1e-5)
        assert (cfg.t_end, cfg.out_interval) == (50.0, 0.01)
        assert cfg.norm == "component:0"
        assert cfg.threshold == 1e-2

    def test_fig2_paper_pair(self):
        cfg = resolve_config(ExperimentConfig(scale="paper"), "fig2")
        assert (cfg.dt, cfg.dt2) == (1e-6, 1e-7)

    def test_fig2_bad_scale(self):
        with pytest.raises(ConfigurationError, match="scale"):
            resolve_config(ExperimentConfig(scale="huge"), "fig2")

    def test_fig2_partial_override_rejected(self):
        with pytest.raises(ConfigurationError, match="both dt and dt2"):
            resolve_config(ExperimentConfig(dt=1e-3), "fig2")

    def test_compare_default_methods(self):
        cfg = resolve_config(
            ExperimentConfig(model="lorenz1990", dt=1e-4, t_end=1.0), "compare"
        )
        assert (cfg.method, cfg.method2) == ("taylor:5", "rk4")

    def test_refine_defaults(self):
        cfg = resolve_config(
            ExperimentConfig(model="linear-decay", method="euler", dt=0.1, t_end=1.0),
            "refine",
        )
        assert (cfg.ratio, cfg.max_levels, cfg.epsilon) == (2, 20, 1e-6)

    def test_order_default_ladder(self):
        cfg = resolve_config(
            ExperimentConfig(model="linear-decay", method="euler"), "order"
        )
        assert cfg.dt_ladder == [1e-2, 5e-3, 2.5e-3, 1.25e-3]
        assert cfg.t_probe == 0.1

    def test_unknown_command(self):
        with pytest.raises(ConfigurationError, match="unknown command"):
            resolve_config(ExperimentConfig(), "simulate")

    def test_resolution_is_idempotent(self):
        cfg = resolve_config(ExperimentConfig(), "fig2")
        assert resolve_config(cfg, "fig2") == cfg
