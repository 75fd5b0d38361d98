import pytest

from ruinlab import Exponential, LogNormal, RiskModel, SimConfig, check_admissible, estimate_psi
from ruinlab.errors import ConfigError
from ruinlab.tables import table_spec
from ruinlab.tilts import LinearTilt, tilt_from_config
from ruinlab.lundberg import xi_hat


def test_all_presets_resolve_to_admissible_tilts():
    for name in ("table1", "table2", "table3", "table4", "table5"):
        spec = table_spec(name)
        assert spec.u_grid == tuple(sorted(spec.u_grid))
        for col in spec.columns:
            pair = tilt_from_config(col.tilt_config, col.model)
            assert check_admissible(pair).in_c_p, f"{name}/{col.label}"
            assert col.model.safety_loading == pytest.approx(0.5, rel=1e-12)


def test_unknown_table_name():
    with pytest.raises(ConfigError):
        table_spec("table9")


def test_exact_columns_only_where_closed_forms_exist():
    assert table_spec("table1").columns[0].exact is not None
    assert table_spec("table5").columns[0].exact is not None
    for name in ("table2", "table3", "table4"):
        assert all(col.exact is None for col in table_spec(name).columns)


def test_lognormal_high_volatility_magnitude():
    # LN(0,3/2) claims at u=50: the estimate sits near 1.6e-01
    model = RiskModel.from_safety_loading(LogNormal(0.0, 1.5), Exponential(1.0), 0.5)
    pair = LinearTilt(model, 1.95 * xi_hat(model))
    rep = estimate_psi(model, pair, SimConfig(u=50.0, k=20_000, seed=77))
    assert 0.08 < rep.estimate < 0.32, rep.estimate
