import math

import pytest

from superfluid_om.acoustics import AcousticModeIndex
from superfluid_om.config import RunConfig, parse_config
from superfluid_om.errors import OptimizationError, ValidationError
from superfluid_om.explorer import (
    SweepAxis,
    SweepCapError,
    golden_section_max,
    grid_then_golden,
    optimize_1d,
    sweep,
    sweep_from_config,
)
from superfluid_om.pipeline import evaluate

CFG = RunConfig()


def test_axis_invariants():
    with pytest.raises(ValidationError):
        SweepAxis("c4", (238.0, 200.0))
    with pytest.raises(ValidationError):
        SweepAxis("c4", (238.0, float("inf")))
    with pytest.raises(ValidationError):
        SweepAxis("c4", (-1.0,))
    with pytest.raises(ValidationError):
        SweepAxis("pressure", (1.0,))
    assert SweepAxis.grid("temperature", 0.01, 0.1, 3, "log").values == pytest.approx((0.01, 0.1 ** 1.5, 0.1))


def test_single_point_equals_pipeline():
    result = sweep([SweepAxis("c4", (238.0,))], CFG, "fixed", "g0_magnitude")
    direct = evaluate(CFG, AcousticModeIndex(0, 1, 2))
    row = result.rows[0]
    for key, value in direct.items():
        assert row[key] == value, key
    assert result.best_index == 0


def test_c4_axis_scales_frequency():
    result = sweep([SweepAxis("c4", (238.0, 357.0))], CFG, "fixed", "g0_magnitude")
    f0, f1 = (r["acoustic_frequency_hz"] for r in result.rows)
    assert f1 / f0 == pytest.approx(1.5, rel=1e-15)


def test_temperature_axis_q_decreasing():
    axis = SweepAxis.grid("temperature", 0.005, 0.5, 12, "log")
    qs = [r["q_three_phonon"] for r in sweep([axis], CFG, "fixed", "q_total").rows]
    assert all(b < a for a, b in zip(qs, qs[1:]))


def test_axis_major_order_and_row_count():
    axes = [SweepAxis("radius", (0.017, 0.018)), SweepAxis("c4", (238.0, 250.0, 260.0))]
    result = sweep(axes, CFG, "fixed", "sideband_margin")
    assert len(result.rows) == 6
    assert [(r["radius"], r["c4"]) for r in result.rows] == [
        (0.017, 238.0), (0.017, 250.0), (0.017, 260.0), (0.018, 238.0), (0.018, 250.0), (0.018, 260.0)
    ]


def test_best_row_is_first_argmax():
    result = sweep([SweepAxis("temperature", (0.01, 0.02, 0.05))], CFG, "fixed", "g0_magnitude")
    # g0 does not depend on temperature: all rows tie, the earliest wins.
    assert len({r["fom"] for r in result.rows}) == 1
    assert result.best_index == 0
    result = sweep([SweepAxis("c4", (200.0, 238.0, 300.0))], CFG, "fixed", "sideband_margin")
    assert result.best_index == 2
    assert result.best["fom"] == max(r["fom"] for r in result.rows)


def test_all_selection_row_count():
    axis = SweepAxis("fmax", (3100.0, 6100.0))
    result = sweep([axis], CFG, "all", "q_total")
    assert [(r["fmax"], r["acoustic_index"]) for r in result.rows] == [
        (3100.0, "0,0,1"),
        (6100.0, "0,0,1"), (6100.0, "1,1,0"), (6100.0, "1,1,1"), (6100.0, "0,0,2"),
    ]
    # Against TE011 the m = 1 modes do not couple.
    assert result.rows[2]["g0_rad_s"] == 0.0


def test_track_selection_and_flagging():
    axis = SweepAxis("c4", (238.0, 300.0))
    result = sweep([axis], CFG, "track", "g0_magnitude", target_hz=10138.0)
    assert result.rows[0]["acoustic_index"] == "0,1,2"
    assert result.rows[0]["error"] is None
    # At 300 m/s nothing lies within 1% of 10138 Hz.
    assert any(r.get("error") for r in result.rows[1:])
    assert result.best_index == 0


def test_failing_row_is_flagged_not_fatal():
    axis = SweepAxis("temperature", (0.1, 0.7))
    result = sweep([axis], CFG, "fixed", "q_total")
    assert result.rows[0]["error"] is None
    assert "DomainError" in result.rows[1]["error"]


def test_cap():
    with pytest.raises(SweepCapError) as err:
        sweep([SweepAxis.grid("c4", 200, 300, 11), SweepAxis.grid("radius", 0.01, 0.02, 11)], CFG, cap=100)
    assert err.value.required == 121
    assert "121" in str(err.value)


def test_sweep_byte_identical():
    axes = [SweepAxis.grid("length", 0.03, 0.05, 4)]
    a = sweep(axes, CFG, "fixed", "g0_magnitude")
    b = sweep(axes, CFG, "fixed", "g0_magnitude")
    assert a.to_csv() == b.to_csv()
    assert a.best_json() == b.best_json()
    header = a.to_csv().splitlines()[0].split(",")
    assert header[0] == "length" and header[-2:] == ["fom", "error"]


def test_sweep_from_config():
    cfg = parse_config("""
[sweep]
fom = "sideband_margin"
[[sweep.axes]]
parameter = "c4"
values = [238.0, 357.0]
""")
    result = sweep_from_config(cfg)
    assert len(result.rows) == 2 and result.best_index == 1


def test_golden_quadratic():
    p0 = 0.37
    x, y = golden_section_max(lambda p: -((p - p0) ** 2), 0.0, 1.0, rtol=1e-6)
    assert x == pytest.approx(p0, abs=1e-6)
    x, _ = optimize_1d("length", (0.1, 1.0), CFG, lambda p: -((p - p0) ** 2))
    assert abs(x - p0) <= 1e-4 * 1.0


def test_grid_then_golden_multimodal_never_worse():
    def f(x):
        return math.sin(7 * x) + 0.3 * math.cos(31 * x)

    xs = [i / 31 * 3 for i in range(32)]
    best_grid = max(f(x) for x in xs)
    x, y = grid_then_golden(f, 0.0, 3.0, grid=32)
    assert y >= best_grid
    assert f(x) == y


def test_degenerate_interval():
    assert grid_then_golden(lambda x: x, 0.5, 0.5) == (0.5, 0.5)
    x, _ = optimize_1d("length", (0.04, 0.04), CFG, "sideband_margin")
    assert x == 0.04


def test_nonfinite_objective():
    with pytest.raises(OptimizationError) as err:
        grid_then_golden(lambda x: float("nan") if x > 0.5 else x, 0.0, 1.0)
    assert err.value.parameter_value > 0.5


def test_optimize_sideband_margin_lower_bound():
    x, value = optimize_1d("length", (0.02, 0.08), CFG, "sideband_margin", acoustic_index=AcousticModeIndex(0, 0, 2))
    assert x == 0.02
    row = evaluate(CFG.replace_section("geometry", length=0.02), AcousticModeIndex(0, 0, 2))
    assert value == row["sideband_margin"]


def test_optimize_rejects_bad_parameter():
    with pytest.raises(ValidationError):
        optimize_1d("x3", (1e-9, 1e-6), CFG, "q_total")
