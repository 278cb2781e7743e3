"""Data-level checks of the figure builders (no pixel comparisons)."""

import math
import os

import pytest

from dwplot import FigureSpec, SchemaError, plot_fig3, plot_fig4, read_results


def test_fig3_shipped_sample(fig3_csv, tmp_path):
    spec = FigureSpec(
        csv_path=fig3_csv,
        out_path=str(tmp_path / "fig3.svg"),
        refs={"sql": 1000.0, "hl": 1.0e6, "css1": 11428.9321881, "css2": 50850.0},
    )
    result = plot_fig3(spec)
    assert len(result.x) == 101
    assert result.x[0] == 0.0 and abs(result.x[-1] - math.pi) < 1e-9
    assert all(a < b for a, b in zip(result.x, result.x[1:]))
    assert all(1000.0 < y < 1.0e6 for y in result.y)
    assert set(result.refs) == {"sql", "hl", "css1", "css2"}
    for f in result.files:
        assert os.path.exists(f) and os.path.getsize(f) > 0
    assert result.files[0].endswith(".svg") and result.files[1].endswith(".png")


def test_fig4_shipped_sample(fig4_csv, tmp_path):
    spec = FigureSpec(
        csv_path=fig4_csv,
        out_path=str(tmp_path / "fig4"),
        refs={"sql": 200.0, "fock": 2200.0, "uniform": 1540.0},
    )
    result = plot_fig4(spec)
    # the infinite-width tail row is a reference, not a curve point
    assert len(result.x) == 25
    assert all(math.isfinite(x) for x in result.x)
    assert all(200.0 < y <= 2200.0 + 1e-9 for y in result.y)
    assert min(result.y) >= 1540.0 - 1e-9
    for f in result.files:
        assert os.path.exists(f)


def test_fig4_reduced_case(reduced_fig4_csv, tmp_path):
    spec = FigureSpec(
        csv_path=reduced_fig4_csv,
        out_path=str(tmp_path / "reduced.png"),
        refs={"sql": 12.0, "fock": 36.0, "uniform": 21.0},
    )
    result = plot_fig4(spec)
    assert len(result.x) == 5
    assert result.y[0] == pytest.approx(36.0)
    assert result.y[-1] == pytest.approx(21.0125587293)
    # monotone decay from the narrow limit toward the flat-mixture value
    assert all(a >= b for a, b in zip(result.y, result.y[1:]))
    assert all(21.0 - 1e-9 <= y <= 36.0 + 1e-9 for y in result.y)
    assert result.refs["sql"] == 12.0


def test_single_point_table_plots_one_marker(tmp_path):
    csv = tmp_path / "point.csv"
    csv.write_text(
        "# dwmetro-results v1\n"
        "param,value,qfi,cfi,method,seconds\n"
        ",,8,8,PureVariance,0.004\n"
    )
    spec = FigureSpec(csv_path=str(csv), out_path=str(tmp_path / "point.svg"))
    result = plot_fig3(spec)
    assert result.x == (0.0,)
    assert result.y == (8.0,)
    assert all(os.path.exists(f) for f in result.files)


def test_missing_cfi_column_tolerated(tmp_path):
    csv = tmp_path / "nocfi.csv"
    csv.write_text(
        "# dwmetro-results v1\n"
        "param,value,qfi,method,seconds\n"
        "chi_t,0.1,30,FastProduct,0.001\n"
        "chi_t,0.2,40,FastProduct,0.001\n"
    )
    rows = read_results(str(csv))
    assert len(rows) == 2 and "cfi" not in rows[0]
    result = plot_fig3(
        FigureSpec(csv_path=str(csv), out_path=str(tmp_path / "nocfi.png"))
    )
    assert result.y == (30.0, 40.0)


def test_missing_required_column_is_schema_error(tmp_path):
    csv = tmp_path / "broken.csv"
    csv.write_text("param,value,method\nchi_t,0.1,FastProduct\n")
    with pytest.raises(SchemaError, match="qfi"):
        read_results(str(csv))
    with pytest.raises(SchemaError):
        plot_fig3(FigureSpec(csv_path=str(csv), out_path=str(tmp_path / "x.svg")))


def test_non_numeric_cell_is_schema_error(tmp_path):
    csv = tmp_path / "text.csv"
    csv.write_text("param,value,qfi\nchi_t,abc,10\n")
    with pytest.raises(SchemaError, match="non-numeric"):
        plot_fig3(FigureSpec(csv_path=str(csv), out_path=str(tmp_path / "x.svg")))


def test_reference_values_validated(reduced_fig4_csv, tmp_path):
    with pytest.raises(ValueError, match="finite and positive"):
        FigureSpec(csv_path=reduced_fig4_csv, out_path="x.svg", refs={"sql": -1.0})
    with pytest.raises(ValueError, match="finite and positive"):
        FigureSpec(csv_path=reduced_fig4_csv, out_path="x.svg", refs={"sql": math.inf})
    spec = FigureSpec(
        csv_path=reduced_fig4_csv, out_path=str(tmp_path / "x.svg"), refs={"hl": 5.0}
    )
    with pytest.raises(ValueError, match="unknown reference"):
        plot_fig4(spec)  # hl is a fig3 key


def test_log_y_defaults_off(reduced_fig4_csv):
    spec = FigureSpec(csv_path=reduced_fig4_csv, out_path="unused.svg")
    assert spec.log_y is False
