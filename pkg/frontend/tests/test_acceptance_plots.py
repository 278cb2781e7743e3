"""Acceptance gate for the plotting package: shipped samples render and the
curves sit between the standard-quantum-limit and Heisenberg-limit lines."""

import math


from dwplot import FigureSpec, plot_fig3, plot_fig4


def test_criterion_9_shipped_presets_render_between_bounds(fig3_csv, fig4_csv, tmp_path):
    r3 = plot_fig3(
        FigureSpec(
            csv_path=fig3_csv,
            out_path=str(tmp_path / "fig3.svg"),
            refs={"sql": 1000.0, "hl": 1.0e6, "css1": 11428.9321881, "css2": 50850.0},
        )
    )
    assert r3.x and all(1000.0 < y < 1.0e6 for y in r3.y)

    # M=10, n=20 run: SQL = 200, global Heisenberg bound = 40000
    r4 = plot_fig4(
        FigureSpec(
            csv_path=fig4_csv,
            out_path=str(tmp_path / "fig4.svg"),
            refs={"sql": 200.0, "fock": 2200.0, "uniform": 1540.0},
        )
    )
    assert r4.x and all(200.0 < y < 40000.0 for y in r4.y)
    assert all(math.isfinite(y) for y in r3.y + r4.y)
    print(
        "PASS criterion 9: shipped sample tables render to SVG+PNG with every "
        "curve point between the SQL and HL reference values"
    )
