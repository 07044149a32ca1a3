"""Acceptance criterion for the plotting component.

Generates a real depolarizing (x) amplitude-damping sweep through the
entdist CLI (the only interface this package consumes), renders the
optimal-c heatmap with the entanglement-breaking band masked, and checks
that the optimal input entanglement decreases toward zero as the
depolarizing parameter approaches 2/3 at fixed damping.
"""

import subprocess
import sys

import numpy as np
import pytest

from entdist_plots.figures import FigureKind, FigureSpec, load_csv, masked_heatmap_grid, render


def announce(capsys, num, ok, desc):
    with capsys.disabled():
        print(f"\n[acceptance] criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {desc}")
    assert ok, f"criterion {num} failed: {desc}"


@pytest.fixture(scope="module")
def sweep_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep") / "depol_ad.csv"
    proc = subprocess.run(
        [
            sys.executable, "-m", "entdist.cli", "sweep",
            "--family1", "depol", "--grid1", "0:0.72:0.06",
            "--family2", "ad", "--grid2", "0.2:0.6:0.2",
            "--grid-step", "0.01", "--workers", "1", "--out", str(out),
        ],
        capture_output=True,
    )
    assert proc.returncode == 0, proc.stderr.decode()
    return str(out)


def test_c13_optimal_c_heatmap(capsys, sweep_csv, tmp_path):
    columns = load_csv(sweep_csv)
    out = tmp_path / "optimal_c_heatmap.png"
    spec = FigureSpec(
        kind=FigureKind.HEATMAP, input_csv=sweep_csv, x="param2", y="param1",
        z="opt_c", output=str(out), title="optimal input entanglement",
    )
    render(spec)
    rendered = out.exists() and out.stat().st_size > 1000

    xs, ys, grid = masked_heatmap_grid(columns, spec)
    band = ys >= 2 / 3 - 1e-12
    band_masked = bool(band.any()) and bool(grid.mask[band].all())
    active_unmasked = not grid.mask[~band].any()

    monotone = True
    approaches_zero = True
    for gamma in xs:
        sel = (columns["param2"] == gamma) & ~columns["is_ea"]
        p = columns["param1"][sel]
        order = np.argsort(p)
        opt_c = columns["opt_c"][sel][order]
        if np.any(np.diff(opt_c) > 1e-12):
            monotone = False
        if opt_c[-1] > 0.15:
            approaches_zero = False

    ok = rendered and band_masked and active_unmasked and monotone and approaches_zero
    announce(capsys, 13, ok,
             f"optimal-c heatmap rendered={rendered}, EB band masked={band_masked}, "
             f"opt_c non-increasing in p_s={monotone}, "
             f"final non-EA opt_c small={approaches_zero}")
