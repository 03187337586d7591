#!/usr/bin/env python3
"""Run the bundled eclipse-count demo and leave its artifacts in ./out/.

Writes the fitted model, the per-iteration report, and a plot-data CSV
(century index, actual count, fitted count) covering the training window
plus the held-out later centuries.
"""

import pathlib
import sys

from seriesfit.cli import main

OUT = pathlib.Path("out")


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    sys.exit(
        main(
            [
                "demo-eclipse",
                "--holdout",
                "--out", str(OUT / "eclipse_model.json"),
                "--report", str(OUT / "eclipse_report.json"),
                "--plot", str(OUT / "eclipse_plot.csv"),
            ]
        )
    )
