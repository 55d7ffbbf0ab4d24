"""Rate-verification runs: slow regime (b < 1, MSE ~ b_n) and fast regime
(b = 1, MSE ~ 1/n).  Writes CSV + SVG under results/."""

import pathlib
import sys

from streamrisk.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    for name in ("rates_slow", "rates_fast"):
        code = main(
            [
                "rates",
                "--config", str(ROOT / "configs" / f"{name}.cfg"),
                "--out", str(ROOT / "results" / name),
            ]
        )
        if code != 0:
            sys.exit(code)
