"""Heavy-tail variant comparison: Pareto(1, 2.2) at b1 = 0.55, inside the
window where the embedded variant's limiting variance beats the
classical/Bardou recursions.  Note the finite-n caveat in the README: at
n = 1e6 the empirical ordering is still pre-asymptotic."""

import pathlib
import sys

from streamrisk.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(
        main(
            [
                "compare",
                "--config", str(ROOT / "configs" / "compare_pareto.cfg"),
                "--out", str(ROOT / "results" / "compare_pareto"),
            ]
        )
    )
