"""CLT-verification runs: joint covariance in the fast regime and the
marginal superquantile variance in the slow regime."""

import pathlib
import sys

from streamrisk.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    for name in ("clt_joint", "clt_slow"):
        code = main(
            [
                "clt",
                "--config", str(ROOT / "configs" / f"{name}.cfg"),
                "--out", str(ROOT / "results" / name),
            ]
        )
        if code != 0:
            sys.exit(code)
