#!/usr/bin/env python3
"""Run the full scenario batch through the CLI.

Each scenario is a plain CLI invocation writing into its own subdirectory of
--out-dir.  The batch covers every subcommand: the radial closed-form runs,
the curve flows (both solvers on the ellipse), both containment scenarios,
and the complete invariant suite.  Exit status is nonzero if any scenario
exits nonzero.

Identical invocations produce byte-identical outputs, so two runs of this
script into different directories must agree file for file.
"""
import argparse
import sys

from himcf.cli import main as cli_main

SCENARIOS = [
    ("radial-sphere-expanding",
     ["radial", "--geometry", "sphere", "--n", "2", "--r0", "1", "--r1", "0",
      "--t-end", "2"]),
    ("radial-circle-slow-collapse",
     ["radial", "--geometry", "circle", "--r0", "1", "--r1", "-1"]),
    ("radial-circle-finite-collapse",
     ["radial", "--geometry", "circle", "--r0", "1", "--r1", "-2"]),
    ("radial-cylinder",
     ["radial", "--geometry", "cylinder", "--r0", "1", "--r1", "-2"]),
    ("radial-forced",
     ["radial", "--geometry", "sphere", "--n", "2", "--r0", "1", "--r1", "0",
      "--t-end", "2", "--forcing-constant", "0.25"]),
    ("curve-circle-shrinking",
     ["curve", "--preset", "circle", "--r0", "1", "--speed", "-1",
      "--t-end", "1"]),
    ("curve-circle-collapse",
     ["curve", "--preset", "circle", "--r0", "1", "--speed", "-2",
      "--t-end", "1"]),
    ("curve-ellipse-cross-solver",
     ["curve", "--preset", "ellipse", "--a", "2", "--b", "1", "--speed", "0.5",
      "--t-end", "0.5", "--both-solvers"]),
    ("curve-fourier-shrinking",
     ["curve", "--preset", "fourier", "--coeffs", "1,0,0.05",
      "--speed", "-1.2"]),
    ("containment-circle-in-circle",
     ["containment", "--scenario", "circle-in-circle"]),
    ("containment-ellipse-in-circle",
     ["containment", "--scenario", "ellipse-in-circle"]),
    ("verify", ["verify"]),
]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", default="out/scenarios")
    args = parser.parse_args(argv)

    failures = 0
    for name, cli_args in SCENARIOS:
        code = cli_main(cli_args + ["--out-dir", f"{args.out_dir}/{name}"])
        status = "ok" if code == 0 else f"exit {code}"
        print(f"{name:36s} {status}")
        if code != 0:
            failures += 1
    if failures:
        print(f"{failures} scenario(s) failed", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
