"""Compiled versus pure-Python channel kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times a 10 000-point path-loss grid and the eight golden-section
altitude searches behind the case-study altitude table, once per
available backend.
"""

import argparse
import timeit

import numpy as np

from quadcover import channel, kernels

AXES = {"inscribed": (200.3, 155.2), "circumscribed": (294.3, 223.5)}


def grid(mod, params, hs, out):
    mod.objective_grid(kernels.PATHLOSS, 200.3, 155.2, hs, out, params)


def table(mod, all_params):
    for a, b in AXES.values():
        for params in all_params:
            mod.golden_channel(kernels.PATHLOSS, a, b, 1.0, 5000.0, 0.01, 500, params)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    link = channel.LinkBudget()
    all_params = [channel.kernel_params(link, env) for env in channel.PRESETS.values()]
    hs = np.linspace(1.0, 5000.0, 10_000)
    out = np.empty_like(hs)

    found = kernels.backends()
    if "compiled" not in found:
        print("compiled extension not built; timing the python backend only")
    rows = {}
    for name, mod in found.items():
        t_grid = min(timeit.repeat(lambda: grid(mod, all_params[0], hs, out),
                                   number=1, repeat=args.repeat))
        t_tab = min(timeit.repeat(lambda: table(mod, all_params), number=1,
                                  repeat=args.repeat))
        rows[name] = (t_grid, t_tab)

    print(f"{'backend':<10} {'grid 10k (ms)':>14} {'table (ms)':>11}")
    for name, (g, t) in rows.items():
        print(f"{name:<10} {g * 1e3:>14.3f} {t * 1e3:>11.3f}")
    if len(rows) == 2:
        g = rows["python"][0] / rows["compiled"][0]
        t = rows["python"][1] / rows["compiled"][1]
        print(f"speedup    {g:>13.1f}x {t:>10.1f}x")


if __name__ == "__main__":
    main()
