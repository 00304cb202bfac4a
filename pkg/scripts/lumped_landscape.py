#!/usr/bin/env python3
"""Map the gemellity landscape of the amplifier-plus-loss model.

Walks the unit-transmission surface T_a G + T_b (G - 1) = 1 on a
(gain, conjugate-transmission) grid, prints one CSV row per feasible
point, and reports the refined optimum as comment lines.  The whole
landscape is closed form, so the map is instant; use it to see how
shallow the optimum is before trusting any experimental tuning to it.
"""

import argparse
import sys

import numpy as np

from twinbeam import lumped


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gain-max", type=float, default=2.0)
    ap.add_argument("--grid-step", type=float, default=0.01)
    ap.add_argument("--out", help="output CSV path (default stdout)")
    args = ap.parse_args(argv)

    opt = lumped.optimize_unit_transmission(grid_step=args.grid_step)
    lines = [
        f"# optimum gain = {opt.config.gain:.6f}",
        f"# optimum probe_transmission = {opt.config.probe_transmission:.6f}",
        f"# optimum conj_transmission = {opt.config.conj_transmission:.6f}",
        f"# optimum gemellity_dB = {opt.gemellity_db:.6f}",
        f"# interior_in_gain = {opt.interior_in_gain}",
        f"# conj_at_boundary = {opt.conj_at_boundary}",
        "gain,conj_transmission,probe_transmission,gemellity_dB",
    ]
    gains = np.arange(1.0 + args.grid_step, args.gain_max + args.grid_step / 2, args.grid_step)
    tbs = np.arange(0.0, 1.0 + args.grid_step / 2, args.grid_step)
    for g in gains:
        for tb in tbs:
            try:
                ta = lumped.constrain_unit_transmission(float(g), float(tb))
            except ValueError:
                continue
            res = lumped.cascade(lumped.LumpedConfig(float(g), ta, float(tb)))
            lines.append(
                f"{g:.6f},{tb:.6f},{ta:.6f},{10.0 * np.log10(res.gemellity):.6f}"
            )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
