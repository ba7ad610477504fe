#!/usr/bin/env python3
"""Writes golden/closed_form.json from closed forms, independently of the C++ code."""

import json
import sys
from pathlib import Path

from mpmath import mp, mpf, pi, gamma

mp.dps = 40


def sphere_volume(n):
    return 2 * pi ** (mpf(n + 1) / 2) / gamma(mpf(n + 1) / 2)


def table():
    t = {}
    for n in range(2, 9):
        vol = sphere_volume(n)
        R = mpf(n * (n - 1))
        lam_d = mpf(n) / 2
        c = mpf(n) / (4 * (n - 1))
        t[f"s{n}.volume"] = vol
        t[f"s{n}.scalar_R"] = R
        t[f"s{n}.lambda1_D"] = lam_d
        t[f"friedrich.s{n}.lhs"] = lam_d**2
        t[f"friedrich.s{n}.rhs"] = c * R
        if n >= 3:
            # Schouten of the round sphere is g/2, so Q = n(n^2-4)/8.
            t[f"s{n}.q"] = mpf(n * (n * n - 4)) / 8
            t[f"hijazi.s{n}.rhs"] = c * R
            t[f"s{n}.yamabe"] = R * vol ** (mpf(2) / n)
        if n >= 5:
            t[f"paneitz.alpha.n{n}"] = mpf((n - 2) ** 2 + 4) / (2 * (n - 1) * (n - 2))
            t[f"paneitz.beta.n{n}"] = mpf(-4) / (n - 2)
            t[f"s{n}.lambda1_P"] = mpf(n - 4) / 2 * mpf(n * (n * n - 4)) / 8
    t["s2r2.lambda1_D"] = mpf(1) / 2
    t["friedrich.s2r2.lhs"] = mpf(1) / 4
    t["friedrich.s2r2.rhs"] = mpf(1) / 4
    t["s4.total_q"] = 16 * pi**2
    t["s4.cgb"] = 32 * pi**2
    t["s5.yamabe_chain.dirac_lhs"] = mpf(25) / 4 * (pi**3) ** (mpf(2) / 5)
    t["s5.yamabe_chain.dirac_rhs"] = mpf(5) / 16 * 20 * pi ** (mpf(6) / 5)
    for n in (4, 5):
        t[f"t{n}.volume"] = mpf(1)
        t[f"t{n}.scalar_R"] = mpf(0)
        t[f"t{n}.q"] = mpf(0)
        t[f"t{n}.lambda1_D"] = mpf(0)
        t[f"friedrich.t{n}.lhs"] = mpf(0)

    # Values the library obtains numerically; the exact answers are known.
    t["num.s4.lambda1_L"] = mpf(12)
    t["num.s4.total_q"] = 16 * pi**2
    t["num.s5.lambda1_L"] = mpf(20)
    t["num.s5.lambda1_P"] = mpf(105) / 16
    t["num.s6.lambda1_P"] = mpf(24)
    t["num.s4.dim4.lhs"] = mpf(144)
    t["num.s4.dim4.rhs"] = mpf(144)
    t["num.s5.general.lhs"] = mpf(400)
    t["num.s5.general.rhs"] = mpf(400)
    for radius, key in ((1, "num.s4"), (2, "num.s4r2")):
        v = mpf(16) / radius**4
        t[f"{key}.corollary4.dirac_vs_yamabe.lhs"] = v
        t[f"{key}.corollary4.dirac_vs_yamabe.rhs"] = v
        t[f"{key}.corollary4.yamabe_vs_total_q.lhs"] = v
        t[f"{key}.corollary4.yamabe_vs_total_q.rhs"] = v
    v = mpf(625) / 16
    for side in ("dirac_vs_yamabe", "yamabe_vs_paneitz"):
        t[f"num.s5.corollary_n.{side}.lhs"] = v
        t[f"num.s5.corollary_n.{side}.rhs"] = v
    t["num.t4.dim4.lhs"] = mpf(0)
    t["num.t4.dim4.rhs"] = mpf(0)
    t["num.s4.yamabe"] = 12 * sphere_volume(4) ** mpf(0.5)
    return {k: float(v) for k, v in sorted(t.items())}


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "golden" / "closed_form.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(table(), indent=2) + "\n")


if __name__ == "__main__":
    main()
