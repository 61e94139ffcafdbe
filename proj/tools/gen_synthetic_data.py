#!/usr/bin/env python3
"""Regenerates the synthetic life tables and curve bundled under data/.

synthetic_2016.csv  Gompertz-Makeham force mu(x) = A + B c^x with A = 5e-4, B = 3e-5, c = 1.1;
                    q_x = 1 - exp(-(A + B c^x (c - 1) / ln c)) for ages 0..119, q_120 = 1.
synthetic_2014.csv  Heavier mortality: the integrated force of synthetic_2016 multiplied by
                    f(x) = clamp(1.25 + 0.004 (x - 40), 1.0, 1.5); q_120 = 1.
curve_synthetic.csv Vasicek zero-coupon curve with a = 0.1, b = 0.02, sigma = 0.001, r0 = -0.003:
                    P(m) = exp(lnA(m) - B(m) r0), B(m) = (1 - exp(-a m)) / a,
                    lnA(m) = (B(m) - m)(a^2 b - sigma^2 / 2) / a^2 - sigma^2 B(m)^2 / (4 a),
                    written as annually compounded spots P(m)^(-1/m) - 1, m = 1..150.
"""
import math
import pathlib

A, B, C = 5e-4, 3e-5, 1.1
TERMINAL = 120
CURVE_A, CURVE_B, CURVE_SIGMA, CURVE_R0 = 0.1, 0.02, 0.001, -0.003


def integrated_force(x):
    return A + B * C**x * (C - 1.0) / math.log(C)


def write_table(path, scale):
    lines = ["age,qx"]
    for x in range(TERMINAL):
        q = 1.0 - math.exp(-integrated_force(x) * scale(x))
        lines.append(f"{x},{q:.12f}")
    lines.append(f"{TERMINAL},1")
    path.write_text("\n".join(lines) + "\n")


def vasicek_spot(m):
    a, b, sigma = CURVE_A, CURVE_B, CURVE_SIGMA
    bm = (1.0 - math.exp(-a * m)) / a
    ln_a = (bm - m) * (a * a * b - 0.5 * sigma * sigma) / (a * a) - sigma * sigma * bm * bm / (4.0 * a)
    return math.exp(-(ln_a - bm * CURVE_R0) / m) - 1.0


def main():
    data = pathlib.Path(__file__).resolve().parent.parent / "data"
    data.mkdir(exist_ok=True)
    write_table(data / "synthetic_2016.csv", lambda x: 1.0)
    write_table(data / "synthetic_2014.csv",
                lambda x: min(1.5, max(1.0, 1.25 + 0.004 * (x - 40))))
    rows = ["maturity,spot_rate"]
    for m in range(1, 151):
        rows.append(f"{m},{vasicek_spot(m):.15f}")
    (data / "curve_synthetic.csv").write_text("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
