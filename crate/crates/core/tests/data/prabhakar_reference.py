"""Reference values of the Prabhakar function E^g_{a,b}(z) by direct summation
in mpmath, at a working precision that covers the cancellation between terms.

Writes "alpha beta gamma z value" lines, value rounded to 20 significant
digits or "inf" when it exceeds the double range. Draws with z < 0 whose
largest term exceeds about 10^1300 are left out.

    python3 prabhakar_reference.py > prabhakar_reference.txt
"""
import random

import mpmath as mp

F64_MAX = mp.mpf("1.7976931348623157e308")


def prabhakar(a, b, g, z):
    a, b, g, z = map(mp.mpf, (a, b, g, z))
    # log10 of the largest term is about |z|^(1/a) / ln 10
    peak = float(abs(z)) ** (1.0 / float(a)) / 2.302585 if z != 0 else 0.0
    dps = int(peak) + 40 if z < 0 else 40
    with mp.workdps(dps):
        s, c, n, small = mp.mpf(0), mp.mpf(1), 0, 0
        while small < 3:
            t = c * mp.rgamma(a * n + b)
            s += t
            small = small + 1 if n > 5 and abs(t) <= mp.mpf(10) ** (-dps) * abs(s) else 0
            c = c * (g + n) * z / (n + 1)
            n += 1
        return +s


def main():
    rng = random.Random(7)
    cases = []
    while len(cases) < 150:
        a = rng.uniform(0.2, 3)
        b = rng.uniform(0.2, 5)
        g = rng.choice([1.0, 1.0, 2.0, 3.0, rng.uniform(0.2, 4)])
        z = rng.uniform(-10, 10)
        if z < 0 and abs(z) ** (1 / a) > 3000:
            continue
        cases.append((a, b, g, z))
    # cancellation-dominated corner
    cases += [(0.25, 1.0, 1.0, -8.0), (0.3, 0.3, 1.0, -9.7), (0.5, 1.0, 1.0, -10.0), (0.5, 2.5, 2.0, -10.0),
              (0.7, 4.9, 3.0, -10.0), (0.45, 4.8, 1.0, -3.0), (0.95, 1.0, 1.0, -10.0), (0.3, 1.7, 2.5, -6.0),
              (0.6, 0.2, 1.0, -9.0), (0.35, 3.0, 0.5, -5.5)]
    for a, b, g, z in cases:
        v = prabhakar(a, b, g, z)
        out = "inf" if abs(v) > F64_MAX else mp.nstr(v, 20, min_fixed=0, max_fixed=0)
        print(repr(a), repr(b), repr(g), repr(z), out)


main()
