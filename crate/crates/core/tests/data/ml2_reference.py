"""Reference values of E_{a,b}(z) by direct summation in mpmath.

Reads lines "alpha beta z" on stdin and writes "alpha beta z value" with the
value rounded to 20 significant digits, or "inf" when it exceeds the double
range. The working precision is raised until it covers the cancellation
between terms with 30 digits to spare.

    cargo run -p frackin --example ml2_draws | python3 ml2_reference.py > ml2_reference.txt
"""
import sys

import mpmath as mp

F64_MAX = mp.mpf("1.7976931348623157e308")


def ml2(a, b, z):
    dps = 30
    while True:
        with mp.workdps(dps):
            s, zn, peak, small, n = mp.mpf(0), mp.mpf(1), mp.mpf(0), 0, 0
            while small < 3:
                t = zn * mp.rgamma(a * n + b)
                s += t
                peak = max(peak, abs(t))
                small = small + 1 if n > 5 and abs(t) <= mp.mpf(10) ** (-dps - 5) * abs(s) else 0
                zn *= z
                n += 1
            need = int(mp.log10(peak / abs(s))) + 30
            if need <= dps:
                return s
            dps = need + 10


for line in sys.stdin:
    a, b, z = line.split()
    v = ml2(mp.mpf(a), mp.mpf(b), mp.mpf(z))
    out = "inf" if abs(v) > F64_MAX else mp.nstr(v, 20, min_fixed=0, max_fixed=0)
    print(a, b, z, out)
