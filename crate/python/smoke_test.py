"""Smoke test for the frackin_py extension module.

Build and run from the repository root:

    cargo build --release -p frackin-py --features extension-module
    cp target/release/libfrackin_py.so python/frackin_py.so
    python3 python/smoke_test.py
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import frackin_py as fk  # noqa: E402


def close(a, b, rel):
    return abs(a - b) <= rel * abs(b)


def main():
    value, estimate, terms = fk.eval_ml(1.0, 1.0)
    assert close(value, math.e, 1e-15), value
    assert estimate >= 0.0 and terms > 0

    value, _, _ = fk.eval_ml(2.0, -(1.3**2))
    assert close(value, math.cos(1.3), 1e-14), value

    value, _, _ = fk.eval_ml2(1.0, 2.0, 0.5)
    assert close(value, (math.exp(0.5) - 1.0) / 0.5, 1e-15), value

    value, _, _ = fk.eval_prabhakar(0.7, 1.2, 0.0, 3.0)
    assert close(value, 1.0 / math.gamma(1.2), 1e-14), value

    value, _, _ = fk.eval_wright([(2.0, 1.0)], [(1.0, 1.0)], 0.5)
    assert close(value, 1.5 * math.exp(0.5), 1e-15), value

    assert fk.q_exponential(1.0, 2.0, 1.0) == 0.5

    ns = fk.solve("standard", [0.5, 1.0, 2.0], n0=1.0, c=1.0, nu=1.0)
    for t, n in zip([0.5, 1.0, 2.0], ns):
        assert close(n, math.exp(-t), 1e-15), (t, n)

    try:
        fk.eval_ml(0.1, 2.0)
    except OverflowError:
        pass
    else:
        raise AssertionError("expected OverflowError")

    try:
        fk.solve("theorem2", [1.0], nu=1.5, mu=1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
