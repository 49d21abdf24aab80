"""Compare the compiled polynomial kernel against the pure-Python one.

Runs the same workloads in two subprocesses — once as installed (the
compiled kernel when it is built) and once with QHAAR_PURE_PYTHON=1 —
and prints wall times side by side.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, time, timeit

from qhaar.kernels import BACKEND, pgcd, pmul
from qhaar.qfield import parse_rational

out = {"backend": BACKEND, "times": {}}

def clock(name, fn, number):
    out["times"][name] = min(timeit.repeat(fn, number=number, repeat=3))

rng = random.Random(7)
a = [rng.randint(-99, 99) for _ in range(48)] + [1]
b = [rng.randint(-99, 99) for _ in range(47)] + [2]
clock("pmul deg 48", lambda: pmul(a, b), 2000)

g = parse_rational("(q^8-1)*(q^6-1)^2*(q^4-1)")
u = (g * parse_rational("q^10+3*q^4-7")).num
v = (g * parse_rational("2*q^12-q^3+5")).num
clock("pgcd structured", lambda: pgcd(list(u), list(v)), 300)

x = parse_rational("(q^6-1)^3/(q^10-1)^2")
y = parse_rational("(q^4+q^2+1)/(q^8-2*q^2+1)")
clock("rational arithmetic", lambda: x * y + x / y - y, 2000)

t0 = time.perf_counter()
from qhaar.haar3 import HaarTable, compute_order
table = HaarTable()
for j in (1, 2):
    compute_order(j, table)
out["times"]["solve through order 2"] = time.perf_counter() - t0

print(json.dumps(out))
"""


def run(pure, repeat):
    env = dict(os.environ)
    env.pop("QHAAR_PURE_PYTHON", None)
    if pure:
        env["QHAAR_PURE_PYTHON"] = "1"
    best = None
    for _ in range(repeat):
        res = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                             capture_output=True, text=True, check=True)
        data = json.loads(res.stdout)
        if best is None:
            best = data
        else:
            for k, v in data["times"].items():
                best["times"][k] = min(best["times"][k], v)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=1,
                        help="independent subprocess runs to take the best of")
    args = parser.parse_args(argv)

    compiled = run(pure=False, repeat=args.repeat)
    pure = run(pure=True, repeat=args.repeat)
    if compiled["backend"] != "c":
        print("note: compiled kernel not built; comparing python to itself")

    width = max(len(k) for k in pure["times"])
    print(f"{'workload':<{width}}  {'compiled':>10}  {'python':>10}  speedup")
    for name, tp in pure["times"].items():
        tc = compiled["times"][name]
        print(f"{name:<{width}}  {tc:>9.4f}s  {tp:>9.4f}s  {tp / tc:>6.2f}x")


if __name__ == "__main__":
    main()
