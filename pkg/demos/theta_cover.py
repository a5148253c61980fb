"""The ramified theta family: build the voltage cover and check every chamber.

    python3 demos/theta_cover.py [n] [p]
"""

import sys

from cubemorse.cover import build_voltage_cover, check_theta_family, verify_cover_properties
from cubemorse.cubeworld import euler_formula_Y
from cubemorse.morse import enumerate_chambers

n = int(sys.argv[1]) if len(sys.argv) > 1 else 3
p = int(sys.argv[2]) if len(sys.argv) > 2 else 7

cover = build_voltage_cover(n, p)
v = verify_cover_properties(cover)
print(f"voltage i*j mod {p}: {v.status}", v.evidence)

for ch in enumerate_chambers("theta", n):
    rep = check_theta_family(n, p, ch.representative, cover)
    sizes = [t["ascending_sizes"] for k, t in sorted(rep.types.items()) if k.startswith("type1")]
    print(f"{ch.label:>6}  {rep.status}  smallest ascending factor {min(map(min, sizes))}")

print("Euler characteristic of the branched cover:", euler_formula_Y(n, p))
