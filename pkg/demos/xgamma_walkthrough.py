"""Walk through the rank-one modular construction end to end.

    python3 demos/xgamma_walkthrough.py
"""

from cubemorse.bigraph import build_modular_spec, realize, smallest_sizeable_prime, verify_sizeable
from cubemorse.cubeworld import build_x_gamma, cell_counts, euler_xgamma_modular
from cubemorse.morse import check_dead_links_full, check_theorem_hypotheses, enumerate_chambers

spec = build_modular_spec(1)
print(f"construction prime for n = 1: {spec.modulus}")
print("arithmetic sizeability:", verify_sizeable(spec, "arithmetic").status)

# the same residues already work for much smaller primes
p = smallest_sizeable_prime(1)
small = build_modular_spec(1, p)
cert = verify_sizeable(small, "arithmetic")
print(f"smallest prime keeping the residues sizeable: {p} ({cert.status})")

X = build_x_gamma(realize(small))
counts = cell_counts(X)
print("cells (V, E, F, C):", counts.as_tuple(), "chi =", counts.chi)
print("two-residue closed form:", euler_xgamma_modular(1, p))

for ch in enumerate_chambers("xgamma", 1):
    lam = ch.representative
    ex = check_theorem_hypotheses(X, lam, engine="explicit")
    sy = check_theorem_hypotheses(X, lam, engine="symbolic", certificate=cert)
    dead = check_dead_links_full(X, lam, exhaustive=False)
    print(f"chamber {ch.label} at lambda = {lam}: explicit {ex.status}, "
          f"symbolic {sy.status}, dead links full {dead.status}, {len(ex.types)} vertex types")
