"""What failure looks like: a non-sizeable spec and a broken cover.

    python3 demos/negative_controls.py
"""

import json

from cubemorse.bigraph import ModularSpec, realize, template_edges, verify_sizeable
from cubemorse.cover import VoltageCover, verify_cover_properties
from cubemorse.cubeworld import build_x_gamma
from cubemorse.morse import Character, check_theorem_hypotheses

zero = ModularSpec(2, 5, {e: {0} for e in template_edges(2)})
rep = verify_sizeable(zero, "arithmetic")
print("sizeable:", rep.status, "| 4-cycle:", rep.four_cycle_free.witness)

X = build_x_gamma(realize(zero))
res = check_theorem_hypotheses(X, Character((1, -1)))
print("hypotheses at lambda = (1, -1):", res.status)
print(json.dumps(res.failures[0], indent=2))

flat = VoltageCover(2, 5, {(i, j): 0 for i in range(1, 5) for j in range(1, 5)})
print("zero-voltage cover:", verify_cover_properties(flat).to_json())
