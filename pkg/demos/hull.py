"""The map from C(t) into twisted series, and a deformation of the hull."""

import json
import os

from qsigalois.hull import RationalQsiField, deformation_witness, hull_stability_check, load_witness, universal_hopf
from qsigalois.scalars import rationals

F = rationals(2)
L = RationalQsiField(F)
print("ι(t)       =", universal_hopf(L, "t", 4))
print("ι(1/(t+1)) =", universal_hopf(L, "1/(t+1)", 2))
rep = hull_stability_check(F, 1, 4)
print("hull closed under Σ̂, Θ̂ and d/dt:", rep.ok)

with open(os.path.join(os.path.dirname(__file__), "data", "witness_diag.json")) as fh:
    w = load_witness(F, json.load(fh))
rep = deformation_witness(w, 4)
print("deformation by e = diag(q, 1), f = e12:", rep.ok)
for label in rep.data["checks"]:
    print("   ", label)
