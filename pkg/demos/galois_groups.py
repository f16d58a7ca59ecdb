"""Discover the Hopf algebra spanned by matrix coefficients of two small modules."""

import json
import os
import time

from qsigalois.corepr import coefficient_functionals, corepresentation_hopf, format_entry
from qsigalois.qsimod import QsiModuleSpec
from qsigalois.scalars import rationals

HERE = os.path.join(os.path.dirname(__file__), "data")
F = rationals(2)

for name in ("first_example.json", "three_dim_rep.json"):
    with open(os.path.join(HERE, name)) as fh:
        spec = QsiModuleSpec.from_json(json.load(fh), F)
    t0 = time.perf_counter()
    disc = corepresentation_hopf(spec, 2)
    print(f"{name}: generators {disc.generators} ({time.perf_counter() - t0:.1f} s)")
    for rel in disc.relation_strings():
        print("   ", rel)
    print("    graded dimensions (degree, presented, image):", disc.graded_dimensions)
    Y = coefficient_functionals(spec)
    print("    coefficient matrix:", [[format_entry(x, disc) for x in row] for row in Y.entries])
    print("    Hopf axioms:", disc.bialgebra.ok and disc.axioms.ok)
