"""Solve a few q-difference-differential modules and print Y, Z and the checks."""

import json
import os

from qsigalois.qsimod import QsiModuleSpec, default_names, solve, trivializing_matrix, verify_solution
from qsigalois.scalars import field_from_spec

HERE = os.path.join(os.path.dirname(__file__), "data")


def show(filename, q="2"):
    with open(os.path.join(HERE, filename)) as fh:
        data = json.load(fh)
    F = field_from_spec(data.get("q", q))
    spec = QsiModuleSpec.from_json(data, F)
    names = default_names(F, data.get("names"))
    sol = solve(spec)
    triv = trivializing_matrix(sol)
    print(f"{filename} (q = {F.format(F.q)})")
    print("  Y =", sol.Y.to_string(names))
    print("  Z =", triv.Z.to_string(names))
    print("  verified:", verify_solution(sol).ok and triv.report.ok)


if __name__ == "__main__":
    for name in ("first_example.json", "jordan.json", "scaled.json", "diagonal_b0.json"):
        show(name)
    show("jordan.json", "indeterminate")
