"""The ring R, its coaction, and torsors over small Taft algebras."""

from qsigalois.pvt import (
    builtin_R,
    cleft_check,
    cleft_trivialize,
    coaction_equivariance,
    coaction_R,
    constants,
    galois_map_check,
    identity_phi,
    r_window,
    simplicity_reduce,
    taft_torsor,
    taft_two_dim_comodule,
)
from qsigalois.scalars import rationals

F = rationals(2)
R = builtin_R(F)
print("constants of R in |Q-deg| <= 4, τ-deg <= 4:", constants(R, r_window(R)))
R2, CA = coaction_R(F)
print("coaction respects σ and θ:", coaction_equivariance(R2, CA).ok)
print("Galois map:", galois_map_check(CA).messages[0])

x = R.A("Q^2*τ^3 - 5*Q^-1*τ + 7")
cert = simplicity_reduce(R, x)
print(f"ideal generated by {x} contains 1 via", cert.moves)

for N in (2, 3):
    for lam in (0, 1):
        T = taft_torsor(N, lam)
        phi = identity_phi(T)
        cl = cleft_check(T, phi)
        triv = cleft_trivialize(taft_two_dim_comodule(T.H), T, phi, cl)
        print(f"Taft({N}), λ = {lam}: Galois map rank {galois_map_check(T).data['rank']}, "
              f"cleft {cl.ok}, trivializes the 2-dim module {triv.ok}")
