"""
Split coequalizers, field extensions and Kleisli exponents
==========================================================
"""

from monad_forge.beck import field_extension_probe, split_coequalizer_solve
from monad_forge.fpmod import Morphism, PresentedModule, biproduct, coequalizer, decompose
from monad_forge.matrix import Matrix
from monad_forge.presentation import kleisli_closure
from monad_forge.ring import Z

# %%
# Forcing the two projections Z/4 + Z/4 -> Z/4 to agree kills everything,
# and this fork splits.
Y = PresentedModule.cyclic(Z, 4)
X, _, (p1, p2) = biproduct([Y, Y])
Q, q = coequalizer(p1, p2)
s, t = split_coequalizer_solve(p1, p2, q)
print("projections: coequalizer", decompose(Q), "| split t =", t.matrix.to_strings())

# Doubling against zero on Z has coequalizer Z/2, but Z -> Z/2 has no
# section, so no splitting exists.
Zf = PresentedModule.free(Z, 1)
two = Morphism(Zf, Zf, Matrix(Z, [[2]]))
Q, q = coequalizer(two, Morphism.zero(Zf, Zf))
print("doubling:    coequalizer", decompose(Q), "| splits:",
      split_coequalizer_solve(two, Morphism.zero(Zf, Zf), q) is not None)

# %%
# Over a field extension every coequalizer of vector spaces splits; the
# probe looks for a fork that fails to lift and should find none.
for p, k in [(2, 2), (3, 2)]:
    rep = field_extension_probe(p, k, dims=3, trials=200, seed=0)
    print(f"GF({p}) in GF({p}^{k}) mod {rep.modulus}: "
          f"{rep.trials} trials, {len(rep.counterexamples)} counterexamples")

# %%
# In Z[i]/(p^n) each prime above p shows up with exponent n, except the
# ramified prime 2 = -i(1+i)^2, which needs exponent 2n.
for p in (2, 3, 5, 13):
    row = ", ".join(f"({m})^{e}" for m, e in kleisli_closure(p, 2))
    print(f"Z[i]/({p}^2): {row}")
