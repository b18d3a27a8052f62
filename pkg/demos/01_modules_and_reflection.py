"""
Modules, hom sets and reflections
=================================

Finitely generated modules over three Euclidean rings, their canonical
forms, and the reflection onto a level-truncated subcategory.
"""

from monad_forge.families import canonical_modules
from monad_forge.fpmod import Morphism, PresentedModule, decompose, hom_count, kernel
from monad_forge.matrix import Matrix
from monad_forge.reflect import INF, LevelFunction, contains, reflect, universal_property_check
from monad_forge.ring import FPX, Z, ZI
from monad_forge.syntax import parse_module

# %%
# A presentation is a generator count plus a relation matrix.  The canonical
# form splits it into a free part and prime-power cyclic summands.
M = PresentedModule.from_rows(Z, [[2, 4], [6, 8]])
print("coker [[2,4],[6,8]] =", decompose(M))

# The same module literal syntax works over the Gaussian integers and F_p[x];
# A stands for the ring itself.
for ring, text in [(ZI, "A/(5) + A"), (FPX(2), "A/(x^3+x)")]:
    print(f"{ring.tag:6s} {text:12s} = {decompose(parse_module(ring, text))}")

# %%
# Hom sets between finite modules are counted in closed form.
Z4, Z6 = PresentedModule.cyclic(Z, 4), PresentedModule.cyclic(Z, 6)
print("|Hom(Z/4, Z/6)| =", hom_count(Z4, Z6))

double = Morphism(Z4, Z4, Matrix(Z, [[2]]))
K, _ = kernel(double)
print("ker(2: Z/4 -> Z/4) =", decompose(K))

# %%
# A level function caps the exponent allowed at each maximal ideal.  Here
# (2) is capped at 1 and everything else is unrestricted.
f = LevelFunction(INF, {Z.ideal(2): 1})
M = parse_module(Z, "Z + Z/4 + Z/3")
r = reflect(f, M)
print(f"reflect[{f}]({decompose(M)}) = {decompose(r.module)}")
print("already a member?", contains(f, M), "->", contains(f, r.module))

# The unit M -> reflection is universal: every map into a member factors
# through it exactly once.  Checked here against every target of size <= 32.
rep = universal_property_check(f, M, 32, canonical_modules(Z, 32, max_rank=0))
print(f"universal: ok={rep.ok}, {rep.checked_targets} targets, {rep.checked_maps} maps")
