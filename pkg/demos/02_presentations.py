"""
Presentations of the free-module monad
======================================

Level presentations are homological; a non-level predicate is not.  The
level presentations on a finite support form a poset we can draw.
"""

from monad_forge.families import canonical_modules
from monad_forge.fpmod import PresentedModule, decompose
from monad_forge.presentation import (PresentationRecord, bar_head, check_homological,
                                      coordinates, loc_poset)
from monad_forge.reflect import INF, LevelFunction
from monad_forge.ring import Z

TWO, THREE = Z.ideal(2), Z.ideal(3)

# %%
# The bar head of Z/2: the free module on its two elements, modulo the
# differences that the monad multiplication identifies.
bh = bar_head(PresentationRecord.from_level(LevelFunction(INF)), PresentedModule.cyclic(Z, 2))
print("elements:", bh.stage0.labels())
print("difference basis:", bh.difference_basis)
print("coequalizer:", decompose(bh.coequalizer), "| comparison iso:", bh.is_iso)

# %%
# Every level presentation passes the homological check on the small family.
family = [c.to_module() for c in canonical_modules(Z, 16, [TWO, THREE])]
level = PresentationRecord.from_level(LevelFunction(INF, {TWO: 1}))
rep = check_homological(level, family)
print(f"{level.label}: verdict={rep.verdict}, criterion agrees={rep.agree}")

# %%
# Admitting Z/4 but not Z/2 breaks closure under kernels, and the search
# finds a map from Z/2 with two distinct factorizations through Z/4.
pred = PresentationRecord.from_predicate({TWO: [2]})
rep = check_homological(pred, family)
witness = next(f["witness"] for f in rep.failures if f["module"] == "Z/2")
print(f"{pred.label}: verdict={rep.verdict}")
print("  witness:", witness["kind"], "via", witness["candidate"], witness["factorizations"])

# %%
# Coordinates of a level presentation, then the Hasse diagram of the nine
# levels with values {0,1,2} on {2,3}, in DOT.
print(coordinates(level)["text"])
poset = loc_poset([TWO, THREE], values=[0, 1, 2])
print(f"{len(poset.nodes)} nodes, {len(poset.edges)} covers, order embedding: {poset.order_embedding}")
print(poset.to_dot(), end="")
