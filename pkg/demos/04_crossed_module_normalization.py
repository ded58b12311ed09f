"""
Normalizing crossed-module form data
====================================

Given g in G0 and phi_0..phi_{n-1} in G1 witnessing that g is trivial on
the degenerate simplices up to the boundary map, ``normalize`` peels off one
factor per stage and returns (g', chi) with boundary(chi) g' = g and g'
genuinely trivial on every degenerate simplex.
"""
from gerbecalc.algebra import format_poly
from gerbecalc.crossed import CrossedModule, make_oracle_data, normalize, verify_normalization
from gerbecalc.groups import GroupFlavor

u3 = GroupFlavor.named("u3")
for kernel in ("center", "full"):
    cm = CrossedModule(u3, kernel)
    for n in (1, 2, 3):
        dat = make_oracle_data(cm, n, seed=1)
        g2, chi, stages = normalize(dat, debug=True)
        post = verify_normalization(dat, g2, chi)
        ok = all(r.passed for r in stages + post)
        print(f"kernel={kernel:6s} n={n}: {len(stages)} stage checks, {len(post)} postconditions, ok={ok}")

# for n = 1 with a central kernel the effect is visible in the corner entry:
# the part of g that survives on the diagonal (no displacement) is removed
dat = make_oracle_data(CrossedModule(u3, "center"), 1, seed=3)
g2, chi, _ = normalize(dat)
print()
print("g   corner:", format_poly(dat.g.matrix.rows[0][2]))
print("g'  corner:", format_poly(g2.matrix.rows[0][2]))
print("chi corner:", format_poly(chi.matrix.rows[0][2]))
