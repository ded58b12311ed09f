"""
Gerbe cocycles, curving and derived curvature
=============================================

A coboundary gerbe on four open sets carries a band lambda_ij, a cocycle
g_ijk, connections m_i, connection forms gamma_ij and curvings B_i.
``derive`` fills in the fake curvatures nu_i, delta_ij and the 3-curvature
omega_i; the suite then checks every relation between them.
"""
from collections import Counter

from gerbecalc.forms import GroupForm
from gerbecalc.generate import generate
from gerbecalc.gerbe import GerbeCocycle, run_suite
from gerbecalc.groups import GroupElement, Matrix

c = generate("coboundary", seed=2).gerbe
recs = run_suite(c)
print(f"{sum(r.passed for r in recs)}/{len(recs)} checks pass")
print(Counter(r.tag for r in recs))

# a central element changes no conjugation, so only the quadruple
# cocycle condition for g can see it when it is the only data present
z = GroupElement(Matrix.elementary(c.ctx, 3, 0, 2), c.flavor)
g = dict(c.g)
g[0, 1, 3] = GroupForm(0, g[0, 1, 3].value * z)
band_only = GerbeCocycle(c.nerve, c.flavor, c.ctx, c.lam, g)
print("band only:", [(r.tag, r.simplex) for r in run_suite(band_only) if not r.passed])

# with connection data, the relations on the triple 013 that involve g fail too
full = GerbeCocycle(c.nerve, c.flavor, c.ctx, c.lam, g, c.m, c.gamma, c.B)
print("full data:", [(r.tag, r.simplex) for r in run_suite(full) if not r.passed])
