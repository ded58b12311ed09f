"""
A torsor with connection on three open sets
===========================================

Generate a torsor that is valid by construction, run its checks, then break
one transition function and watch exactly one triple overlap complain.
"""
from gerbecalc.forms import GroupForm
from gerbecalc.generate import generate
from gerbecalc.groups import GroupElement, Matrix
from gerbecalc.torsor import check_cocycle1, run_suite

b = generate("torsor", seed=0)
data = b.torsor
print("opens:", data.nerve.indices, " pairs:", data.nerve.pairs)

recs = run_suite(data)
print(f"{sum(r.passed for r in recs)}/{len(recs)} checks pass")
print("tags:", sorted({r.tag for r in recs}))

# multiply g_01 by a constant unipotent matrix
bad = dict(data.g)
bump = GroupElement(Matrix.elementary(data.ctx, 3, 0, 1), data.mu.flavor)
bad[0, 1] = GroupForm(0, bad[0, 1].value * bump)
broken = type(data)(data.nerve, data.mu, bad, data.omega)
for r in check_cocycle1(broken):
    print(r.tag, r.simplex, "pass" if r.passed else "FAIL")
