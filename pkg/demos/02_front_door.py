"""
Front door with a hidden confounder
===================================

U confounds T and Y but is never observed. The effect still passes through an
observed mediator W, which is enough to recover P(y | do(t)).
"""

from twincausal import identify, load_graph
from twincausal.bayes import fit_frontdoor, forward_sample, frontdoor_predictive
from twincausal.bayes.cpts import truncated_product
from twincausal.datasets import frontdoor_cpts

graph = load_graph("frontdoor")
cpts = frontdoor_cpts()
print(identify(graph, "T", "Y").estimand)

table = forward_sample(graph, cpts, 50_000, seed=7)  # U is dropped from the table
print("columns:", table.variables, " M =", table.total)

posterior = fit_frontdoor(table)
for t in (0, 1):
    truth = truncated_product(graph, cpts, "T", t, "Y")[1]
    print(f"do(T={t}):  posterior predictive {frontdoor_predictive(posterior, t, 1):.4f}"
          f"   truth {truth:.4f}")

# naive conditioning is biased by U
p = table.to_array(["T", "W", "Y"])
print("naive P(Y=1 | T):", [round(float(p[t, :, 1].sum() / p[t].sum()), 4) for t in (0, 1)])
