"""
Same table, two graphs, two answers
===================================

A counts table where the treatment looks worse overall but better inside
every stratum of Z. Whether to adjust for Z depends on the graph, so the
recommended treatment flips between the two structures.
"""

from twincausal import identify, load_graph, simpson_table
from twincausal.bayes import fit_posteriors, posterior_predictive
from twincausal.data_io import empirical_joint
from twincausal.do_engine import evaluate_estimand
from twincausal.twin_builder import causal_bayes_construct

table = simpson_table()
joint = empirical_joint(table)

print("P(Y=1 | T)      :", [round(joint.cond({"Y": 1}, {"T": t}), 4) for t in (0, 1)])
for z in (0, 1):
    print(f"P(Y=1 | T, Z={z}) :",
          [round(joint.cond({"Y": 1}, {"T": t, "Z": z}), 4) for t in (0, 1)])

# Z causes T: adjust. T causes Z: do not.
for name in ("case1", "case2"):
    graph = load_graph(name)
    result = identify(graph, "T", "Y")
    print(f"\n{name}: {result.method} estimand  {result.estimand}")
    for t in (0, 1):
        plug = evaluate_estimand(result.estimand, joint, t, 1)
        twin = causal_bayes_construct(graph, "T", t)
        bayes = posterior_predictive(twin, fit_posteriors(twin, table), 1)
        print(f"  do(T={t}):  plug-in {plug:.7f}   twin-network Bayes {bayes:.7f}")
