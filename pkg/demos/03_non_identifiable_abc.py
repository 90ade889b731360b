"""
When the data cannot pin down the effect
========================================

With an unobserved Z feeding both T and Y and no mediator, P(y | do(t)) is
not identified. Rejection ABC over the model parameters shows a whole range
of effects compatible with the observed (T, Y) table, and that range does not
shrink when the table is scaled up.
"""

from twincausal import identify, load_graph, simpson_table
from twincausal.bayes import abc_nonidentifiable

print(identify(load_graph("confounded"), "T", "Y"))

ty = simpson_table().marginalize(["T", "Y"])
res = abc_nonidentifiable(ty, latent_card=2, n_samples=2_000_000, tolerance=0.01, seed=11)
print(f"accepted {res.n_accepted} of {res.n_samples}")
for t in (0, 1):
    lo, hi = res.interval(t)
    print(f"P(Y*=1 | do(T={t})):  mean {res.mean(t):.3f}   95% interval [{lo:.3f}, {hi:.3f}]")

# a skewed prior on psi moves the answer, and more data does not undo it
big = ty.scaled(100)
flat = abc_nonidentifiable(big, 2, 4_000_000, 0.03, seed=11)
skew = abc_nonidentifiable(big, 2, 4_000_000, 0.03, seed=12, psi_concentration=[1, 5])
print(f"x100 data, do(T=1):  flat prior {flat.mean(1):.3f}   Beta(5,1) prior {skew.mean(1):.3f}")
