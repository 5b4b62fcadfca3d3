"""Are the per-branch extrema really at the corners of the simplex?

We sample random points inside each branch simplex and compare against the
stored extrema.  With corner-only values some samples win, and exact rational
arithmetic on an edge confirms that this is not round-off.
"""
from fractions import Fraction

from rauzy import EvalMode, build_table, jacobian, word_product
from rauzy.verify import verify_extrema

for mode in ("vertices", "edges"):
    table = build_table(13, EvalMode(mode), workers=4)
    rep = verify_extrema(table, words=1000, points=1000, seed=0)
    print(f"{mode:>8}: {rep.violations} violations, worst margin {rep.worst:.4g}")

# An exact witness: rational points on the three edges for one particular word.
w = (1, 1, 2, 2, 3, 1, 3, 3, 2, 2, 2, 3, 2)
P = word_product(w)


def r(y):
    J = jacobian(P, y)
    return J.q / J.det2


corners = max(r(y) for y in [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
def edge(a, b, k, steps=400):
    y = [Fraction(0)] * 3
    y[a], y[b] = 1 - Fraction(k, steps), Fraction(k, steps)
    return y


best = max(r(edge(a, b, k)) for a, b in ((0, 1), (0, 2), (1, 2)) for k in range(1, 400))
print("\nword", "".join(map(str, w)))
print("corner max       ", float(corners))
print("edge sample max  ", float(best), f"(ratio {float(best / corners):.4f})")
