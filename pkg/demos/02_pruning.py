"""Dropping the worst branches to sharpen the bound.

A single badly behaved branch drags exp(2a) or exp(2b) for everybody.  Removing
it costs a little in the count term log(N) but can pay back a lot.  Each round
picks the best cut on the A side and then on the B side, and the loop stops
once nothing changes.
"""
from rauzy import EvalMode, build_table, prune_fixed_point

table = build_table(13, EvalMode("edges"), workers=4)
res = prune_fixed_point(table)

print("round  size_in  size_out  s0")
for row in res.trace:
    print(f"{row['round']:>5}  {row['size_in']:>7}  {row['size_out']:>8}  {row['s0']}")

r = res.report
print("\nretained words:", len(res.rows))
print("exp(2a) =", r.exp2a)
print("exp(2b) =", r.exp2b)
print(f"dim_H >= {r.s0:.12f}")
print("retained set still expanding:", r.expanding)

# The same procedure fed with vertex-only extrema keeps a slightly different
# set, because some branches look better at the corners than they really are.
tv = build_table(13, EvalMode("vertices"), workers=4)
print("vertex-only pruning keeps", len(prune_fixed_point(tv).rows), "words")
