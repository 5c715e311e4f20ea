"""
Mixed statistics as permutation groups
======================================
"""

from spincouple import statistics

for expr in ("a2xa3", "s3o(a2xa2xa2)", "s4"):
    group = statistics.compose_statistics(expr)
    label = statistics.parse_statistics(expr)
    signs = sum(chi for _, chi in group)
    print(f"{str(label):16s} order {len(group):3d}  sum of characters {signs}")

# %%
# The elements of a2 x a3 with their signs.
for perm, chi in statistics.compose_statistics("a2xa3"):
    print(perm.mapping, "+" if chi > 0 else "-")
