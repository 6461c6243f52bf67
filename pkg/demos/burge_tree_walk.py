"""Walk the transform tree and check one edge by hand.

Each node is a doubly bounded polynomial identified by four labels; the two
transforms move the labels and multiply the kernel.  Named nodes carry a
closed form, and every edge can be replayed at explicit bounds.
"""

from qident.burge import (
    BurgeParams,
    build_tree,
    burge_x,
    closed_form,
    transform_bt2,
)
from qident.qpoly import render

nodes = build_tree(2, 1, 0, verify_grid=2)
print("depth-2 tree from the seed node:")
for nd in nodes:
    via = nd.transform_tag or "seed"
    name = nd.closed_form_name or "-"
    print(
        f"  ({nd.p},{nd.pprime},{nd.r},{nd.s})  depth={nd.depth}"
        f"  via={via:5s}  form={name:6s}  verified={nd.verified}"
    )

# replay the seed -> (2,3,1,1) edge at one bound pair: route the child through
# the parent polynomial and compare against evaluating the child directly
M = L = 3
routed = transform_bt2(
    M, L, M, L,
    lambda m1, l1, m2, l2: burge_x(BurgeParams(1, 2, 0, 1, m1, l1, m2, l2)),
)
direct = burge_x(BurgeParams(2, 3, 1, 1, M, L, M, L))
print()
print(f"edge replay at M=L={M}: routed == direct is {routed == direct}")
print("  value:", render(direct))

print()
print("closed form at the same bounds:", render(closed_form("euler", M, L, 1, 0)))
