"""Independent realizability oracle via crossing gadgets and graph planarity.

A pair code is drawable exactly when the closed curve it describes embeds in
the sphere with every doubled visit a transversal crossing.  Replace each
crossing by a wheel gadget (a 4-cycle with a hub): the wheel is 3-connected,
so its planar embedding is unique up to reflection and the four rim nodes
keep their cyclic order.  Wiring the first visit through opposite rim nodes
(0, 2) and the second through (1, 3), then chaining consecutive visits along
the curve, yields a graph that is planar iff the two visits interleave at
every crossing, i.e. iff the code is realizable.  The check is handed to
networkx, sharing nothing with the package's loop-based test.
"""

import networkx as nx


def dt_realizable(code) -> bool:
    n = code.crossing_count
    if n == 0:
        return True
    crossing_of = {}
    for idx, (o, u) in enumerate(code.pairs):
        crossing_of[o] = idx
        crossing_of[u] = idx
    first_visit = {}
    visit_rank = {}
    for label in range(1, 2 * n + 1):
        c = crossing_of[label]
        if c in first_visit:
            visit_rank[label] = 1
        else:
            first_visit[c] = label
            visit_rank[label] = 0
    g = nx.Graph()
    for c in range(n):
        rim = [(c, i) for i in range(4)]
        for i in range(4):
            g.add_edge(rim[i], rim[(i + 1) % 4])
            g.add_edge(("hub", c), rim[i])
    for label in range(1, 2 * n + 1):
        nxt = label % (2 * n) + 1
        out_port = (crossing_of[label], visit_rank[label] + 2)
        in_port = (crossing_of[nxt], visit_rank[nxt])
        g.add_edge(out_port, in_port)
    ok, _ = nx.check_planarity(g)
    return ok
