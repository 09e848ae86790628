"""Brute-force self-avoiding walk counts on the hexagonal lattice.

Deliberately self-contained: the graph is built from its own axial
coordinates and shares no code with the rhombic engine, so it can act
as an independent oracle for the theta = pi/3 correspondence.

Vertices come in two sublattices, ('A', p, q) and ('B', p, q).  Each A
vertex has the three neighbours

    B(p, q)     via an edge of direction class 0,
    B(p-1, q)   via class 1,
    B(p, q-1)   via class 2,

and the lattice is 3-edge-coloured by these classes.  Walks start and
end at edge midpoints and are self-avoiding on vertices and on the
midpoints they cross.
"""

from __future__ import annotations


def _neighbours(vertex):
    kind, p, q = vertex
    if kind == "A":
        return (
            (("B", p, q), 0),
            (("B", p - 1, q), 1),
            (("B", p, q - 1), 2),
        )
    return (
        (("A", p, q), 0),
        (("A", p + 1, q), 1),
        (("A", p, q + 1), 2),
    )


def _edge_key(u, v):
    return (u, v) if u <= v else (v, u)


def count_midedge_saws(n_max: int, start_class: int = 1,
                       forbidden_end_class: int | None = 0) -> list[int]:
    """counts[n] of n-vertex self-avoiding walks from a fixed mid-edge.

    The walk starts at the midpoint of a class-``start_class`` edge and
    may move off either endpoint.  Every visited vertex adds one unit of
    length.  A walk of n vertices ends at the midpoint of one of the two
    free edges of its last vertex; when ``forbidden_end_class`` is set,
    endings on that direction class are not counted (continuing through
    it is still allowed).  counts[0] = 1 for the empty walk.
    """
    # A(0,0) and its class-`start_class` neighbour
    a0 = ("A", 0, 0)
    b0 = next(v for v, cls in _neighbours(a0) if cls == start_class)
    start_edge = _edge_key(a0, b0)

    counts = [0] * (n_max + 1)
    counts[0] = 1
    if n_max == 0:
        return counts

    visited = set()
    used_edges = {start_edge}

    def rec(vertex, depth):
        visited.add(vertex)
        for nxt, cls in _neighbours(vertex):
            key = _edge_key(vertex, nxt)
            if key in used_edges:
                continue
            if cls != forbidden_end_class:
                counts[depth] += 1  # end here, at the midpoint of (vertex, nxt)
            if depth < n_max and nxt not in visited:
                used_edges.add(key)
                rec(nxt, depth + 1)
                used_edges.remove(key)
        visited.remove(vertex)

    for first in (a0, b0):
        rec(first, 1)
    return counts
