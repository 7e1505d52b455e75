#!/usr/bin/env python3
"""Walkthrough: the elementary moves and the pinch.

Each move is an invertible local rewrite; applying a move and then its
inverse restores the original canonical key.  Moves emitted by the
neighbour generator also preserve Euler characteristic, genus and
component count, which is what makes them isotopy steps.
"""

from pathlib import Path

from cansurf import parse_triangulation, vertex_link
from cansurf.moves import (
    E1,
    PINCH,
    UNPINCH,
    V0,
    Move,
    apply_with_inverse,
    default_catalog,
    neighbors,
)

DATA = Path(__file__).resolve().parent.parent / "data"
tri = parse_triangulation((DATA / "two_tet_s3.tri").read_text())
link = vertex_link(tri, 0)
catalog = default_catalog(tri)


def show(tag, before, after):
    print("{}: weight {} -> {}, chi {} -> {}, components {} -> {}".format(
        tag, before.weight(), after.weight(),
        before.euler_characteristic(), after.euler_characteristic(),
        len(before.components()), len(after.components())))


# E1: push a finger of the sphere across a segment of an edge.  Two new
# points, returning arcs in all faces around the edge but one.
finger = neighbors(link, 8, move_set={E1}, catalog=catalog)[0]
print("E1 move:", finger.move)
show("E1", link, finger.surface)
back, _ = apply_with_inverse(finger.surface, finger.inverse)
print("inverse restores seed:", back.canonical_key() == link.canonical_key())
print()

# V0, fused form: dent a finger of the sphere across the vertex.  The
# bubble's corner disk in one tetrahedron merges with the sheet into an
# annulus, so the topology is unchanged.
grown = neighbors(link, 12, move_set={V0}, catalog=catalog)[0]
print("V0 move:", grown.move)
show("V0", link, grown.surface)
print("result classification:", grown.surface.validate())
print()

# V0, free form: the bubble as a separate sphere sheet.  This is surgery
# (one extra component), supported by apply but never used as a graph edge.
bubbled, absorb = apply_with_inverse(link, Move(V0, 0, direction=1))
show("V0 free", link, bubbled)
print("absorbing it again:", absorb)
print()

# PINCH: tube the sphere to a catalog vertex-link sphere inside one
# tetrahedron; UNPINCH undoes it.
pinched = neighbors(link, 12, move_set={PINCH}, catalog=catalog)[0]
print("pinch move:", pinched.move)
show("PINCH", link, pinched.surface)
print("annulus pair:", pinched.surface.annuli)
unpinched, _ = apply_with_inverse(pinched.surface, pinched.inverse, catalog)
print("unpinch restores seed:", unpinched.canonical_key() == link.canonical_key())
print()

# The neighbour generator enumerates every applicable move under a
# weight budget, deterministically sorted.
stats = {}
found = neighbors(link, 8, catalog=catalog, stats=stats)
print("neighbours at budget 8 (default move set):", len(found))
print("candidates rejected by the budget:", stats["budget_rejected"])
