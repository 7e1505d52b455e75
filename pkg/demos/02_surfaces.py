#!/usr/bin/env python3
"""Walkthrough: surface encodings, their invariants, and validation.

A surface transverse to the triangulation is stored as edge weights,
per-face non-crossing matchings, and per-tetrahedron annulus pairings.
The vertex-linking sphere is the canonical first example.
"""

from pathlib import Path

from cansurf import (
    Surface,
    empty_surface,
    enumerate_surfaces,
    parse_surface,
    parse_triangulation,
    vertex_link,
)

DATA = Path(__file__).resolve().parent.parent / "data"
tri = parse_triangulation((DATA / "two_tet_s3.tri").read_text())

link = vertex_link(tri, 0)
print("the vertex-linking sphere, serialized:")
print(link.to_text())
print("classification:", link.validate())
print("weight:", link.weight())
points, arcs, disks, annuli = link.cell_counts()
print("cells: {} points - {} arcs + {} disks  =>  chi = {}".format(
    points, arcs, disks, link.euler_characteristic()))
print("genus {}, {} component(s), orientable: {}".format(
    link.genus(), len(link.components()), link.orientable()))
print()

# Boundary curves on each tetrahedron: four corner triangles apiece.
for tet in range(tri.tet_count):
    print("tet {} curves: {}".format(tet, link.curves(tet)))
print()

# Pairing two curves that cobound a region turns two disks into an
# annulus: the same cells now encode a torus.
torus = Surface(tri, link.weights, link.matchings, [((0, 1),), ()])
print("annulus pairing (0,1) in tet 0:", torus.validate())
print("chi {}, genus {}".format(torus.euler_characteristic(), torus.genus()))

# An invalid pairing is reported, not raised.
bad = Surface(tri, link.weights, link.matchings, [((0, 1), (2, 3)), ()])
print("two annuli in one tet ->", bad.validate())
print()

# Surfaces round-trip through their canonical text, which is also the
# canonical key for graph deduplication.
again = parse_surface(tri, link.to_text())
print("round trip key equal:", again.canonical_key() == link.canonical_key())
print("empty surface:", empty_surface(tri).validate(),
      "weight", empty_surface(tri).weight())
print()

# Exhaustive enumeration is feasible for tiny weight budgets.
count = sum(1 for _ in enumerate_surfaces(tri, 2))
print("all valid encodings of weight <= 2:", count)
