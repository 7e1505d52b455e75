#!/usr/bin/env python3
"""Walkthrough: gluing tables and their derived class structure.

Loads the shipped two-tetrahedron 3-sphere, prints the vertex/edge/face
classes that the gluings identify, and shows what barycentric
subdivision does to the counts.
"""

from pathlib import Path

from cansurf import barycentric_subdivide, parse_triangulation

DATA = Path(__file__).resolve().parent.parent / "data"

text = (DATA / "two_tet_s3.tri").read_text()
print("input gluing table:")
print(text)

tri = parse_triangulation(text)
print(tri)
print()

# Every tetrahedron edge falls into one of three classes.  Degrees count
# how many tetrahedron corners wrap around each class.
for e, members in enumerate(tri.edge_classes):
    print("edge class {} (degree {}): {}".format(e, tri.edge_degree(e), members))
print("vertex classes:", tri.vertex_classes)
print("vertex degree of the unique vertex:", tri.vertex_degree(0))
print("face classes:", tri.face_classes)
print("Euler characteristic:", tri.euler_characteristic())
print()

# One barycentric subdivision multiplies the tetrahedron count by 24 and
# turns every simplex barycenter into a vertex: 1 + 3 + 4 + 2 of them.
sub = barycentric_subdivide(tri)
print("after one subdivision:", sub)
print("chi still", sub.euler_characteristic())

sub2 = barycentric_subdivide(sub)
print("after two subdivisions:", sub2.tet_count, "tetrahedra")
