#!/usr/bin/env python3
"""Walkthrough: the move graph and generators of its fundamental group.

Starting from the vertex-linking sphere, close under the default move
set within a weight budget, take a breadth-first spanning tree, and emit
one loop of moves per non-tree edge.  Replaying any loop from the seed
returns to the seed, and the loop count equals edges - vertices + 1.
"""

from collections import Counter
from pathlib import Path

from cansurf import build, export_dot, export_json, generators, parse_triangulation, replay, vertex_link
from cansurf.moves import default_catalog, parse_move

DATA = Path(__file__).resolve().parent.parent / "data"
tri = parse_triangulation((DATA / "two_tet_s3.tri").read_text())
link = vertex_link(tri, 0)
catalog = default_catalog(tri)

graph = build(link, 8, catalog=catalog, workers=1)
print("graph at budget 8: {} vertices, {} edges, rank {}".format(
    len(graph.vertices), len(graph.edges), graph.rank()))
kinds = Counter(parse_move(m).kind for _, _, m, _ in graph.edges)
print("edge kinds:", dict(kinds))
weights = Counter(s.weight() for s in graph.vertices.values())
print("vertices by weight:", dict(sorted(weights.items())))
print()

gens = generators(graph)
print("free generators of the graph's fundamental group:", len(gens.loops))
shortest = min(gens.loops, key=len)
print("a shortest loop ({} moves):".format(len(shortest)))
for move in shortest:
    print("   ", move)
final = replay(link, shortest, catalog)
print("replays to the seed:", final.canonical_key() == link.canonical_key())
print()

# Exports are canonically ordered: byte-identical across runs and
# worker counts.
json_text = export_json(graph)
dot_text = export_dot(graph)
print("JSON export: {} bytes; DOT export: {} lines".format(
    len(json_text), dot_text.count("\n")))

again = build(link, 8, catalog=catalog, workers=4)
print("4-worker build export identical:", export_json(again) == json_text)
