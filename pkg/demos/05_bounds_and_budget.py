#!/usr/bin/env python3
"""Walkthrough: from geometric constants to a weight budget.

The search budget is derived from user-supplied geometry: a genus, the
largest sweep-out leaf area, a scale constant relating area to weight,
the injectivity radius, and a floor on compression-disk diameters.
"""

import math
from pathlib import Path

from cansurf import (
    BoundsConfig,
    Limits,
    PartialGraphError,
    build,
    parse_triangulation,
    vertex_link,
)
from cansurf.moves import E1, default_catalog

cfg = BoundsConfig(
    genus=2,
    sweepout_max_area=1.0,
    weight_scale=2.0,
    injectivity_radius=8.0,
    compression_floor=2.0,
)
area = cfg.area_constant()
print("area constant: {:.6f}  (strictly above 4*pi = {:.6f})".format(area, 4 * math.pi))
print("scale:         {:.6f}".format(cfg.delta_constant()))
budget = cfg.weight_budget()
print("weight budget: {}".format(budget))
print()

# The scale constant governs how finely the triangulation must be
# subdivided before the graph is trustworthy; the subdivision count is
# the caller's choice, driven by the geometry of the metric.
DATA = Path(__file__).resolve().parent.parent / "data"
tri = parse_triangulation((DATA / "two_tet_s3.tri").read_text())
link = vertex_link(tri, 0)
catalog = default_catalog(tri)

# A budget of 27 admits an enormous component; cap the exploration and
# accept a partial result, which is flagged rather than silently cut.
try:
    build(link, budget, move_set={E1}, catalog=catalog,
          limits=Limits(max_vertices=200))
except PartialGraphError as exc:
    print("capped run: {} ({} vertices so far, partial={})".format(
        exc, len(exc.graph.vertices), exc.graph.partial))

small = build(link, 8, move_set={E1}, catalog=catalog)
print("budget 8 instead: complete graph with {} vertices".format(
    len(small.vertices)))
