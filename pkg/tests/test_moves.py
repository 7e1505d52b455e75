import pytest
from hypothesis import given, settings, strategies as st

from cansurf import (
    CRUDELY_ALMOST_NORMAL,
    CRUDELY_NORMAL,
    NotApplicableError,
    Surface,
    parse_surface,
    vertex_link,
)
from cansurf.moves import (
    DEFAULT_MOVE_SET,
    E1,
    F2,
    F2P,
    PINCH,
    UNPINCH,
    V0,
    Move,
    _curve_of_copy,
    apply,
    apply_with_inverse,
    neighbors,
    parse_move,
    pinch,
)


def invariants(s):
    return (
        s.euler_characteristic(),
        s.genus(),
        len(s.components()),
        s.orientable(),
    )


# ---------------------------------------------------------------------- V0


def test_v0_free_emit_absorb(tri, link):
    bubbled, inv = apply_with_inverse(link, Move(V0, 0, direction=1))
    assert bubbled.validate() == CRUDELY_NORMAL
    assert bubbled.weight() == link.weight() + tri.vertex_degree(0)
    assert len(bubbled.components()) == 2
    back, inv2 = apply_with_inverse(bubbled, inv)
    # Absorbing the free bubble from the split union drops the weight by
    # the vertex degree and restores the seed exactly.
    assert link.weight() - bubbled.weight() == -6
    assert back.canonical_key() == link.canonical_key()
    assert inv2 == Move(V0, 0, direction=1)


def test_v0_fused_preserves_topology(tri, link):
    geo = link.tet_geometry(0)
    region = geo.corner_region(0)
    partner = next(c for c, adj in enumerate(geo.curve_adjacent) if region in adj)
    move = Move(V0, 0, direction=1, corner=(0, 0), partner=partner)
    fused, inv = apply_with_inverse(link, move)
    assert fused.validate() == CRUDELY_ALMOST_NORMAL
    assert fused.weight() == link.weight() + 6
    assert invariants(fused) == invariants(link)
    back, inv2 = apply_with_inverse(fused, inv)
    assert back.canonical_key() == link.canonical_key()
    assert inv2 == move


def test_v0_absorb_requires_bubble(tri, link):
    # The bare vertex link is itself an innermost bubble: absorbing it
    # frees the empty surface.  With no bubble present the move refuses.
    from cansurf import empty_surface

    gone = apply(link, Move(V0, 0, direction=-1))
    assert gone.canonical_key() == empty_surface(tri).canonical_key()
    with pytest.raises(NotApplicableError):
        apply(empty_surface(tri), Move(V0, 0, direction=-1))
    with pytest.raises(NotApplicableError, match="fused"):
        apply(link, Move(V0, 0, direction=-1, corner=(0, 0)))


def test_v0_fused_needs_adjacent_partner(tri, link):
    geo = link.tet_geometry(0)
    region = geo.corner_region(0)
    far = next(c for c, adj in enumerate(geo.curve_adjacent) if region not in adj)
    with pytest.raises(NotApplicableError):
        apply(link, Move(V0, 0, direction=1, corner=(0, 0), partner=far))


# ---------------------------------------------------------------------- E1


def test_e1_insert_contract(tri, link):
    found = neighbors(link, 8, move_set={E1})
    assert found
    for n in found:
        assert n.move.kind == E1 and n.move.direction == 1
        assert n.surface.weight() == link.weight() + 2
        assert n.surface.euler_characteristic() == link.euler_characteristic()


def test_e1_no_room_at_budget_six(tri, link):
    # Insertion raises the weight to 8 and no finger pattern exists to
    # delete, so the E1 neighbourhood at budget 6 is empty.
    assert neighbors(link, 6, move_set={E1}) == []


def test_e1_roundtrip(tri, link):
    for n in neighbors(link, 8, move_set={E1}):
        back, inv2 = apply_with_inverse(n.surface, n.inverse)
        assert back.canonical_key() == link.canonical_key()
        assert inv2 == n.move


def test_e1_rejects_degree_one_edge(tri, link):
    # Edge class 2 of the reference table has degree 1.
    assert tri.edge_degree(2) == 1
    with pytest.raises(NotApplicableError, match="degree"):
        apply(link, Move(E1, 2, direction=1, gap=0, incidence=(0, 1), arc=(0, 5)))


def test_e1_delete_needs_finger(tri, link):
    # The two points of an edge class of the link are not consecutive
    # finger points: no face joins them by a returning arc.
    with pytest.raises(NotApplicableError):
        apply(link, Move(E1, 0, direction=-1, gap=0))


# ---------------------------------------------------------------------- F2


# Weight-8 encoding reached from the vertex link by one E1 move; the
# reconnection below merges two distinct curves of tetrahedron 1.
F2_EXAMPLE = """\
edges: 2 4 2
face 0: 0-1 2-9 3-4 5-6 7-8
face 1: 0-9 1-2 3-4 5-6 7-8
face 2: 0-9 1-2 3-4 5-6 7-8
face 3: 0-7 1-2 3-4 5-6
tet 0: disks
tet 1: disks
"""


def test_f2_prime_merges_adjacent_curves(tri):
    surf = parse_surface(tri, F2_EXAMPLE)
    assert surf.validate() == CRUDELY_NORMAL
    move = parse_move("F2'@f2[arcs=0-9:7-8,gain=1]")
    lay = surf.face_layout(2)
    t_gain, f_gain = lay.incidences[1]
    geo = surf.tet_geometry(t_gain)
    before = {_curve_of_copy(geo, f_gain, (0, 9)), _curve_of_copy(geo, f_gain, (7, 8))}
    assert len(before) == 2
    result, inv = apply_with_inverse(surf, move)
    assert result.validate() == CRUDELY_NORMAL
    assert len(result.curves(t_gain)) == len(surf.curves(t_gain)) - 1
    assert result.weight() == surf.weight()
    assert invariants(result) == invariants(surf)
    back, inv2 = apply_with_inverse(result, inv)
    assert back.canonical_key() == surf.canonical_key()
    assert inv2 == move


def test_f2_kind_is_symmetric(tri, link):
    # An annulus-count-changing reconnection is F2 from both ends.
    torus = Surface(tri, link.weights, link.matchings, [((0, 1),), ()])
    found = neighbors(torus, 8, move_set={F2})
    assert found
    for n in found:
        assert n.move.kind == F2
        assert n.inverse.kind == F2
        back, inv2 = apply_with_inverse(n.surface, n.inverse)
        assert back.canonical_key() == torus.canonical_key()
        assert inv2 == n.move
        assert invariants(n.surface) == invariants(torus)


def test_f2_declared_kind_checked(tri, link):
    torus = Surface(tri, link.weights, link.matchings, [((0, 1),), ()])
    n = neighbors(torus, 8, move_set={F2})[0]
    wrong = Move(F2P, n.move.location, arcs=n.move.arcs, gain=n.move.gain)
    with pytest.raises(NotApplicableError, match="declared"):
        apply(torus, wrong)


def test_f2_rejects_self_glued_face(tri, link):
    # Face class 0 is glued to tetrahedron 0 on both sides.
    lay = link.face_layout(0)
    assert lay.incidences[0][0] == lay.incidences[1][0]
    with pytest.raises(NotApplicableError, match="both sides"):
        apply(link, Move(F2P, 0, arcs=((0, 5), (1, 2)), gain=0))


def test_f2_rejects_non_adjacent_arcs(tri, link):
    # Three concentric corner arcs: the innermost and outermost do not
    # bound a common region.
    surf = apply(apply(link, Move(V0, 0, direction=1)), Move(V0, 0, direction=1))
    _, _, chords = surf.face_regions(1)
    pairs = sorted(chords)
    found = None
    for i, a in enumerate(pairs):
        for b in pairs[i + 1:]:
            if not set(chords[a]) & set(chords[b]):
                found = (a, b)
    assert found is not None
    with pytest.raises(NotApplicableError, match="common region"):
        apply(surf, Move(F2P, 1, arcs=found, gain=0))


# ------------------------------------------------------------------- PINCH


def test_pinch_vertex_link_pair(tri, link, catalog):
    # Tube the seed sphere to a second vertex-linking sphere inside a
    # shared tetrahedron.
    pinched = pinch(link, 0, 0, catalog, "v0", 0)
    assert pinched.validate() == CRUDELY_ALMOST_NORMAL
    assert pinched.weight() == 12
    assert pinched.euler_characteristic() == 2
    assert len(pinched.components()) == 1
    assert pinched.genus() == 0


def test_pinch_budget(tri, link, catalog):
    with pytest.raises(NotApplicableError, match="budget"):
        pinch(link, 0, 0, catalog, "v0", 0, budget=11)


def test_pinch_separation_violation(tri, link, catalog):
    # The inserted sphere's corner curve only cobounds with the surface
    # curve at the same corner; any other choice is separated.
    ok = {}
    for c1 in range(4):
        for c2 in range(4):
            try:
                pinch(link, 0, c1, catalog, "v0", c2)
                ok[(c1, c2)] = True
            except NotApplicableError:
                ok[(c1, c2)] = False
    assert sum(ok.values()) == 4
    assert all(ok[(c, c2)] for (c, c2) in ok if ok[(c, c2)])


def test_unpinch_restores_seed(tri, link, catalog):
    pinched, inv = apply_with_inverse(
        link, Move(PINCH, 0, curve=0, sphere="v0", sphere_curve=0), catalog
    )
    assert inv.kind == UNPINCH
    back, inv2 = apply_with_inverse(pinched, inv, catalog)
    assert back.canonical_key() == link.canonical_key()
    assert inv2 == Move(PINCH, 0, curve=0, sphere="v0", sphere_curve=0)


def test_unpinch_rejects_essential_tube(tri, link, catalog):
    # An annulus between two corner curves of the same sheet does not
    # split off a sphere.
    torus = Surface(tri, link.weights, link.matchings, [((0, 1),), ()])
    with pytest.raises(NotApplicableError, match="essential"):
        apply(torus, Move(UNPINCH, 0, curve=0), catalog)


def test_unpinch_requires_canonical_placement(tri, link, catalog):
    # Pinch at tet 0 then slide state: the outer sheet is a vertex-link
    # sphere but not at the innermost placement, so only the inner side
    # unpinches.
    pinched = apply(link, Move(PINCH, 0, curve=0, sphere="v0", sphere_curve=0), catalog)
    pair = pinched.annuli[0][0]
    inner_ok = outer_ok = 0
    for side in pair:
        try:
            apply(pinched, Move(UNPINCH, 0, curve=side), catalog)
            inner_ok += 1
        except NotApplicableError:
            outer_ok += 1
    assert inner_ok == 1 and outer_ok == 1


def test_extended_catalog_block_placement(tri, link, catalog):
    # A weight-2 sphere linking an edge segment, loaded from text, becomes
    # a block-placed catalog entry; it pinches onto the seed at exactly
    # one spot and round-trips through unpinch.
    from cansurf import enumerate_surfaces
    from cansurf.moves import extend_catalog

    spheres = [
        s for s in enumerate_surfaces(tri, 2)
        if s.weight() == 2 and s.euler_characteristic() == 2
        and len(s.components()) == 1
    ]
    assert len(spheres) == 3  # one per edge class
    cat = extend_catalog(catalog, tri, [spheres[0].to_text()])
    assert [e.sphere_id for e in cat] == ["v0", "s0"]
    found = neighbors(link, 8, move_set={PINCH, UNPINCH}, catalog=cat)
    assert [n.move.sphere for n in found] == ["s0"]
    n = found[0]
    assert n.surface.weight() == 8
    assert invariants(n.surface) == invariants(link)
    back, inv2 = apply_with_inverse(n.surface, n.inverse, cat)
    assert back.canonical_key() == link.canonical_key()
    assert inv2 == n.move


def test_extend_catalog_rejects_non_spheres(tri, link, catalog):
    from cansurf.moves import extend_catalog
    from cansurf import SemanticError, Surface

    torus = Surface(tri, link.weights, link.matchings, [((0, 1),), ()])
    with pytest.raises(SemanticError, match="not crudely normal"):
        extend_catalog(catalog, tri, [torus.to_text()])


# -------------------------------------------------------------- neighbours


def test_empty_move_set(tri, link):
    assert neighbors(link, 8, move_set=frozenset()) == []


def test_neighbor_symmetry(tri, link, catalog):
    # Every entry's inverse appears among the neighbours of the target.
    for move_set in ({E1}, DEFAULT_MOVE_SET):
        for n in neighbors(link, 8, move_set=move_set, catalog=catalog):
            back = neighbors(n.surface, 8, move_set=move_set, catalog=catalog)
            matches = [
                b for b in back
                if b.move == n.inverse
                and b.surface.canonical_key() == link.canonical_key()
            ]
            assert matches, n.move.to_text()


def test_neighbors_sorted_deterministically(tri, link, catalog):
    found = neighbors(link, 8, catalog=catalog)
    keyed = [(n.surface.canonical_key(), n.move.to_text()) for n in found]
    assert keyed == sorted(keyed)


def test_budget_rejection_counted(tri, link, catalog):
    stats = {}
    neighbors(link, 6, move_set=DEFAULT_MOVE_SET, catalog=catalog, stats=stats)
    assert stats["budget_rejected"] > 0


def test_move_serialization_round_trip(tri, link, catalog):
    for n in neighbors(link, 12, move_set=DEFAULT_MOVE_SET, catalog=catalog):
        assert parse_move(n.move.to_text()) == n.move
        assert parse_move(n.inverse.to_text()) == n.inverse


@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_random_walk_keys_and_invariants(tri, link, catalog, data):
    # Random walks through the move relation: applying any move and then
    # its inverse restores the canonical key, and every step preserves
    # the topological invariants.
    surf = link
    base = invariants(link)
    for _ in range(data.draw(st.integers(min_value=1, max_value=4))):
        found = neighbors(surf, 10, move_set=DEFAULT_MOVE_SET, catalog=catalog)
        if not found:
            break
        n = found[data.draw(st.integers(min_value=0, max_value=len(found) - 1))]
        back, _ = apply_with_inverse(n.surface, n.inverse, catalog)
        assert back.canonical_key() == surf.canonical_key()
        assert invariants(n.surface) == base
        surf = n.surface


# ---------------------------------------------------------------- locality


def _star_vertex_classes(tri, move):
    """Vertex classes of the move's location simplex."""
    if move.kind == V0:
        return {move.location}
    if move.kind == E1:
        return set(tri.edge_ends[move.location])
    if move.kind in (F2, F2P):
        (t, f), _ = tri.face_classes[move.location]
        return {tri.vertex_class_of[(t, v)] for v in range(4) if v != f}
    return {tri.vertex_class_of[(move.location, v)] for v in range(4)}


def _assert_far_cells_unchanged(before, after, move):
    # Simplices sharing no vertex class with the location must carry the
    # same trace.  Their slot and node numbering only depends on their own
    # edge weights, so direct comparison is sound.
    tri = before.tri
    star = _star_vertex_classes(tri, move)
    for e in range(len(tri.edge_classes)):
        if not set(tri.edge_ends[e]) & star:
            assert before.weights[e] == after.weights[e], (move.to_text(), e)
    for cid in range(len(tri.face_classes)):
        (t, f), _ = tri.face_classes[cid]
        corners = {tri.vertex_class_of[(t, v)] for v in range(4) if v != f}
        if not corners & star:
            assert before.matchings[cid] == after.matchings[cid], (move.to_text(), cid)
    for tet in range(tri.tet_count):
        corners = {tri.vertex_class_of[(tet, v)] for v in range(4)}
        if not corners & star:
            assert before.curves(tet) == after.curves(tet)
            assert before.annuli[tet] == after.annuli[tet]


def test_move_locality_on_subdivision(tri):
    # The one-vertex reference makes every simplex incident to any move
    # location, so locality is only visible after subdividing.
    from cansurf import barycentric_subdivide
    from cansurf.moves import default_catalog as make_catalog

    sub = barycentric_subdivide(tri)
    seed = vertex_link(sub, 0)
    cat = make_catalog(sub)
    budget = seed.weight() + cat.get("v0").weight()
    checked = {"E1": 0, "V0": 0, "PINCH": 0}
    for n in neighbors(seed, budget, move_set={E1}, catalog=cat)[:3]:
        _assert_far_cells_unchanged(seed, n.surface, n.move)
        checked["E1"] += 1
    for n in neighbors(seed, budget, move_set={V0}, catalog=cat)[:2]:
        _assert_far_cells_unchanged(seed, n.surface, n.move)
        checked["V0"] += 1
    for n in neighbors(seed, budget, move_set={PINCH}, catalog=cat)[:2]:
        _assert_far_cells_unchanged(seed, n.surface, n.move)
        checked["PINCH"] += 1
    assert all(v > 0 for v in checked.values()), checked
