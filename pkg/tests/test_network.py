from itertools import chain, combinations

import pytest

from crnrelay.errors import ModelError, NotInvariantFace
from crnrelay.models import builtin_model
from crnrelay.modelfile import parse_model_text
from crnrelay.network import (extract_network, hosting_node, is_siphon,
                              minimal_siphons, siphon_lattice,
                              verify_face_invariance)


def brute_force_minimal_siphons(net, variables):
    '''Reference enumeration: scan the whole powerset, keep inclusion-minimal
    nonempty siphons. Exponential, only for small nets.'''
    sips = []
    items = sorted(variables)
    for r in range(1, len(items) + 1):
        for sub in combinations(items, r):
            s = frozenset(sub)
            if is_siphon(net, s):
                sips.append(s)
    return {s for s in sips if not any(t < s for t in sips)}


def test_builtin_extraction_shape():
    m = builtin_model("osn_omega_pos")
    net = extract_network(m)
    assert len(m.variables) == 8
    assert m.variables == ("S1", "B1", "S2", "B2", "U", "R", "W", "x1")
    assert len(net.reactions) == 13
    assert net.verify_decomposition(m)

    m0 = builtin_model("osn_omega0")
    assert m0.variables == ("S1", "B1", "S2", "B2", "U", "W", "x1")
    assert extract_network(m0).verify_decomposition(m0)


def test_minimal_siphons_builtin():
    net = extract_network(builtin_model("osn_omega_pos"))
    got = set(minimal_siphons(net))
    assert got == {frozenset({"U"}), frozenset({"S1", "B1"}),
                   frozenset({"S2", "B2"})}

    net0 = extract_network(builtin_model("osn_omega0"))
    got0 = set(minimal_siphons(net0))
    assert got0 == {frozenset({"U"}), frozenset({"W"}),
                    frozenset({"S1", "B1"}), frozenset({"S2", "B2"})}


def test_minimal_siphons_match_brute_force():
    for name in ("osn_omega0", "osn_omega_pos"):
        m = builtin_model(name)
        net = extract_network(m)
        assert set(minimal_siphons(net)) == brute_force_minimal_siphons(net, m.variables)


def test_minimal_siphons_handmade():
    src = """
    model tiny
    variables: a b c
    parameters: k
    equations:
        a' = -k*a*b
        b' = k*a*b - b
        c' = b - c
    values:
        k = 1
    """
    m = parse_model_text(src)
    net = extract_network(m)
    assert set(minimal_siphons(net)) == brute_force_minimal_siphons(net, m.variables)


def test_lattice_closure_and_covers():
    for name in ("osn_omega0", "osn_omega_pos"):
        net = extract_network(builtin_model(name))
        lat = siphon_lattice(net)
        nodes = set(lat.nodes)
        # closed under union
        for a in nodes:
            for b in nodes:
                assert a | b in nodes
        # covers are immediate: no node strictly between
        for lo, up in lat.covers:
            assert lo < up
            assert not any(lo < mid < up for mid in nodes)
        # every minimal siphon covers the empty set
        for s in lat.minimal:
            assert (frozenset(), s) in lat.covers


def test_lattice_counts():
    lat0 = siphon_lattice(extract_network(builtin_model("osn_omega0")))
    # four independent minimal siphons: the lattice is the full union closure
    assert len(lat0.nodes) == 15
    latp = siphon_lattice(extract_network(builtin_model("osn_omega_pos")))
    assert len(latp.nodes) == 7


def test_labels_in_model_order():
    m = builtin_model("osn_omega_pos")
    lat = m.lattice()
    assert lat.label(frozenset({"B1", "S1"})) == "{S1,B1}"
    assert lat.label(frozenset({"U", "B2", "S2"})) == "{S2,B2,U}"


def test_face_invariance_matches_siphon_property():
    for name in ("osn_omega0", "osn_omega_pos"):
        m = builtin_model(name)
        net = extract_network(m)
        singles = [frozenset({v}) for v in m.variables]
        for face in chain(singles, m.lattice().nodes):
            assert verify_face_invariance(m, face).ok == is_siphon(net, face)


def test_require_invariant_face_raises():
    m = builtin_model("osn_omega_pos")
    from crnrelay.network import require_invariant_face
    with pytest.raises(NotInvariantFace):
        require_invariant_face(m, {"x1"})
    with pytest.raises(ModelError):
        require_invariant_face(m, {"nope"})
    assert require_invariant_face(m, {"U"}) == frozenset({"U"})


def test_hosting_node_projects_out_ambient_variables():
    m = builtin_model("osn_omega_pos")
    lat = m.lattice()
    # W and R are outside every omega>0 minimal siphon, x1 always is
    assert hosting_node(lat, {"S1", "B1", "S2", "B2", "W", "R"}) == \
        frozenset({"S1", "B1", "S2", "B2"})
    assert hosting_node(lat, {"U", "x1"}) == frozenset({"U"})
    assert hosting_node(lat, set()) == frozenset()
    # the projection itself does not validate nodehood
    assert hosting_node(lat, {"S1", "x1"}) == frozenset({"S1"})
