import pytest

from weylkit.cartan import (
    build_root_datum,
    cartan_matrix,
    fundamental_group,
    load_datum,
    weyl_action_on_fundamental_group_trivial,
    weyl_group,
    weyl_group_order,
)

# number of positive roots, classical values
POSITIVE = {("A", 1): 1, ("A", 2): 3, ("A", 3): 6, ("B", 2): 4, ("B", 3): 9, ("C", 3): 9,
            ("D", 4): 12, ("G", 2): 6, ("F", 4): 24}
# order of Lambda_G / Lambda in the adjoint case (index of the coroot lattice in the coweight lattice)
ADJOINT_PI1 = {("A", 1): 2, ("A", 2): 3, ("A", 3): 4, ("B", 2): 2, ("B", 3): 2, ("C", 3): 2,
               ("D", 4): 4, ("G", 2): 1, ("F", 4): 1}


def test_rank_one():
    d = build_root_datum("A", 1)
    assert sorted(d.roots) == [(-1,), (1,)]
    assert d.simple_coroots == ((2,),)
    assert fundamental_group(d).is_trivial
    assert [len(d.weyl_word(w)) for w in weyl_group(d)] == [0, 1]


def test_cartan_conventions():
    # entries <alpha_i^vee, alpha_j>
    assert cartan_matrix("B", 2) == [[2, -1], [-2, 2]]
    assert cartan_matrix("C", 2) == [[2, -2], [-1, 2]]
    assert cartan_matrix("G", 2) == [[2, -3], [-1, 2]]
    with pytest.raises(ValueError):
        cartan_matrix("D", 3)
    with pytest.raises(ValueError):
        cartan_matrix("X", 2)


@pytest.mark.parametrize("key", sorted(POSITIVE))
def test_root_system_counts(key):
    d = build_root_datum(*key)
    assert len(d.positive_roots) == POSITIVE[key]
    assert len(d.roots) == 2 * POSITIVE[key]
    W = weyl_group(d)
    assert len(W) == weyl_group_order(*key)
    roots = set(d.roots)
    for w in W:
        assert {tuple(w.act_root(a)) for a in roots} == roots


@pytest.mark.parametrize("key", sorted(POSITIVE))
def test_fundamental_groups(key):
    sc = build_root_datum(*key, isogeny="sc")
    ad = build_root_datum(*key, isogeny="adjoint")
    assert fundamental_group(sc).is_trivial
    assert fundamental_group(ad).order == ADJOINT_PI1[key]
    assert weyl_action_on_fundamental_group_trivial(ad)


def test_d4_fundamental_group_structure():
    ad = build_root_datum("D", 4, isogeny="adjoint")
    assert fundamental_group(ad).invariant_factors == (2, 2)


def test_load_datum_forms(tmp_path):
    p = tmp_path / "d.json"
    p.write_text('{"type":"A","rank":2,"isogeny":"sc"}')
    assert load_datum(str(p)) == build_root_datum("A", 2)
    custom = load_datum({"type": "A", "rank": 1, "isogeny": {"custom": [[1]]}})
    assert custom == build_root_datum("A", 1, isogeny="adjoint")
    with pytest.raises(ValueError):
        load_datum({"type": "A", "rank": 1, "isogeny": {"custom": [[3]]}})
    assert load_datum(custom.to_json()) == custom


def test_central_torus():
    d = build_root_datum("A", 1, central_rank=1)
    assert d.dim == 2
    assert fundamental_group(d).free_rank == 1
