from rectcart.generate import (
    double_fan,
    enumerate_triangulations,
    fan_outerplanar,
    gen_random_triangulation,
    random_outerplanar,
    random_weights,
)
from rectcart.graph import is_maximal_outerplanar, validate


def test_n3_is_triangle():
    g = gen_random_triangulation(3, 0)
    assert g.n == 3 and g.m == 3 and len(g.outer) == 3


def test_n50_edge_count():
    assert gen_random_triangulation(50, 7).m == 144


def test_thousand_samples_validate():
    for seed in range(1000):
        g = gen_random_triangulation(10, seed)
        assert not validate(g).problems, seed


def test_seeded_generator_is_reproducible():
    assert gen_random_triangulation(30, 5) == gen_random_triangulation(30, 5)
    assert random_weights(10, 3) == random_weights(10, 3)
    assert all(10 <= w <= 100 for w in random_weights(100, 1))


def test_double_fan_is_hamiltonian_along_its_labels():
    for n in (4, 7, 12):
        g = double_fan(n)
        assert not validate(g).problems
        assert all(g.has_edge(k, (k + 1) % n) for k in range(n))
        assert {0, n - 1} <= set(g.outer)


def test_outerplanar_generators():
    for n in (3, 5, 9):
        for g in (random_outerplanar(n, n), fan_outerplanar(n)):
            assert is_maximal_outerplanar(g)
            assert g.m == 2 * n - 3
            assert not validate(g, maximal=False).problems


def test_enumeration_counts():
    # numbers of triangulations of the sphere with 4..8 unlabelled vertices
    assert [len(enumerate_triangulations(n)) for n in range(4, 9)] == [1, 1, 2, 5, 14]
