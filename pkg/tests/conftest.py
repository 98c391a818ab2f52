import random

import pytest

from bondscope.network import BondNetwork

# ---------------------------------------------------------------------------
# reconstructible reference configurations
# ---------------------------------------------------------------------------


@pytest.fixture
def three_ring_share_edge():
    """Three 4-rings sharing one edge: rank 3, three primitive 4-rings."""
    edges = [(0, 1)]
    for i in range(3):
        c, d = 2 + 2 * i, 3 + 2 * i
        edges += [(0, c), (c, d), (d, 1)]
    return BondNetwork(["X"] * 8, edges)


@pytest.fixture
def three_ring_theta():
    """The theta-like configuration of atoms a..e (0..4): three primitive
    4-rings but only two algebraically independent ones."""
    return BondNetwork(["X"] * 5, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (3, 4)])


@pytest.fixture
def two_rings_plus_annulus_ring():
    """Radius-5 environment with F(0,5)=3, F(0,4)=2, F(2,5)=1 and barcode
    {(0,4), (0,4), (2,5)}: two 8-rings through the root plus a 6-ring hanging
    at distance 2."""
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 0)]
    edges += [(0, 8), (8, 9), (9, 10), (10, 11), (11, 12), (12, 13), (13, 14), (14, 0)]
    edges += [(2, 15), (15, 16), (16, 17), (17, 18), (18, 19), (19, 2)]
    return BondNetwork(["X"] * 20, edges)


# ---------------------------------------------------------------------------
# random graph builders (seeded; Fisher-Yates sampling via random.Random)
# ---------------------------------------------------------------------------


def random_connected_network(seed, max_atoms=30, species=("Si", "O")):
    """Random connected graph: a random spanning tree plus shuffled extra edges."""
    rng = random.Random(seed)
    n = rng.randint(2, max_atoms)
    labels = [rng.choice(species) for _ in range(n)]
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        j = rng.randrange(i)
        a, b = order[i], order[j]
        edges.add((a, b) if a < b else (b, a))
    candidates = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rng.shuffle(candidates)
    extra = rng.randint(0, min(2 * n, len(candidates)))
    for pair in candidates[:extra]:
        edges.add(pair)
    return BondNetwork(labels, edges)


def random_regular_subdivided(seed, n_si=20, degree=4):
    """Random degree-regular graph on Si atoms with an O subdividing every
    edge: a perfectly coordinated (degree, 2) network."""
    rng = random.Random(seed)
    for _ in range(5000):
        stubs = [v for v in range(n_si) for _ in range(degree)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            a, b = stubs[i], stubs[i + 1]
            if a == b or (min(a, b), max(a, b)) in edges:
                ok = False
                break
            edges.add((min(a, b), max(a, b)))
        if ok:
            species = ["Si"] * n_si + ["O"] * len(edges)
            bonds = []
            for o_id, (a, b) in enumerate(sorted(edges), start=n_si):
                bonds.append((a, o_id))
                bonds.append((b, o_id))
            return BondNetwork(species, bonds)
    raise RuntimeError(f"no simple {degree}-regular graph found for seed {seed}")


@pytest.fixture(scope="session")
def cristobalite4():
    from bondscope.crystals import generate_cristobalite

    return generate_cristobalite(4)


@pytest.fixture(scope="session")
def tridymite4():
    from bondscope.crystals import generate_tridymite

    return generate_tridymite(4)


@pytest.fixture(scope="session")
def quartz4():
    from bondscope.crystals import generate_quartz

    return generate_quartz(4)
