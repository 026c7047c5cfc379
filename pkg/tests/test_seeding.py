import numpy as np

from skewflow.seeding import derive_seed, derive_seeds, philox


def test_derive_seed_is_pure():
    assert derive_seed(1, "hitting", 3) == derive_seed(1, "hitting", 3)


def test_streams_differ():
    seeds = {derive_seed(1, "hitting", i) for i in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(1, "hitting", 0) != derive_seed(1, "potential", 0)
    assert derive_seed(1, "hitting", 0) != derive_seed(2, "hitting", 0)


def test_derive_seeds_matches_scalar_and_fits_63_bits():
    s = derive_seeds(9, "x", 50)
    assert s.dtype == np.int64 and np.all(s >= 0)
    assert all(int(s[i]) == derive_seed(9, "x", i) & ((1 << 63) - 1) for i in range(50))
    # a replica seed does not depend on how many replicas are requested
    assert np.array_equal(derive_seeds(9, "x", 10), s[:10])


def test_philox_reproducible():
    a = philox(5, 1).random(10)
    b = philox(5, 1).random(10)
    c = philox(5, 2).random(10)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
