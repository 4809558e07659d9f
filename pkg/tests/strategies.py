import random

from hypothesis import strategies as st

from psat.formula import Manager
from psat.randgen import random_assignment, random_formula


def formulas(max_atoms=6, max_depth=4, const_prob=0.0):
    """(manager, formula) pairs drawn from the seeded generator."""
    return st.builds(
        lambda seed, n, d: _build(seed, n, d, const_prob),
        st.integers(0, 2**32 - 1),
        st.integers(1, max_atoms),
        st.integers(0, max_depth),
    )


def _build(seed, n, d, const_prob):
    mgr = Manager()
    for i in range(1, n + 1):
        mgr.declare(f"A{i}")
    return mgr, random_formula(random.Random(seed), mgr, n, d, const_prob=const_prob)


def partial(mgr, rng_seed, density=0.5):
    rng = random.Random(rng_seed)
    return random_assignment(rng, range(1, mgr.num_atoms + 1), density)
