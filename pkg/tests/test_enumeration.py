import random

import pytest

import oracles
from psat.assignment import Assignment, parse_assignment
from psat.enumeration import (
    CubeSet,
    Cube,
    check_cover,
    check_disjoint,
    count_models,
    enumerate_brute,
    enumerate_projected,
    enumerate_verification,
    enumerate_with_generalization,
    generalize,
)
from psat.fixtures import ex1, phi_star, psi
from psat.formula import Manager, QuantifiedFormula, atoms
from psat.randgen import random_formula
from psat.satcheck import entails, entails_exists, shannon_expansion, verifies, verifies_exists


def cubes(mgr, *texts):
    return [parse_assignment(mgr, t) for t in texts]


def cube_set(cs, universe, disjoint=True):
    return CubeSet([Cube(a) for a in cs], tuple(universe), disjoint, "entail")


class TestBrute:
    def test_example_1(self):
        mgr, f = ex1()
        assert enumerate_brute(f).assignments() == cubes(mgr, "A1,A2", "A1,-A2")

    def test_false(self, mgr):
        assert len(enumerate_brute(mgr.false)) == 0

    def test_phi_star(self):
        mgr, f = phi_star()
        want = cubes(mgr, "A1,A2,-A3,A4", "A1,A2,-A3,-A4", "A1,-A2,-A3,A4", "A1,-A2,-A3,-A4")
        assert enumerate_brute(f).assignments() == want
        # independent check
        assert len(oracles.models(f)) == 4

    def test_bound(self, mgr):
        f = mgr.conj([mgr.atom(f"X{i}") for i in range(5)])
        with pytest.raises(ValueError):
            enumerate_brute(f, bound=4)


class TestVerificationSplitting:
    def test_phi_star_all_total(self):
        mgr, f = phi_star()
        cs = enumerate_verification(f)
        assert len(cs) == 4
        assert all(len(c) == 4 for c in cs)

    def test_single_atom(self, mgr):
        assert enumerate_verification(mgr.atom("A1")).assignments() == [Assignment({1: True})]

    def test_example_1(self):
        mgr, f = ex1()
        assert enumerate_verification(f).assignments() == cubes(mgr, "A1,A2", "A1,-A2")

    def test_random_disjoint_and_sound(self):
        rng = random.Random(41)
        for _ in range(500):
            mgr = Manager()
            f = random_formula(rng, mgr, rng.randint(1, 10), rng.randint(1, 5), const_prob=0.03)
            cs = enumerate_verification(f)
            assert check_disjoint(cs)
            assert check_cover(cs, f)
            assert all(verifies(a, f) for a in cs.assignments())


class TestGeneralize:
    def test_example_6(self):
        mgr, f = phi_star()
        eta = parse_assignment(mgr, "A1,A2,-A3,A4")
        assert generalize(eta, f, "verify").assignment == eta
        assert generalize(eta, f, "entail").assignment == parse_assignment(mgr, "A1,-A3")

    def test_single_literal(self, mgr):
        f = mgr.atom("A1")
        eta = Assignment({1: True})
        for mode in ("verify", "entail"):
            assert generalize(eta, f, mode).assignment == eta

    def test_frozen_keeps_conflict(self):
        mgr, f = ex1()
        prior = cubes(mgr, "A1,A2")
        got = generalize(parse_assignment(mgr, "A1,-A2"), f, "entail", frozen=prior)
        assert got.assignment == parse_assignment(mgr, "A1,-A2")
        assert generalize(parse_assignment(mgr, "A1,-A2"), f, "entail").assignment == parse_assignment(mgr, "A1")

    def test_bad_mode(self):
        mgr, f = ex1()
        with pytest.raises(ValueError):
            generalize(parse_assignment(mgr, "A1,A2"), f, "guess")

    def test_result_is_subset_and_sound(self):
        rng = random.Random(42)
        for _ in range(200):
            mgr = Manager()
            n = rng.randint(1, 8)
            f = random_formula(rng, mgr, n, 4)
            ms = [dict(m) for m in oracles.models(f, range(1, n + 1))]
            if not ms:
                continue
            eta = Assignment(rng.choice(ms)).restrict(atoms(f))
            for mode in ("verify", "entail"):
                c = generalize(eta, f, mode).assignment
                assert c.is_subset_of(eta)
                assert oracles.entails(dict(c), f)
                if mode == "verify":
                    assert verifies(c, f)


class TestGeneralizationEnumeration:
    def test_example_6(self):
        mgr, f = phi_star()
        v = enumerate_with_generalization(f, "verify")
        e = enumerate_with_generalization(f, "entail")
        assert len(v) == 4 and all(len(c) == 4 for c in v)
        assert e.assignments() == cubes(mgr, "A1,-A3")
        assert count_models(v) == count_models(e) == 4
        assert check_cover(v, f) and check_cover(e, f)

    def test_false(self, mgr):
        for mode in ("verify", "entail"):
            assert len(enumerate_with_generalization(mgr.false, mode)) == 0

    def test_valid_formula_gives_empty_cube(self, mgr):
        cs = enumerate_with_generalization(mgr.parse("A | !A"), "entail")
        assert cs.assignments() == [Assignment()]
        assert count_models(cs) == 2

    def test_stats_keys(self):
        _, f = phi_star()
        cs = enumerate_with_generalization(f)
        assert {"num_cubes", "sum_cube_sizes", "solver_calls", "wall_ms"} <= set(cs.stats)
        assert cs.stats["num_cubes"] == 1 and cs.stats["sum_cube_sizes"] == 2

    @pytest.mark.parametrize("mode", ["verify", "entail"])
    def test_random(self, mode):
        rng = random.Random(43 if mode == "verify" else 44)
        for _ in range(200):
            mgr = Manager()
            n = rng.randint(1, 10)
            f = random_formula(rng, mgr, n, rng.randint(1, 5), const_prob=0.03)
            cs = enumerate_with_generalization(f, mode)
            assert check_cover(cs, f)
            assert check_disjoint(cs)
            assert count_models(cs) == len(enumerate_brute(f))
            for a in cs.assignments():
                assert verifies(a, f) if mode == "verify" else entails(a, f)
            ov = enumerate_with_generalization(f, mode, disjoint=False)
            assert check_cover(ov, f)


class TestProjected:
    def test_example_4(self):
        mgr, q = psi()
        assert enumerate_projected(q, "entail").assignments() == cubes(mgr, "A1")
        v = enumerate_projected(q, "verify")
        assert sorted(v.assignments(), key=lambda a: a.literals) == sorted(cubes(mgr, "A1,A2", "A1,-A2"), key=lambda a: a.literals)

    def test_empty_bound_matches_plain(self):
        rng = random.Random(45)
        for _ in range(50):
            mgr = Manager()
            f = random_formula(rng, mgr, 6, 4)
            q = QuantifiedFormula(f, frozenset())
            for mode in ("verify", "entail"):
                assert enumerate_projected(q, mode).assignments() == enumerate_with_generalization(f, mode).assignments()

    @pytest.mark.parametrize("mode", ["verify", "entail"])
    def test_random(self, mode):
        rng = random.Random(46 if mode == "verify" else 47)
        for _ in range(150):
            mgr = Manager()
            nf, nb = rng.randint(1, 6), rng.randint(1, 4)
            f = random_formula(rng, mgr, nf + nb, rng.randint(1, 5))
            q = QuantifiedFormula(f, frozenset(range(nf + 1, nf + nb + 1)) & atoms(f))
            cs = enumerate_projected(q, mode)
            target = shannon_expansion(q)
            assert check_cover(cs, target)
            assert check_disjoint(cs)
            proj = oracles.exists_models(q.matrix, q.free, q.bound)
            assert count_models(cs) == len(proj)
            for a in cs.assignments():
                assert verifies_exists(a, q) if mode == "verify" else entails_exists(a, q)


class TestChecks:
    def test_cover_examples(self):
        mgr, f = phi_star()
        assert check_cover(cube_set(cubes(mgr, "A1,-A3"), range(1, 5)), f)
        mgr, f = ex1()
        assert check_cover(cube_set(cubes(mgr, "A1"), (1, 2)), f)
        assert not check_cover(cube_set(cubes(mgr, "A1,A2"), (1, 2)), f)

    def test_over_coverage(self):
        mgr, f = ex1()
        assert not check_cover(cube_set(cubes(mgr, "A2"), (1, 2)), f)

    def test_disjoint_examples(self, mgr):
        mgr.declare("A1")
        mgr.declare("A2")
        assert check_disjoint(cube_set(cubes(mgr, "A1,A2", "A1,-A2"), (1, 2)))
        assert not check_disjoint(cube_set(cubes(mgr, "A1", "A2"), (1, 2)))

    def test_count_examples(self):
        mgr, _ = phi_star()
        assert count_models(cube_set(cubes(mgr, "A1,-A3"), range(1, 5))) == 4
        assert count_models(cube_set([], range(1, 5))) == 0
        assert count_models(cube_set(cubes(mgr, "A1,A2", "A1,-A2"), (1, 2))) == 2

    def test_count_refuses_overlap(self):
        mgr, f = ex1()
        cs = enumerate_with_generalization(f, "entail", disjoint=False)
        with pytest.raises(ValueError, match="count requires disjoint cubes"):
            count_models(cs)
