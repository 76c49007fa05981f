import math
import random
from fractions import Fraction

import pytest

from isoparam import linalg as la
from isoparam.congruence import (apply_to_subspace, are_congruent, automorphism_group, canonical_form,
                                 check_group, orbit_count)
from isoparam.geometry import Subspace, is_austere, is_minimal, symbolic_focal_spectrum
from isoparam.rootsys import FactorSpec, SpaceSpec, build_root_datum, single

import oracles
from conftest import datum_of, planes, random_subspace


@pytest.mark.parametrize("rank", [2, 3, 4, 5])
def test_type_a_has_two_symmetries(rank):
    assert len(automorphism_group(datum_of("A", rank))) == 2


def test_a1_is_trivial():
    assert len(automorphism_group(datum_of("A", 1))) == 1


def test_d4_triality():
    assert len(automorphism_group(datum_of("D", 4))) == 6


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_planes_symmetric_group(k):
    assert len(automorphism_group(planes(k))) == math.factorial(k)


def test_unequal_scales_break_symmetry():
    assert len(automorphism_group(planes(2, (1, 2)))) == 1
    assert len(automorphism_group(planes(3, (1, 1, 2)))) == 2


def test_multiplicities_break_symmetry():
    spec = SpaceSpec.of(FactorSpec.make("A", 1, 1), FactorSpec.make("A", 1, 2))
    assert len(automorphism_group(build_root_datum(spec))) == 1
    assert len(automorphism_group(build_root_datum(single("A", 3, 2)))) == 2


RANK_LE_3 = [("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 3), ("BC", 2), ("BC", 3), ("G2", 2)]


@pytest.mark.parametrize("fam, rank", RANK_LE_3)
def test_group_order_matches_bijection_count(fam, rank):
    d = datum_of(fam, rank)
    assert len(automorphism_group(d)) == oracles.positive_root_symmetries(d)


def test_group_order_matches_bijection_count_reducible():
    spec = SpaceSpec.of(FactorSpec.make("A", 2), FactorSpec.make("A", 1), FactorSpec.make("A", 1))
    d = build_root_datum(spec)
    assert len(automorphism_group(d)) == oracles.positive_root_symmetries(d) == 4


@pytest.mark.parametrize("fam, rank", [("A", 4), ("D", 4), ("E6", 6), ("BC", 3)])
def test_group_axioms(fam, rank):
    d = datum_of(fam, rank)
    g = automorphism_group(d)
    check_group(d, g)
    for w in g:
        assert w.apply(d.hdelta) == d.hdelta
        assert w.validate(d)


def test_a4_hdelta_alpha1_congruent_to_alpha4():
    d = datum_of("A", 4)
    s = [r.hvec for r in d.simple]
    b1 = Subspace.span(d, d.hdelta, s[0])
    b2 = Subspace.span(d, d.hdelta, s[3])
    w = are_congruent(b1, b2)
    assert w is not None and not w.is_identity()
    assert apply_to_subspace(w, b1) == b2
    assert are_congruent(b1, Subspace.span(d, d.hdelta, s[1])) is None


def test_plane_pair_swap():
    d = planes(4)
    s = [r.hvec for r in d.simple]
    b1 = Subspace.span(d, la.add(s[0], s[1]), la.add(s[2], s[3]))
    b2 = Subspace.span(d, la.add(s[0], s[2]), la.add(s[1], s[3]))
    w = are_congruent(b1, b2)
    assert w is not None
    # a transposition of the middle two factors does the job
    assert w.factor_permutation in {(0, 2, 1, 3), (3, 1, 2, 0)}
    assert are_congruent(b1, b1).is_identity()


def test_orbit_count_a4():
    d = datum_of("A", 4)
    s = [r.hvec for r in d.simple]
    subs = [Subspace.span(d, d.hdelta, s[0]), Subspace.span(d, d.hdelta, s[3]),
            Subspace.span(d, d.hdelta, s[1])]
    rep = orbit_count(subs)
    assert rep.classes == ((0, 1), (2,))
    assert len(rep.representatives) == 2


@pytest.mark.parametrize("which", ["A4", "D4", "planes4"])
def test_orbit_count_matches_pairwise_oracle(which):
    d = planes(4) if which == "planes4" else datum_of(which[0], 4)
    rng = random.Random(len(which))
    g = automorphism_group(d)
    base = [random_subspace(d, rng, 2, bound=2) for _ in range(6)]
    subs = base + [apply_to_subspace(rng.choice(g), b) for b in base]
    rng.shuffle(subs)

    def related(i, j):
        return any(apply_to_subspace(w, subs[i]) == subs[j] for w in g)

    assert len(orbit_count(subs).classes) == oracles.components(len(subs), related)


def test_congruence_is_equivalence_relation():
    d = planes(3)
    rng = random.Random(4)
    g = automorphism_group(d)
    subs = []
    for _ in range(10):
        b = random_subspace(d, rng, 1, bound=1)
        subs += [b, apply_to_subspace(rng.choice(g), b)]
    rel = [[are_congruent(a, b) is not None for b in subs] for a in subs]
    n = len(subs)
    for i in range(n):
        assert rel[i][i]
        for j in range(n):
            assert rel[i][j] == rel[j][i]
            for k in range(n):
                if rel[i][j] and rel[j][k]:
                    assert rel[i][k]


def test_canonical_form_constant_on_orbits():
    d = datum_of("D", 4)
    rng = random.Random(9)
    for _ in range(10):
        b = random_subspace(d, rng, 2, with_hdelta=True, bound=3)
        forms = {canonical_form(apply_to_subspace(w, b)) for w in automorphism_group(d)}
        assert len(forms) == 1


@pytest.mark.parametrize("fam, rank", [("A", 4), ("D", 4)])
def test_invariants_preserved_under_symmetry(fam, rank):
    d = datum_of(fam, rank)
    g = automorphism_group(d)
    rng = random.Random(rank)
    for _ in range(15):
        b = random_subspace(d, rng, rng.randint(1, rank - 1), with_hdelta=rng.random() < 0.5, bound=2)
        w = rng.choice(g)
        c = apply_to_subspace(w, b)
        assert is_minimal(b) == is_minimal(c)
        assert is_austere(b).austere == is_austere(c).austere
        # symbolic spectra correspond through the isometry
        sb = symbolic_focal_spectrum(b)
        sc = symbolic_focal_spectrum(c)
        mapped = sorted((c.project(w.apply(p)), m) for p, m in sb.entries)
        assert mapped == sorted(sc.entries)


def test_mixed_datum_rejected():
    a, b = datum_of("A", 3), datum_of("B", 3)
    with pytest.raises(ValueError):
        are_congruent(Subspace.span(a, a.hdelta), Subspace.span(b, b.hdelta))


def test_witness_json_shape():
    d = datum_of("A", 2)
    w = automorphism_group(d)[1]
    js = w.to_json()
    assert set(js) == {"matrix", "perm", "factor_perm"}
    assert js["perm"] == [1, 0, 2]
    m = tuple(tuple(Fraction(x) for x in row) for row in js["matrix"])
    # swaps the simple roots, fixes the direction normal to a
    assert la.matvec(m, d.simple[0].hvec) == d.simple[1].hvec
    assert la.matvec(m, la.vec([1, 1, 1])) == la.vec([1, 1, 1])
