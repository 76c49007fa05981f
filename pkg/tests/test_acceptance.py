"""Acceptance gate: one test per criterion, each leaving a PASS/FAIL line in the run summary."""

import itertools
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from isoparam import linalg as la
from isoparam.congruence import apply_to_subspace, are_congruent, automorphism_group
from isoparam.geometry import (Subspace, focal_spectrum, has_constant_principal_curvatures, is_austere, is_cpc,
                               is_minimal, jacobi_eigenvalue_check, jacobi_eta_check, tube_spectrum)
from isoparam.rootsys import FactorSpec, SpaceSpec, build_root_datum, builtin_specs, orbits_of
from isoparam.verify import (a4_austere_fixture, irreducible_specs, irreducible_types, reducible_specs,
                             rh2_austere_fixture, sample_minimal_subspace, verify_collinear_all)

import oracles
from conftest import ACCEPTANCE_LINES, datum_of, planes

Q = Fraction


@contextmanager
def criterion(tag, text):
    info = {}
    start = time.perf_counter()
    try:
        yield info
    except BaseException:
        line = f"[FAIL] {tag} {text} ({time.perf_counter() - start:.1f}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    extra = f"; {info['detail']}" if "detail" in info else ""
    line = f"[PASS] {tag} {text} ({time.perf_counter() - start:.1f}s{extra})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def rand_in_a(d, rng, bound=5):
    return la.lin_comb([rng.randint(-bound, bound) for _ in d.span_basis], d.span_basis)


def rand_normal(b, rng, bound=5):
    while True:
        xi = la.lin_comb([rng.randint(-bound, bound) for _ in b.complement], b.complement)
        if not la.is_zero(xi):
            return xi


def rand_subspace(d, rng, dim, with_hdelta, bound=5):
    """dim-dimensional subspace; when with_hdelta, H_delta enters only through a mixed vector."""
    while True:
        vecs = [rand_in_a(d, rng, bound) for _ in range(dim)]
        if with_hdelta and dim == 1:
            vecs[0] = la.scale(rng.randint(1, 5), d.hdelta)
        elif with_hdelta:
            vecs[0] = la.add(d.hdelta, la.lin_comb([rng.randint(-3, 3) for _ in vecs[1:]], vecs[1:]))
        if la.rank(vecs) == dim:
            return Subspace(d, vecs)


def pair_sum_subspace(d, rng, dim):
    pos = [r.hvec for r in d.positive]
    pool = [la.add(rng.choice(pos), rng.choice(pos)) for _ in range(2 * dim + 2)]
    pool += [la.sub(rng.choice(pos), rng.choice(pos)) for _ in range(dim)]
    rng.shuffle(pool)
    vecs = []
    for v in pool:
        if len(vecs) < dim and la.rank(vecs + [v]) == len(vecs) + 1:
            vecs.append(v)
    return Subspace(d, vecs)


def with_random_mults(spec, rng):
    return SpaceSpec(tuple(FactorSpec.make(f.family, f.rank, {o: rng.randint(1, 4) for o in orbits_of(f.family, f.rank)},
                                           f.scale) for f in spec.factors))


def rank3to5_data():
    specs = irreducible_specs(3, 5)
    specs += [SpaceSpec.of(*[FactorSpec.make("A", 1)] * 3),
              SpaceSpec.of(FactorSpec.make("G2", 2), FactorSpec.make("BC", 1, {"short": 2, "long": 1})),
              SpaceSpec.of(FactorSpec.make("A", 2), FactorSpec.make("B", 2, 1, 2), FactorSpec.make("A", 1, 3))]
    return [build_root_datum(s) for s in specs]


# ---------------------------------------------------------------- AC1

def test_ac1_example_fixtures_are_austere():
    with criterion("AC1", "A4 and (A1)^4 examples austere with validating pairings, < 1 s each") as info:
        times = []
        for make in (a4_austere_fixture, rh2_austere_fixture):
            t0 = time.perf_counter()
            d, b = make()
            res = is_austere(b)
            assert res.austere and res.witness.validate(b)
            # direct check of the pairing: H_i + H_sigma(i) lies in b for every slot
            for i, j in res.witness.pairing:
                hi, hj = d.positive[d.slots[i]].hvec, d.positive[d.slots[j]].hvec
                assert oracles.in_span_det(b.basis, la.add(hi, hj))
            times.append(time.perf_counter() - t0)
            assert times[-1] < 1.0
        info["detail"] = "times " + ", ".join(f"{t:.3f}s" for t in times)


# ---------------------------------------------------------------- AC2

def test_ac2_collinear_condition_exhaustive():
    with criterion("AC2", "non-collinear root exists for all rank 3-8 data, zero failures, < 5 min") as info:
        t0 = time.perf_counter()
        rep = verify_collinear_all(8, include_reducible=True, random_passes=5, seed=2024, reducible_max_rank=6)
        elapsed = time.perf_counter() - t0
        irreducible = sum(len(irreducible_types(r, with_aliases=True)) for r in range(3, 9))
        reducible = len(reducible_specs(3, 6))
        assert len(rep.rows) == 6 * (irreducible + reducible)
        assert rep.failures == []
        # the witness in every row re-validates by an independent rank computation
        assert all(r["status"] == "ok" for r in rep.rows)
        assert elapsed < 300
        info["detail"] = f"{len(rep.rows)} rows"


# ---------------------------------------------------------------- AC3

def test_ac3_minimality_and_trace_identity():
    with criterion("AC3", "is_minimal iff H_delta in b over 1000 subspaces per rank 3-5 datum; exact trace identity") as info:
        rng = random.Random(3)
        data = rank3to5_data()
        minimal_seen = 0
        for d in data:
            for _ in range(1000):
                dim = rng.randint(1, d.rank)
                b = rand_subspace(d, rng, dim, with_hdelta=rng.random() < 0.5)
                m = is_minimal(b)
                assert m == oracles.in_span_det(b.basis, d.hdelta)
                minimal_seen += m
                if b.codim == 0:
                    continue
                for _ in range(10):
                    xi = rand_normal(b, rng)
                    assert focal_spectrum(b, xi).trace == 2 * d.inner(d.hdelta, xi)
        info["detail"] = f"{len(data)} data, {minimal_seen} minimal of {1000 * len(data)}"


# ---------------------------------------------------------------- AC4

def test_ac4_genericity_and_rank_three_lines():
    with criterion("AC4", "A4/B4 codim-2 austere fraction <= 1%; b = R H_delta never austere in rank 3") as info:
        counts = {}
        for fam in ("A", "B"):
            d = datum_of(fam, 4)
            rng = random.Random(42)
            austere = 0
            for _ in range(1000):
                b, _ = sample_minimal_subspace(d, rng, 2, 10)
                assert is_minimal(b)
                res = is_austere(b)
                if res.austere:
                    assert res.witness.validate(b)
                    austere += 1
            counts[f"{fam}4"] = austere
            assert Fraction(austere, 1000) <= Fraction(1, 100)
        rng = random.Random(0)
        lines = 0
        for spec in irreducible_specs(3, 3) + reducible_specs(3, 3):
            variants = [spec] + [with_random_mults(spec, rng) for _ in range(5)]
            for v in variants:
                d = build_root_datum(v)
                b = Subspace.span(d, d.hdelta)
                assert not is_austere(b).austere
                assert not oracles.exists_pairing_by_sums(d, b.basis)
                lines += 1
        info["detail"] = f"austere counts {counts}, {lines} rank-3 lines"


# ---------------------------------------------------------------- AC5

def test_ac5_tube_cmc_and_inhomogeneity():
    with criterion("AC5", "tube mean curvature = -(dim b_perp - 1)/t exactly; witness for every codim >= 2 sample") as info:
        rng = random.Random(5)
        data = rank3to5_data() + [build_root_datum(SpaceSpec.of(FactorSpec.make("BC", 3, {"short": 4, "medium": 4, "long": 3})))]
        witnesses = 0
        for d in data:
            for _ in range(100):
                dim = rng.randint(1, d.rank - 1)
                b = rand_subspace(d, rng, dim, with_hdelta=True)
                xi = rand_normal(b, rng)
                t = Q(rng.randint(1, 30), rng.randint(1, 10))
                assert tube_spectrum(b, xi, t).trace == -Q(d.rank - dim - 1) / t
                if d.rank - dim >= 2:
                    res = has_constant_principal_curvatures(b)
                    w = res.witness
                    assert not res.constant and w.validate(b)
                    h = d.positive[w.root].hvec
                    for x in (w.xi1, w.xi2):
                        assert not la.is_zero(x) and all(d.inner(x, v) == 0 for v in b.basis)
                    assert d.inner(h, w.xi1) != d.inner(h, w.xi2)
                    witnesses += 1
        info["detail"] = f"{100 * len(data)} triples, {witnesses} witnesses"


# ---------------------------------------------------------------- AC6

def _data_with_total_multiplicity(limit):
    kinds = []
    for r in range(1, limit + 1):
        for fam in irreducible_types(r):
            d = build_root_datum(SpaceSpec.of(FactorSpec.make(fam, r)))
            per_orbit = {}
            for x in d.positive:
                per_orbit[x.orbit] = per_orbit.get(x.orbit, 0) + 1
            if len(d.positive) > limit:
                continue
            orbits = list(per_orbit)
            for ms in itertools.product(range(1, limit + 1), repeat=len(orbits)):
                ell = sum(per_orbit[o] * m for o, m in zip(orbits, ms))
                if ell <= limit:
                    kinds.append((ell, FactorSpec.make(fam, r, dict(zip(orbits, ms)))))
    out = []

    def rec(start, remaining, chosen):
        if chosen:
            out.append(SpaceSpec(tuple(chosen)))
        for k in range(start, len(kinds)):
            if kinds[k][0] <= remaining:
                rec(k, remaining - kinds[k][0], chosen + [kinds[k][1]])

    rec(0, limit, [])
    return out


@pytest.mark.slow
def test_ac6_austerity_matches_exhaustive_pairings():
    with criterion("AC6", "austerity decision = exhaustive pairing search, all data with total multiplicity <= 10") as info:
        rng = random.Random(6)
        specs = _data_with_total_multiplicity(10)
        decided = {True: 0, False: 0}
        for spec in specs:
            d = build_root_datum(spec)
            assert len(d.slots) <= 10
            for k in range(50):
                dim = rng.randint(0, d.rank)
                b = pair_sum_subspace(d, rng, dim) if k % 2 else rand_subspace(d, rng, dim, rng.random() < 0.5 and dim > 0, 3)
                res = is_austere(b)
                assert res.austere == oracles.exists_pairing_by_sums(d, b.basis)
                if res.austere:
                    assert res.witness.validate(b)
                decided[res.austere] += 1
        assert decided[True] > 0 and decided[False] > 0
        info["detail"] = f"{len(specs)} data, {decided[True]} austere / {decided[False]} not"


# ---------------------------------------------------------------- AC7

def test_ac7_congruence():
    with criterion("AC7", "group orders, A4 and (A1)^4 congruences, invariance over 100 translated pairs") as info:
        assert len(automorphism_group(datum_of("A", 4))) == 2
        assert len(automorphism_group(datum_of("D", 4))) == 6
        for k in range(1, 7):
            assert len(automorphism_group(planes(k))) == math.factorial(k)
        assert len(automorphism_group(planes(2, (1, 2)))) == 1

        d = datum_of("A", 4)
        s = [r.hvec for r in d.simple]
        w = are_congruent(Subspace.span(d, d.hdelta, s[0]), Subspace.span(d, d.hdelta, s[3]))
        assert w is not None and w.validate(d)
        p = planes(4)
        t = [r.hvec for r in p.simple]
        w = are_congruent(Subspace.span(p, la.add(t[0], t[1]), la.add(t[2], t[3])),
                          Subspace.span(p, la.add(t[0], t[2]), la.add(t[1], t[3])))
        assert w is not None and w.validate(p)

        rng = random.Random(7)
        data = [datum_of("A", 4), datum_of("D", 4), planes(4), datum_of("A", 5), datum_of("E6", 6)]
        austere = 0
        for n in range(100):
            d = data[n % len(data)]
            g = automorphism_group(d)
            dim = rng.randint(1, d.rank - 1)
            b = pair_sum_subspace(d, rng, dim) if n % 2 else rand_subspace(d, rng, dim, rng.random() < 0.5, 3)
            c = apply_to_subspace(rng.choice(g[1:]), b)
            assert are_congruent(b, c) is not None
            assert is_minimal(b) == is_minimal(c)
            ab, ac = is_austere(b).austere, is_austere(c).austere
            assert ab == ac
            austere += ab
        info["detail"] = f"{austere} austere pairs among 100"


# ---------------------------------------------------------------- AC8

def test_ac8_never_constant_principal_curvatures():
    with criterion("AC8", "is_cpc false with validating witness for every codim >= 2 subspace of every built-in") as info:
        rng = random.Random(8)
        specs = builtin_specs(8) + reducible_specs(3, 4)
        checked = 0
        for spec in specs:
            d = build_root_datum(spec)
            if d.rank < 2:
                continue
            subs = [Subspace(d), Subspace.span(d, d.hdelta)]
            for _ in range(6):
                if d.rank >= 3:
                    subs.append(rand_subspace(d, rng, rng.randint(1, d.rank - 2), rng.random() < 0.5))
            for b in subs:
                if b.codim < 2:
                    continue
                res = has_constant_principal_curvatures(b)
                assert not is_cpc(b)
                assert res.witness is not None and res.witness.validate(b)
                checked += 1
        info["detail"] = f"{checked} subspaces over {len(specs)} data"


# ---------------------------------------------------------------- AC9

def test_ac9_jacobi_cross_check():
    with criterion("AC9", "closed-form Jacobi eigenvalues match finite differences within 1e-5") as info:
        worst = 0.0
        for c in range(-3, 4):
            for t in (Q(1, 4), Q(1), Q(4)):
                cf, num = jacobi_eigenvalue_check(c, t)
                assert cf == c
                worst = max(worst, abs(float(cf) - num))
        for t in (Q(1, 4), Q(1), Q(4)):
            cf, num = jacobi_eta_check(t)
            assert cf == -1 / t
            worst = max(worst, abs(float(cf) - num))
        assert worst < 1e-5
        info["detail"] = f"max error {worst:.2e}"
