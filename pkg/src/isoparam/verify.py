"""Brute-force checks and sampling experiments over bounded-rank root data."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import linalg as la
from .congruence import are_congruent
from .geometry import (Subspace, has_constant_principal_curvatures, is_austere,
                       is_cpc, is_minimal, find_collinear_witness, non_austere_sufficient,
                       tube_mean_curvature, tube_spectrum)
from .rootsys import (FactorSpec, RootDatum, SpaceSpec, build_root_datum, hyperbolic_planes,
                      orbits_of, positive_root, single)

# Irreducible types up to isomorphism, by rank.  C2 = B2 and D3 = A3 are
# aliases and are only listed in the irreducible sweep.
_TYPES_BY_RANK = {
    1: ["A", "BC"],
    2: ["A", "B", "G2", "BC"],
}


def irreducible_types(rank: int, with_aliases: bool = False) -> list:
    if rank in _TYPES_BY_RANK:
        fams = list(_TYPES_BY_RANK[rank])
        if with_aliases and rank == 2:
            fams.insert(2, "C")
        return fams
    fams = ["A", "B", "C"]
    if rank >= 4 or with_aliases:
        fams.append("D")
    fams.append("BC")
    fams += {4: ["F4"], 6: ["E6"], 7: ["E7"], 8: ["E8"]}.get(rank, [])
    return fams


def _factor(fam, rank, mults=1, scale=1) -> FactorSpec:
    return FactorSpec.make(fam, rank, mults, scale)


def _random_mults(rng: random.Random, fam: str, rank: int) -> dict:
    return {o: rng.randint(1, 4) for o in orbits_of(FactorSpec.make(fam, rank).family, rank)}


def reducible_specs(min_total: int, max_total: int) -> list:
    """Every multiset of at least two irreducible factors with total rank in range."""
    kinds = [(r, fam) for r in range(1, max_total) for fam in irreducible_types(r)]
    out = []

    def rec(start, remaining, chosen):
        total = sum(r for r, _ in chosen)
        if len(chosen) >= 2 and total >= min_total:
            out.append(list(chosen))
        for k in range(start, len(kinds)):
            r, fam = kinds[k]
            if r <= remaining:
                chosen.append(kinds[k])
                rec(k, remaining - r, chosen)
                chosen.pop()

    rec(0, max_total, [])
    return [SpaceSpec(tuple(_factor(f, r) for r, f in combo)) for combo in out]


def irreducible_specs(min_rank: int, max_rank: int) -> list:
    return [single(f, r) for r in range(min_rank, max_rank + 1)
            for f in irreducible_types(r, with_aliases=True)]


def _with_random_mults(spec: SpaceSpec, rng: random.Random) -> SpaceSpec:
    return SpaceSpec(tuple(_factor(f.family, f.rank, _random_mults(rng, f.family, f.rank), f.scale)
                           for f in spec.factors))


def collinear_holds(datum: RootDatum, lam: int) -> bool:
    """Independent re-check that ``lam`` satisfies the non-collinearity condition.

    Uses rank of ``{H_lam + H_mu, H_delta}`` rather than coordinate ratios.
    """
    h = datum.positive[lam].hvec
    return all(la.rank([la.add(h, r.hvec), datum.hdelta]) == 2 for r in datum.positive)


def verify_leq_oracle(datum: RootDatum, lam: int) -> bool:
    """For every positive mu some positive nu has <H_lam + H_mu, H_nu> <= 0."""
    pos = [r.hvec for r in datum.positive]
    low = [datum.lower(v) for v in pos]
    h = pos[lam]
    return all(any(la.dot(lv, la.add(h, mu)) <= 0 for lv in low) for mu in pos)


def _alias(spec: SpaceSpec) -> Optional[str]:
    if len(spec.factors) == 1:
        f = spec.factors[0]
        if f.family == "D" and f.rank == 3:
            return "A3"
        if f.family == "C" and f.rank == 2:
            return "B2"
    return None


def collinear_row(spec: SpaceSpec, pass_name: str = "mult1") -> dict:
    datum = build_root_datum(spec)
    row = {
        "space": spec.label,
        "pass": pass_name,
        "rank": spec.rank,
        "multiplicities": [dict(f.multiplicities) for f in spec.factors],
    }
    alias = _alias(spec)
    if alias:
        row["alias_of"] = alias
    lam = find_collinear_witness(datum)
    if lam is None:
        row["witness"] = None
        row["status"] = "below-rank" if spec.rank < 3 else "FAILURE"
        return row
    row["witness"] = datum.root_name(lam)
    row["witness_index"] = lam
    ok = collinear_holds(datum, lam)
    row["leq_oracle"] = verify_leq_oracle(datum, lam)
    row["status"] = "ok" if ok else "FAILURE"
    if spec.rank < 3 and ok:
        row["status"] = "ok (below theorem rank)"
    return row


@dataclass
class CollinearReport:
    max_rank: int
    include_reducible: bool
    seed: int
    random_passes: int
    rows: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        return [r for r in self.rows if r["status"] == "FAILURE"]

    def to_json(self) -> dict:
        return {
            "config": {"max_rank": self.max_rank, "include_reducible": self.include_reducible,
                       "seed": self.seed, "random_passes": self.random_passes},
            "checked": len(self.rows),
            "failures": len(self.failures),
            "rows": self.rows,
        }


def verify_collinear_all(max_rank: int, include_reducible: bool = False, random_passes: int = 1,
                         seed: int = 0, reducible_max_rank: Optional[int] = None) -> CollinearReport:
    """Run the non-collinearity search over every root system of rank 3..max_rank."""
    if not 3 <= max_rank <= 8:
        raise ValueError("max_rank must be between 3 and 8")
    rng = random.Random(seed)
    report = CollinearReport(max_rank, include_reducible, seed, random_passes)
    specs = irreducible_specs(3, max_rank)
    if include_reducible:
        specs += reducible_specs(3, reducible_max_rank or max_rank)
    for spec in specs:
        report.rows.append(collinear_row(spec))
        for k in range(random_passes):
            report.rows.append(collinear_row(_with_random_mults(spec, rng), f"random{k + 1}"))
    return report


# ---------------------------------------------------------------------------
# genericity


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 0
    count: int = 100
    coeff_bound: int = 10
    codim: int = 2

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.coeff_bound < 1:
            raise ValueError("coeff_bound must be >= 1")

    def to_json(self) -> dict:
        return {"seed": self.seed, "count": self.count, "coeff_bound": self.coeff_bound, "codim": self.codim}


def random_vector_in_a(datum: RootDatum, rng: random.Random, bound: int):
    coeffs = [rng.randint(-bound, bound) for _ in datum.span_basis]
    return la.lin_comb(coeffs, datum.span_basis)


def sample_minimal_subspace(datum: RootDatum, rng: random.Random, codim: int, bound: int):
    """Random b containing H_delta with the given codimension; returns (b, draws)."""
    dim = datum.rank - codim
    draws = 0
    while True:
        draws += 1
        vecs = [datum.hdelta] + [random_vector_in_a(datum, rng, bound) for _ in range(dim - 1)]
        if la.rank(vecs) == dim:
            return Subspace(datum, vecs), draws


@dataclass
class GenericityReport:
    space: str
    config: SampleConfig
    sampled: int = 0
    minimal_count: int = 0
    austere_count: int = 0
    sufficient_count: int = 0
    draws: int = 0
    austere_samples: list = field(default_factory=list)

    @property
    def austere_fraction(self) -> Fraction:
        return Fraction(self.austere_count, self.sampled) if self.sampled else Fraction(0)

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "config": self.config.to_json(),
            "sampled": self.sampled,
            "draws": self.draws,
            "rejected": self.draws - self.sampled,
            "minimal_count": self.minimal_count,
            "austere_count": self.austere_count,
            "austere_fraction": la.fmt(self.austere_fraction),
            "sufficient_non_austere_count": self.sufficient_count,
            "austere_samples": self.austere_samples,
        }


def genericity_experiment(spec, cfg: SampleConfig) -> GenericityReport:
    """Sample minimal orbits and count how many are austere."""
    datum = spec if isinstance(spec, RootDatum) else build_root_datum(spec)
    label = datum.spec.label if datum.spec else "custom"
    if datum.rank < 3:
        raise ValueError(f"rank {datum.rank} < 3")
    if not 2 <= cfg.codim <= datum.rank - 1:
        raise ValueError(f"codim must be between 2 and {datum.rank - 1}, got {cfg.codim}")
    rng = random.Random(cfg.seed)
    lam = find_collinear_witness(datum)
    report = GenericityReport(label, cfg)
    for _ in range(cfg.count):
        b, draws = sample_minimal_subspace(datum, rng, cfg.codim, cfg.coeff_bound)
        report.draws += draws
        report.sampled += 1
        report.minimal_count += is_minimal(b)
        if lam is not None and non_austere_sufficient(b, lam):
            report.sufficient_count += 1
        res = is_austere(b)
        if res.austere:
            assert res.witness.validate(b)
            report.austere_count += 1
            report.austere_samples.append([[la.fmt(x) for x in row] for row in b.basis])
    return report


# ---------------------------------------------------------------------------
# fixtures from the explicit examples


@dataclass(frozen=True)
class FixtureResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def a4_austere_fixture():
    """SL5/SO5 with b spanned by the highest root and a2+a3."""
    datum = build_root_datum(single("A", 4, 1))
    b = Subspace.span(datum, positive_root(datum, (1, 1, 1, 1)), positive_root(datum, (0, 1, 1, 0)))
    return datum, b


def a4_listed_pairing(datum: RootDatum) -> dict:
    """The cycle list (a1 l-a1)(a2 a3)(a4 l-a4)(a1+a2 a3+a4) as a map on positive indices."""
    cycles = [((1, 0, 0, 0), (0, 1, 1, 1)), ((0, 1, 0, 0), (0, 0, 1, 0)),
              ((0, 0, 0, 1), (1, 1, 1, 0)), ((1, 1, 0, 0), (0, 0, 1, 1))]
    idx = {r.coeffs: i for i, r in enumerate(datum.positive)}
    sigma = {i: i for i in range(len(datum.positive))}
    for x, y in cycles:
        sigma[idx[x]], sigma[idx[y]] = idx[y], idx[x]
    return sigma


def rh2_austere_fixture():
    """(RH^2)^4 with b spanned by H_a1 + H_a2 and H_a3 + H_a4."""
    datum = build_root_datum(hyperbolic_planes(4))
    s = [r.hvec for r in datum.simple]
    b = Subspace.span(datum, la.add(s[0], s[1]), la.add(s[2], s[3]))
    return datum, b


def sigma_satisfies(b: Subspace, sigma: dict) -> bool:
    """Check a permutation of positive roots (all multiplicities one) pairs projections to zero."""
    proj = b.root_projections
    if sorted(sigma.values()) != sorted(sigma):
        return False
    return all(la.is_zero(la.add(proj[i], proj[j])) for i, j in sigma.items())


def _cpc_check(name, b) -> FixtureResult:
    res = has_constant_principal_curvatures(b)
    ok = not is_cpc(b) and res.witness is not None and res.witness.validate(b)
    return FixtureResult(f"{name}: not CPC", ok, f"witness root {b.datum.root_name(res.witness.root)}" if res.witness else "")


def _tube_check(name, b) -> FixtureResult:
    t = Fraction(3, 2)
    ok = True
    for xi in b.complement:
        spec = tube_spectrum(b, xi, t)
        ok &= spec.trace == tube_mean_curvature(b, t) and spec.total == _dim_m(b.datum) - 1
    return FixtureResult(f"{name}: tube CMC", ok, f"H^t = -(dim b_perp - 1)/t = {tube_mean_curvature(b, t)} at t = {t}")


def _dim_m(datum) -> int:
    return datum.rank + sum(r.mult for r in datum.positive)


def example_fixtures() -> list:
    out = []
    datum, b = a4_austere_fixture()
    res = is_austere(b)
    out.append(FixtureResult("A4 highest root + a2+a3: austere", res.austere and res.witness.validate(b),
                             f"pairing {res.witness.to_json() if res.witness else None}"))
    out.append(FixtureResult("A4: listed permutation satisfies pairing condition",
                             sigma_satisfies(b, a4_listed_pairing(datum))))
    out.append(_cpc_check("A4 austere fixture", b))

    d4, b4 = rh2_austere_fixture()
    res = is_austere(b4)
    out.append(FixtureResult("(RH2)^4 pair sums: austere", res.austere and res.witness.validate(b4),
                             f"pairing {res.witness.to_json() if res.witness else None}"))
    out.append(FixtureResult("(RH2)^4: permutation (a1 a2)(a3 a4) satisfies pairing condition",
                             sigma_satisfies(b4, {0: 1, 1: 0, 2: 3, 3: 2})))
    out.append(_cpc_check("(RH2)^4 austere fixture", b4))

    for fam in ("A", "B", "C", "BC"):
        d = build_root_datum(single(fam, 3))
        b = Subspace.span(d, d.hdelta)
        lam = find_collinear_witness(d)
        ok = is_minimal(b) and not is_austere(b).austere and lam is not None and non_austere_sufficient(b, lam)
        out.append(FixtureResult(f"{fam}3 b = R H_delta: minimal, not austere", ok,
                                 f"non-collinear root {d.root_name(lam) if lam is not None else None}"))
        out.append(_tube_check(f"{fam}3 b = R H_delta", b))
        out.append(_cpc_check(f"{fam}3 b = R H_delta", b))

    a4 = build_root_datum(single("A", 4))
    s = [r.hvec for r in a4.simple]
    b1 = Subspace.span(a4, a4.hdelta, s[0])
    b2 = Subspace.span(a4, a4.hdelta, s[3])
    b3 = Subspace.span(a4, a4.hdelta, s[1])
    w = are_congruent(b1, b2)
    out.append(FixtureResult("A4: <H_delta, a1> congruent to <H_delta, a4>", w is not None and not w.is_identity()))
    out.append(FixtureResult("A4: <H_delta, a1> not congruent to <H_delta, a2>", are_congruent(b1, b3) is None))
    out.append(_tube_check("A4 <H_delta, a1>", b1))
    out.append(_cpc_check("A4 <H_delta, a1>", b1))
    return out
