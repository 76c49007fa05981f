"""Exact realizations of restricted root systems with multiplicities.

A space is modelled by its restricted root datum: a list of irreducible
factors (family, rank, multiplicity per Weyl orbit, metric scale).  Each
factor gets its own orthogonal block of ambient coordinates and the vector
``H_lambda`` of a root is stored by its ambient coordinates; the inner
product on that block is ``scale`` times the standard dot product.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional, Sequence

from . import linalg as la
from .linalg import Q, Vec

FAMILIES = ("A", "B", "C", "D", "BC", "E6", "E7", "E8", "F4", "G2")

# Weyl orbits of roots per family, in serialization order.
_ORBITS = {
    "A": ("all",),
    "D": ("all",),
    "E6": ("all",),
    "E7": ("all",),
    "E8": ("all",),
    "B": ("long", "short"),
    "C": ("short", "long"),
    "F4": ("long", "short"),
    "G2": ("short", "long"),
    "BC": ("short", "medium", "long"),
}

_FIXED_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}
_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "BC": 1}

# Sizes of the classification, used by self-tests.
def root_count(family: str, rank: int) -> int:
    r = rank
    return {
        "A": r * (r + 1),
        "B": 2 * r * r,
        "C": 2 * r * r,
        "D": 2 * r * (r - 1),
        "BC": 2 * r * r + 2 * r,
        "G2": 12,
        "F4": 48,
        "E6": 72,
        "E7": 126,
        "E8": 240,
    }[family]


class SpecError(ValueError):
    """Invalid space specification (family, rank, multiplicities or scale)."""


def orbits_of(family: str, rank: int) -> tuple[str, ...]:
    if family == "BC" and rank == 1:
        return ("short", "long")
    return _ORBITS[family]


def _normalize_family(family: str, rank: int) -> str:
    fam = family.strip().upper()
    if fam == "E" and rank in (6, 7, 8):
        fam = f"E{rank}"
    elif fam == "F" and rank == 4:
        fam = "F4"
    elif fam == "G" and rank == 2:
        fam = "G2"
    if fam not in FAMILIES:
        raise SpecError(f"unknown family {family!r}")
    return fam


@dataclass(frozen=True)
class FactorSpec:
    family: str
    rank: int
    multiplicities: tuple  # ((orbit, m), ...) in orbit order
    scale: Fraction = Q(1)

    @classmethod
    def make(cls, family: str, rank: int, multiplicities: Mapping[str, int] | int | None = None,
             scale=1) -> "FactorSpec":
        fam = _normalize_family(family, rank)
        if not isinstance(rank, int) or isinstance(rank, bool):
            raise SpecError(f"rank must be an integer, got {rank!r}")
        if fam in _FIXED_RANK:
            if rank != _FIXED_RANK[fam]:
                raise SpecError(f"{fam} requires rank {_FIXED_RANK[fam]}, got {rank}")
        elif rank < _MIN_RANK[fam]:
            raise SpecError(f"{fam} requires rank >= {_MIN_RANK[fam]}, got {rank}")
        orbits = orbits_of(fam, rank)
        if multiplicities is None:
            multiplicities = 1
        if isinstance(multiplicities, int):
            mults = {o: multiplicities for o in orbits}
        else:
            mults = dict(multiplicities)
            if "all" in mults and fam not in ("A", "D", "E6", "E7", "E8"):
                everything = mults.pop("all")
                for o in orbits:
                    mults.setdefault(o, everything)
        missing = [o for o in orbits if o not in mults]
        if missing:
            raise SpecError(f"{fam}{rank}: multiplicity map missing orbit(s) {missing}; expected {list(orbits)}")
        extra = sorted(set(mults) - set(orbits))
        if extra:
            raise SpecError(f"{fam}{rank}: unknown orbit key(s) {extra}; expected {list(orbits)}")
        for o in orbits:
            m = mults[o]
            if not isinstance(m, int) or isinstance(m, bool) or m < 1:
                raise SpecError(f"{fam}{rank}: multiplicity of orbit {o!r} must be a positive integer, got {m!r}")
        sc = la.parse_q(scale)
        if sc <= 0:
            raise SpecError(f"scale must be positive, got {sc}")
        return cls(fam, rank, tuple((o, mults[o]) for o in orbits), sc)

    @property
    def mult_map(self) -> dict:
        return dict(self.multiplicities)

    @property
    def label(self) -> str:
        return self.family if self.family in _FIXED_RANK else f"{self.family}{self.rank}"

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "multiplicities": {o: m for o, m in self.multiplicities},
            "scale": la.fmt(self.scale),
        }


@dataclass(frozen=True)
class SpaceSpec:
    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise SpecError("a space needs at least one factor")

    @classmethod
    def of(cls, *factors: FactorSpec) -> "SpaceSpec":
        return cls(tuple(factors))

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    @property
    def label(self) -> str:
        return " x ".join(f.label for f in self.factors)

    def to_json(self) -> dict:
        return {"factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, obj) -> "SpaceSpec":
        if not isinstance(obj, dict) or not isinstance(obj.get("factors"), list):
            raise SpecError('space spec must be an object with a "factors" list')
        out = []
        for i, f in enumerate(obj["factors"]):
            if not isinstance(f, dict):
                raise SpecError(f"factor {i} is not an object")
            try:
                out.append(FactorSpec.make(f["family"], f["rank"], f.get("multiplicities"), f.get("scale", "1")))
            except KeyError as e:
                raise SpecError(f"factor {i} is missing field {e.args[0]!r}") from None
            except (TypeError, ValueError, ZeroDivisionError) as e:
                raise SpecError(f"factor {i}: {e}") from None
        return cls(tuple(out))


def single(family: str, rank: int, multiplicities=None, scale=1) -> SpaceSpec:
    return SpaceSpec.of(FactorSpec.make(family, rank, multiplicities, scale))


def split(family: str, rank: int) -> SpaceSpec:
    """Split real form: every multiplicity equals one."""
    return single(family, rank, 1)


def hyperbolic_planes(k: int, scales: Sequence | None = None) -> SpaceSpec:
    """(RH^2)^k, i.e. k orthogonal A1 factors with multiplicity one."""
    scales = scales or [1] * k
    return SpaceSpec(tuple(FactorSpec.make("A", 1, 1, s) for s in scales))


_PRESET_PATTERNS = [
    (r"SL(\d+)/SO\1", lambda n: single("A", n - 1, 1)),
    (r"SL(\d+)\(C\)/SU\1", lambda n: single("A", n - 1, 2)),
    (r"Sp(\d+)\(R\)/U\1", lambda n: single("C", n, 1)),
    (r"\(RH2\)\^(\d+)", lambda k: hyperbolic_planes(k)),
]


def preset(name: str) -> SpaceSpec:
    """A few named spaces; multiplicities from the standard tables.

    Supported: ``SLn/SOn``, ``SLn(C)/SUn``, ``SU*(2n)/Sp(n)``, ``Spn(R)/Un``,
    ``(RH2)^k``, ``SO(p,q)``, ``SU(p,q)``, ``Sp(p,q)`` (p <= q) and
    ``split:<family><rank>``.
    """
    s = name.replace(" ", "")
    m = re.fullmatch(r"split:([A-Z]+?)(\d+)", s)
    if m:
        return split(m.group(1), int(m.group(2)))
    m = re.fullmatch(r"SU\*\((\d+)\)/Sp\((\d+)\)", s)
    if m and int(m.group(1)) == 2 * int(m.group(2)):
        return single("A", int(m.group(2)) - 1, 4)
    m = re.fullmatch(r"(SO|SU|Sp)\((\d+),(\d+)\)", s)
    if m:
        kind, p, q = m.group(1), int(m.group(2)), int(m.group(3))
        if p > q:
            p, q = q, p
        if kind == "SO":
            if p == q:
                return single("D", p, 1)
            return single("B", p, {"long": 1, "short": q - p})
        if kind == "SU":
            if p == q:
                return single("C", p, {"short": 2, "long": 1})
            return single("BC", p, _bc_mults(p, 2 * (q - p), 2, 1))
        if p == q:
            return single("C", p, {"short": 4, "long": 3})
        return single("BC", p, _bc_mults(p, 4 * (q - p), 4, 3))
    for pat, make in _PRESET_PATTERNS:
        m = re.fullmatch(pat, s)
        if m:
            return make(int(m.group(1)))
    raise SpecError(f"unknown preset {name!r}")


def _bc_mults(rank, short, medium, long):
    if rank == 1:
        return {"short": short, "long": long}
    return {"short": short, "medium": medium, "long": long}


# ---------------------------------------------------------------------------
# realizations


def _unit(n, i, c=1):
    v = [Q(0)] * n
    v[i] = Q(c)
    return v


def _pm_pairs(n):
    for i, j in itertools.combinations(range(n), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [Q(0)] * n
            v[i], v[j] = Q(si), Q(sj)
            yield tuple(v)


def _e8_roots():
    roots = list(_pm_pairs(8))
    half = Q(1, 2)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(s * half for s in signs))
    return roots


def _realize(family: str, rank: int):
    """Ambient dimension and list of (vector, orbit) for every root."""
    r = rank
    out = []
    if family == "A":
        n = r + 1
        for i, j in itertools.permutations(range(n), 2):
            v = _unit(n, i)
            v[j] = Q(-1)
            out.append((tuple(v), "all"))
        return n, out
    if family in ("B", "C", "D", "BC"):
        n = r
        pair_orbit = {"B": "long", "C": "short", "D": "all", "BC": "medium"}[family]
        out += [(v, pair_orbit) for v in _pm_pairs(n)]
        for i in range(n):
            for s in (1, -1):
                if family in ("B", "BC"):
                    out.append((tuple(_unit(n, i, s)), "short"))
                if family in ("C", "BC"):
                    out.append((tuple(_unit(n, i, 2 * s)), "long"))
        return n, out
    if family == "G2":
        for i, j in itertools.permutations(range(3), 2):
            v = _unit(3, i)
            v[j] = Q(-1)
            out.append((tuple(v), "short"))
        for i in range(3):
            for s in (1, -1):
                v = [Q(-s)] * 3
                v[i] = Q(2 * s)
                out.append((tuple(v), "long"))
        return 3, out
    if family == "F4":
        out += [(v, "long") for v in _pm_pairs(4)]
        for i in range(4):
            for s in (1, -1):
                out.append((tuple(_unit(4, i, s)), "short"))
        for signs in itertools.product((1, -1), repeat=4):
            out.append((tuple(Q(s, 2) for s in signs), "short"))
        return 4, out
    if family in ("E6", "E7", "E8"):
        roots = _e8_roots()
        cut = []
        if family in ("E7", "E6"):
            cut.append(tuple(Q(x) for x in (0, 0, 0, 0, 0, 0, 1, 1)))
        if family == "E6":
            cut.append(tuple(Q(x) for x in (0, 0, 0, 0, 0, 1, -1, 0)))
        roots = [v for v in roots if all(la.dot(v, c) == 0 for c in cut)]
        return 8, [(v, "all") for v in roots]
    raise SpecError(f"no realization for {family}")


def _lex_positive(v: Vec) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def _lex_desc_key(v: Vec):
    return tuple(-x for x in v)


# ---------------------------------------------------------------------------
# the datum


@dataclass(frozen=True)
class RootEntry:
    hvec: Vec
    mult: int
    positive: bool
    simple: bool
    factor_index: int
    orbit: str = "all"
    coeffs: tuple = ()  # integer coordinates over the simple roots

    def to_json(self) -> dict:
        return {
            "hvec": [la.fmt(x) for x in self.hvec],
            "mult": self.mult,
            "positive": self.positive,
            "simple": self.simple,
            "factor": self.factor_index,
            "orbit": self.orbit,
            "coeffs": list(self.coeffs),
        }


@dataclass(frozen=True)
class RootDatum:
    ambient_dim: int
    gram: tuple
    span_basis: tuple
    roots: tuple
    hdelta: Vec
    spec: Optional[SpaceSpec] = None
    factor_blocks: tuple = ()  # (start, stop) ambient coordinate range per factor

    @property
    def rank(self) -> int:
        return len(self.span_basis)

    @cached_property
    def positive(self) -> tuple:
        return tuple(r for r in self.roots if r.positive)

    @cached_property
    def simple(self) -> tuple:
        return tuple(r for r in self.roots if r.simple)

    @cached_property
    def _diag(self):
        g = self.gram
        n = len(g)
        if all(g[i][j] == 0 for i in range(n) for j in range(n) if i != j):
            return tuple(g[i][i] for i in range(n))
        return None

    def inner(self, u: Vec, v: Vec) -> Fraction:
        d = self._diag
        if d is not None:
            return sum((a * b * c for a, b, c in zip(u, v, d) if a and b), la.ZERO)
        return la.bilinear(u, self.gram, v)

    def lower(self, u: Vec) -> Vec:
        """Gram-applied vector: ``inner(u, v) == dot(lower(u), v)``."""
        d = self._diag
        if d is not None:
            return tuple(a * c for a, c in zip(u, d))
        return la.matvec(self.gram, u)

    def norm2(self, u: Vec) -> Fraction:
        return self.inner(u, u)

    @cached_property
    def slots(self) -> tuple:
        """Positive-root index of every slot, each root repeated ``mult`` times."""
        return tuple(i for i, r in enumerate(self.positive) for _ in range(r.mult))

    @cached_property
    def ambient_complement(self) -> tuple:
        """Basis of the Gram-orthogonal complement of ``a`` in the ambient space."""
        lowered = [self.lower(b) for b in self.span_basis]
        return la.nullspace(lowered, self.ambient_dim)

    @cached_property
    def _a_annihilator(self) -> tuple:
        return tuple(self.lower(c) for c in self.ambient_complement)

    def in_a(self, v: Vec) -> bool:
        # a is exactly the Gram-orthogonal complement of ambient_complement
        return len(v) == self.ambient_dim and all(la.dot(c, v) == 0 for c in self._a_annihilator)

    def root_index(self, v: Vec) -> Optional[int]:
        """Index in ``positive`` of the positive root with H-vector ``v``."""
        return self._pos_lookup.get(tuple(v))

    @cached_property
    def positive_integral(self) -> tuple:
        """Positive H-vectors with denominators cleared: (integer rows, common denominator)."""
        return la.clear_denominators([r.hvec for r in self.positive])

    @cached_property
    def _pos_lookup(self) -> dict:
        return {r.hvec: i for i, r in enumerate(self.positive)}

    def root_name(self, i: int) -> str:
        """Readable name of positive root ``i`` in terms of simple roots."""
        terms = []
        for k, c in enumerate(self.positive[i].coeffs):
            if c:
                terms.append(f"a{k + 1}" if c == 1 else f"{c}a{k + 1}")
        return "+".join(terms)

    def summary(self) -> dict:
        return {
            "space": self.spec.label if self.spec else None,
            "rank": self.rank,
            "ambient_dim": self.ambient_dim,
            "num_roots": len(self.roots),
            "num_positive": len(self.positive),
            "dim_n": sum(r.mult for r in self.positive),
            "hdelta": [la.fmt(x) for x in self.hdelta],
            "simple_roots": [[la.fmt(x) for x in r.hvec] for r in self.simple],
        }

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json() if self.spec else None,
            "ambient_dim": self.ambient_dim,
            "gram": [[la.fmt(x) for x in row] for row in self.gram],
            "span_basis": [[la.fmt(x) for x in row] for row in self.span_basis],
            "roots": [r.to_json() for r in self.roots],
            "hdelta": [la.fmt(x) for x in self.hdelta],
        }


def build_root_datum(spec: SpaceSpec) -> RootDatum:
    """Realize ``spec`` as an exact root datum."""
    blocks = []
    offset = 0
    raw = []  # (vector, orbit, factor)
    gram_diag = []
    for fi, f in enumerate(spec.factors):
        n, roots = _realize(f.family, f.rank)
        if len(roots) != root_count(f.family, f.rank):
            raise AssertionError(f"{f.label}: realization has {len(roots)} roots")
        blocks.append((offset, offset + n))
        for v, orbit in roots:
            full = [Q(0)] * offset + list(v)
            raw.append((full, orbit, fi))
        gram_diag += [f.scale] * n
        offset += n
    dim = offset
    raw = [(tuple(v + [Q(0)] * (dim - len(v))), o, fi) for v, o, fi in raw]
    gram = tuple(tuple(gram_diag[i] if i == j else Q(0) for j in range(dim)) for i in range(dim))

    pos = [(v, o, fi) for v, o, fi in raw if _lex_positive(v)]
    pos_set = {v for v, _, _ in pos}
    simple_set = set()
    for v, _, _ in pos:
        if not any(la.sub(v, w) in pos_set for w in pos_set):
            simple_set.add(v)
    simple_vecs = sorted(simple_set, key=lambda v: (_factor_of(v, blocks), _lex_desc_key(v)))
    if len(simple_vecs) != spec.rank:
        raise AssertionError(f"found {len(simple_vecs)} simple roots for rank {spec.rank}")

    mults = [f.mult_map for f in spec.factors]
    entries = []
    for v, o, fi in raw:
        c = la.solve_in_span(simple_vecs, v)
        coeffs = tuple(int(x) for x in c)
        entries.append(RootEntry(v, mults[fi][o], _lex_positive(v), v in simple_set, fi, o, coeffs))

    def order(e: RootEntry):
        return (not e.positive, e.factor_index, abs(sum(e.coeffs)), _lex_desc_key(e.hvec if e.positive else la.neg(e.hvec)))

    entries.sort(key=order)
    datum = RootDatum(dim, gram, tuple(simple_vecs), tuple(entries), (), spec, tuple(blocks))
    return replace(datum, hdelta=h_delta(datum))


def _factor_of(v, blocks):
    for i, (a, b) in enumerate(blocks):
        if any(v[a:b]):
            return i
    return -1


def h_delta(datum: RootDatum) -> Vec:
    """Half the multiplicity-weighted sum of the positive root vectors."""
    total = la.zeros(datum.ambient_dim)
    for r in datum.roots:
        if r.positive:
            total = la.add(total, la.scale(r.mult, r.hvec))
    return la.scale(Q(1, 2), total)


def dual_vector(datum: RootDatum, functional_coeffs: Sequence) -> Vec:
    """H-vector of the functional ``sum c_i alpha_i`` given over the simple roots."""
    simple = datum.simple
    if len(functional_coeffs) != len(simple):
        raise ValueError(f"expected {len(simple)} coefficients, got {len(functional_coeffs)}")
    cs = [la.parse_q(c) for c in functional_coeffs]
    out = la.zeros(datum.ambient_dim)
    for c, r in zip(cs, simple):
        if c:
            out = la.add(out, la.scale(c, r.hvec))
    return out


def positive_root(datum: RootDatum, coeffs: Sequence[int]) -> Vec:
    """H-vector of the positive root with the given simple-root coordinates."""
    coeffs = tuple(coeffs)
    for r in datum.positive:
        if r.coeffs == coeffs:
            return r.hvec
    raise KeyError(f"no positive root with simple coordinates {coeffs}")


# ---------------------------------------------------------------------------
# axiom checks


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    violation: Optional[str] = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"ok": self.ok, "violation": self.violation, "detail": self.detail}


def check_axioms(datum: RootDatum) -> AxiomReport:
    """Self-test a datum against the root-system axioms; reports the first failure."""
    roots = datum.roots
    vecs = {r.hvec: r for r in roots}
    if len(vecs) != len(roots):
        return AxiomReport(False, "duplicate", "a root vector appears twice")

    for r in roots:
        if not isinstance(r.mult, int) or r.mult < 1:
            return AxiomReport(False, "multiplicity", f"root {_show(r.hvec)} has multiplicity {r.mult}")

    for r in roots:
        if la.neg(r.hvec) not in vecs:
            return AxiomReport(False, "negation", f"-{_show(r.hvec)} is missing")
        other = vecs[la.neg(r.hvec)]
        if r.mult != other.mult:
            return AxiomReport(False, "multiplicity", f"+-{_show(r.hvec)} have different multiplicities")
        if r.positive == other.positive:
            return AxiomReport(False, "positivity", f"exactly one of +-{_show(r.hvec)} must be positive")

    for r in roots:
        if not datum.in_a(r.hvec):
            return AxiomReport(False, "span", f"{_show(r.hvec)} lies outside span(a)")

    norms = {r.hvec: datum.norm2(r.hvec) for r in roots}
    for r in roots:
        for s in roots:
            c = 2 * datum.inner(r.hvec, s.hvec) / norms[s.hvec]
            if c.denominator != 1:
                return AxiomReport(False, "integrality", f"2<{_show(r.hvec)},{_show(s.hvec)}>/|.|^2 = {c}")
            image = la.sub(r.hvec, la.scale(c, s.hvec))
            if image not in vecs:
                return AxiomReport(False, "reflection", f"reflection of {_show(r.hvec)} in {_show(s.hvec)} is not a root")
            if vecs[image].mult != r.mult:
                return AxiomReport(False, "multiplicity", f"multiplicity is not Weyl invariant at {_show(r.hvec)}")

    blocks = {}
    for r in roots:
        blocks.setdefault(r.factor_index, []).append(r.hvec)
    for (i, u_list), (j, v_list) in itertools.combinations(sorted(blocks.items()), 2):
        for u in u_list:
            for v in v_list:
                if datum.inner(u, v) != 0:
                    return AxiomReport(False, "factor-orthogonality", f"factors {i} and {j} are not orthogonal")

    pos = [r.hvec for r in roots if r.positive]
    pos_set = set(pos)
    indecomposable = {v for v in pos if not any(la.sub(v, w) in pos_set for w in pos)}
    flagged = {r.hvec for r in roots if r.simple}
    if indecomposable != flagged:
        return AxiomReport(False, "positivity", "simple roots are not the indecomposable positive roots")
    simple = [r.hvec for r in roots if r.simple]
    if la.rank(simple) != len(simple) or len(simple) != datum.rank:
        return AxiomReport(False, "positivity", "simple roots do not form a basis of a")
    for v in pos:
        c = la.solve_in_span(simple, v)
        if c is None or any(x < 0 or x.denominator != 1 for x in c):
            return AxiomReport(False, "positivity", f"{_show(v)} is not a nonnegative integer combination of simple roots")

    if tuple(datum.hdelta) != h_delta(datum):
        return AxiomReport(False, "hdelta", "stored H_delta differs from half the weighted positive sum")
    return AxiomReport(True)


def _show(v) -> str:
    return "(" + ",".join(la.fmt(x) for x in v) + ")"


def builtin_specs(max_rank: int = 8, multiplicity: int = 1) -> list:
    """One irreducible spec per family and rank up to ``max_rank``."""
    out = []
    for fam in ("A", "B", "C", "D", "BC"):
        for r in range(_MIN_RANK[fam], max_rank + 1):
            out.append(single(fam, r, multiplicity))
    for fam, r in _FIXED_RANK.items():
        if r <= max_rank:
            out.append(single(fam, r, multiplicity))
    return out
