"""Extrinsic geometry of the orbits S.o and their tubes, decided exactly.

A subspace ``b`` of ``a`` determines the solvable group with Lie algebra
``b + n``.  Its orbit through the base point has shape operator
``S_xi H = 0`` on ``b`` and ``S_xi X = lambda(xi) X`` on each root space, so
every question below reduces to linear algebra on the vectors ``H_lambda``
and their projections onto the normal space ``b_perp``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, NamedTuple, Optional, Sequence

from . import linalg as la
from .linalg import Q, Vec
from .rootsys import RootDatum


class HypothesisError(ValueError):
    """A geometric precondition does not hold; ``code`` names which."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class Subspace:
    """A rational subspace ``b`` of ``a`` in canonical (RREF) form."""

    def __init__(self, datum: RootDatum, vectors: Sequence[Vec] = ()):
        vectors = [la.vec(v) for v in vectors]
        for v in vectors:
            if len(v) != datum.ambient_dim:
                raise ValueError(f"vector has {len(v)} coordinates, expected {datum.ambient_dim}")
            if not datum.in_a(v):
                raise ValueError(f"vector {_show(v)} is not in a")
        self.datum = datum
        self.basis = la.rref(vectors)[0] if vectors else ()

    @classmethod
    def span(cls, datum: RootDatum, *vectors: Vec) -> "Subspace":
        return cls(datum, vectors)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.datum.rank - self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.basis == other.basis and (self.datum is other.datum or self.datum == other.datum)

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis={[_show(r) for r in self.basis]})"

    @cached_property
    def complement(self) -> tuple:
        """Canonical basis of ``b_perp``, the Gram-orthogonal complement of b inside a."""
        d = self.datum
        a = d.span_basis
        if not self.basis:
            return la.rref(a)[0]
        lowered = [d.lower(b) for b in self.basis]
        rows = [tuple(la.dot(lb, ak) for ak in a) for lb in lowered]
        ys = la.nullspace(rows, len(a))
        if not ys:
            return ()
        return la.rref([la.lin_comb(y, a) for y in ys])[0]

    @cached_property
    def _proj_data(self):
        d = self.datum
        lowered = [d.lower(b) for b in self.basis]
        g = tuple(tuple(la.dot(lb, c) for c in self.basis) for lb in lowered)
        return lowered, la.inverse(g)

    def contains(self, v: Vec) -> bool:
        if not self.basis:
            return la.is_zero(v)
        return la.solve_in_span(self.basis, v) is not None

    def project(self, v: Vec) -> Vec:
        """Gram-orthogonal projection of ``v`` (a vector of a) onto ``b_perp``."""
        if not self.basis:
            return tuple(v)
        lowered, ginv = self._proj_data
        rhs = [la.dot(lb, v) for lb in lowered]
        coeffs = la.matvec(ginv, rhs)
        return la.sub(v, la.lin_comb(coeffs, self.basis))

    def is_normal(self, xi: Vec) -> bool:
        d = self.datum
        return d.in_a(xi) and all(d.inner(xi, b) == 0 for b in self.basis)

    @cached_property
    def root_projections(self) -> tuple:
        """Projection onto ``b_perp`` of ``H_lambda`` for each positive root, in root order."""
        return tuple(self.project(r.hvec) for r in self.datum.positive)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "basis": [[la.fmt(x) for x in row] for row in self.basis],
            "complement": [[la.fmt(x) for x in row] for row in self.complement],
        }


def whole(datum: RootDatum) -> Subspace:
    return Subspace(datum, datum.span_basis)


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class Spectrum:
    """Multiset of eigenvalues: exact rationals, or (symbolic) projected vectors."""

    entries: tuple  # ((value, mult), ...) sorted by value
    symbolic: bool = False
    xi_norm2: Optional[Fraction] = None
    normalized: bool = False

    @classmethod
    def collect(cls, pairs, symbolic=False, xi_norm2=None, normalized=False) -> "Spectrum":
        c = Counter()
        for value, mult in pairs:
            if mult < 0:
                raise ValueError("negative multiplicity")
            if mult:
                c[value] += mult
        return cls(tuple(sorted(c.items())), symbolic, xi_norm2, normalized)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def trace(self) -> Fraction:
        if self.symbolic:
            raise TypeError("trace of a symbolic spectrum is a vector; use trace_vector")
        return sum((v * m for v, m in self.entries), la.ZERO)

    def trace_vector(self, dim: int) -> Vec:
        out = la.zeros(dim)
        for v, m in self.entries:
            out = la.add(out, la.scale(m, v))
        return out

    def multiset(self) -> Counter:
        return Counter(dict(self.entries))

    def same_values(self, other: "Spectrum") -> bool:
        return self.entries == other.entries

    def mult_of(self, value) -> int:
        return dict(self.entries).get(value, 0)

    @property
    def is_zero(self) -> bool:
        if self.symbolic:
            return all(la.is_zero(v) for v, _ in self.entries)
        return all(v == 0 for v, _ in self.entries)

    def union(self, other: "Spectrum") -> "Spectrum":
        if self.symbolic != other.symbolic:
            raise TypeError("cannot merge evaluated and symbolic spectra")
        return Spectrum.collect(list(self.entries) + list(other.entries), self.symbolic,
                                other.xi_norm2, other.normalized)

    def to_json(self) -> dict:
        if self.symbolic:
            entries = [{"proj": [la.fmt(x) for x in v], "mult": m} for v, m in self.entries]
        else:
            entries = [{"value": la.fmt(v), "mult": m} for v, m in self.entries]
        out = {"entries": entries, "total": self.total}
        if self.xi_norm2 is not None:
            out["xi_norm2"] = la.fmt(self.xi_norm2)
            out["normalized"] = self.normalized
        return out


def _check_normal(b: Subspace, xi: Vec) -> Vec:
    xi = la.vec(xi)
    if len(xi) != b.datum.ambient_dim:
        raise HypothesisError("xi-dimension", f"xi has {len(xi)} coordinates, expected {b.datum.ambient_dim}")
    if la.is_zero(xi):
        raise HypothesisError("xi-zero", "xi must be a nonzero normal vector")
    if not b.is_normal(xi):
        raise HypothesisError("xi-not-normal", f"xi = {_show(xi)} is not in b_perp")
    return xi


def _root_values(datum: RootDatum, xi: Vec) -> list:
    # integer dot products, one division per root
    rows, rden = datum.positive_integral
    (lx,), xden = la.clear_denominators([datum.lower(xi)])
    den = rden * xden
    return [Fraction(sum(a * b for a, b in zip(lx, row) if b), den) for row in rows]


def focal_spectrum(b: Subspace, xi: Vec) -> Spectrum:
    """Principal curvatures of S.o in the normal direction ``xi`` (not normalized)."""
    xi = _check_normal(b, xi)
    d = b.datum
    vals = _root_values(d, xi)
    pairs = [(la.ZERO, b.dim)] + [(v, r.mult) for v, r in zip(vals, d.positive)]
    return Spectrum.collect(pairs, xi_norm2=d.norm2(xi))


def symbolic_focal_spectrum(b: Subspace) -> Spectrum:
    """Principal curvatures as functionals on ``b_perp``, stored as projected vectors."""
    d = b.datum
    pairs = [(la.zeros(d.ambient_dim), b.dim)]
    pairs += [(p, r.mult) for p, r in zip(b.root_projections, d.positive)]
    return Spectrum.collect(pairs, symbolic=True)


def mean_curvature_vector(b: Subspace) -> Vec:
    return la.scale(2, b.project(b.datum.hdelta))


def is_minimal(b: Subspace) -> bool:
    return b.contains(b.datum.hdelta)


# ---------------------------------------------------------------------------
# austerity


@dataclass(frozen=True)
class AustereWitness:
    """Involutive pairing of root slots; slot ``k`` is positive root ``datum.slots[k]``."""

    pairing: tuple  # ((i, j), ...) with i <= j, each slot exactly once

    def permutation(self) -> tuple:
        n = sum(1 if i == j else 2 for i, j in self.pairing)
        sigma = [None] * n
        for i, j in self.pairing:
            sigma[i], sigma[j] = j, i
        return tuple(sigma)

    def validate(self, b: Subspace) -> bool:
        """Check exactly that every pair's projected sum vanishes."""
        slots = b.datum.slots
        seen = []
        for i, j in self.pairing:
            seen += [i] if i == j else [i, j]
        if sorted(seen) != list(range(len(slots))):
            return False
        proj = b.root_projections
        return all(la.is_zero(la.add(proj[slots[i]], proj[slots[j]])) for i, j in self.pairing)

    def to_json(self) -> list:
        return [list(p) for p in self.pairing]


class Austerity(NamedTuple):
    austere: bool
    witness: Optional[AustereWitness]


def is_austere(b: Subspace) -> Austerity:
    """Decide austerity via negation symmetry of the projected root multiset."""
    d = b.datum
    proj = b.root_projections
    counts = Counter()
    for p, r in zip(proj, d.positive):
        counts[p] += r.mult
    for p, m in counts.items():
        if counts.get(la.neg(p), 0) != m:
            return Austerity(False, None)

    by_value = {}
    for k, i in enumerate(d.slots):
        by_value.setdefault(proj[i], []).append(k)
    pairs = []
    done = set()
    for k, i in enumerate(d.slots):
        p = proj[i]
        if p in done:
            continue
        if la.is_zero(p):
            pairs += [(s, s) for s in by_value[p]]
        else:
            pairs += [tuple(sorted(st)) for st in zip(by_value[p], by_value[la.neg(p)])]
            done.add(la.neg(p))
        done.add(p)
    return Austerity(True, AustereWitness(tuple(sorted(pairs))))


def find_collinear_witness(datum: RootDatum) -> Optional[int]:
    """First positive root ``lam`` with ``H_lam + H_mu`` never parallel to ``H_delta``."""
    hd = datum.hdelta
    k = next((i for i, x in enumerate(hd) if x), None)
    if k is None:
        return None
    pos = [r.hvec for r in datum.positive]
    for i, lam in enumerate(pos):
        if not any(_parallel(la.add(lam, mu), hd, k) for mu in pos):
            return i
    return None


def _parallel(v: Vec, w: Vec, k: int) -> bool:
    c = v[k] / w[k]
    return all(a == c * b for a, b in zip(v, w))


def non_austere_sufficient(b: Subspace, lam: int) -> bool:
    """Sufficient test for a minimal non-austere orbit using positive root index ``lam``."""
    d = b.datum
    if not 0 <= lam < len(d.positive):
        raise IndexError(f"no positive root with index {lam}")
    if not is_minimal(b):
        return False
    h = d.positive[lam].hvec
    return not any(b.contains(la.add(h, r.hvec)) for r in d.positive)


# ---------------------------------------------------------------------------
# tubes and principal curvatures


def tube_spectrum(b: Subspace, xi: Vec, t) -> Spectrum:
    """Principal curvatures of the tube of radius ``t`` at the point reached along ``xi``.

    Root eigenvalues are ``lambda(xi/|xi|)`` when ``|xi|^2`` is a rational
    square; otherwise they are ``lambda(xi)`` and the spectrum is flagged as
    not normalized.
    """
    t = la.parse_q(t)
    if t <= 0:
        raise HypothesisError("t-nonpositive", f"tube radius must be positive, got {t}")
    if not is_minimal(b):
        raise HypothesisError("hdelta-not-in-b", "H_delta is not in b; the tubes are not the isoparametric family")
    xi = _check_normal(b, xi)
    d = b.datum
    n2 = d.norm2(xi)
    normalized = la.is_square(n2)
    vals = _root_values(d, xi)
    if normalized:
        r = la.sqrt_exact(n2)
        vals = [v / r for v in vals]
    codim = b.codim
    pairs = [(-1 / t, codim - 1), (la.ZERO, b.dim)]
    pairs += [(v, r.mult) for v, r in zip(vals, d.positive)]
    return Spectrum.collect(pairs, xi_norm2=n2, normalized=normalized)


def tube_mean_curvature(b: Subspace, t) -> Fraction:
    """Constant mean curvature ``-(dim b_perp - 1)/t`` of every tube."""
    t = la.parse_q(t)
    return -Q(b.codim - 1) / t


def jacobi_eigenvalue_check(c, t, h: float = 1e-6) -> tuple:
    """Closed-form eigenvalue ``c`` of ``-J'/J`` for ``J = exp(-c t)`` and its finite-difference value."""
    c, t = la.parse_q(c), la.parse_q(t)
    if t <= 0:
        raise ValueError("t must be positive")
    cf, tf = float(c), float(t)

    def jac(s):
        return math.exp(-cf * s)

    return c, -(jac(tf + h) - jac(tf - h)) / (2 * h * jac(tf))


def jacobi_eta_check(t, h: float = 1e-6) -> tuple:
    """Same check for the normal family ``J(t) = t``, whose eigenvalue is ``-1/t``."""
    t = la.parse_q(t)
    if t <= 0:
        raise ValueError("t must be positive")
    tf = float(t)
    return -1 / t, -((tf + h) - (tf - h)) / (2 * h * tf)


@dataclass(frozen=True)
class InhomogeneityWitness:
    """Root ``lam`` and normals with ``lam(xi1) != 0 == lam(xi2)``, so no normalization can equalize them."""

    root: int
    xi1: Vec
    xi2: Vec

    def validate(self, b: Subspace) -> bool:
        d = b.datum
        if not (b.is_normal(self.xi1) and b.is_normal(self.xi2)):
            return False
        if la.is_zero(self.xi1) or la.is_zero(self.xi2):
            return False
        h = d.positive[self.root].hvec
        return d.inner(h, self.xi1) != 0 and d.inner(h, self.xi2) == 0

    def to_json(self) -> dict:
        return {"root": self.root, "xi1": [la.fmt(x) for x in self.xi1], "xi2": [la.fmt(x) for x in self.xi2]}


class CPCResult(NamedTuple):
    constant: bool
    witness: Optional[InhomogeneityWitness]
    note: str = ""


def has_constant_principal_curvatures(b: Subspace) -> CPCResult:
    """Whether the tube principal curvatures can be constant over unit normals."""
    if b.codim == 0:
        raise HypothesisError("no-normal-directions", "b = a has no normal directions")
    if b.codim == 1:
        return CPCResult(True, None, "codimension-one case, outside the isoparametric construction")
    for i, p in enumerate(b.root_projections):
        if not la.is_zero(p):
            return CPCResult(False, InhomogeneityWitness(i, p, _orthogonal_in_complement(b, p)))
    return CPCResult(True, None, "every root vanishes on b_perp")


def _orthogonal_in_complement(b: Subspace, p: Vec) -> Vec:
    d = b.datum
    lp = d.lower(p)
    for c in b.complement:
        s = la.dot(lp, c)
        if s == 0:
            continue
        # remove the p-component from c
        q = la.sub(c, la.scale(s / d.norm2(p), p))
        if not la.is_zero(q):
            return q
    for c in b.complement:
        if la.dot(lp, c) == 0 and not la.is_zero(c):
            return c
    raise AssertionError("b_perp has dimension >= 2 but no vector orthogonal to p")


def is_cpc(b: Subspace) -> bool:
    """Whether all shape operators of S.o for unit normals are isospectral."""
    if b.codim < 2:
        raise HypothesisError("codim-lt-2", f"codim(b) = {b.codim} < 2: isospectrality needs dim b_perp >= 2")
    return has_constant_principal_curvatures(b).constant


# ---------------------------------------------------------------------------
# extension of submanifolds of the section


def extension_spectrum(p_spectrum: Spectrum, b: Subspace, xi: Vec) -> Spectrum:
    """Shape-operator spectrum of S.P for a submanifold P of the section.

    ``p_spectrum`` is the spectrum of P for the normal ``xi``; the result is
    the union with the spectrum of S.o, which keeps the mean curvature of P.
    """
    if p_spectrum.symbolic:
        raise TypeError("p_spectrum must be evaluated")
    if not is_minimal(b):
        raise HypothesisError("hdelta-not-in-b", "H_delta is not in b")
    if p_spectrum.total > b.codim - 1:
        raise HypothesisError("dimension-mismatch",
                              f"P has dimension {p_spectrum.total} > dim b_perp - 1 = {b.codim - 1}")
    focal = focal_spectrum(b, xi)
    out = Spectrum.collect(list(p_spectrum.entries) + list(focal.entries), xi_norm2=focal.xi_norm2)
    assert out.trace == p_spectrum.trace, "extension changed the mean curvature"
    if any(v != 0 for v, _ in focal.entries):
        assert not out.is_zero
    return out


# ---------------------------------------------------------------------------
# search


def pair_sums(datum: RootDatum) -> list:
    """Distinct vectors ``H_lam + H_mu`` over positive roots (lam = mu allowed), in root order."""
    seen = {}
    pos = datum.positive
    for i in range(len(pos)):
        for j in range(i, len(pos)):
            v = la.add(pos[i].hvec, pos[j].hvec)
            seen.setdefault(la.primitive(v), v)
    return list(seen.values())


def austere_search(datum: RootDatum, dim: int, require_hdelta: bool = True,
                   limit: Optional[int] = None) -> Iterator[tuple]:
    """Yield ``(subspace, witness)`` for austere b of dimension ``dim``.

    An austere b contains ``H_lam + H_sigma(lam)`` for every slot, so b is
    spanned by pair sums; candidates are spans of ``dim`` pair sums (plus
    ``H_delta`` when required), deduplicated by canonical form.
    """
    gens = pair_sums(datum)
    seen = set()
    found = 0
    base = [datum.hdelta] if require_hdelta else []
    for combo in itertools.combinations(gens, dim - len(base)):
        vecs = base + list(combo)
        if la.rank(vecs) != dim:
            continue
        b = Subspace(datum, vecs)
        if b.basis in seen:
            continue
        seen.add(b.basis)
        res = is_austere(b)
        if res.austere:
            yield b, res.witness
            found += 1
            if limit is not None and found >= limit:
                return


def _show(v) -> str:
    return "(" + ",".join(la.fmt(x) for x in v) + ")"
