"""Congruence of the orbits S.o via symmetries of the positive root vectors.

The group computed here consists of the Gram-preserving linear maps of
``a`` that permute ``{H_lambda : lambda positive}`` together with the
multiplicities.  Such a map preserves the positive system, hence the simple
roots, so it is enumerated as a bijection of simple roots.  It is reported
as diagram-symmetry congruence: whether each symmetry is realized by an
isometry of a concrete space is not decidable from the root datum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from . import linalg as la
from .geometry import Subspace
from .rootsys import RootDatum


@dataclass(frozen=True)
class IsometryWitness:
    matrix: tuple  # acts on ambient column vectors
    root_permutation: tuple  # positive root i -> root_permutation[i]
    factor_permutation: tuple

    def apply(self, v):
        return la.matvec(self.matrix, v)

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.root_permutation))

    def validate(self, datum: RootDatum) -> bool:
        m, g = self.matrix, datum.gram
        if la.matmul(la.transpose(m), la.matmul(g, m)) != g:
            return False
        pos = datum.positive
        for i, j in enumerate(self.root_permutation):
            if self.apply(pos[i].hvec) != pos[j].hvec or pos[i].mult != pos[j].mult:
                return False
        return self.apply(datum.hdelta) == tuple(datum.hdelta)

    def to_json(self) -> dict:
        return {
            "matrix": [[la.fmt(x) for x in row] for row in self.matrix],
            "perm": list(self.root_permutation),
            "factor_perm": list(self.factor_permutation),
        }


def _simple_bijections(datum: RootDatum):
    simple = datum.simple
    n = len(simple)
    g = [[datum.inner(a.hvec, b.hvec) for b in simple] for a in simple]
    mult = [a.mult for a in simple]
    image = [None] * n
    used = [False] * n

    def extend(i):
        if i == n:
            yield tuple(image)
            return
        for j in range(n):
            if used[j] or mult[j] != mult[i] or g[j][j] != g[i][i]:
                continue
            if any(g[image[k]][j] != g[k][i] for k in range(i)):
                continue
            image[i], used[j] = j, True
            yield from extend(i + 1)
            used[j] = False
        image[i] = None

    yield from extend(0)


@lru_cache(maxsize=64)
def _basis_inverse(datum: RootDatum):
    simple = [r.hvec for r in datum.simple]
    return la.inverse(la.transpose(simple + list(datum.ambient_complement)))


def _extend_linearly(datum: RootDatum, image: Sequence[int]):
    simple = [r.hvec for r in datum.simple]
    dst = la.transpose([simple[j] for j in image] + list(datum.ambient_complement))
    return la.matmul(dst, _basis_inverse(datum))


def _witness_from(datum: RootDatum, image) -> Optional[IsometryWitness]:
    m = _extend_linearly(datum, image)
    pos = datum.positive
    perm = []
    for r in pos:
        j = datum.root_index(la.matvec(m, r.hvec))
        if j is None or pos[j].mult != r.mult:
            return None
        perm.append(j)
    simple = datum.simple
    fperm = {}
    for i, j in enumerate(image):
        fperm[simple[i].factor_index] = simple[j].factor_index
    nf = len(datum.factor_blocks) or 1
    return IsometryWitness(m, tuple(perm), tuple(fperm.get(k, k) for k in range(nf)))


def automorphism_group(datum: RootDatum, verify: bool = True) -> list:
    """All symmetries of the positive root vectors with multiplicities; identity first."""
    return list(_group(datum, verify))


@lru_cache(maxsize=64)
def _group(datum: RootDatum, verify: bool) -> tuple:
    out = []
    for image in _simple_bijections(datum):
        w = _witness_from(datum, image)
        if w is not None:
            out.append(w)
    out.sort(key=lambda w: (not w.is_identity(), w.root_permutation))
    if verify:
        check_group(datum, out)
    return tuple(out)


def check_group(datum: RootDatum, group: Sequence[IsometryWitness]) -> None:
    """Raise AssertionError unless ``group`` is a group of valid witnesses."""
    perms = {w.root_permutation for w in group}
    assert len(perms) == len(group), "duplicate group elements"
    assert group and group[0].is_identity(), "identity must come first"
    for w in group:
        assert w.validate(datum), "witness does not preserve the root data"
        inv = [0] * len(w.root_permutation)
        for i, j in enumerate(w.root_permutation):
            inv[j] = i
        assert tuple(inv) in perms, "group is not closed under inverses"
    for a in perms:
        for b in perms:
            assert tuple(a[i] for i in b) in perms, "group is not closed under composition"


def apply_to_subspace(w: IsometryWitness, b: Subspace) -> Subspace:
    return Subspace(b.datum, [w.apply(v) for v in b.basis])


def are_congruent(b1: Subspace, b2: Subspace) -> Optional[IsometryWitness]:
    """First symmetry mapping ``b1`` onto ``b2``, or None."""
    if not (b1.datum is b2.datum or b1.datum == b2.datum):
        raise ValueError("subspaces live in different root data")
    if b1.dim != b2.dim:
        return None
    for w in _group(b1.datum, True):
        if apply_to_subspace(w, b1).basis == b2.basis:
            return w
    return None


def canonical_form(b: Subspace) -> tuple:
    """Lexicographically least RREF basis over the orbit of ``b``."""
    return min(apply_to_subspace(w, b).basis for w in _group(b.datum, True))


@dataclass(frozen=True)
class OrbitReport:
    classes: tuple  # tuples of member indices, ordered by first member
    representatives: tuple  # canonical RREF basis per class

    def to_json(self) -> dict:
        return {
            "classes": [list(c) for c in self.classes],
            "representatives": [[[la.fmt(x) for x in row] for row in rep] for rep in self.representatives],
        }


def orbit_count(subspaces: Sequence[Subspace]) -> OrbitReport:
    """Partition ``subspaces`` into congruence classes."""
    if not subspaces:
        return OrbitReport((), ())
    datum = subspaces[0].datum
    if any(not (s.datum is datum or s.datum == datum) for s in subspaces):
        raise ValueError("subspaces live in different root data")
    classes = {}
    for i, b in enumerate(subspaces):
        classes.setdefault((b.dim, canonical_form(b)), []).append(i)
    ordered = sorted(classes.items(), key=lambda kv: kv[1][0])
    return OrbitReport(tuple(tuple(v) for _, v in ordered), tuple(k[1] for k, _ in ordered))
