"""Spectral profile of an integer matrix and the r-regularity verdicts.

The profile groups the eigenvalues that are not roots of unity into classes
of pairwise multiplicatively dependent numbers and records, per class, the
summed algebraic multiplicity ``h`` and the number ``h_bar`` of
superdiagonal ones in the corresponding Jordan blocks.  ``l`` and ``l_bar``
are the same counts for the root-of-unity eigenvalues.

A matrix is r-exceptional exactly when some class satisfies

    l - l_bar + h - h_bar >= d - r.

Jordan data is recovered rationally from the invariant factors of xI - A;
the splitting field is never built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

from .algnum import (
    DEFAULT_BOUND,
    AlgebraicNumber,
    DependencePartition,
    dependence_classes,
    is_root_of_unity,
    roots_of,
    torus_rank_rational,
    weil_height,
)
from .linalg import as_matrix, det
from .poly import FACTOR_DEGREE_CAP, char_poly, factor_over_Q, invariant_factors


class SingularMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class Eigen:
    value: AlgebraicNumber
    alg_mult: int
    blocks: int
    unity_order: int | None = None

    @property
    def ones(self) -> int:
        """Superdiagonal ones in this eigenvalue's Jordan blocks."""
        return self.alg_mult - self.blocks


@dataclass(frozen=True)
class DependenceClass:
    members: tuple     # indices into SpectralProfile.eigen
    h: int
    h_bar: int


@dataclass
class SpectralProfile:
    d: int
    eigen: list
    l: int
    l_bar: int
    classes: list
    partition: DependencePartition | None = None
    nonunity: list = field(default_factory=list)   # partition index -> eigen index

    @property
    def unity_indices(self) -> list:
        return [i for i, e in enumerate(self.eigen) if e.unity_order is not None]

    @property
    def unity_lcm(self) -> int:
        return lcm(1, *(self.eigen[i].unity_order for i in self.unity_indices))

    @property
    def dependence_bound(self) -> int | None:
        return self.partition.bounded if self.partition else None

    def witness(self, i: int, j: int):
        """Stored dependence result between eigen entries i and j."""
        a, b = self.nonunity.index(i), self.nonunity.index(j)
        return self.partition.witness(a, b)

    def to_json(self) -> dict:
        out = {
            "d": self.d,
            "l": self.l,
            "l_bar": self.l_bar,
            "eigenvalues": [
                dict(e.value.to_json(), alg_mult=e.alg_mult, blocks=e.blocks,
                     root_of_unity_order=e.unity_order)
                for e in self.eigen
            ],
            "classes": [{"members": list(c.members), "h": c.h, "h_bar": c.h_bar}
                        for c in self.classes],
            "witnesses": [],
            "dependence_bound": self.dependence_bound,
        }
        if self.partition is not None:
            for (a, b), res in sorted(self.partition.results.items()):
                item = {"pair": [self.nonunity[a], self.nonunity[b]],
                        "dependent": res.dependent}
                if res.dependent:
                    item["exponents"] = [res.a1, res.a2]
                else:
                    item["searched_bound"] = res.searched_bound
                out["witnesses"].append(item)
        return out


def spectral_profile(A, bound: int = DEFAULT_BOUND, precision: int = 64,
                     degree_cap: int = FACTOR_DEGREE_CAP, workers: int = 1) -> SpectralProfile:
    A = as_matrix(A)
    if det(A) == 0:
        raise SingularMatrixError("spectral profile needs a nonsingular matrix")
    cp = char_poly(A)
    fac = factor_over_Q(cp, degree_cap=degree_cap)
    inv = invariant_factors(A)
    eigen = []
    for g, mult in fac.factors:
        blocks = inv.block_count(g)
        for root in roots_of(g, precision):
            eigen.append(Eigen(root, mult, blocks, is_root_of_unity(root)))
    l = sum(e.alg_mult for e in eigen if e.unity_order is not None)
    l_bar = sum(e.ones for e in eigen if e.unity_order is not None)
    nonunity = [i for i, e in enumerate(eigen) if e.unity_order is None]
    partition = dependence_classes([eigen[i].value for i in nonunity], bound, precision,
                                   workers=workers)
    classes = []
    for group in partition.classes:
        members = tuple(nonunity[k] for k in group)
        classes.append(DependenceClass(
            members,
            sum(eigen[i].alg_mult for i in members),
            sum(eigen[i].ones for i in members),
        ))
    return SpectralProfile(A.dim, eigen, l, l_bar, classes, partition, nonunity)


# -- verdicts -----------------------------------------------------------------

REGULAR = "Regular"
EXCEPTIONAL = "Exceptional"
FINITE = "FiniteGlobalOrder"
EXCEPTIONAL_BY_THEORY = "Exceptional-by-theory"
TRIVIAL = "trivial"


@dataclass(frozen=True)
class RegularityVerdict:
    r: int
    verdict: str
    witness_class: int | None = None   # index into profile.classes
    k: int | None = None               # for FiniteGlobalOrder
    bound: int | None = None           # Regular only relative to a search bound

    @property
    def label(self) -> str:
        if self.verdict == REGULAR and self.bound is not None:
            return f"Regular at bound {self.bound}"
        if self.verdict == FINITE:
            return f"FiniteGlobalOrder{{k={self.k}}}"
        return self.verdict

    def to_json(self) -> dict:
        out = {"r": self.r, "verdict": self.verdict, "label": self.label}
        if self.witness_class is not None:
            out["witness_class"] = self.witness_class
        if self.k is not None:
            out["k"] = self.k
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def exceptional_inequality(l: int, l_bar: int, h: int, h_bar: int, d: int, r: int) -> bool:
    return l - l_bar + h - h_bar >= d - r


def _as_profile(A_or_profile, **kw) -> SpectralProfile:
    if isinstance(A_or_profile, SpectralProfile):
        return A_or_profile
    return spectral_profile(A_or_profile, **kw)


def classify(A, r: int, profile: SpectralProfile | None = None, **kw) -> RegularityVerdict:
    """Verdict for 0 <= r <= d - 2.

    Finite global order (rank(A^k - I) <= r over Z for some k) is checked
    first; otherwise the class inequality decides between Exceptional and
    Regular.
    """
    prof = profile if profile is not None else _as_profile(A, **kw)
    d = prof.d
    if not 0 <= r <= d - 2:
        raise ValueError(f"r={r} out of range [0, {d - 2}]")
    if d - (prof.l - prof.l_bar) <= r:
        return RegularityVerdict(r, FINITE, k=prof.unity_lcm)
    for idx, c in enumerate(prof.classes):
        if exceptional_inequality(prof.l, prof.l_bar, c.h, c.h_bar, d, r):
            return RegularityVerdict(r, EXCEPTIONAL, witness_class=idx)
    return RegularityVerdict(r, REGULAR, bound=prof.dependence_bound)


def classify_all(A, profile: SpectralProfile | None = None, **kw) -> list:
    """Verdicts for r = 0..d; the rows r = d-1 and r = d are fixed by theory."""
    prof = profile if profile is not None else _as_profile(A, **kw)
    d = prof.d
    rows = [classify(None, r, profile=prof) for r in range(max(d - 1, 0))]
    if d >= 1:
        rows.append(RegularityVerdict(d - 1, EXCEPTIONAL_BY_THEORY))
    rows.append(RegularityVerdict(d, TRIVIAL, k=1))
    return rows


@dataclass(frozen=True)
class CorollaryCheck:
    e: int
    f: int
    consistent: bool


def corollary_check(A, profile: SpectralProfile | None = None, **kw) -> CorollaryCheck | None:
    """Torus rank e, unipotent flag f and agreement with "e + f > r + 1 => Regular".

    Only for matrices whose eigenvalues are all rational; returns None otherwise.
    """
    prof = profile if profile is not None else _as_profile(A, **kw)
    if not all(e.value.is_rational for e in prof.eigen):
        return None
    e = torus_rank_rational([ev.value.value for ev in prof.eigen])
    f = 0 if all(ev.blocks == ev.alg_mult for ev in prof.eigen) else 1
    consistent = all(
        classify(None, r, profile=prof).verdict == REGULAR
        for r in range(0, prof.d - 1) if e + f > r + 1
    )
    return CorollaryCheck(e, f, consistent)


def class_representative(prof: SpectralProfile, class_index: int, precision: int = 64) -> int:
    """Eigen index of the class member of smallest height (first on ties)."""
    members = prof.classes[class_index].members
    return min(members, key=lambda i: (weil_height(prof.eigen[i].value, precision).lo, i))
