"""Combinatorial recognition of embedded polar spaces.

Three checkers test a set S of generators of a polar space P of rank d and
parameter e against counting conditions:

* :func:`check_strong_pseudopolar` -- intersection spectra of every generator
  with S, existence of outside generators, and per-point profiles;
* :func:`check_pseudopolar` -- four counts that only look inside S;
* :func:`check_alt` -- the variant replacing the size and point-degree counts
  with conditions on generators outside S.

:func:`verify_embedded` checks the polar space axioms for the geometry of
subspaces of members of S directly.  :func:`equivalence_harness` runs all of
them over hyperplane sections (and the hyperbolic quadric inside a symplectic
space) together with random non-examples.

Expected counts are always recomputed from (d, e, q); the parameter e is held
in half units so Hermitian spaces stay exact.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import sparse

from .forms import SectionClass, _as_hyperplane, classify_hyperplane, polarize
from .geometry import (
    BudgetExceeded,
    Subspace,
    binomial,
    enumerate_subspaces,
    gaussian,
    nullspace,
    point_count,
    projective_space,
)
from .gf import GF
from .polarspace import GeneratorSet, PolarSpace, qpow_half

CASE_TABLE = {
    "parabolic": "hyperbolic",
    "elliptic": "parabolic",
    "hermitian-even": "hermitian-odd",
    "symplectic": "hyperbolic",
}


def threads() -> int:
    """Worker count for the harness, from POLARSCOPE_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("POLARSCOPE_THREADS", "1")))
    except ValueError:
        return 1


class SectionError(ValueError):
    """A hyperplane does not cut out a polar space of the same rank."""


# -- expected counts ----------------------------------------------------------

def _require_range(P: PolarSpace):
    if P.rank < 3 or P.param_half < 2:
        raise ValueError(f"{P.name} has d={P.rank}, e={P.param_half}/2; need d >= 3 and e >= 1")


def _qh(F: GF, half: int) -> int:
    return qpow_half(F, half)


def strong_spectrum(d: int, param_half: int, F: GF, inside: bool) -> list[int]:
    """Expected numbers of members meeting a generator in a (d-i-1)-space, i = 0..d."""
    q, e2 = F.q, param_half
    out = []
    for i in range(d + 1):
        if inside:
            coef = gaussian(d - 1, i - 1, q) + q**i * gaussian(d - 1, i, q)
            half = 2 * binomial(i - 1, 2) + i * e2 - 2
        else:
            coef = (_qh(F, e2 - 2) + 1) * gaussian(d - 1, i - 1, q)
            half = 2 * binomial(i - 1, 2) + (i - 1) * e2
        out.append(coef * _qh(F, half) if coef else 0)
    return out


def strong_point_profile(d: int, param_half: int, F: GF) -> list[int]:
    """Expected members through P meeting an outside generator in a (d-j-2)-space."""
    return [(_qh(F, param_half - 2) + 1) * gaussian(d - 2, j, F.q)
            * _qh(F, 2 * binomial(j, 2) + j * param_half) for j in range(d - 1)]


def pseudo_neighbours(d: int, param_half: int, F: GF) -> int:
    return gaussian(d, 1, F.q) * _qh(F, param_half - 2)


def pseudo_size(d: int, param_half: int, F: GF) -> int:
    return int(np.prod([_qh(F, param_half + 2 * i - 2) + 1 for i in range(d)], dtype=object))


def pseudo_point_degree(d: int, param_half: int, F: GF) -> int:
    return int(np.prod([_qh(F, param_half + 2 * i - 2) + 1 for i in range(d - 1)], dtype=object))


def alt_outside_neighbours(d: int, param_half: int, F: GF) -> int:
    return _qh(F, param_half - 2) + 1


def embedded_point_count(d: int, param_half: int, F: GF) -> int:
    return gaussian(d, 1, F.q) * (_qh(F, param_half + 2 * d - 4) + 1)


def embedded_e_count(d: int, param_half: int, F: GF) -> int:
    return gaussian(d, 1, F.q) * _qh(F, 2 * d + param_half - 4)


# -- reports ------------------------------------------------------------------

def _witness_generator(U: Subspace) -> dict:
    return {"kind": "generator", "rows": U.to_rows()}


def _witness_point(U: Subspace) -> dict:
    return {"kind": "point", "rows": U.to_rows()}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class Condition:
    name: str
    passed: bool
    observed: Any
    expected: Any
    witness: dict | None = None
    vacuous: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return _jsonable({"name": self.name, "passed": self.passed, "observed": self.observed,
                          "expected": self.expected, "witness": self.witness,
                          "vacuous": self.vacuous, "note": self.note})


@dataclass
class CheckReport:
    definition: str  # "strong" | "pseudo" | "alt" | "projective"
    space: str
    size: int
    conditions: list[Condition]
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.conditions if not c.passed]

    def __getitem__(self, name: str) -> Condition:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return _jsonable({"definition": self.definition, "space": self.space, "size": self.size,
                          "passed": self.passed,
                          "conditions": [c.to_dict() for c in self.conditions],
                          "extras": self.extras})


# -- shared incidence data ------------------------------------------------------

def _spectra(P: PolarSpace, S: GeneratorSet) -> np.ndarray:
    """Row g: number of members meeting generator g in a (d-i-1)-space, i = 0..d."""
    d = P.rank
    I = S.versus_all
    return np.stack([(I == d - 1 - i).sum(axis=1) for i in range(d + 1)], axis=1)


def _point_profiles(P: PolarSpace, S: GeneratorSet):
    """For every point X and outside generator t through X, the number of
    members through X meeting t in a k-space, k = 0..d-2.

    Returns (points, outside_generators, counts) with one row per pair.
    """
    cache = S.__dict__.get("_profiles")
    if cache is not None:
        return cache
    d = P.rank
    I = S.versus_all
    inside = S.mask
    pos = np.full(P.ngenerators, -1, dtype=np.int64)
    pos[S.indices] = np.arange(len(S))
    pts, gens, rows = [], [], []
    for x, through in enumerate(P.generators_by_point):
        out = through[~inside[through]]
        if out.size == 0:
            continue
        ins = pos[through[inside[through]]]
        counts = np.zeros((out.size, d - 1), dtype=np.int64)
        if ins.size:
            block = I[np.ix_(out, ins)].astype(np.int64)
            for k in range(d - 1):
                counts[:, k] = (block == k).sum(axis=1)
        pts.append(np.full(out.size, x))
        gens.append(out)
        rows.append(counts)
    if rows:
        result = (np.concatenate(pts), np.concatenate(gens), np.vstack(rows))
    else:
        result = (np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros((0, d - 1), np.int64))
    S.__dict__["_profiles"] = result
    return result


def _distinct(rows) -> list:
    rows = np.asarray(rows)
    if rows.size == 0:
        return []
    rows = rows.astype(np.int64).reshape(rows.shape[0], -1)
    # encode each row as one integer so the dedupe is a 1-d unique
    base = int(rows.max()) + 1
    if base ** rows.shape[1] < 2**62:
        keys = rows @ (base ** np.arange(rows.shape[1] - 1, -1, -1, dtype=np.int64))
        _, first = np.unique(keys, return_index=True)
        rows = rows[first]
    else:
        rows = np.unique(rows, axis=0)
    return sorted(tuple(int(v) for v in r) for r in rows)


# -- the three checkers -------------------------------------------------------------

def check_strong_pseudopolar(P: PolarSpace, S: GeneratorSet) -> CheckReport:
    _require_range(P)
    d, F = P.rank, P.field
    exp_in = strong_spectrum(d, P.param_half, F, True)
    exp_out = strong_spectrum(d, P.param_half, F, False)
    spec = _spectra(P, S)
    inside = S.mask
    conds = []

    bad = np.flatnonzero(np.where(inside, (spec != exp_in).any(1), (spec != exp_out).any(1)))
    witness, note = None, ""
    if bad.size:
        g = int(bad[0])
        witness = _witness_generator(P.generator(g))
        witness["spectrum"] = spec[g].tolist()
        witness["in_S"] = bool(inside[g])
        note = f"{bad.size} generators deviate"
    conds.append(Condition(
        "i", bad.size == 0,
        {"in": _distinct(spec[inside]), "out": _distinct(spec[~inside])},
        {"in": exp_in, "out": exp_out}, witness,
        vacuous=not (~inside).any(), note=note))

    through = np.array([len(t) for t in P.generators_by_point])
    outside = through - S.coverage
    lacking = np.flatnonzero(outside == 0)
    conds.append(Condition(
        "ii", lacking.size == 0, int(outside.min()) if outside.size else 0, ">= 1",
        _witness_point(P.point(int(lacking[0]))) if lacking.size else None,
        note=f"{lacking.size} points lie on no outside generator" if lacking.size else ""))

    exp_prof = strong_point_profile(d, P.param_half, F)
    pts, gens, counts = _point_profiles(P, S)
    by_j = counts[:, ::-1]  # column j <-> intersection dimension d-2-j
    ok = (by_j == exp_prof).all(1) | (by_j == 0).all(1)
    bad = np.flatnonzero(~ok)
    witness = None
    if bad.size:
        r = int(bad[0])
        witness = {"kind": "point-generator", "point": P.point(int(pts[r])).to_rows(),
                   "generator": P.generator(int(gens[r])).to_rows(), "counts": by_j[r].tolist()}
    conds.append(Condition("iii", bad.size == 0, _distinct(by_j), {"all": exp_prof, "or": 0},
                           witness, vacuous=pts.size == 0))
    return CheckReport("strong", P.name, len(S), conds)


def _pseudo_common(P: PolarSpace, S: GeneratorSet) -> list[Condition]:
    d, F = P.rank, P.field
    J = S.internal.astype(np.int64)
    vacuous = len(S) == 0
    exp_nb = pseudo_neighbours(d, P.param_half, F)
    nb = (J == d - 2).sum(1)
    bad = np.flatnonzero(nb != exp_nb)
    c1 = Condition("i", bad.size == 0, sorted(set(nb.tolist())), exp_nb,
                   _witness_generator(P.generator(int(S.indices[bad[0]]))) if bad.size else None, vacuous=vacuous)
    disjoint = (J == -1).sum(1)
    bad = np.flatnonzero(disjoint == 0)
    c2 = Condition("ii", bad.size == 0, int(disjoint.min()) if disjoint.size else 0, ">= 1",
                   _witness_generator(P.generator(int(S.indices[bad[0]]))) if bad.size else None, vacuous=vacuous)
    return [c1, c2]


def check_pseudopolar(P: PolarSpace, S: GeneratorSet) -> CheckReport:
    _require_range(P)
    d, F = P.rank, P.field
    conds = _pseudo_common(P, S)
    exp_size = pseudo_size(d, P.param_half, F)
    conds.append(Condition("iii", len(S) == exp_size, len(S), exp_size))
    exp_deg = pseudo_point_degree(d, P.param_half, F)
    cov = S.coverage
    bad = np.flatnonzero((cov != 0) & (cov != exp_deg))
    conds.append(Condition("iv", bad.size == 0, sorted(set(cov.tolist())), [0, exp_deg],
                           _witness_point(P.point(int(bad[0]))) if bad.size else None))
    return CheckReport("pseudo", P.name, len(S), conds)


def check_alt(P: PolarSpace, S: GeneratorSet) -> CheckReport:
    """Conditions (i), (ii) of the pseudopolar definition with (iii'), (iv').

    In (iv') the number of members through the point meeting the outside
    generator in a (d-2)-space must equal q^(e-1) + 1.
    """
    _require_range(P)
    d, F = P.rank, P.field
    conds = _pseudo_common(P, S)
    exp_out = alt_outside_neighbours(d, P.param_half, F)
    outside = S.complement()
    nb = (S.versus_all[outside] == d - 2).sum(1)
    bad = np.flatnonzero(nb != exp_out)
    conds.append(Condition(
        "iii'", bad.size == 0, sorted(set(nb.tolist())), exp_out,
        _witness_generator(P.generator(int(outside[bad[0]]))) if bad.size else None,
        vacuous=outside.size == 0))
    pts, gens, counts = _point_profiles(P, S)
    full = (counts > 0).all(1) & (counts[:, d - 2] == exp_out)
    ok = full | (counts == 0).all(1)
    bad = np.flatnonzero(~ok)
    witness = None
    if bad.size:
        r = int(bad[0])
        witness = {"kind": "point-generator", "point": P.point(int(pts[r])).to_rows(),
                   "generator": P.generator(int(gens[r])).to_rows(), "counts": counts[r].tolist()}
    conds.append(Condition("iv'", bad.size == 0, _distinct(counts),
                           {"all_nonzero_with_last": exp_out, "or": 0}, witness,
                           vacuous=pts.size == 0))
    return CheckReport("alt", P.name, len(S), conds)


# -- embedded polar space verification --------------------------------------

@dataclass
class AxiomResult:
    axiom: int
    passed: bool
    detail: str = ""
    witness: dict | None = None

    def to_dict(self) -> dict:
        return _jsonable(self.__dict__)


@dataclass
class EmbeddedVerdict:
    is_polar_space: bool
    axioms: list[AxiomResult]
    rank: int | None
    param_half: int | None
    point_count: int
    expected_point_count: int | None
    secundum_degrees: list[int]
    e_counts: list[int]
    expected_e_count: int | None
    member_points: int
    t_size: int | None = None

    def axiom(self, k: int) -> AxiomResult:
        return self.axioms[k - 1]

    @property
    def point_count_ok(self) -> bool:
        return self.point_count == self.expected_point_count

    @property
    def e_count_ok(self) -> bool:
        # every member sees the same |E|, and |E| = |O| minus the points of a member
        return (self.e_counts == [self.expected_e_count]
                and self.rank is not None
                and self.expected_e_count == self.point_count - self.member_points)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["axioms"] = [a.to_dict() for a in self.axioms]
        return _jsonable(d)


def _bitmask(idx) -> int:
    m = 0
    for i in idx:
        m |= 1 << int(i)
    return m


def _local_templates(d: int, F: GF) -> dict[int, list[np.ndarray]]:
    """Point-index sets (into PG(d-1, q)) of all k-subspaces of PG(d-1, q)."""
    pg = projective_space(d - 1, F)
    return {k: [pg.point_indices(U) for U in enumerate_subspaces(d - 1, k, F)]
            for k in range(d - 1)}


def _member_point_maps(P: PolarSpace, S: GeneratorSet) -> np.ndarray:
    """Row s: polar point index of each point of PG(d-1,q) in member s's coordinates."""
    F, d = P.field, P.rank
    local = projective_space(d - 1, F).vectors
    out = np.empty((len(S), local.shape[0]), dtype=np.int64)
    for r, U in enumerate(S.members):
        vecs = F.matmul(local, U.matrix)
        out[r] = P.graph.local[P.pg.index(vecs)]
    return out


def verify_embedded(P: PolarSpace, S: GeneratorSet, materialize: bool | None = None,
                    seed: int = 0, sample_pairs: int = 20_000) -> EmbeddedVerdict:
    """Check the polar space axioms for (O, T) built from S.

    O is the set of points on members of S and T the set of subspaces of
    members.  T is materialised (all subspaces of all members) when d <= 4
    and q <= 4 unless `materialize` says otherwise; axiom 2 is then checked
    on every pair of members and on a seeded sample of pairs from T.
    """
    if len(S) == 0:
        raise ValueError("verify_embedded needs a nonempty set")
    d, F, q = P.rank, P.field, P.q
    k_gen = point_count(d - 1, q)
    if materialize is None:
        materialize = d <= 4 and q <= 4
    J = S.internal.astype(np.int64)
    cov = S.coverage
    O = cov > 0
    nO = int(O.sum())
    axioms = []

    # axiom 1: members are (d-1)-spaces; T consists of their subspaces
    sizes = np.array([len(set(r.tolist())) for r in S.point_sets])
    ok1 = bool((sizes == k_gen).all())
    axioms.append(AxiomResult(1, ok1, f"all {len(S)} members are {d - 1}-spaces of {P.name}"
                              if ok1 else "member of wrong dimension"))

    # axiom 2: closure under intersection
    templates = _local_templates(d, F)
    maps = _member_point_maps(P, S)
    member_masks = [_bitmask(r) for r in S.point_sets]
    T = {0}
    T.update(member_masks)
    if materialize:
        for row in maps:
            for k in range(d - 1):
                for t in templates[k]:
                    T.add(_bitmask(row[t]))
    bad2 = None
    ms = len(S)
    for a in range(ms):
        ma = member_masks[a]
        for b in range(a + 1, ms):
            x = ma & member_masks[b]
            if materialize:
                if x not in T:
                    bad2 = (a, b)
                    break
            elif P.size_to_dim[bin(x).count("1")] < -1:
                bad2 = (a, b)
                break
        if bad2:
            break
    if materialize and bad2 is None and len(T) > 1:
        rng = np.random.default_rng(seed)
        Tl = list(T)
        pairs = rng.integers(0, len(Tl), size=(min(sample_pairs, len(Tl) ** 2), 2))
        for a, b in pairs:
            if Tl[a] & Tl[b] not in T:
                bad2 = ("T", int(a), int(b))
                break
    detail2 = (f"T materialised with {len(T)} elements (incl. the empty set); all "
               f"{ms * (ms - 1) // 2} member pairs and sampled T pairs closed"
               if materialize else "member pairwise intersections are subspaces of members")
    axioms.append(AxiomResult(2, bad2 is None, detail2 if bad2 is None else f"not closed: {bad2}"))

    # axiom 3: unique member through Q meeting sigma in a (d-2)-space
    nb = sparse.csr_matrix((J == d - 2).astype(np.int32))
    M = sparse.csr_matrix((np.ones(S.point_sets.size, dtype=np.int32),
                           (np.repeat(np.arange(ms), k_gen), S.point_sets.ravel())),
                          shape=(ms, P.npoints))
    C = (nb @ M).toarray()
    region = O[None, :] & (M.toarray() == 0)
    wrong = region & (C != 1)
    e_counts = sorted(set(np.where(region, C, 0).sum(1).tolist()))
    witness3 = None
    if wrong.any():
        s, x = np.argwhere(wrong)[0]
        witness3 = {"kind": "point-generator", "point": P.point(int(x)).to_rows(),
                    "generator": S.members[int(s)].to_rows(), "count": int(C[s, x])}
    # second clause: a member is the union of its lines through any of its points
    lines = templates.get(1, [])
    npl = point_count(d - 1, q)
    covered = all(
        len(set(np.concatenate([t for t in lines if x in t]).tolist())) == npl
        for x in range(npl)) if d >= 2 and lines else True
    ok3 = not wrong.any() and covered
    axioms.append(AxiomResult(
        3, ok3,
        "exactly one member through each point of O off each member meets it in a "
        f"{d - 2}-space" if ok3 else f"{int(wrong.sum())} (point, member) pairs violate uniqueness",
        witness3))

    # axiom 4: two disjoint members
    disj = np.argwhere(J == -1)
    axioms.append(AxiomResult(4, disj.size > 0, "disjoint members exist" if disj.size
                              else "no two members are disjoint"))

    # parameter from the number of members through a (d-2)-element of T
    counts: dict[int, int] = {}
    for row in maps:
        for t in templates.get(d - 2, []):
            key = _bitmask(row[t])
            counts[key] = counts.get(key, 0) + 1
    degrees = sorted(set(counts.values()))
    param_half = None
    if len(degrees) == 1 and degrees[0] >= 2:
        x1 = degrees[0] - 1
        for k in range(0, 4 * d + 8):
            if (F.h * k) % 2 == 0 and qpow_half(F, k) == x1:
                param_half = k
                break
            if (F.h * k) % 2 == 0 and qpow_half(F, k) > x1:
                break

    exp_pts = exp_e = None
    if P.param_half >= 2:
        exp_pts = embedded_point_count(d, P.param_half, F)
        exp_e = embedded_e_count(d, P.param_half, F)
    ok = all(a.passed for a in axioms) and param_half is not None
    return EmbeddedVerdict(ok, axioms, d if ok1 else None, param_half, nO, exp_pts, degrees,
                           e_counts, exp_e, k_gen, len(T) if materialize else None)


# -- candidate sets ----------------------------------------------------------

def hyperplane_points(P: PolarSpace, H) -> np.ndarray:
    """Boolean mask over the points of P: inside the hyperplane H."""
    H = _as_hyperplane(P.form, H)
    inside = np.zeros(P.pg.npoints, dtype=bool)
    inside[P.pg.point_indices(H)] = True
    return inside[P.graph.points]


def section_set(P: PolarSpace, H, klass: SectionClass | None = None) -> GeneratorSet:
    """Generators of P contained in the non-tangent same-rank hyperplane H."""
    H = _as_hyperplane(P.form, H)
    klass = klass or classify_hyperplane(P, H)
    if klass.tag == "tangent":
        raise SectionError(f"tangent hyperplane; tangency point {klass.radical.to_rows()}")
    if klass.tag != "same-rank":
        raise SectionError(f"hyperplane section is {klass.family} of rank {klass.rank}, "
                           f"not of rank {P.rank}")
    inside = hyperplane_points(P, H)
    hits = inside[P.generators].sum(1)
    contained = hits == P.points_per_generator
    meet = point_count(P.rank - 2, P.q)
    assert (hits[~contained] == meet).all(), "outside generator not meeting H in a (d-2)-space"
    return GeneratorSet(P, indices=np.flatnonzero(contained))


def quadric_in_symplectic(d: int, F: GF) -> tuple[PolarSpace, GeneratorSet]:
    """W(2d-1, q) and the generators of the hyperbolic quadric polarising to it."""
    if F.p != 2:
        raise ValueError("the hyperbolic quadric is embedded in W(2d-1,q) only for q even")
    W = PolarSpace("symplectic", d, F)
    Qp = PolarSpace("hyperbolic", d, F)
    if not np.array_equal(np.array(polarize(Qp.form).gram), W.form.gram):
        raise AssertionError("quadric does not polarise to the symplectic form")
    ambient = Qp.graph.points[Qp.generators]
    local = W.graph.local[ambient]
    idx = [W._generator_lookup.get(np.sort(r).astype(np.int64).tobytes(), -1) for r in local]
    assert min(idx) >= 0, "a quadric generator is not totally isotropic"
    return W, GeneratorSet(W, indices=idx)


# -- the harness --------------------------------------------------------------

@dataclass
class InstanceResult:
    label: str
    size: int
    strong: bool
    pseudo: bool
    alt: bool
    embedded: bool
    rank: int | None
    param_half: int | None
    point_count: int
    point_count_ok: bool
    e_count_ok: bool
    spectra: dict
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class NegativeResult:
    sample: int
    strong: bool
    pseudo: bool
    alt: bool
    pseudo_failed: list[str]
    embedded: bool | None = None

    @property
    def rejected(self) -> bool:
        return not self.pseudo or self.embedded is False


@dataclass
class HarnessSummary:
    space: str
    classification: dict
    positives: list[InstanceResult]
    negatives: list[NegativeResult]
    implication_violations: int
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return (bool(self.positives) and all(p.passed for p in self.positives)
                and all(n.rejected for n in self.negatives)
                and self.implication_violations == 0)

    def to_dict(self, timing: bool = False) -> dict:
        d = {"space": self.space, "classification": self.classification,
             "passed": self.passed, "implication_violations": self.implication_violations,
             "positives": [dict(p.__dict__, passed=p.passed) for p in self.positives],
             "negatives": [dict(n.__dict__, rejected=n.rejected) for n in self.negatives]}
        if timing:
            d["elapsed"] = round(self.elapsed, 3)
        return _jsonable(d)


def dual_points(n: int, F: GF) -> np.ndarray:
    """Covectors of all hyperplanes of PG(n, q), in point enumeration order."""
    return projective_space(n, F).vectors


def _evaluate_positive(P: PolarSpace, S: GeneratorSet, label: str) -> InstanceResult:
    strong = check_strong_pseudopolar(P, S)
    pseudo = check_pseudopolar(P, S)
    alt = check_alt(P, S)
    v = verify_embedded(P, S)
    e_ok = v.e_count_ok
    failures = [f"strong:{c}" for c in strong.failed] + [f"pseudo:{c}" for c in pseudo.failed]
    failures += [f"alt:{c}" for c in alt.failed]
    if not v.is_polar_space:
        failures.append("embedded")
    if v.rank != P.rank:
        failures.append(f"rank {v.rank}")
    if v.param_half != P.param_half - 2:
        failures.append(f"param_half {v.param_half}")
    if not v.point_count_ok:
        failures.append(f"|O|={v.point_count}")
    if not e_ok:
        failures.append(f"|E|={v.e_counts}")
    for rep in (strong, pseudo, alt):
        if strong.passed and not rep.passed:
            failures.append("implication")
    return InstanceResult(label, len(S), strong.passed, pseudo.passed, alt.passed,
                          v.is_polar_space, v.rank, v.param_half, v.point_count,
                          v.point_count_ok, e_ok, strong["i"].observed, failures)


def candidate_sections(P: PolarSpace, hyperplanes="all", seed: int = 0):
    """Classify hyperplanes and yield (label, GeneratorSet) for same-rank ones.

    `hyperplanes` is "all", an int k (take the first k non-tangent hyperplanes of
    a seeded random order) or a list of covectors.  The classification tally is
    written to the returned dict as the generator is consumed.
    """
    tally = {"tangent": 0, "same-rank": 0, "rank-drop": 0}
    covs = dual_points(P.ambient_dim, P.field)
    limit = None
    if hyperplanes == "all":
        order = range(len(covs))
    elif isinstance(hyperplanes, (int, np.integer)):
        order = np.random.default_rng(seed).permutation(len(covs))
        limit = int(hyperplanes)
    else:
        covs = np.asarray(hyperplanes, dtype=np.int64)
        order = range(len(covs))

    def gen():
        found = 0
        for i in order:
            a = covs[i]
            klass = classify_hyperplane(P, a)
            tally[klass.tag] += 1
            if klass.tag != "tangent":
                found += 1
            if klass.tag == "same-rank":
                yield "H:" + ",".join(str(int(x)) for x in a), section_set(P, a, klass)
            if limit is not None and found >= limit:
                return

    return tally, gen()


def equivalence_harness(P: PolarSpace, hyperplanes="all", samples: int = 100, seed: int = 0,
                        budget_seconds: float | None = None,
                        embedded_on_negatives: bool = False) -> HarnessSummary:
    """Instantiate the equivalence of the three characterisations on P.

    Every candidate (same-rank hyperplane sections, or for W(2d-1,q) with q
    even the hyperbolic quadric) must pass all three checkers and the
    embedded verification with rank d and parameter e-1.  `samples` random
    generator sets of the same size must each fail the pseudopolar check
    (or, optionally, the embedded verification).
    """
    if P.family not in CASE_TABLE:
        raise ValueError(f"{P.name} is not in the case table")
    _require_range(P)
    t0 = time.perf_counter()

    def tick():
        if budget_seconds is not None and time.perf_counter() - t0 > budget_seconds:
            raise BudgetExceeded(f"harness exceeded {budget_seconds} s")

    if P.family == "symplectic":
        W, S = quadric_in_symplectic(P.rank, P.field)
        assert W == P
        tally = {"quadric": 1}
        cands = iter([(f"Q+({P.ambient_dim},{P.q})", S)])
    else:
        tally, cands = candidate_sections(P, hyperplanes, seed)
    positives = []
    implication = 0
    for label, S in cands:
        tick()
        res = _evaluate_positive(P, S, label)
        implication += res.failures.count("implication")
        positives.append(res)

    rng = np.random.default_rng(seed)
    size = pseudo_size(P.rank, P.param_half, P.field)
    draws = [rng.choice(P.ngenerators, size=size, replace=False) for _ in range(samples)]

    def negative(k):
        tick()
        S = GeneratorSet(P, indices=draws[k])
        strong = check_strong_pseudopolar(P, S)
        pseudo = check_pseudopolar(P, S)
        alt = check_alt(P, S)
        emb = None
        if embedded_on_negatives or pseudo.passed:
            emb = verify_embedded(P, S).is_polar_space
        bad = strong.passed and not (pseudo.passed and alt.passed)
        return NegativeResult(k, strong.passed, pseudo.passed, alt.passed, pseudo.failed, emb), bad

    # samples are drawn up front, so the outcome does not depend on scheduling
    with ThreadPoolExecutor(max_workers=threads()) as pool:
        outcomes = list(pool.map(negative, range(samples)))
    negatives = [r for r, _ in outcomes]
    implication += sum(bad for _, bad in outcomes)
    return HarnessSummary(P.name, dict(tally), positives, negatives, implication,
                          time.perf_counter() - t0)


# -- projective pseudopolar sets ---------------------------------------------

def check_projective_pseudopolar(spaces: list[Subspace], d: int, param_half: int,
                                 F: GF) -> CheckReport:
    """The four pseudopolar counts for a set of (d-1)-spaces of PG(n, q)."""
    n = spaces[0].ambient_dim
    pg = projective_space(n, F)
    sets = [pg.point_indices(U) for U in spaces]
    m = len(sets)
    M = sparse.csr_matrix((np.ones(sum(len(s) for s in sets), dtype=np.int32),
                           (np.repeat(np.arange(m), [len(s) for s in sets]), np.concatenate(sets))),
                          shape=(m, pg.npoints))
    sizes = (M @ M.T).toarray()
    dims = np.full(sizes.max() + 1, -2)
    dims[0] = -1
    for k in range(d):
        dims[point_count(k, F.q)] = k
    J = dims[sizes]
    exp_nb = pseudo_neighbours(d, param_half, F)
    nb = (J == d - 2).sum(1)
    disjoint = (J == -1).sum(1)
    exp_size = pseudo_size(d, param_half, F)
    exp_deg = pseudo_point_degree(d, param_half, F)
    cov = np.asarray(M.sum(0)).ravel()
    conds = [
        Condition("i", bool((nb == exp_nb).all()), sorted(set(nb.tolist())), exp_nb),
        Condition("ii", bool((disjoint > 0).all()), int(disjoint.min()), ">= 1"),
        Condition("iii", m == exp_size, m, exp_size),
        Condition("iv", bool(np.isin(cov, [0, exp_deg]).all()), sorted(set(cov.tolist())),
                  [0, exp_deg]),
    ]
    return CheckReport("projective", f"PG({n},{F.q})", m, conds)


def _hyperoval(F: GF) -> np.ndarray:
    """Conic (1, t, t^2), its point (0, 0, 1) and the nucleus (0, 1, 0)."""
    t = np.arange(F.q)
    conic = np.stack([np.ones_like(t), t, F.mul(t, t)], axis=1)
    return np.vstack([conic, [[0, 0, 1]], [[0, 1, 0]]])


def _span_all(spaces: list[Subspace]) -> Subspace:
    out = Subspace.empty(spaces[0].field, spaces[0].ambient_dim)
    for U in spaces:
        out = out.span(U)
    return out


def _concurrent_triple(lines: list[Subspace]):
    for a in range(len(lines)):
        for b in range(a + 1, len(lines)):
            X = lines[a].intersect(lines[b])
            for c in range(b + 1, len(lines)):
                if X.dim >= 0 and lines[c].contains(X):
                    return a, b, c
    return None


def _triangle(lines: list[Subspace]):
    """Three lines pairwise meeting in three distinct points (impossible in a
    generalised quadrangle)."""
    for a in range(len(lines)):
        for b in range(a + 1, len(lines)):
            ab = lines[a].intersect(lines[b])
            if ab.dim != 0:
                continue
            for c in range(b + 1, len(lines)):
                ac = lines[a].intersect(lines[c])
                bc = lines[b].intersect(lines[c])
                if ac.dim == 0 and bc.dim == 0 and len({ab, ac, bc}) == 3:
                    return a, b, c
    return None


def dual_hyperoval_example(F: GF, n: int = 4) -> tuple[list[Subspace], CheckReport]:
    """Two dual hyperovals in planes meeting in a common line l, minus l.

    The 2(q+1) lines satisfy the projective pseudopolar conditions for d = 2,
    e = 1 but are not the lines of a polar space.  ``report.extras`` records
    the dimension spanned by the lines, the same for the hyperbolic quadric
    Q+(3, q), and a triangle among the lines.
    """
    if F.p != 2:
        raise ValueError("dual hyperovals need q even")
    if n < 4:
        raise ValueError("the construction lives in PG(n, q) with n >= 4")
    m = n + 1
    e = np.eye(m, dtype=np.int64)
    ho = _hyperoval(F)
    lines, planes = [], []
    for third in (2, 3):
        # local (x0, x1, x2) -> x0 e0 + x2 e1 + x1 e_third; the nucleus' dual
        # line x1 = 0 becomes the common line <e0, e1>
        embed = np.vstack([e[0], e[third], e[1]])
        dual = []
        for pt in ho:
            local = nullspace(F, pt[None, :])
            dual.append(Subspace.from_rows(F, n, F.matmul(local, embed)))
        assert _concurrent_triple(dual) is None
        planes.append(Subspace.from_rows(F, n, embed))
        common = Subspace.from_rows(F, n, [e[0], e[1]])
        assert dual[-1] == common
        lines.extend(dual[:-1])
    report = check_projective_pseudopolar(lines, 2, 2, F)
    Qp = PolarSpace("hyperbolic", 2, F)
    classical = [Qp.generator(i) for i in range(Qp.ngenerators)]
    report.extras = {
        "span_dim": _span_all(lines).dim,
        "classical_span_dim": _span_all(classical).dim,
        "planes_meet_in": planes[0].intersect(planes[1]).dim,
        "triangle": _triangle(lines),
        "classical_triangle": _triangle(classical),
        "classical_passes": check_projective_pseudopolar(classical, 2, 2, F).passed,
    }
    return lines, report
