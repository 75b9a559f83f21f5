"""Finite classical polar spaces: points, generators and generator sets."""

from __future__ import annotations

import functools
import json
from math import prod

import numpy as np
from scipy import sparse

from .forms import (
    FAMILIES,
    NOTATION,
    FormSpec,
    check_budget,
    is_totally_singular,
    singular_graph,
    standard_form,
)
from .geometry import Subspace, gaussian, point_count
from .gf import GF, field_make

SCHEMA_VERSION = 1
DEFAULT_BUDGET = 50_000


class InvalidGeneratorSet(ValueError):
    """A generator set file or member list does not match its polar space."""


def qpow_half(F: GF, half: int) -> int:
    """q^(half/2) as an exact integer, refusing anything irrational."""
    if half < 0:
        raise ValueError(f"q^({half}/2) is not an integer")
    if (F.h * half) % 2:
        raise ValueError(f"q^({half}/2) is not an integer for q = {F.q}")
    return F.p ** (F.h * half // 2)


class PolarSpace:
    """A row of the classical table: family, rank d, parameter e = param_half/2.

    Points and generators are enumerated lazily and cached.  Points are
    indexed 0..len(points)-1 in ambient enumeration order; generators are
    stored as rows of sorted point indices.
    """

    def __init__(self, family: str, rank: int, field: GF, form: FormSpec | None = None,
                 budget: int | None = DEFAULT_BUDGET):
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
        kind, amb, param_half = FAMILIES[family]
        if rank < 1:
            raise ValueError("rank must be >= 1")
        if kind == "hermitian" and field.h % 2:
            raise ValueError(f"{family} needs a square order field, not {field!r}")
        if form is None:
            form = standard_form(family, rank, field)
        if form.kind != kind or form.ambient_dim != amb(rank) or form.field != field:
            raise ValueError(f"form does not match a {family} space of rank {rank}")
        self.family = family
        self.rank = rank
        self.param_half = param_half
        self.field = field
        self.form = form
        self.ambient_dim = amb(rank)
        self.budget = budget
        qpow_half(field, param_half)  # asserts q^e is integral

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def name(self) -> str:
        return NOTATION[self.family].format(n=self.ambient_dim, q=self.q)

    def __repr__(self):
        return f"PolarSpace({self.name}, rank={self.rank}, e={self.param_half}/2)"

    def __eq__(self, other):
        return isinstance(other, PolarSpace) and (
            self.family, self.rank, self.form) == (other.family, other.rank, other.form)

    def __hash__(self):
        return hash((self.family, self.rank, self.form))

    def qe(self, shift_half: int = 0) -> int:
        """q^(e + shift_half/2)."""
        return qpow_half(self.field, self.param_half + shift_half)

    # closed forms for the number of points and generators
    def expected_points(self) -> int:
        d = self.rank
        return gaussian(d, 1, self.q) * (self.qe(2 * (d - 1)) + 1)

    def expected_generators(self) -> int:
        return prod(self.qe(2 * i) + 1 for i in range(self.rank))

    def expected_generators_through_point(self) -> int:
        return prod(self.qe(2 * i) + 1 for i in range(self.rank - 1))

    def expected_generators_through_secundum(self) -> int:
        return self.qe() + 1

    # enumeration
    @property
    def graph(self):
        return singular_graph(self.form)

    @property
    def pg(self):
        return self.graph.pg

    @property
    def npoints(self) -> int:
        return len(self.graph)

    @property
    def points_per_generator(self) -> int:
        return point_count(self.rank - 1, self.q)

    @functools.cached_property
    def generators(self) -> np.ndarray:
        check_budget(self.expected_generators(), self.budget, "generators")
        rows = self.graph.search_all(self.rank)
        if rows.shape[0] == 0:
            return np.zeros((0, self.points_per_generator), dtype=np.int64)
        return rows

    @property
    def ngenerators(self) -> int:
        return self.generators.shape[0]

    @functools.cached_property
    def incidence(self) -> sparse.csr_matrix:
        """Generators x points 0/1 matrix."""
        G, k = self.generators.shape
        data = np.ones(G * k, dtype=np.int32)
        rows = np.repeat(np.arange(G), k)
        return sparse.csr_matrix((data, (rows, self.generators.ravel())),
                                 shape=(G, self.npoints))

    @functools.cached_property
    def generators_by_point(self) -> list[np.ndarray]:
        inc = self.incidence.tocsc()
        return [inc.indices[inc.indptr[i]:inc.indptr[i + 1]] for i in range(self.npoints)]

    @functools.cached_property
    def _generator_lookup(self) -> dict:
        return {row.tobytes(): i for i, row in enumerate(self.generators)}

    @functools.cached_property
    def size_to_dim(self) -> np.ndarray:
        """Projective dimension of a subspace from its number of points."""
        out = np.full(self.points_per_generator + 1, -2, dtype=np.int64)
        out[0] = -1
        for k in range(self.rank):
            out[point_count(k, self.q)] = k
        return out

    def point(self, i: int) -> Subspace:
        return Subspace.point(self.field, self.graph.vectors[i])

    def generator(self, i: int) -> Subspace:
        return self.pg.subspace(self.graph.points[self.generators[i]])

    def local_points(self, U: Subspace) -> np.ndarray:
        """Sorted point indices of U; raises if U has non-singular points."""
        if U.ambient_dim != self.ambient_dim or U.field != self.field:
            raise ValueError("subspace is not in the ambient space of the polar space")
        loc = self.graph.local[self.pg.point_indices(U)]
        if (loc < 0).any():
            raise ValueError(f"{U} is not contained in {self.name}")
        return np.sort(loc)

    def generator_index(self, U: Subspace) -> int:
        """Index of U among the generators, or -1 if U is not a generator."""
        try:
            pts = self.local_points(U)
        except ValueError:
            return -1
        if pts.size != self.points_per_generator:
            return -1
        return self._generator_lookup.get(pts.astype(np.int64).tobytes(), -1)

    def intersection_sizes(self, rows, cols) -> np.ndarray:
        """Dense matrix of |g_r ∩ g_c| (in points) for generator index arrays."""
        inc = self.incidence
        A = inc[np.asarray(rows)]
        B = inc[np.asarray(cols)]
        return (A @ B.T).toarray()

    def to_dict(self) -> dict:
        return {"family": self.family, "rank": self.rank, "param_half": self.param_half,
                "field": self.field.to_dict(), "ambient_dim": self.ambient_dim,
                "form": {"kind": self.form.kind, "matrix": [list(r) for r in self.form.matrix]}}

    @classmethod
    def from_dict(cls, d, budget: int | None = DEFAULT_BUDGET) -> PolarSpace:
        F = GF.from_dict(d["field"])
        form = FormSpec.make(d["form"]["kind"], F, d["form"]["matrix"])
        P = cls(d["family"], int(d["rank"]), F, form=form, budget=budget)
        if "param_half" in d and int(d["param_half"]) != P.param_half:
            raise ValueError(f"param_half {d['param_half']} inconsistent with {P.family}")
        if "ambient_dim" in d and int(d["ambient_dim"]) != P.ambient_dim:
            raise ValueError(f"ambient_dim {d['ambient_dim']} inconsistent with {P.family}")
        return P


@functools.lru_cache(maxsize=16)
def polar_space(family: str, rank: int, p: int, h: int = 1) -> PolarSpace:
    """Cached standard polar space of the given family over GF(p^h)."""
    return PolarSpace(family, rank, field_make(p, h))


def enumerate_points(P: PolarSpace):
    for i in range(P.npoints):
        yield P.point(i)


def enumerate_generators(P: PolarSpace, budget: int | None = None):
    check_budget(P.expected_generators(), budget, "generators")
    for i in range(P.ngenerators):
        yield P.generator(i)


def generators_through(P: PolarSpace, U: Subspace) -> list[Subspace]:
    if not _totally_singular(P, U):
        raise ValueError(f"{U} is not totally singular for {P.name}")
    pts = P.local_points(U)
    if pts.size == 0:
        cands = np.arange(P.ngenerators)
    else:
        cands = P.generators_by_point[pts[0]]
    hits = [g for g in cands if np.isin(pts, P.generators[g]).all()]
    return [P.generator(g) for g in hits]


def _totally_singular(P: PolarSpace, U: Subspace) -> bool:
    return is_totally_singular(P.form, U)


class GeneratorSet:
    """A set of generators of a fixed polar space.

    Members are held as sorted generator indices of ``space``; Subspace views
    are built on demand.
    """

    def __init__(self, space: PolarSpace, members=None, indices=None):
        self.space = space
        if indices is None:
            idx = []
            for U in members or ():
                if U.dim != space.rank - 1:
                    raise InvalidGeneratorSet(f"{U} has dimension {U.dim}, not {space.rank - 1}")
                g = space.generator_index(U)
                if g < 0:
                    raise InvalidGeneratorSet(f"{U} is not a generator of {space.name}")
                idx.append(g)
        else:
            idx = [int(i) for i in indices]
            if any(i < 0 or i >= space.ngenerators for i in idx):
                raise InvalidGeneratorSet("generator index out of range")
        arr = np.array(sorted(idx), dtype=np.int64)
        if arr.size and (np.diff(arr) == 0).any():
            raise InvalidGeneratorSet("duplicate generators")
        self.indices = arr

    def __len__(self):
        return self.indices.size

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, U) -> bool:
        g = U if isinstance(U, (int, np.integer)) else self.space.generator_index(U)
        return bool(self.mask[g]) if g >= 0 else False

    @functools.cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.space.ngenerators, dtype=bool)
        m[self.indices] = True
        return m

    @functools.cached_property
    def members(self) -> list[Subspace]:
        return [self.space.generator(i) for i in self.indices]

    @functools.cached_property
    def point_sets(self) -> np.ndarray:
        return self.space.generators[self.indices]

    @functools.cached_property
    def versus_all(self) -> np.ndarray:
        """Projective dimension of g ∩ s for every generator g and member s."""
        P = self.space
        sizes = P.intersection_sizes(np.arange(P.ngenerators), self.indices)
        return P.size_to_dim[sizes].astype(np.int8)

    @functools.cached_property
    def internal(self) -> np.ndarray:
        """Projective dimension of s ∩ s' for members s, s'."""
        P = self.space
        return P.size_to_dim[P.intersection_sizes(self.indices, self.indices)].astype(np.int8)

    @functools.cached_property
    def coverage(self) -> np.ndarray:
        """Number of members through each point of the space."""
        return np.bincount(self.point_sets.ravel(), minlength=self.space.npoints)

    def complement(self) -> np.ndarray:
        return np.flatnonzero(~self.mask)

    def to_dict(self) -> dict:
        gens = sorted(U.to_rows() for U in self.members)
        return {"schema_version": SCHEMA_VERSION, "space": self.space.to_dict(),
                "generators": gens}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, d, budget: int | None = DEFAULT_BUDGET) -> GeneratorSet:
        try:
            space = PolarSpace.from_dict(d["space"], budget=budget)
            F = space.field
            members = [Subspace.from_rows(F, space.ambient_dim, rows) for rows in d["generators"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidGeneratorSet(f"malformed generator set: {exc}") from exc
        for rows, U in zip(d["generators"], members):
            if [list(r) for r in U.basis] != [list(r) for r in rows]:
                raise InvalidGeneratorSet(f"generator {rows} is not in canonical form")
        return cls(space, members)

    @classmethod
    def loads(cls, text: str, budget: int | None = DEFAULT_BUDGET) -> GeneratorSet:
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidGeneratorSet(f"not JSON: {exc}") from exc
        return cls.from_dict(d, budget=budget)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path, budget: int | None = DEFAULT_BUDGET) -> GeneratorSet:
        with open(path) as fh:
            return cls.loads(fh.read(), budget=budget)


def intersection_spectrum(P: PolarSpace, S: GeneratorSet, pi) -> dict[int, int]:
    """Number of members of S meeting the generator pi in each dimension -1..d-1."""
    g = pi if isinstance(pi, (int, np.integer)) else P.generator_index(pi)
    if g < 0:
        raise ValueError(f"{pi} is not a generator of {P.name}")
    dims = P.size_to_dim[P.intersection_sizes([g], S.indices)[0]]
    return {k: int((dims == k).sum()) for k in range(-1, P.rank)}
