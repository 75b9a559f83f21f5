"""Projective subspaces of PG(n, q) and q-analogue combinatorics.

A :class:`Subspace` always stores its reduced row-echelon basis, so equality
and hashing are structural.  :class:`ProjectiveSpace` indexes the points of
PG(n, q) and maps any nonzero vector to its point index in O(1); the
heavier modules work with those integer point indices.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import comb, prod

import numpy as np

from .gf import GF


class BudgetExceeded(RuntimeError):
    """A requested enumeration is larger than the caller's budget."""


# -- integer combinatorics ------------------------------------------------------

def binomial(n: int, k: int) -> int:
    """Generalised binomial n(n-1)...(n-k+1)/k!, so binomial(-1, 2) == 1."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k)
    return prod(n - i for i in range(k)) // prod(range(1, k + 1))


def gaussian(n: int, k: int, q: int) -> int:
    """The Gaussian coefficient [n k]_q; zero whenever k < 0 or k > n."""
    if k < 0 or k > n:
        return 0
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    return num // den


def q_binomial_identity_check(n: int, q: int, t: int) -> bool:
    """Compare both sides of the q-binomial theorem at the integer t."""
    lhs = prod(1 + q**l * t for l in range(n))
    rhs = sum(q ** binomial(l, 2) * gaussian(n, l, q) * t**l for l in range(n + 1))
    return lhs == rhs


def point_count(k: int, q: int) -> int:
    """Number of points of a projective k-space."""
    return gaussian(k + 1, 1, q)


# -- linear algebra over GF(q) ------------------------------------------------------

def rref(F: GF, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form with zero rows dropped, and the pivot columns."""
    M = np.array(M, dtype=np.int64, ndmin=2)
    if M.size == 0:
        return M.reshape(0, M.shape[1] if M.ndim == 2 else 0), []
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = F.mul(F.inv(M[r, c]), M[r])
        factors = M[:, c].copy()
        factors[r] = 0
        if factors.any():
            M = F.sub(M, F.mul(factors[:, None], M[r][None, :]))
        pivots.append(c)
        r += 1
    return M[:r], pivots


def nullspace(F: GF, M, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of {x : M x^T = 0}."""
    M = np.asarray(M, dtype=np.int64)
    if ncols is None:
        ncols = M.shape[1]
    if M.size == 0:
        return np.eye(ncols, dtype=np.int64)
    R, pivots = rref(F, M.reshape(-1, ncols))
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = F.neg[R[r, f]]
    return basis


def rank(F: GF, M) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


# -- subspaces -------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A projective subspace of PG(ambient_dim, q) in canonical RREF form."""

    field: GF
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, F: GF, ambient_dim: int, rows) -> Subspace:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, ambient_dim + 1)
        if rows.size and (rows.min() < 0 or rows.max() >= F.q):
            raise ValueError("row entries must be field elements")
        R, _ = rref(F, rows) if rows.size else (rows, [])
        return cls(F, ambient_dim, tuple(tuple(int(x) for x in r) for r in R))

    @classmethod
    def empty(cls, F: GF, ambient_dim: int) -> Subspace:
        return cls(F, ambient_dim, ())

    @classmethod
    def whole(cls, F: GF, ambient_dim: int) -> Subspace:
        return cls.from_rows(F, ambient_dim, np.eye(ambient_dim + 1, dtype=np.int64))

    @classmethod
    def point(cls, F: GF, vector) -> Subspace:
        return cls.from_rows(F, len(vector) - 1, [vector])

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(len(self.basis), self.ambient_dim + 1)

    def _check(self, other: Subspace):
        if self.ambient_dim != other.ambient_dim or self.field != other.field:
            raise ValueError("subspaces live in different projective spaces")

    def span(self, other: Subspace) -> Subspace:
        return span(self, other)

    def intersect(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def contains(self, other: Subspace) -> bool:
        self._check(other)
        if other.dim < 0:
            return True
        return span(self, other).dim == self.dim

    def __contains__(self, other):
        return self.contains(other)

    def vectors(self) -> np.ndarray:
        """All q^(dim+1) vectors of the underlying vector space."""
        F = self.field
        k = len(self.basis)
        coeffs = np.array(list(itertools.product(range(F.q), repeat=k)), dtype=np.int64)
        if k == 0:
            return np.zeros((1, self.ambient_dim + 1), dtype=np.int64)
        return F.dot(coeffs[:, None, :], self.matrix.T[None, :, :])

    def points(self) -> list[Subspace]:
        """Points of the subspace, as dim-0 subspaces, in enumeration order."""
        if self.dim < 0:
            return []
        F = self.field
        out = []
        for local in enumerate_subspaces(self.dim, 0, F):
            v = F.matmul(np.array(local.basis[0])[None, :], self.matrix)[0]
            out.append(Subspace.point(F, v))
        return out

    def to_rows(self) -> list[list[int]]:
        return [list(r) for r in self.basis]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, PG({self.ambient_dim},{self.field.q}), {self.to_rows()})"


def span(A: Subspace, B: Subspace) -> Subspace:
    A._check(B)
    if not B.basis:
        return A
    if not A.basis:
        return B
    return Subspace.from_rows(A.field, A.ambient_dim, list(A.basis) + list(B.basis))


def intersect(A: Subspace, B: Subspace) -> Subspace:
    """Intersection by the Zassenhaus sum/intersection algorithm."""
    A._check(B)
    if not A.basis or not B.basis:
        return Subspace.empty(A.field, A.ambient_dim)
    F = A.field
    a, b = A.matrix, B.matrix
    top = np.hstack([a, a])
    bottom = np.hstack([b, np.zeros_like(b)])
    R, _ = rref(F, np.vstack([top, bottom]))
    m = A.ambient_dim + 1
    rows = [r[m:] for r in R if not r[:m].any()]
    if not rows:
        return Subspace.empty(F, A.ambient_dim)
    return Subspace.from_rows(F, A.ambient_dim, rows)


def hyperplane(F: GF, covector) -> Subspace:
    """The hyperplane {x : sum a_i x_i = 0} of PG(n, q)."""
    a = np.asarray(covector, dtype=np.int64)
    if not a.any():
        raise ValueError("zero covector")
    return Subspace.from_rows(F, len(a) - 1, nullspace(F, a[None, :]))


def enumerate_subspaces(n: int, k: int, F: GF, budget: int | None = None):
    """Yield every k-subspace of PG(n, q) once, in canonical form.

    Order: pivot-column patterns in lexicographic order, then free entries in
    lexicographic order.  The order is deterministic and so the stream can
    be resumed by skipping a prefix.
    """
    if k < -1 or k > n:
        raise ValueError(f"no {k}-subspaces in PG({n},{F.q})")
    total = gaussian(n + 1, k + 1, F.q)
    if budget is not None and total > budget:
        raise BudgetExceeded(f"{total} subspaces exceed budget {budget}")
    if k == -1:
        yield Subspace.empty(F, n)
        return
    m = n + 1
    for pivots in itertools.combinations(range(m), k + 1):
        free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, m)
                if c not in pivots]
        base = [[0] * m for _ in pivots]
        for r, pc in enumerate(pivots):
            base[r][pc] = 1
        for vals in itertools.product(range(F.q), repeat=len(free)):
            rows = [row[:] for row in base]
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield Subspace(F, n, tuple(tuple(r) for r in rows))


# -- point indexing -------------------------------------------------------------

class ProjectiveSpace:
    """Index of the points of PG(n, q).

    ``vectors[i]`` is the normalised representative (first nonzero entry 1)
    of point i; points are ordered as :func:`enumerate_subspaces` yields them.
    ``lookup[code(v)]`` is the point index of any nonzero vector v, where
    ``code(v) = sum v_i q^i``.
    """

    MAX_VECTORS = 2**24

    def __init__(self, n: int, F: GF):
        self.n = n
        self.field = F
        q = F.q
        if q ** (n + 1) > self.MAX_VECTORS:
            raise BudgetExceeded(f"PG({n},{q}) is too large to index")
        blocks = []
        for c in range(n + 1):
            tail = np.array(list(itertools.product(range(q), repeat=n - c)),
                            dtype=np.int64).reshape(q ** (n - c), n - c)
            blk = np.zeros((tail.shape[0], n + 1), dtype=np.int64)
            blk[:, c] = 1
            blk[:, c + 1:] = tail
            blocks.append(blk)
        self.vectors = np.vstack(blocks)
        self.npoints = self.vectors.shape[0]
        self.weights = q ** np.arange(n + 1, dtype=np.int64)
        lookup = np.full(q ** (n + 1), -1, dtype=np.int64)
        idx = np.arange(self.npoints)
        for lam in range(1, q):
            lookup[self.code(F.mul(lam, self.vectors))] = idx
        self.lookup = lookup

    def code(self, vecs) -> np.ndarray:
        return np.asarray(vecs, dtype=np.int64) @ self.weights

    def index(self, vecs) -> np.ndarray:
        """Point indices of nonzero vectors (-1 for the zero vector)."""
        return self.lookup[self.code(vecs)]

    def point_indices(self, U: Subspace) -> np.ndarray:
        """Sorted indices of the points of U."""
        if U.dim < 0:
            return np.zeros(0, dtype=np.int64)
        idx = self.index(U.vectors())
        return np.unique(idx[idx >= 0])

    def hyperplane_mask(self, covector) -> np.ndarray:
        a = np.asarray(covector, dtype=np.int64)
        return self.field.dot(self.vectors, a[None, :]) == 0

    def subspace(self, point_idx) -> Subspace:
        """The subspace spanned by the given points."""
        return Subspace.from_rows(self.field, self.n, self.vectors[np.asarray(point_idx)])


@functools.lru_cache(maxsize=None)
def projective_space(n: int, F: GF) -> ProjectiveSpace:
    return ProjectiveSpace(n, F)
