"""Quadratic, Hermitian and symplectic forms on GF(q)^(n+1).

Quadratic forms are stored as upper-triangular coefficient matrices C with
``Q(x) = sum_{i<=j} C[i][j] x_i x_j``; Hermitian and symplectic forms by their
Gram matrix.  The polarised pairing is always ``b(x, y) = x G conj(y)^T``
with ``G = C + C^T`` for the quadratic kinds.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .geometry import (
    BudgetExceeded,
    Subspace,
    hyperplane,
    intersect,
    nullspace,
    projective_space,
)
from .gf import GF

QUADRATIC_KINDS = ("quadratic-parabolic", "quadratic-hyperbolic", "quadratic-elliptic")
KINDS = QUADRATIC_KINDS + ("hermitian", "symplectic")

# family -> (form kind, ambient dimension as a function of rank, 2e)
FAMILIES = {
    "elliptic": ("quadratic-elliptic", lambda d: 2 * d + 1, 4),
    "parabolic": ("quadratic-parabolic", lambda d: 2 * d, 2),
    "hyperbolic": ("quadratic-hyperbolic", lambda d: 2 * d - 1, 0),
    "hermitian-odd": ("hermitian", lambda d: 2 * d - 1, 1),
    "hermitian-even": ("hermitian", lambda d: 2 * d, 3),
    "symplectic": ("symplectic", lambda d: 2 * d - 1, 2),
}

NOTATION = {
    "elliptic": "Q-({n},{q})",
    "parabolic": "Q({n},{q})",
    "hyperbolic": "Q+({n},{q})",
    "hermitian-odd": "H({n},{q})",
    "hermitian-even": "H({n},{q})",
    "symplectic": "W({n},{q})",
}


@dataclass(frozen=True)
class FormSpec:
    kind: str
    field: GF
    ambient_dim: int
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown form kind {self.kind!r}")
        M = self.array
        m = self.ambient_dim + 1
        if M.shape != (m, m):
            raise ValueError(f"form matrix must be {m}x{m}")
        F = self.field
        if self.kind in QUADRATIC_KINDS:
            if np.tril(M, -1).any():
                raise ValueError("quadratic coefficient matrix must be upper triangular")
        elif self.kind == "hermitian":
            if F.h % 2:
                raise ValueError("Hermitian forms need a field of even degree")
            if not np.array_equal(M, F.conj(M.T)):
                raise ValueError("Hermitian Gram matrix must satisfy M = conj(M^T)")
        else:
            if np.diag(M).any() or not np.array_equal(M, F.neg[M.T]):
                raise ValueError("symplectic Gram matrix must be alternating")

    @classmethod
    def make(cls, kind: str, F: GF, matrix) -> FormSpec:
        M = np.asarray(matrix, dtype=np.int64)
        return cls(kind, F, M.shape[0] - 1, tuple(tuple(int(x) for x in r) for r in M))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)

    @property
    def is_quadratic(self) -> bool:
        return self.kind in QUADRATIC_KINDS

    @functools.cached_property
    def gram(self) -> np.ndarray:
        M = self.array
        if self.is_quadratic:
            return self.field.add(M, M.T)
        return M

    def _conj(self, X):
        return self.field.conj(X) if self.kind == "hermitian" else X

    def values(self, X) -> np.ndarray:
        """Form values on the rows of X."""
        F = self.field
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        if self.kind == "symplectic":
            return np.zeros(X.shape[0], dtype=np.int64)
        XM = F.matmul(X, self.array)
        return F.dot(XM, self._conj(X))

    def pair(self, X, Y) -> np.ndarray:
        """Matrix of pairings b(x, y) for rows x of X and y of Y."""
        F = self.field
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        Y = self._conj(np.atleast_2d(np.asarray(Y, dtype=np.int64)))
        XG = F.matmul(X, self.gram)
        out = np.empty((X.shape[0], Y.shape[0]), dtype=np.int64)
        step = max(1, 2**22 // max(1, Y.shape[0]))
        for s in range(0, X.shape[0], step):
            blk = XG[s:s + step]
            acc = F.mul(blk[:, None, 0], Y[None, :, 0])
            for i in range(1, X.shape[1]):
                acc = F.add(acc, F.mul(blk[:, None, i], Y[None, :, i]))
            out[s:s + step] = acc
        return out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "field": self.field.to_dict(),
                "ambient_dim": self.ambient_dim, "matrix": [list(r) for r in self.matrix]}

    @classmethod
    def from_dict(cls, d) -> FormSpec:
        return cls.make(d["kind"], GF.from_dict(d["field"]), d["matrix"])


@dataclass(frozen=True)
class Pairing:
    """The polarised (sesqui)linear pairing of a form."""

    field: GF
    gram: tuple[tuple[int, ...], ...]
    sesquilinear: bool

    def __call__(self, x, y) -> int:
        F = self.field
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.sesquilinear:
            y = F.conj(y)
        G = np.array(self.gram, dtype=np.int64)
        return int(F.dot(F.matmul(x[None, :], G), y[None, :])[0])


@dataclass(frozen=True)
class SectionClass:
    tag: str  # "tangent" | "same-rank" | "rank-drop"
    family: str | None = None
    rank: int | None = None
    param_half: int | None = None
    radical: Subspace | None = None


def _irreducible_quadratic(F: GF) -> tuple[int, int]:
    """(t, s) with z^2 + t z + s irreducible over F, smallest by (t, s)."""
    z = np.arange(F.q)
    for t in range(F.q):
        for s in range(F.q):
            vals = F.add(F.add(F.mul(z, z), F.mul(t, z)), s)
            if np.all(vals != 0):
                return t, s
    raise AssertionError("no irreducible quadratic")  # pragma: no cover


def standard_form(family: str, rank: int, F: GF) -> FormSpec:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    if rank < 1:
        raise ValueError("rank must be >= 1")
    kind, amb, _ = FAMILIES[family]
    n = amb(rank)
    m = n + 1
    M = np.zeros((m, m), dtype=np.int64)
    if family == "parabolic":
        M[0, 0] = 1
        for i in range(1, m, 2):
            M[i, i + 1] = 1
    elif family == "hyperbolic":
        for i in range(0, m, 2):
            M[i, i + 1] = 1
    elif family == "elliptic":
        for i in range(0, m - 2, 2):
            M[i, i + 1] = 1
        t, s = _irreducible_quadratic(F)
        M[m - 2, m - 2] = 1
        M[m - 2, m - 1] = t
        M[m - 1, m - 1] = s
    elif family.startswith("hermitian"):
        if F.h % 2:
            raise ValueError(f"Hermitian spaces need a square order field, not {F!r}")
        start = 1 if family == "hermitian-even" else 0
        if start:
            M[0, 0] = 1
        for i in range(start, m, 2):
            M[i, i + 1] = M[i + 1, i] = 1
    else:
        for i in range(0, m, 2):
            M[i, i + 1] = 1
            M[i + 1, i] = F.neg[1]
    return FormSpec.make(kind, F, M)


def evaluate(f: FormSpec, P: Subspace) -> int:
    if P.dim != 0 or P.ambient_dim != f.ambient_dim:
        raise ValueError("evaluate expects a point of the form's ambient space")
    return int(f.values(P.matrix)[0])


def polarize(f: FormSpec) -> Pairing:
    return Pairing(f.field, tuple(tuple(int(x) for x in r) for r in f.gram),
                   f.kind == "hermitian")


def perp(f: FormSpec, U: Subspace) -> Subspace:
    """All points y with b(y, u) = 0 for every u in U."""
    F = f.field
    if U.ambient_dim != f.ambient_dim:
        raise ValueError("subspace and form live in different spaces")
    if U.dim < 0:
        return Subspace.whole(F, f.ambient_dim)
    A = F.matmul(f._conj(U.matrix), f.gram.T)
    N = nullspace(F, A)
    return Subspace.from_rows(F, f.ambient_dim, N) if N.size else Subspace.empty(F, f.ambient_dim)


def is_totally_singular(f: FormSpec, U: Subspace) -> bool:
    if U.dim < 0:
        return True
    B = U.matrix
    if f.pair(B, B).any():
        return False
    return not f.values(B).any()


def radical(f: FormSpec, W: Subspace | None = None) -> Subspace:
    """Radical of f restricted to W (default: the whole space).

    For quadratic kinds only the singular points of ``W ∩ W^perp`` count, which
    in characteristic 2 excludes the nucleus of a parabolic quadric.
    """
    F = f.field
    if W is None:
        W = Subspace.whole(F, f.ambient_dim)
    R = intersect(W, perp(f, W))
    if R.dim < 0 or not f.is_quadratic:
        return R
    pts = [P for P in R.points() if evaluate(f, P) == 0]
    rad = Subspace.empty(F, f.ambient_dim)
    for P in pts:
        rad = rad.span(P)
    # in characteristic 2 Q is additive on R, so its zero set is a subspace
    assert all(evaluate(f, P) == 0 for P in rad.points())
    return rad


# -- totally singular subspaces by depth-first extension -------------------

class SingularGraph:
    """Singular points of a form and their mutual orthogonality.

    ``points`` holds ambient point indices, ``vectors`` their coordinates and
    ``collinear[i, j]`` whether points i and j pair to zero.  Two orthogonal
    singular points span a totally singular line, so totally singular
    subspaces are exactly the subspaces whose points are pairwise collinear.
    """

    def __init__(self, f: FormSpec):
        self.form = f
        self.pg = projective_space(f.ambient_dim, f.field)
        vals = f.values(self.pg.vectors)
        self.points = np.flatnonzero(vals == 0)
        self.vectors = self.pg.vectors[self.points]
        self.local = np.full(self.pg.npoints, -1, dtype=np.int64)
        self.local[self.points] = np.arange(self.points.size)
        self.collinear = f.pair(self.vectors, self.vectors) == 0

    def __len__(self):
        return self.points.size

    def search(self, depth: int, allowed=None):
        """Yield every totally singular subspace of vector dimension `depth`.

        Each subspace is produced once, as the sorted array of its local point
        indices: the path to it chooses, at every step, the smallest point not
        yet spanned.  `allowed` restricts the search to a mask of local points
        (for instance those inside a hyperplane).
        """
        F = self.form.field
        N = len(self)
        cand0 = np.ones(N, dtype=bool) if allowed is None else np.asarray(allowed, dtype=bool).copy()
        idx = np.arange(N)
        zero = np.zeros((1, self.vectors.shape[1]), dtype=np.int64)
        scalars = np.arange(1, F.q)

        def extend(U_vecs, U_pts, cand, k):
            removed = np.zeros(N, dtype=bool)
            for c in np.flatnonzero(cand):
                if removed[c]:
                    continue
                new_vecs = F.add(U_vecs, self.vectors[c][None, :])
                new_pts = self.local[self.pg.index(new_vecs)]
                removed[new_pts] = True
                if new_pts.min() != c:
                    continue
                pts = np.concatenate([U_pts, new_pts])
                if k + 1 == depth:
                    yield np.sort(pts)
                    continue
                nxt = cand & self.collinear[c] & (idx > c)
                nxt[new_pts] = False
                grown = np.vstack([U_vecs] + [F.mul(lam, new_vecs) for lam in scalars])
                yield from extend(grown, pts, nxt, k + 1)

        if depth == 0:
            yield np.zeros(0, dtype=np.int64)
            return
        yield from extend(zero, np.zeros(0, dtype=np.int64), cand0, 0)

    def search_all(self, depth: int, allowed=None, chunk: int = 1 << 22) -> np.ndarray:
        """All totally singular subspaces of vector dimension `depth` at once.

        Same canonical extension rule as :meth:`search`, run level by level
        over numpy arrays; rows come back in the order :meth:`search` yields
        them.  `chunk` bounds the number of array cells per step.
        """
        F = self.form.field
        N, m = len(self), self.vectors.shape[1]
        cand0 = np.ones(N, dtype=bool) if allowed is None else np.asarray(allowed, dtype=bool)
        if depth == 0:
            return np.zeros((1, 0), dtype=np.int64)
        scalars = np.arange(1, F.q)
        idx = np.arange(N)
        start = np.flatnonzero(cand0)
        pts = start[:, None]
        chain = pts.copy()
        vecs = np.concatenate([np.zeros((start.size, 1, m), dtype=np.int64),
                               F.mul(scalars[None, :, None], self.vectors[start][:, None, :])],
                              axis=1)
        for k in range(1, depth):
            npts, nvec = pts.shape[1], vecs.shape[1]
            step = max(1, chunk // max(1, npts * N))
            out_pts, out_chain, out_vecs = [], [], []
            for a in range(0, pts.shape[0], step):
                P_, C_, V_ = pts[a:a + step], chain[a:a + step], vecs[a:a + step]
                cand = np.logical_and.reduce(self.collinear[P_], axis=1) & cand0
                cand &= idx[None, :] > C_[:, -1:]
                np.put_along_axis(cand, P_, False, axis=1)
                r, c = np.nonzero(cand)
                sub = max(1, chunk // max(1, nvec * m))
                for b in range(0, r.size, sub):
                    rr, cc = r[b:b + sub], c[b:b + sub]
                    new = F.add(V_[rr], self.vectors[cc][:, None, :])
                    new_pts = self.local[self.pg.index(new)]
                    keep = new_pts.min(axis=1) == cc
                    rr, cc, new, new_pts = rr[keep], cc[keep], new[keep], new_pts[keep]
                    out_pts.append(np.concatenate([P_[rr], new_pts], axis=1))
                    out_chain.append(np.concatenate([C_[rr], cc[:, None]], axis=1))
                    if k + 1 < depth:
                        grown = [V_[rr]] + [F.mul(lam, new) for lam in scalars]
                        out_vecs.append(np.concatenate(grown, axis=1))
            if not out_pts:
                return np.zeros((0, 0), dtype=np.int64)
            pts = np.concatenate(out_pts)
            chain = np.concatenate(out_chain)
            if k + 1 < depth:
                vecs = np.concatenate(out_vecs)
            if pts.shape[0] == 0:
                return np.zeros((0, pts.shape[1]), dtype=np.int64)
        order = np.lexsort(chain.T[::-1])
        return np.sort(pts[order], axis=1)


@functools.lru_cache(maxsize=32)
def singular_graph(f: FormSpec) -> SingularGraph:
    return SingularGraph(f)


def witt_index(f: FormSpec, W: Subspace | None = None) -> int:
    """Largest vector dimension of a totally singular subspace inside W."""
    g = singular_graph(f)
    allowed = None
    if W is not None:
        inside = np.zeros(g.pg.npoints, dtype=bool)
        inside[g.pg.point_indices(W)] = True
        allowed = inside[g.points]
    k = 0
    while next(g.search(k + 1, allowed), None) is not None:
        k += 1
    return k


def _as_hyperplane(f: FormSpec, H) -> Subspace:
    if isinstance(H, Subspace):
        if H.dim != f.ambient_dim - 1:
            raise ValueError("not a hyperplane")
        return H
    return hyperplane(f.field, H)


def section_family(kind: str, dim: int, witt: int) -> tuple[str, int]:
    """Family and rank of a nondegenerate form of the given kind on PG(dim, q)."""
    if kind == "hermitian":
        return ("hermitian-odd", (dim + 1) // 2) if dim % 2 else ("hermitian-even", dim // 2)
    if kind == "symplectic":
        return "symplectic", (dim + 1) // 2
    if dim % 2 == 0:
        return "parabolic", dim // 2
    if witt == (dim + 1) // 2:
        return "hyperbolic", witt
    return "elliptic", witt


def classify_hyperplane(pol, H) -> SectionClass:
    """Tangent, same-rank or rank-drop, for a hyperplane H of pol's ambient.

    `pol` is a polar space (anything with ``form`` and ``rank``); H is a
    hyperplane Subspace or a covector.
    """
    f = pol.form
    H = _as_hyperplane(f, H)
    rad = radical(f, H)
    if rad.dim >= 0:
        return SectionClass("tangent", radical=rad)
    w = witt_index(f, H)
    fam, rk = section_family(f.kind, H.dim, w)
    assert rk == w, (fam, rk, w)
    tag = "same-rank" if w == pol.rank else "rank-drop"
    return SectionClass(tag, family=fam, rank=w, param_half=FAMILIES[fam][2])


def check_budget(count: int, budget: int | None, what: str):
    if budget is not None and count > budget:
        raise BudgetExceeded(f"{count} {what} exceed budget {budget}")
