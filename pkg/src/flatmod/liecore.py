"""Numeric presentation of sl(n, C) and its triangular subgroup calculus.

Everything downstream works with one :class:`LieData` object per rank: an
ordered basis adapted to a fixed pair of opposite Borel subgroups (upper and
lower triangular matrices), the trace form, the standard skew tensor built
from root vectors, and the Cartan trivector entering the quasi-Poisson
identity.  Group-level utilities (triangular factorizations, Bruhat word of
a matrix, subgroup membership, seeded random elements) live here as well.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import OffBigCell, RankAmbiguous, UnsupportedLagrangian

DEFAULT_TOL = 1e-9

LAGRANGIAN_TAGS = ("G*", "G*-dual", "Btilde+", "gDelta", "gNegDelta")


def _mat(rows):
    return np.array(rows, dtype=complex)


@dataclass
class LieData:
    """Presentation of sl(n, C) in a basis adapted to the triangular split.

    Basis order: orthonormalized Cartan elements h_1..h_{n-1}, then for each
    positive root (i<j) the raising matrix E_{ij} followed by the lowering
    matrix E_{ji}.  ``pairing`` is the trace form in this basis and
    ``structure`` holds c[k,i,j] with [X_i, X_j] = sum_k c[k,i,j] X_k.
    """

    n: int
    dim: int
    basis: list
    names: list
    pairing: np.ndarray
    pairing_inv: np.ndarray
    roots: list
    root_vectors: list
    structure: np.ndarray
    r_tensor: np.ndarray
    lam: np.ndarray
    chi: np.ndarray
    cartan_idx: list
    plus_idx: list
    minus_idx: list
    _flat_stack: np.ndarray = field(default=None, repr=False)

    # -- linear coordinates ------------------------------------------------

    def flat(self, X: np.ndarray) -> np.ndarray:
        """Covector of X: flat(X)_j = <X, X_j>."""
        return np.einsum("apq,qp->a", self._flat_stack, X)

    def coords(self, X: np.ndarray) -> np.ndarray:
        """Coefficients of X in the basis (inverse of matrix assembly)."""
        return self.pairing_inv @ self.flat(X)

    def sharp(self, xi: np.ndarray) -> np.ndarray:
        """The element Y with <Y, X_j> = xi_j for every basis index j."""
        c = self.pairing_inv @ np.asarray(xi, dtype=complex)
        return self.assemble(c)

    def assemble(self, coeffs: np.ndarray) -> np.ndarray:
        return np.einsum("a,apq->pq", np.asarray(coeffs, dtype=complex),
                         np.stack(self.basis))

    def ad_matrix(self, X: np.ndarray) -> np.ndarray:
        """ad_X as a dim x dim matrix in basis coordinates."""
        cols = [self.coords(X @ B - B @ X) for B in self.basis]
        return np.stack(cols, axis=1)

    def Ad_matrix(self, g: np.ndarray) -> np.ndarray:
        """Ad_g as a dim x dim matrix in basis coordinates."""
        ginv = np.linalg.inv(g)
        cols = [self.coords(g @ B @ ginv) for B in self.basis]
        return np.stack(cols, axis=1)

    def pr_t(self, X: np.ndarray) -> np.ndarray:
        """Projection of a triangular algebra element onto the Cartan part."""
        d = np.diag(np.diag(X)).astype(complex)
        d -= np.trace(d) / self.n * np.eye(self.n)
        return d

    # -- random elements ---------------------------------------------------

    def random_algebra(self, rng, scale=1.0) -> np.ndarray:
        c = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        return scale * self.assemble(c / np.sqrt(2 * self.dim))

    def random_group(self, rng, scale=0.8) -> np.ndarray:
        return expm(self.random_algebra(rng, scale))

    def random_subalgebra(self, rng, idx, scale=1.0) -> np.ndarray:
        X = np.zeros((self.n, self.n), dtype=complex)
        for a in idx:
            coef = rng.standard_normal() + 1j * rng.standard_normal()
            X = X + scale * coef / np.sqrt(2 * len(idx)) * self.basis[a]
        return X

    def random_borel(self, rng, lower=False, scale=0.8) -> np.ndarray:
        idx = self.cartan_idx + (self.minus_idx if lower else self.plus_idx)
        return expm(self.random_subalgebra(rng, idx, scale))

    def random_unipotent(self, rng, lower=False, scale=0.8) -> np.ndarray:
        idx = self.minus_idx if lower else self.plus_idx
        return expm(self.random_subalgebra(rng, idx, scale))

    def random_torus(self, rng, scale=0.8) -> np.ndarray:
        return expm(self.random_subalgebra(rng, self.cartan_idx, scale))

    def random_gstar(self, rng, scale=0.8):
        """A pair (x, y) in B+ x B- with inverse torus parts."""
        x = self.random_borel(rng, lower=False, scale=scale)
        t = np.diag(np.diag(x))
        y = self.random_unipotent(rng, lower=True, scale=scale) @ np.linalg.inv(t)
        return x, y


def build_sl(n: int) -> LieData:
    """Assemble the full numeric presentation of sl(n, C), n >= 2."""
    if n < 2:
        raise ValueError("rank: need n >= 2")
    dim = n * n - 1

    basis, names = [], []
    # Cartan part: Gram-Schmidt the simple coroots against the trace form.
    raw = []
    for i in range(n - 1):
        h = np.zeros((n, n), dtype=complex)
        h[i, i], h[i + 1, i + 1] = 1.0, -1.0
        raw.append(h)
    cartan = []
    for h in raw:
        v = h.copy()
        for u in cartan:
            v = v - np.trace(v @ u) * u
        v = v / np.sqrt(np.trace(v @ v))
        cartan.append(v)
    cartan_idx = list(range(n - 1))
    for i, h in enumerate(cartan):
        basis.append(h)
        names.append(f"h{i + 1}")

    roots, root_vectors, plus_idx, minus_idx = [], [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            vec = [0] * (n - 1)
            for l in range(i, j):
                vec[l] = 1
            roots.append(tuple(vec))
            Ep = np.zeros((n, n), dtype=complex)
            Ep[i, j] = 1.0
            Em = np.zeros((n, n), dtype=complex)
            Em[j, i] = 1.0
            plus_idx.append(len(basis))
            basis.append(Ep)
            names.append(f"E({i + 1},{j + 1})")
            minus_idx.append(len(basis))
            basis.append(Em)
            names.append(f"E({j + 1},{i + 1})")
            root_vectors.append((Ep, Em))

    stack = np.stack(basis)
    pairing = np.einsum("apq,bqp->ab", stack, stack)
    pairing_inv = np.linalg.inv(pairing)

    L = LieData(
        n=n, dim=dim, basis=basis, names=names,
        pairing=pairing, pairing_inv=pairing_inv,
        roots=roots, root_vectors=root_vectors,
        structure=np.zeros((dim, dim, dim), dtype=complex),
        r_tensor=np.zeros((dim, dim), dtype=complex),
        lam=np.zeros((dim, dim), dtype=complex),
        chi=np.zeros((dim, dim, dim), dtype=complex),
        cartan_idx=cartan_idx, plus_idx=plus_idx, minus_idx=minus_idx,
        _flat_stack=stack,
    )

    c = np.empty((dim, dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            c[:, i, j] = L.coords(basis[i] @ basis[j] - basis[j] @ basis[i])
    L.structure = c

    r = np.zeros((dim, dim), dtype=complex)
    for a in cartan_idx:
        r[a, a] += 0.5
    for p, m in zip(plus_idx, minus_idx):
        r[m, p] += 1.0
    L.r_tensor = r
    L.lam = 0.5 * (r - r.T)

    # chi(xi, eta, zeta) = (1/4) <sharp(xi), [sharp(eta), sharp(zeta)]>
    K = np.einsum("dpq,eqr,frp->def", stack, stack, stack)
    K = K - np.einsum("dpq,fqr,erp->def", stack, stack, stack)
    L.chi = 0.25 * np.einsum("ad,bp,cq,dpq->abc",
                             pairing_inv, pairing_inv, pairing_inv, K)
    return L


# -- triangular factorizations ---------------------------------------------

def gauss_decompose(g: np.ndarray, tol: float = 1e-12):
    """Factor g = n_minus . t . n_plus over the lower-upper big cell.

    Raises OffBigCell when a leading principal minor is numerically zero.
    """
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    scale = max(1.0, np.linalg.norm(g))
    A = g.copy()
    Lm = np.eye(n, dtype=complex)
    for k in range(n - 1):
        if abs(A[k, k]) <= tol * scale:
            raise OffBigCell(f"leading principal minor {k + 1} vanishes")
        for i in range(k + 1, n):
            f = A[i, k] / A[k, k]
            A[i, :] = A[i, :] - f * A[k, :]
            Lm[i, k] = f
    if abs(A[n - 1, n - 1]) <= tol * scale:
        raise OffBigCell(f"leading principal minor {n} vanishes")
    t = np.diag(np.diag(A))
    n_plus = np.linalg.inv(t) @ A
    return Lm, t, n_plus


def gauss_decompose_ul(g: np.ndarray, tol: float = 1e-12):
    """Factor g = n_plus . t . n_minus (the opposite big cell)."""
    J = np.eye(g.shape[0])[::-1]
    lm, t, npl = gauss_decompose(J @ g @ J, tol=tol)
    return J @ lm @ J, J @ t @ J, J @ npl @ J


def torus_inv_sqrt(t: np.ndarray) -> np.ndarray:
    """Diagonal tau with tau^2 = t^{-1} and det(tau) = 1."""
    d = np.diag(t)
    tau = d ** (-0.5)
    if np.real(np.prod(tau)) < 0:
        tau = tau.copy()
        tau[0] = -tau[0]
    return np.diag(tau)


def solve_gstar_ratio(L: LieData, M: np.ndarray, tol: float = 1e-12):
    """Solve x^{-1} y = M with (x, y) in G* (x upper, y lower Borel).

    Needs M in the cell N+ T N-; raises OffBigCell otherwise.
    """
    U, T, Lo = gauss_decompose_ul(M, tol=tol)
    nlow = T @ Lo @ np.linalg.inv(T)
    tau = torus_inv_sqrt(T)
    x = tau @ np.linalg.inv(U)
    y = tau @ nlow @ np.linalg.inv(tau) @ np.linalg.inv(tau)
    return x, y


def solve_gstar_ratio_op(L: LieData, K: np.ndarray, tol: float = 1e-12):
    """Solve y x^{-1} = K with (x, y) in G*; needs K in N- T N+."""
    Lo, T, U = gauss_decompose(K, tol=tol)
    nup = T @ U @ np.linalg.inv(T)
    t1 = torus_inv_sqrt(T)
    t2 = np.linalg.inv(t1)
    nu = np.linalg.inv(t2 @ nup @ np.linalg.inv(t2))
    x = t1 @ nu
    y = Lo @ t2
    return x, y


# -- Weyl group and Bruhat words ---------------------------------------------

def permutation_matrix(u, det_one: bool = True) -> np.ndarray:
    """Matrix of the permutation u (u[c] = row of the 1 in column c).

    With det_one the entry in column 0 is negated when needed, giving the
    deterministic det-1 Weyl representative used everywhere in the package.
    """
    n = len(u)
    P = np.zeros((n, n), dtype=complex)
    for c, r in enumerate(u):
        P[r, c] = 1.0
    if det_one and np.real(np.linalg.det(P)) < 0:
        P[u[0], 0] = -1.0
    return P


def weyl_elements(n: int):
    return [tuple(p) for p in itertools.permutations(range(n))]


def _rank(mat: np.ndarray, thr: float, ambig: float):
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    if np.any((sv > thr / ambig) & (sv < thr * ambig)):
        raise RankAmbiguous("singular value near rank threshold")
    return int(np.sum(sv > thr))


def bruhat_word(g: np.ndarray, tol: float = DEFAULT_TOL, ambig: float = 50.0):
    """Permutation u with g in B+ . P(u) . B+, from rank jumps of g[i:, :j].

    The rank profile r(i, j) = rank g[i:, :j] is invariant under the two-sided
    upper-triangular action; its unit jumps recover the permutation matrix.
    """
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    thr = tol * max(1.0, np.linalg.norm(g, 2))
    R = np.zeros((n + 1, n + 1), dtype=int)
    for i in range(n + 1):
        for j in range(n + 1):
            R[i, j] = _rank(g[i:, :j], thr, ambig)
    u = [None] * n
    for j in range(1, n + 1):
        hits = [i for i in range(n)
                if R[i, j] - R[i, j - 1] - R[i + 1, j] + R[i + 1, j - 1] == 1]
        if len(hits) != 1:
            raise RankAmbiguous(f"rank profile inconsistent in column {j}")
        u[j - 1] = hits[0]
    if sorted(u) != list(range(n)):
        raise RankAmbiguous("rank profile did not produce a permutation")
    return tuple(u)


def bruhat_cell_member_oracle(g: np.ndarray, u, tol: float = 1e-8) -> bool:
    """Exhaustive membership test for g in B+ P(u) B+ via a linear solve.

    Looks for unitriangular c with (g c)[i, j] = 0 whenever i > u[j]; this is
    the reference oracle for bruhat_word at small rank.
    """
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    c = np.eye(n, dtype=complex)
    for j in range(n):
        rows = [i for i in range(n) if i > u[j]]
        if not rows or j == 0:
            pass
        A = g[np.ix_(rows, range(j))] if rows else np.zeros((0, j))
        b = -g[rows, j] if rows else np.zeros(0)
        if j > 0 and len(rows) > 0:
            sol, res, *_ = np.linalg.lstsq(A.astype(complex), b, rcond=None)
            c[:j, j] = sol
        elif len(rows) > 0:
            if np.linalg.norm(b) > tol * max(1.0, np.linalg.norm(g)):
                return False
    resid = g @ c
    bad = 0.0
    for j in range(n):
        for i in range(n):
            if i > u[j]:
                bad = max(bad, abs(resid[i, j]))
    return bad <= tol * max(1.0, np.linalg.norm(g))


# -- membership predicates ----------------------------------------------------

def _scale(x):
    return max(1.0, np.linalg.norm(x))


def _is_det_one(x, tol):
    return abs(np.linalg.det(x) - 1.0) <= tol * _scale(x)


def _lower_part(x):
    return x - np.triu(x)


def _upper_part(x):
    return x - np.tril(x)


def _off_diag(x):
    return x - np.diag(np.diag(x))


def member(x, tag, tol: float = DEFAULT_TOL, L: LieData | None = None) -> bool:
    """Defining-equation membership test for the subgroup catalog.

    Pair tags (G*, G*-dual, Btilde+) expect x = (a, b); BruhatCell expects
    tag = ("BruhatCell", u).
    """
    if isinstance(tag, tuple) and tag[0] == "BruhatCell":
        try:
            return bruhat_word(np.asarray(x), tol=tol) == tuple(tag[1])
        except RankAmbiguous:
            return False
    if tag in ("G*", "G*-dual", "Btilde+"):
        a, b = (np.asarray(x[0], dtype=complex), np.asarray(x[1], dtype=complex))
        if tag == "G*-dual":
            a, b = b, a
        if tag == "Btilde+":
            if not (member(a, "B+", tol) and member(b, "B+", tol)):
                return False
            return member(a @ np.linalg.inv(b), "N+", tol)
        if not (member(a, "B+", tol) and member(b, "B-", tol)):
            return False
        prod = np.diag(a) * np.diag(b)
        return np.max(np.abs(prod - 1.0)) <= tol * _scale(a) * _scale(b)
    x = np.asarray(x, dtype=complex)
    s = _scale(x)
    if tag == "G":
        return _is_det_one(x, tol)
    if tag == "B+":
        return _is_det_one(x, tol) and np.linalg.norm(_lower_part(x)) <= tol * s
    if tag == "B-":
        return _is_det_one(x, tol) and np.linalg.norm(_upper_part(x)) <= tol * s
    if tag == "N+":
        return (member(x, "B+", tol)
                and np.max(np.abs(np.diag(x) - 1.0)) <= tol * s)
    if tag == "N-":
        return (member(x, "B-", tol)
                and np.max(np.abs(np.diag(x) - 1.0)) <= tol * s)
    if tag == "T":
        return _is_det_one(x, tol) and np.linalg.norm(_off_diag(x)) <= tol * s
    raise ValueError(f"unknown subgroup tag {tag!r}")


# -- lagrangian subalgebras and correction bivectors -------------------------

def lagrangian_basis(L: LieData, tag: str):
    """Basis pairs (X, Y) in g (+) g spanning the tagged lagrangian."""
    pairs = []
    if tag == "gDelta":
        for B in L.basis:
            pairs.append((B, B))
    elif tag == "gNegDelta":
        for B in L.basis:
            pairs.append((B, -B))
    elif tag == "Btilde+":
        for a in L.cartan_idx:
            pairs.append((L.basis[a], L.basis[a]))
        for p in L.plus_idx:
            pairs.append((L.basis[p], L.basis[p]))
            pairs.append((L.basis[p], np.zeros_like(L.basis[p])))
    elif tag in ("G*", "G*-dual"):
        for a in L.cartan_idx:
            pairs.append((L.basis[a], -L.basis[a]))
        for p, m in zip(L.plus_idx, L.minus_idx):
            pairs.append((L.basis[p], np.zeros_like(L.basis[p])))
            pairs.append((np.zeros_like(L.basis[m]), L.basis[m]))
        if tag == "G*-dual":
            pairs = [(Y, X) for (X, Y) in pairs]
    else:
        raise UnsupportedLagrangian(f"no catalog entry for {tag!r}")
    return pairs


def correction_from_pairs(L: LieData, pairs) -> np.ndarray:
    """Reduce a lagrangian in g (+) g to a bivector on g.

    Writing X (+) Y = (c (+) c) + (d (+) -d), each basis pair projects to the
    vector part c and the covector 2<d, .>; dividing by the kernel (pairs with
    d = 0) leaves the skew map W -> g whose tensor is returned.
    """
    cov_rows, vec_rows = [], []
    for X, Y in pairs:
        c = 0.5 * (np.asarray(X) + np.asarray(Y))
        d = 0.5 * (np.asarray(X) - np.asarray(Y))
        cov_rows.append(2.0 * L.flat(d))
        vec_rows.append(L.coords(c))
    Xi = np.array(cov_rows)
    C = np.array(vec_rows)
    # pi(xi_s, xi_t) = xi_t(c_s) = <sharp(xi_t), c_s>_coords via the pairing
    Pi = np.zeros((len(pairs), len(pairs)), dtype=complex)
    for s in range(len(pairs)):
        for t in range(len(pairs)):
            Pi[s, t] = Xi[t] @ C[s]
    Xp = np.linalg.pinv(Xi)
    P = Xp.T @ Pi @ Xp
    return 0.5 * (P - P.T)


def correction_bivector(L: LieData, tag: str) -> np.ndarray:
    """Correction bivector of a vertex decoration, as a tensor on g.

    Catalog values: G* -> Lambda, G*-dual -> -Lambda, Btilde+ -> 0; the
    generic reduction routine must reproduce these (tested).
    """
    if tag == "Btilde+":
        return np.zeros((L.dim, L.dim), dtype=complex)
    if tag == "G*":
        return L.lam.copy()
    if tag == "G*-dual":
        return -L.lam.copy()
    if tag in ("gDelta", "gNegDelta"):
        return correction_from_pairs(L, lagrangian_basis(L, tag))
    raise UnsupportedLagrangian(f"no correction catalog entry for {tag!r}")
