"""Representations of the p-Kronecker quiver ``k^a ⇉ k^b``.

A radical two-term complex ``P_1^a -> P_2^b`` over Λ^{p,q} is determined by
the ``p`` matrices of its α-components, and its maps in the homotopy
category split as Kronecker morphisms plus a square-zero part.  This module
computes Kronecker Hom spaces, endomorphism algebras and decompositions.

A representation is a tuple ``(phi, a, b)`` with ``phi[k]`` of shape ``b x a``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import flint

from .algebra import FDAlgebra, find_idempotent
from .linalg import Matrix, nullspace, rank, solve, sparse_nullspace, sparse_rank

__all__ = ["hom_dim", "hom_basis", "end_algebra", "split"]

_DIM_CACHE: dict = {}
_BASIS_CACHE: dict = {}


def _by_row(m: Matrix) -> dict[int, list]:
    out: dict[int, list] = {}
    for i, j, v in m.nonzero():
        out.setdefault(i, []).append((j, v))
    return out


def _by_col(m: Matrix) -> dict[int, list]:
    out: dict[int, list] = {}
    for i, j, v in m.nonzero():
        out.setdefault(j, []).append((i, v))
    return out


def _f0_system(phiV, phiW, aV, aW, N: Matrix):
    """Images of the coordinates of F0 under ``F0 -> Σ_k φW_k F0 N_k``."""
    p = len(phiV)
    blocks = [N.submatrix(range(k * aV, (k + 1) * aV), range(N.cols)) for k in range(p)]
    Nrows = [_by_row(B) for B in blocks]
    Wcols = [_by_col(W) for W in phiW]
    images = []
    for u in range(aW):
        for v in range(aV):
            img: dict = {}
            for k in range(p):
                col = Wcols[k].get(u)
                row = Nrows[k].get(v)
                if not col or not row:
                    continue
                for i, x in col:
                    for l, y in row:
                        kk = i * N.cols + l
                        img[kk] = img.get(kk, 0) + x * y
            images.append({c: w for c, w in img.items() if w})
    return images


def _dim_vside(phiV, phiW, aV, bV, aW, bW) -> int:
    if aV == 0:
        return bV * bW
    if bV == 0:
        if aW == 0 or bW == 0:
            return aV * aW
        return aV * (aW - rank(Matrix.vstack(list(phiW))))
    MV = Matrix.hstack(list(phiV))
    rk = rank(MV)
    free = (bV - rk) * bW
    if aW == 0:
        return free
    N = nullspace(MV)
    if N.cols == 0 or bW == 0:
        return aW * aV + free
    return aW * aV - sparse_rank(_f0_system(phiV, phiW, aV, aW, N)) + free


def _transposed(phi):
    return [m.T for m in phi]


def hom_dim(phiV, phiW, aV: int, bV: int, aW: int, bW: int) -> int:
    """dim of pairs ``(F0, F1)`` with ``F1 φV_k = φW_k F0`` for every k.

    F1 is pinned on ``Im [φV_1 | ... | φV_p]`` by F0, which must then kill the
    blocks of the kernel; the smaller of this system and its transpose is
    solved.
    """
    key = (tuple(phiV), tuple(phiW), aV, bV, aW, bW)
    hit = _DIM_CACHE.get(key)
    if hit is None:
        if aW * aV <= bW * bV:
            hit = _dim_vside(phiV, phiW, aV, bV, aW, bW)
        else:
            hit = _dim_vside(_transposed(phiW), _transposed(phiV), bW, aW, bV, aV)
        _DIM_CACHE[key] = hit
    return hit


def _basis_vside(phiV, phiW, aV, bV, aW, bW) -> list[tuple[Matrix, Matrix]]:
    out = []
    if aV == 0:
        for i in range(bW):
            for j in range(bV):
                F1 = Matrix.from_flat(bW, bV, [1 if (r, c) == (i, j) else 0
                                               for r in range(bW) for c in range(bV)])
                out.append((Matrix.zeros(aW, 0), F1))
        return out
    if bV == 0:
        S = Matrix.vstack(list(phiW)) if bW else Matrix.zeros(0, aW)
        K = nullspace(S) if S.rows else Matrix.identity(aW)
        for c in range(K.cols):
            for v in range(aV):
                F0 = flint.fmpq_mat(aW, aV)
                for u in range(aW):
                    F0[u, v] = K.flint[u, c]
                out.append((Matrix(F0), Matrix.zeros(bW, 0)))
        return out
    MV = Matrix.hstack(list(phiV))
    if aW and bW:
        N = nullspace(MV)
        if N.cols:
            sols = sparse_nullspace(_transpose_rows(_f0_system(phiV, phiW, aV, aW, N)), aW * aV)
        else:
            sols = [{c: Fraction(1)} for c in range(aW * aV)]
    elif aW:
        sols = [{c: Fraction(1)} for c in range(aW * aV)]
    else:
        sols = []
    F0s = []
    for s in sols:
        F0 = flint.fmpq_mat(aW, aV)
        for c, v in s.items():
            F0[c // aV, c % aV] = flint.fmpq(v.numerator, v.denominator)
        F0s.append(Matrix(F0))
    if F0s:
        if bW:
            rhs = Matrix.hstack([Matrix.hstack([W @ F0 for W in phiW]).T for F0 in F0s])
            X = solve(MV.T, rhs)
            for n, F0 in enumerate(F0s):
                F1 = X.submatrix(range(bV), range(n * bW, (n + 1) * bW)).T
                out.append((F0, F1))
        else:
            out += [(F0, Matrix.zeros(0, bV)) for F0 in F0s]
    L = nullspace(MV.T)
    for c in range(L.cols):
        lam = L.submatrix(range(bV), [c]).T
        for w in range(bW):
            e = Matrix.from_flat(bW, 1, [1 if r == w else 0 for r in range(bW)])
            out.append((Matrix.zeros(aW, aV), e @ lam))
    return out


def _transpose_rows(images: list[dict]) -> list[dict]:
    rows: dict = {}
    for c, img in enumerate(images):
        for k, v in img.items():
            rows.setdefault(k, {})[c] = v
    return list(rows.values())


def hom_basis(phiV, phiW, aV: int, bV: int, aW: int, bW: int) -> list[tuple[Matrix, Matrix]]:
    """Basis of Kronecker morphisms as pairs ``(F0, F1)``."""
    key = (tuple(phiV), tuple(phiW), aV, bV, aW, bW)
    hit = _BASIS_CACHE.get(key)
    if hit is not None:
        return hit
    if aW * aV <= bW * bV:
        res = _basis_vside(phiV, phiW, aV, bV, aW, bW)
    else:
        # (F0, F1): V -> W corresponds to (F1^T, F0^T): W^T -> V^T
        res = [(G1.T, G0.T) for G0, G1 in
               _basis_vside(_transposed(phiW), _transposed(phiV), bW, aW, bV, aV)]
    _BASIS_CACHE[key] = res
    _DIM_CACHE[key] = len(res)
    return res


def end_algebra(phi, a: int, b: int) -> tuple[FDAlgebra, list[tuple[Matrix, Matrix]]]:
    """``End(V)`` with multiplication ``(F, G) -> F ∘ G``."""
    basis = hom_basis(phi, phi, a, b, a, b)
    n = len(basis)
    flat = Matrix.from_rows([list(F0.entries) + list(F1.entries) for F0, F1 in basis],
                            a * a + b * b) if n else None
    table = {}
    for i, (F0, F1) in enumerate(basis):
        for j, (G0, G1) in enumerate(basis):
            prod = list((F0 @ G0).entries) + list((F1 @ G1).entries)
            co = solve(flat.T, Matrix.column(prod))
            d = {k: co[k, 0] for k in range(n) if co[k, 0]}
            if d:
                table[(i, j)] = d
    ident = list(Matrix.identity(a).entries) + list(Matrix.identity(b).entries)
    co = solve(flat.T, Matrix.column(ident)) if n else None
    unit = [co[k, 0] for k in range(n)] if n else []
    return FDAlgebra([f"f{i}" for i in range(n)], table, [unit]), basis


def _image_basis(m: Matrix) -> Matrix:
    from .linalg import column_space_basis

    return column_space_basis(m)


def split(phi, a: int, b: int, seed: int = 0) -> list[tuple[list[Matrix], int, int]]:
    """Decompose a Kronecker representation into indecomposables.

    Raises ``ArithmeticError`` when ``End/rad`` is larger than one-dimensional
    but no idempotent is found (a non-split division algebra over Q).
    """
    if a + b == 0:
        return []
    E, basis = end_algebra(phi, a, b)
    if E.dim - E.radical().cols <= 1:
        return [(list(phi), a, b)]
    e = find_idempotent(E, seed)
    if e is None:
        raise ArithmeticError("End/rad has dimension > 1 but no idempotent was found")
    F0 = Matrix.zeros(a, a)
    F1 = Matrix.zeros(b, b)
    for c, (B0, B1) in zip(e, basis):
        if c:
            F0 = F0 + B0.scale(c)
            F1 = F1 + B1.scale(c)
    out = []
    for G0, G1 in ((F0, F1), (Matrix.identity(a) - F0, Matrix.identity(b) - F1)):
        I0, I1 = _image_basis(G0), _image_basis(G1)
        sub = []
        for m in phi:
            sub.append(solve(I1, m @ I0) if I1.cols else Matrix.zeros(0, I0.cols))
        out += split(sub, I0.cols, I1.cols, seed + 1)
    return out
