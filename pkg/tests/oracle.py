"""Independent brute-force Hom_K computation for small complexes.

Every complex is realized on underlying vector spaces (P_i = e_i Λ with its
path basis, maps act by left multiplication), chain maps and homotopies are
parametrized entrywise, and dimensions come from sympy ranks.  Shares only
the algebra's structure constants with the package.
"""
from __future__ import annotations

import sympy

from lambdapq.complexes import ProjComplex, ProjMap


def _vs_basis(A, mult):
    """Index of (copy, basis element) in P_1^a ⊕ P_2^b."""
    out = {}
    for i, n in ((1, mult[0]), (2, mult[1])):
        for c in range(n):
            for k, (t, _s) in enumerate(A.sides):
                if t == i:
                    out[(i, c, k)] = len(out)
    return out


def vs_matrix(f: ProjMap):
    A = f.algebra
    S, T = _vs_basis(A, f.src), _vs_basis(A, f.tgt)
    M = sympy.zeros(len(T), len(S))
    for x, m in f.comps.items():
        t, s = A.sides[x]
        for r, c, v in m.nonzero():
            v = sympy.Rational(int(v.p), int(v.q))
            for (i, cc, y), col in S.items():
                if i != s or cc != c:
                    continue
                prod = A.mult(A.basis_vector(x), A.basis_vector(y))
                for z, w in enumerate(prod):
                    if w:
                        M[T[(t, r, z)], col] += v * sympy.Rational(w.numerator, w.denominator)
    return M


def _vs_dim(A, mult) -> int:
    return len(_vs_basis(A, mult))


def _param_maps(A, src, tgt):
    """Basis of Hom_Λ(src, tgt) as single-entry ProjMaps."""
    from lambdapq.linalg import Matrix

    out = []
    for x, (t, s) in enumerate(A.sides):
        for r in range(tgt[t - 1]):
            for c in range(src[s - 1]):
                m = Matrix.from_flat(tgt[t - 1], src[s - 1],
                                     [1 if (i, j) == (r, c) else 0
                                      for i in range(tgt[t - 1]) for j in range(src[s - 1])])
                out.append(ProjMap(A, src, tgt, {x: m}))
    return out


def _stack(blocks):
    return sympy.Matrix.vstack(*[b.reshape(b.rows * b.cols, 1) for b in blocks]) if blocks else sympy.zeros(0, 1)


def hom_dim_oracle(X: ProjComplex, Y: ProjComplex, r: int = 0) -> int:
    """dim Hom_K(X, Y[r]) by brute force."""
    A = X.algebra
    lo = min(X.lo, Y.lo - r) - 1
    hi = max(X.hi, Y.hi - r) + 1
    degs = list(range(lo, hi + 1))
    dX = {n: vs_matrix(X.diff(n)) for n in degs}
    dY = {n: vs_matrix(Y.diff(n + r)) for n in degs}

    def graded_columns(shift):
        # one column per parameter of a graded map X^n -> Y^{n + r + shift}
        cols = []
        for n in degs:
            for f in _param_maps(A, X.term(n), Y.term(n + r + shift)):
                cols.append((n, vs_matrix(f)))
        return cols

    # chain condition d_Y f^n - f^{n+1} d_X^n, one block per degree
    fcols = graded_columns(0)
    Z_cols = []
    for n, F in fcols:
        blocks = []
        for k in degs:
            b = sympy.zeros(dY[k].rows, dX[k].cols)
            if k == n:
                b += dY[k] * F
            if k + 1 == n:
                b -= F * dX[k]
            blocks.append(b)
        Z_cols.append(_stack(blocks))
    C = sympy.Matrix.hstack(*Z_cols) if Z_cols else sympy.zeros(0, 0)
    dim_z = len(fcols) - (C.rank() if C.cols else 0)

    # boundaries d_Y h^{n} + h^{n+1} d_X in the f-space, realized per degree
    hcols = graded_columns(-1)
    B_cols = []
    for n, H in hcols:
        blocks = []
        for k in degs:
            b = sympy.zeros(_vs_dim(A, Y.term(k + r)), _vs_dim(A, X.term(k)))
            if k == n:
                b += vs_matrix(Y.diff(k + r - 1)) * H
            if k == n - 1:
                b += H * dX[k]
            blocks.append(b)
        B_cols.append(_stack(blocks))
    Bm = sympy.Matrix.hstack(*B_cols) if B_cols else sympy.zeros(0, 0)
    dim_b = Bm.rank() if Bm.cols else 0
    return dim_z - dim_b
