"""Endomorphism algebras of complexes, quiver presentations, and Λ^{p,q}_m.

Vertex conventions follow :mod:`lambdapq.algebra`: ``x ∈ e_t A e_s`` is a map
from vertex ``s`` to vertex ``t`` and, when it survives in ``rad/rad²``, an
arrow ``s -> t``.  In ``End_K(X_1 ⊕ X_2)`` vertex ``i`` is the summand ``X_i``,
so ``e_t End e_s = Hom_K(X_s, X_t)``.

Hom dimensions are reported as ``{(s, t): dim Hom(vertex s, vertex t)}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import flint

from .algebra import FDAlgebra
from .complexes import (
    ProjComplex,
    alpha_data,
    decompose,
    direct_sum,
    end_algebra_of,
    hom_dim,
)
from .kronecker import hom_basis
from .linalg import (
    Matrix,
    column_space_basis,
    complement_pivots,
    rref,
    sparse_nullspace,
    sparse_pivots,
    sparse_rank,
)
from .silting import AmTower, build_tower

__all__ = [
    "EndAlgebra",
    "QuiverPresentation",
    "LambdaM",
    "end_algebra",
    "present",
    "make_lambda_m",
    "compare",
    "hom_dims_of",
]

_ONE = Fraction(1)


class EndAlgebra(FDAlgebra):
    """``End_K(X_1 ⊕ ... ⊕ X_n)`` with the summand identities as basis vectors.

    ``pieces[(t, s)]`` lists the basis indices of ``Hom_K(X_s, X_t)``; every
    basis element other than the identities lies in the radical when the
    summands are indecomposable.
    """

    def __init__(self, labels, table, idempotents, summands, pieces, presilting: bool,
                 check: bool = True):
        super().__init__(labels, table, idempotents, check=check)
        self.summands = tuple(summands)
        self.pieces = dict(pieces)
        self.presilting = presilting

    @property
    def hom_dims(self) -> dict[tuple[int, int], int]:
        return {(s, t): len(ix) for (t, s), ix in self.pieces.items()}


# -- Hom_K between complexes P_1^a -> P_2^b -----------------------------------------


class _AlphaHom:
    """``Hom_K(X, Y)`` for ``X, Y`` of the form ``P_1^a -> P_2^b``.

    A chain map is ``(F0, F1, G)`` with ``f_{-1} = F0·e_1`` and
    ``f_0 = F1·e_2 + Σ α_iβ_j G_ij``.  The Kronecker part ``F1 D^X_k = D^Y_k F0``
    is exact; ``G`` only matters modulo ``G_ij ~ G_ij + D^Y_i H_j``, so for
    each ``j`` the stacked column ``(G_1j; ...; G_pj)`` lives in
    ``coker(D^Y_1; ...; D^Y_p) ⊗ (k^{b_X})^*``.

    Basis order: Kronecker morphisms, then ``(j, c, x)`` for the square-zero
    part (``c`` indexes the cokernel basis ``self.C``).
    """

    def __init__(self, dx, dy, p: int, q: int, identity: bool = False):
        self.aX, self.bX, DX = dx
        self.aY, self.bY, DY = dy
        self.p, self.q = p, q
        if identity:
            self.kron = [(Matrix.identity(self.aX), Matrix.identity(self.bX))]
            if len(hom_basis(DX, DY, self.aX, self.bX, self.aY, self.bY)) != 1:
                raise ValueError("summand is not indecomposable over the Kronecker quiver")
        else:
            self.kron = hom_basis(DX, DY, self.aX, self.bX, self.aY, self.bY)
        pb = p * self.bY
        if self.aY and pb:
            S = Matrix.vstack(list(DY))
        else:
            S = Matrix.zeros(pb, 0)
        self.C = complement_pivots(S)
        if pb:
            B = column_space_basis(S)
            E = Matrix.from_flat(pb, len(self.C),
                                 [1 if r == c else 0 for r in range(pb) for c in self.C])
            inv = Matrix(Matrix.hstack([B, E], rows=pb).flint.inv())
            self.P = inv.submatrix(range(B.cols, pb), range(pb))
        else:
            self.P = Matrix.zeros(0, 0)
        flat = [list(F0.entries) + list(F1.entries) for F0, F1 in self.kron]
        self._nk = len(flat)
        if flat:
            Fm = Matrix.from_rows(flat, len(flat[0]))
            _R, piv = rref(Fm)
            self._kpiv = piv
            self._kinv = Matrix(Fm.submatrix(range(len(flat)), piv).flint.inv())

    @property
    def n_square_zero(self) -> int:
        return self.q * len(self.C) * self.bX

    @property
    def dim(self) -> int:
        return self._nk + self.n_square_zero

    def sz_index(self, j: int, c: int, x: int) -> int:
        return self._nk + (j * len(self.C) + c) * self.bX + x

    def kron_coords(self, F0: Matrix, F1: Matrix) -> list[Fraction]:
        if not self._nk:
            if not (F0.is_zero() and F1.is_zero()):
                raise ValueError("not a Kronecker morphism of this Hom space")
            return []
        v = list(F0.entries) + list(F1.entries)
        row = Matrix.from_rows([[v[k] for k in self._kpiv]], len(self._kpiv))
        co = (row @ self._kinv).entries
        chk = [Fraction(0)] * len(v)
        for c, (B0, B1) in zip(co, self.kron):
            if c:
                for k, w in enumerate(list(B0.entries) + list(B1.entries)):
                    chk[k] += c * w
        if chk != v:
            raise ValueError("not a Kronecker morphism of this Hom space")
        return list(co)


def _alpha_end(summands, datas, A) -> EndAlgebra:
    n = len(summands)
    p, q = A.p, A.q
    H = {(t, s): _AlphaHom(datas[s], datas[t], p, q, identity=(s == t))
         for t in range(n) for s in range(n)}
    offsets, labels, pieces = {}, [], {}
    for t in range(n):
        for s in range(n):
            h = H[(t, s)]
            offsets[(t, s)] = len(labels)
            pieces[(t + 1, s + 1)] = list(range(len(labels), len(labels) + h.dim))
            labels += [f"id{t + 1}" if s == t and k == 0 else f"h{t + 1}{s + 1}_{k}"
                       for k in range(h.dim)]
    table: dict = {}

    def put(a, b, t, s, vec):
        d = {offsets[(t, s)] + k: c for k, c in vec.items() if c}
        if d:
            table[(a, b)] = d

    for t in range(n):
        for u in range(n):
            Ha = H[(t, u)]
            for s in range(n):
                Hb, Hc = H[(u, s)], H[(t, s)]
                ncC = len(Hc.C)
                for ia, (F0a, F1a) in enumerate(Ha.kron):
                    a = offsets[(t, u)] + ia
                    for ib, (F0b, F1b) in enumerate(Hb.kron):
                        co = Hc.kron_coords(F0a @ F0b, F1a @ F1b)
                        put(a, offsets[(u, s)] + ib, t, s, dict(enumerate(co)))
                    if not Hb.n_square_zero:
                        continue
                    # Kronecker ∘ square-zero: G -> (I_p ⊗ F1a) G, then cokernel coordinates
                    Q = Hc.P @ Matrix.identity(p).kron(F1a) if Hc.P.rows else None
                    for j in range(q):
                        for cb, row in enumerate(Hb.C):
                            col = [Q[r, row] for r in range(ncC)] if Q is not None else []
                            for x in range(Hb.bX):
                                b = offsets[(u, s)] + Hb.sz_index(j, cb, x)
                                put(a, b, t, s, {Hc.sz_index(j, r, x): v
                                                 for r, v in enumerate(col) if v})
                if not Ha.n_square_zero:
                    continue
                # square-zero ∘ Kronecker: G -> G F1b; the cokernel basis is shared
                for ib, (F0b, F1b) in enumerate(Hb.kron):
                    b = offsets[(u, s)] + ib
                    rows = {y: [(x, w) for x, w in enumerate(
                        F1b.submatrix([y], range(F1b.cols)).entries) if w] for y in range(F1b.rows)}
                    for j in range(q):
                        for ca in range(len(Ha.C)):
                            for y in range(Ha.bX):
                                a = offsets[(t, u)] + Ha.sz_index(j, ca, y)
                                put(a, b, t, s, {Hc.sz_index(j, ca, x): w for x, w in rows[y]})
    idem = []
    for i in range(n):
        e = [Fraction(0)] * len(labels)
        e[offsets[(i, i)]] = _ONE
        idem.append(e)
    return labels, table, idem, pieces


def _adapt(A: FDAlgebra, idempotents=None) -> tuple[FDAlgebra, dict]:
    """Rebase so that the idempotents are basis vectors and every other basis
    element is a radical element of a single piece ``e_t A e_s``.

    Dense; meant for small algebras.  Raises ``ValueError`` when A is not basic
    with respect to its idempotents.
    """
    es = list(idempotents if idempotents is not None else A.idempotents)
    n = A.dim
    R = A.radical()
    rcols = [R.submatrix(range(n), [c]).entries for c in range(R.cols)]
    cols, pieces = [], {}
    for t, et in enumerate(es):
        for s, es_ in enumerate(es):
            start = len(cols)
            if s == t:
                cols.append(tuple(et))
            proj = [A.mult(A.mult(et, v), es_) for v in rcols]
            if proj:
                B = column_space_basis(Matrix.from_rows(proj, n).T)
                cols += [B.submatrix(range(n), [c]).entries for c in range(B.cols)]
            pieces[(t + 1, s + 1)] = list(range(start, len(cols)))
    if len(cols) != n:
        raise ValueError("algebra is not basic for the given idempotents "
                         f"(radical plus idempotents spans {len(cols)} of {n} dimensions)")
    Bm = Matrix.from_rows(cols, n).T
    inv = Matrix(Bm.flint.inv())
    table = {}
    for a in range(n):
        for b in range(n):
            prod = A.mult(cols[a], cols[b])
            if any(prod):
                co = (inv @ Matrix.column(prod)).entries
                d = {k: c for k, c in enumerate(co) if c}
                if d:
                    table[(a, b)] = d
    labels = [f"b{k}" for k in range(n)]
    idem = []
    for t in range(len(es)):
        e = [Fraction(0)] * n
        e[pieces[(t + 1, t + 1)][0]] = _ONE
        idem.append(e)
    return FDAlgebra(labels, table, idem, check=False), pieces


def _is_presilting(summands: Sequence[ProjComplex]) -> bool:
    X = direct_sum(*summands)
    span = X.hi - X.lo if not X.is_zero() else 0
    return all(hom_dim(X, X, r) == 0 for r in range(1, span + 1))


def end_algebra(X, seed: int = 0, check: bool = True) -> EndAlgebra:
    """``End_K`` of a complex (split into indecomposables) or of a list of summands.

    Structure constants come from composing representatives and reducing
    modulo null-homotopic maps.  ``presilting`` records whether positive
    self-extensions vanish; the algebra is computed either way.
    """
    summands = decompose(X, seed) if isinstance(X, ProjComplex) else list(X)
    if not summands:
        raise ValueError("End of the zero complex is the zero ring")
    A = summands[0].algebra
    pres = _is_presilting(summands)
    datas = [alpha_data(Y) for Y in summands]
    if all(d is not None for d in datas):
        try:
            labels, table, idem, pieces = _alpha_end(summands, datas, A)
            return EndAlgebra(labels, table, idem, summands, pieces, pres, check=check)
        except ValueError:
            pass  # decomposable over the Kronecker quiver: use the generic route
    E, _H = end_algebra_of(summands)
    B, pieces = _adapt(E)
    return EndAlgebra(B.labels, B.table, B.idempotents, summands, pieces, pres, check=check)


# -- quiver presentations --------------------------------------------------------------


def _unit_index(e) -> int | None:
    nz = [k for k, c in enumerate(e) if c]
    if len(nz) == 1 and e[nz[0]] == 1:
        return nz[0]
    return None


def _corners(A: FDAlgebra):
    """``(idempotent indices, corner of each basis element)`` or None when the
    basis is not adapted to the idempotents."""
    idx = [_unit_index(e) for e in A.idempotents]
    if any(i is None for i in idx):
        return None
    corner = {}
    for k in range(A.dim):
        ts = [t for t, i in enumerate(idx) if A.table.get((i, k)) == {k: 1}]
        ss = [s for s, i in enumerate(idx) if A.table.get((k, i)) == {k: 1}]
        if len(ts) != 1 or len(ss) != 1:
            return None
        corner[k] = (ts[0] + 1, ss[0] + 1)
    return idx, corner


def _radical_adapted(A: FDAlgebra, idx) -> bool:
    """Whether the non-idempotent basis elements span the radical."""
    ids = set(idx)
    tr = [Fraction(0)] * A.dim
    for (i, j), prod in A.table.items():
        c = prod.get(j)
        if c:
            tr[i] += c
    if any(tr[k] for k in range(A.dim) if k not in ids):
        return False
    for (i, j), prod in A.table.items():
        if i not in ids and j not in ids and any(k in ids for k in prod):
            return False
    return True


def adapted(A: FDAlgebra) -> tuple[FDAlgebra, dict]:
    """A basis-adapted copy of ``A`` with ``pieces[(t, s)]`` index lists."""
    if len(A.idempotents) != 2:
        raise ValueError(f"expected two idempotents, got {len(A.idempotents)}")
    got = _corners(A)
    if got is not None and _radical_adapted(A, got[0]):
        idx, corner = got
        pieces = {(t, s): [] for t in (1, 2) for s in (1, 2)}
        for k in range(A.dim):
            pieces[corner[k]].append(k)
        return A, pieces
    return _adapt(A)


def hom_dims_of(A: FDAlgebra) -> dict[tuple[int, int], int]:
    """``{(s, t): dim e_t A e_s}``."""
    if isinstance(A, EndAlgebra):
        return A.hom_dims
    _B, pieces = adapted(A)
    return {(s, t): len(ix) for (t, s), ix in pieces.items()}


@dataclass
class QuiverPresentation:
    """Two-vertex quiver with relations.

    ``paths[k] = (x, y)`` is the length-2 path "first arrow x, then arrow y"
    (the product ``y·x`` in the algebra); ``relations`` are coefficient
    vectors over ``paths``.  ``presented_dim`` is the dimension of the
    quotient of the path algebra by the ideal of the relations, or None when
    that ideal misses relations of higher degree (listed in ``higher``).
    """

    arrows: list[tuple[int, int, str]]
    paths: list[tuple[int, int]]
    relations: list[dict[int, Fraction]]
    quadratic: bool | None
    higher: dict[int, int] = field(default_factory=dict)
    presented_dim: int | None = None
    source_dim: int = 0

    def arrow_counts(self) -> dict[tuple[int, int], int]:
        out = {(s, t): 0 for s in (1, 2) for t in (1, 2)}
        for s, t, _ in self.arrows:
            out[(s, t)] += 1
        return out

    @property
    def relation_dim(self) -> int:
        return len(self.relations)

    def to_json(self) -> dict:
        return {
            "vertices": [1, 2],
            "arrows": [{"source": s, "target": t, "label": lab} for s, t, lab in self.arrows],
            "paths": [list(pth) for pth in self.paths],
            "relations": [{str(k): str(v) for k, v in sorted(r.items())} for r in self.relations],
            "quadratic": self.quadratic,
            "higher": {str(d): c for d, c in self.higher.items()},
            "presented_dim": self.presented_dim,
            "source_dim": self.source_dim,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _left_mult(A: FDAlgebra, x: int, vec: dict) -> dict:
    out: dict = {}
    for k, c in vec.items():
        for t, d in A.table.get((x, k), {}).items():
            out[t] = out.get(t, 0) + c * d
    return {t: c for t, c in out.items() if c}


def present(A: FDAlgebra, check_quadratic: bool = True, max_degree: int = 12) -> QuiverPresentation:
    """Quiver with relations of a basic algebra with two idempotents.

    Arrows are basis elements outside the pivots of ``rad²`` in each piece;
    relations span the kernel of the multiplication map from length-2 paths.
    With ``check_quadratic`` the ideal generated by the relations is compared
    degree by degree with the kernel of ``paths -> A``.
    """
    B, pieces = adapted(A)
    idx = [pieces[(1, 1)][0], pieces[(2, 2)][0]]
    ids = set(idx)
    corner = {k: ts for ts, ix in pieces.items() for k in ix}
    rad2: dict = {}
    for (i, j), prod in B.table.items():
        if i in ids or j in ids:
            continue
        rad2.setdefault(corner[i][0], []).append(prod)
    arrows = []
    arrow_of = []
    for (t, s), ix in sorted(pieces.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        vecs = [v for v in rad2.get(t, []) if all(corner[k] == (t, s) for k in v)]
        piv, _ = sparse_pivots(vecs)
        piv = set(piv)
        for k in ix:
            if k not in ids and k not in piv:
                arrows.append((s, t, B.labels[k]))
                arrow_of.append(k)
    na = len(arrows)
    starting = {v: [i for i, (s, _t, _l) in enumerate(arrows) if s == v] for v in (1, 2)}
    paths = [(x, y) for x in range(na) for y in starting[arrows[x][1]]]
    path_index = {pth: k for k, pth in enumerate(paths)}
    images = [B.table.get((arrow_of[y], arrow_of[x]), {}) for x, y in paths]
    relations = []
    blocks: dict = {}
    for k, (x, y) in enumerate(paths):
        blocks.setdefault((arrows[x][0], arrows[x][1], arrows[y][1]), []).append(k)
    for key in sorted(blocks):
        ks = blocks[key]
        rows: dict = {}
        for c, k in enumerate(ks):
            for t, v in images[k].items():
                rows.setdefault(t, {})[c] = v
        for vec in sparse_nullspace(list(rows.values()), len(ks)):
            relations.append({ks[c]: v for c, v in vec.items()})
    pres = QuiverPresentation(arrows, paths, relations, None, source_dim=B.dim)
    if check_quadratic:
        _check_quadratic(B, pres, arrow_of, images, path_index, max_degree)
    return pres


def _check_quadratic(B, pres, arrow_of, images2, path_index2, max_degree):
    """Compare the ideal generated by the quadratic relations with the kernel
    of ``paths -> A`` in each degree until paths of that degree act by zero."""
    arrows = pres.arrows
    starting = {v: [i for i, (s, _t, _l) in enumerate(arrows) if s == v] for v in (1, 2)}
    all_images = [{k: _ONE} for k in arrow_of] + [im for im in images2 if im]
    rank_sum = len(arrows) + len(pres.paths) - pres.relation_dim
    counted = 2 + rank_sum
    prev2 = [(x,) for x in range(len(arrows))]
    rel_from = {v: [] for v in (1, 2)}
    for r in pres.relations:
        rel_from[arrows[pres.paths[next(iter(r))][0]][0]].append(
            {k: flint.fmpq(c.numerator, c.denominator) for k, c in r.items()})
    prev, prev_index, prev_img = list(pres.paths), path_index2, images2
    prev_ideal = [r for v in (1, 2) for r in rel_from[v]]
    higher: dict[int, int] = {}
    rk = rank_sum - len(arrows)
    d = 2
    while rk:
        d += 1
        if d > max_degree:
            pres.quadratic, pres.higher = None, higher
            return
        cur = [w + (a,) for w in prev for a in starting[arrows[w[-1]][1]]]
        index = {w: k for k, w in enumerate(cur)}
        img = []
        for w in cur:
            base = prev_img[prev_index[w[:-1]]]
            img.append(_left_mult(B, arrow_of[w[-1]], base) if base else {})
        gens = []
        for v in prev_ideal:
            end = arrows[prev[next(iter(v))][-1]][1]
            for a in starting[end]:
                gens.append({index[prev[k] + (a,)]: c for k, c in v.items()})
        for w in prev2:
            end = arrows[w[-1]][1]
            for r in rel_from[end]:
                gens.append({index[w + pres.paths[k]]: c for k, c in r.items()})
        _piv, ideal = sparse_pivots(gens, raw=True)
        rows: dict = {}
        for c, im in enumerate(img):
            for t, v in im.items():
                rows.setdefault(t, {})[c] = v
        rk = sparse_rank(list(rows.values()))
        if len(cur) - rk != len(ideal):
            higher[d] = len(cur) - rk - len(ideal)
        counted += len(cur) - len(ideal)
        rank_sum += rk
        all_images += [im for im in img if im]
        prev2, prev, prev_index, prev_img, prev_ideal = prev, cur, index, img, ideal
    total = sparse_rank(all_images)
    if total != rank_sum:
        higher[0] = rank_sum - total  # path lengths do not grade the algebra
    pres.higher = higher
    pres.quadratic = not higher and total + 2 == B.dim
    pres.presented_dim = counted if not higher else None


# -- the algebras Λ^{p,q}_m --------------------------------------------------------------


@dataclass
class LambdaM:
    """Λ^{p,q}_m on the tower spaces ``A_m``, ``B = k^q``.

    Vertex 1 stands for ``C_m`` and vertex 2 for ``C_{m-1}``.  The pieces are

    * ``Hom(1, 1) = k ⊕ A_{m+1} ⊗ B ⊗ A_m^*``
    * ``Hom(1, 2) = A_m ⊗ B ⊗ A_m^*``
    * ``Hom(2, 1) = A_1 ⊕ A_{m+1} ⊗ B ⊗ A_{m-1}^*``
    * ``Hom(2, 2) = k ⊕ A_m ⊗ B ⊗ A_{m-1}^*``

    and the only products between radical elements are ``α_k · (u⊗v⊗f) =
    κ_{m,k}(u)⊗v⊗f`` and ``(u⊗v⊗f) · α_k = u⊗v⊗(f∘κ_{m-1,k})``.
    Tensor bases are ordered lexicographically by factor indices.
    """

    p: int
    q: int
    m: int
    tower: AmTower

    def a(self, k: int) -> int:
        return self.tower.a(k)

    @property
    def hom_dims(self) -> dict[tuple[int, int], int]:
        p, q, m, a = self.p, self.q, self.m, self.a
        return {
            (1, 1): 1 + q * a(m + 1) * a(m),
            (1, 2): q * a(m) ** 2,
            (2, 1): p + q * a(m + 1) * a(m - 1),
            (2, 2): 1 + q * a(m) * a(m - 1),
        }

    @property
    def dim(self) -> int:
        return sum(self.hom_dims.values())

    @cached_property
    def blocks(self) -> dict[str, tuple[int, tuple[int, int, int]]]:
        """Offset and ``(dim A_x, q, dim A_y^*)`` shape of each tensor block."""
        m, q, a = self.m, self.q, self.a
        shapes = [("X11", (a(m + 1), q, a(m))), ("X12", (a(m), q, a(m))),
                  ("X21", (a(m + 1), q, a(m - 1))), ("X22", (a(m), q, a(m - 1)))]
        out, off = {}, 2 + self.p
        for name, sh in shapes:
            out[name] = (off, sh)
            off += sh[0] * sh[1] * sh[2]
        return out

    def _index(self, name: str, u: int, v: int, f: int) -> int:
        off, (_nu, nv, nf) = self.blocks[name]
        return off + (u * nv + v) * nf + f

    @cached_property
    def algebra(self) -> FDAlgebra:
        """The algebra with ``e_t Λ e_s = Hom(s, t)``.

        Basis: ``e1, e2, α_1..α_p``, then the tensor blocks X11, X12, X21, X22,
        where ``Xij`` is the tensor part of ``Hom(i, j)``.
        """
        return self._build(check=True)

    @cached_property
    def pieces(self) -> dict[tuple[int, int], list[int]]:
        """``pieces[(t, s)]``: basis indices of ``e_t Λ e_s = Hom(s, t)``."""
        p = self.p

        def rng(name):
            off, (x, y, z) = self.blocks[name]
            return list(range(off, off + x * y * z))

        return {
            (1, 1): [0] + rng("X11"),
            (2, 1): rng("X12"),
            (1, 2): [2 + k for k in range(p)] + rng("X21"),
            (2, 2): [1] + rng("X22"),
        }

    def _build(self, check: bool) -> FDAlgebra:
        p, q, m = self.p, self.q, self.m
        n = self.dim
        labels = ["e1", "e2"] + [f"a{k + 1}" for k in range(p)]
        for name in ("X11", "X12", "X21", "X22"):
            _off, (x, y, z) = self.blocks[name]
            labels += [f"{name}[{u},{v},{f}]" for u in range(x) for v in range(y) for f in range(z)]
        table: dict = {}
        for (t, s), ix in self.pieces.items():
            for k in ix:
                table[(t - 1, k)] = {k: _ONE}
                table[(k, s - 1)] = {k: _ONE}
        up = self.tower.kappa[m]                                   # A_m -> A_{m+1}
        down = self.tower.kappa[m - 1] if m >= 1 else None          # A_{m-1} -> A_m
        for k in range(p):
            al = 2 + k
            K = _by_col(up[k])
            for src, dst in (("X12", "X11"), ("X22", "X21")):
                _o, (nu, nv, nf) = self.blocks[src]
                for u in range(nu):
                    for v in range(nv):
                        for f in range(nf):
                            d = {self._index(dst, r, v, f): c for r, c in K.get(u, [])}
                            if d:
                                table[(al, self._index(src, u, v, f))] = d
            if down is None:
                continue
            R = _by_row(down[k])
            for src, dst in (("X12", "X22"), ("X11", "X21")):
                _o, (nu, nv, nf) = self.blocks[src]
                for u in range(nu):
                    for v in range(nv):
                        for f in range(nf):
                            d = {self._index(dst, u, v, s): c for s, c in R.get(f, [])}
                            if d:
                                table[(self._index(src, u, v, f), al)] = d
        idem = []
        for i in (0, 1):
            e = [Fraction(0)] * n
            e[i] = _ONE
            idem.append(e)
        return FDAlgebra(labels, table, idem, check=check)

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "m": self.m, "dim": self.dim,
                "hom_dims": {f"{s}->{t}": d for (s, t), d in self.hom_dims.items()}}


def _by_col(M: Matrix) -> dict[int, list]:
    out: dict = {}
    for i, j, v in M.nonzero():
        out.setdefault(j, []).append((i, Fraction(int(v.p), int(v.q))))
    return out


def _by_row(M: Matrix) -> dict[int, list]:
    out: dict = {}
    for i, j, v in M.nonzero():
        out.setdefault(i, []).append((j, Fraction(int(v.p), int(v.q))))
    return out


def make_lambda_m(p: int, q: int, m: int, tower: AmTower | None = None) -> LambdaM:
    if m < 0:
        raise ValueError(f"m must be non-negative (got {m})")
    if q < 0:
        raise ValueError("q must be non-negative")
    if tower is None:
        tower = build_tower(p, m + 1)
    if tower.p != p or tower.depth < m + 1:
        raise ValueError(f"tower must have p={p} and reach A_{m + 1}")
    return LambdaM(p, q, m, tower)


# -- comparison ------------------------------------------------------------------------


def compare(A: FDAlgebra, L: LambdaM, check_quadratic: bool = True) -> dict:
    """Four-point comparison of ``A`` (typically ``End_K(C_{m-1} ⊕ C_m)``)
    with ``Λ^{p,q}_m``: graded dims, total dim, presentations, quadraticity.

    The vertex of ``A`` whose endomorphisms have dimension
    ``1 + q a_{m+1} a_m`` is matched with vertex 1 of ``L``.
    """
    mism: list[str] = []
    ha = hom_dims_of(A)
    hl = L.hom_dims
    cands = [v for v in (1, 2) if ha[(v, v)] == hl[(1, 1)]]
    swaps = []
    for v in cands or [1]:
        perm = {1: v, 2: 3 - v}
        swaps.append(perm)
    perm = next((pm for pm in swaps
                 if all(ha[(pm[s], pm[t])] == hl[(s, t)] for s, t in hl)), swaps[0])
    graded = sorted(ha.values()) == sorted(hl.values())
    graded_mapped = all(ha[(perm[s], perm[t])] == hl[(s, t)] for s, t in hl)
    if not graded:
        mism.append(f"graded dims differ: {sorted(ha.values())} vs {sorted(hl.values())}")
    elif not graded_mapped:
        mism.append("graded dims agree only as multisets, not under the vertex correspondence")
    total = A.dim == L.dim
    if not total:
        mism.append(f"total dims differ: {A.dim} vs {L.dim}")
    PA = present(A, check_quadratic=check_quadratic)
    PL = present(L.algebra, check_quadratic=check_quadratic)
    ca, cl = PA.arrow_counts(), PL.arrow_counts()
    arrows = all(ca[(perm[s], perm[t])] == cl[(s, t)] for s, t in cl)
    if not arrows:
        mism.append(f"arrow counts differ: {ca} vs {cl}")
    rel = PA.relation_dim == PL.relation_dim
    if not rel:
        mism.append(f"relation dims differ: {PA.relation_dim} vs {PL.relation_dim}")
    quad = None
    if check_quadratic:
        quad = bool(PA.quadratic) and bool(PL.quadratic)
        if not quad:
            mism.append(f"quadratic: {PA.quadratic} vs {PL.quadratic}")
    return {
        "p": L.p, "q": L.q, "m": L.m,
        "vertex_map": perm,
        "graded_dims": graded and graded_mapped,
        "total_dim": total,
        "dims": (A.dim, L.dim),
        "arrows": arrows,
        "arrow_counts": (ca, cl),
        "relations": rel,
        "relation_dims": (PA.relation_dim, PL.relation_dim),
        "quadratic": quad,
        "match": not mism,
        "mismatches": mism,
    }
