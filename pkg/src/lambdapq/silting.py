"""Two-term silting theory over Λ^{p,q}.

Contents: the tower of spaces ``A_m`` with maps κ, ι, π; the complexes
``C_m`` and their transposed relatives; presilting/silting/tilting flags;
mutation; the breadth-first mutation walk; the closed-form list of all
basic two-term silting complexes (as g-vector pairs); and the g-vector fan.

A basic two-term silting complex is handled as a :class:`SiltingNode` holding
its two indecomposable summands.
"""
from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Iterable, Sequence

from . import kronecker
from .algebra import TwoVertexAlgebra, make_lambda
from .complexes import (
    ChainMap,
    HomSpace,
    ProjComplex,
    ProjMap,
    alpha_data,
    beta_data,
    cone,
    decompose,
    direct_sum,
    end_algebra_of,
    g_vector,
    hom_complex_dims,
    minimize,
    shift,
    stalk,
    transpose_map,
    transpose_to_opposite,
)
from .linalg import Matrix, complement_pivots, nullspace, rank, sparse_rank

__all__ = [
    "AmTower",
    "build_tower",
    "tower_checks",
    "make_C",
    "dual_star",
    "make_C_bar",
    "make_C_bar_star",
    "SiltingNode",
    "make_node",
    "silting_flags",
    "NotTwoTerm",
    "mutate",
    "mutate_summand",
    "mutation_walk",
    "explore",
    "closed_form_pairs",
    "fan",
    "FanError",
    "sample_gray_region",
    "random_two_term",
]


# -- the tower A_m ---------------------------------------------------------------


def recursion_dims(p: int, M: int) -> list[int]:
    """``a_0..a_M`` from ``a_{m+1} = p a_m - a_{m-1}``, ``a_{-1} = 0``, ``a_0 = 1``."""
    dims = [1]
    prev = 0
    for _ in range(M):
        dims.append(p * dims[-1] - prev)
        prev = dims[-2]
    return dims


@dataclass(frozen=True)
class AmTower:
    """Spaces ``A_0..A_M`` with ``kappa[m][k]: A_m -> A_{m+1}`` (``m < M``),
    ``iota[m]: A_{m-1} -> A_1 ⊗ A_m`` and ``pi[m]: A_1 ⊗ A_m -> A_{m+1}``.

    Index ``k * a_m + j`` of ``A_1 ⊗ A_m`` is ``α_k ⊗ (basis vector j)``.
    """

    p: int
    dims: tuple[int, ...]
    kappa: tuple[tuple[Matrix, ...], ...]
    iota: tuple[Matrix, ...]
    pi: tuple[Matrix, ...]

    @property
    def depth(self) -> int:
        return len(self.dims) - 1

    def a(self, m: int) -> int:
        if m < 0:
            return 0
        return self.dims[m]


@lru_cache(maxsize=None)
def build_tower(p: int, M: int) -> AmTower:
    """Tower up to ``A_M``; cokernel bases come from the reduced echelon form
    of ``ι_m^T`` (free coordinates of the earliest pivots), so results are
    deterministic."""
    if p <= 1:
        raise ValueError(f"the tower needs p >= 2 (got p={p}); "
                         "for p in {0, 1} use the explicit finite lists")
    if M < 1:
        raise ValueError("depth M must be at least 1")
    cached = [t for (pp, mm), t in _TOWERS.items() if pp == p and mm >= M]
    if cached:
        return _truncate(min(cached, key=lambda t: t.depth), M)
    dims = [1, p]
    kappa = [tuple(Matrix.from_flat(p, 1, [1 if r == k else 0 for r in range(p)]) for k in range(p))]
    iota = [Matrix.zeros(p, 0)]
    pi = [Matrix.identity(p)]
    for m in range(1, M):
        io = Matrix.vstack(list(kappa[m - 1]))
        pm = nullspace(io.T).T
        kappa.append(tuple(pm.submatrix(range(pm.rows), range(k * dims[m], (k + 1) * dims[m]))
                           for k in range(p)))
        iota.append(io)
        pi.append(pm)
        dims.append(pm.rows)
    tower = AmTower(p, tuple(dims), tuple(kappa), tuple(iota), tuple(pi))
    _TOWERS[(p, M)] = tower
    return tower


_TOWERS: dict = {}


def _truncate(t: AmTower, M: int) -> AmTower:
    return AmTower(t.p, t.dims[: M + 1], t.kappa[:M], t.iota[:M], t.pi[:M])


def invertibility_matrix(tower: AmTower, m: int) -> list[dict[int, int]]:
    """Rows of ``(ι_m^* ⊗ Id)(Id ⊗ ι_m): A_m^* ⊗ A_{m-1} -> A_{m-1}^* ⊗ A_m``.

    Entry ``[(s', j), (l, s)] = Σ_k κ_k[j, s] κ_k[l, s']`` with ``κ = κ_{m-1}``;
    returned as sparse columns (one dict per input coordinate ``(l, s)``).
    """
    am, am1 = tower.a(m), tower.a(m - 1)
    cols: dict[tuple[int, int], dict[int, object]] = {}
    for K in tower.kappa[m - 1]:
        nz = list(K.nonzero())
        for j, s, x in nz:
            for l, s2, y in nz:
                col = cols.setdefault((l, s), {})
                key = s2 * am + j
                col[key] = col.get(key, 0) + x * y
    return [{k: v for k, v in c.items() if v} for c in cols.values()]


def tower_checks(tower: AmTower, invertibility_limit: int = 40000) -> dict:
    """Exact checks of the tower identities; matrix checks are skipped (and
    reported as such) once ``a_{m-1} a_m`` exceeds ``invertibility_limit``."""
    p = tower.p
    out = {"recursion": True, "quadratic": True, "pi_iota_zero": True, "pi_rank": True,
           "kappa_is_pi_slot": True, "ratio_decreasing": True, "invertible": {}, "skipped": []}
    d = tower.dims
    for m in range(1, tower.depth):
        if d[m + 1] != p * d[m] - tower.a(m - 1):
            out["recursion"] = False
        if m >= 1 and d[m + 1] * tower.a(m - 1) >= d[m] ** 2:
            out["ratio_decreasing"] = False
    for m in range(1, tower.depth + 1):
        if d[m] ** 2 + tower.a(m - 1) ** 2 - p * tower.a(m - 1) * d[m] != 1:
            out["quadratic"] = False
    for m in range(1, tower.depth):
        io, pm = tower.iota[m], tower.pi[m]
        if not (pm @ io).is_zero():
            out["pi_iota_zero"] = False
        if rank(pm) != d[m + 1]:
            out["pi_rank"] = False
        for k, K in enumerate(tower.kappa[m]):
            if K != pm.submatrix(range(pm.rows), range(k * d[m], (k + 1) * d[m])):
                out["kappa_is_pi_slot"] = False
    for m in range(1, tower.depth + 1):
        n = tower.a(m - 1) * d[m]
        if n > invertibility_limit:
            out["skipped"].append(m)
            continue
        cols = invertibility_matrix(tower, m)
        out["invertible"][m] = len(cols) == n and sparse_rank(cols, n) == n
    return out


# -- the complexes C_m and relatives -----------------------------------------------


def _alpha_complex(A: TwoVertexAlgebra, a: int, b: int, D: Sequence[Matrix]) -> ProjComplex:
    """``P_1^a -> P_2^b`` in degrees -1, 0 with differential ``Σ α_k D_k``."""
    comps = {A.alpha(k): D[k] for k in range(A.p)}
    d = ProjMap(A, (a, 0), (0, b), comps)
    return ProjComplex(A, {-1: (a, 0), 0: (0, b)}, {-1: d})


def _beta_complex(A: TwoVertexAlgebra, a: int, b: int, E: Sequence[Matrix]) -> ProjComplex:
    """``P_2^a -> P_1^b`` in degrees -1, 0 with differential ``Σ β_j E_j``."""
    comps = {A.beta(j): E[j] for j in range(A.q)}
    d = ProjMap(A, (0, a), (b, 0), comps)
    return ProjComplex(A, {-1: (0, a), 0: (b, 0)}, {-1: d})


def c_kappas(p: int, m: int) -> tuple[int, int, list[Matrix]]:
    """``(a_{m-1}, a_m, [κ_{m-1,k}])`` for ``m >= 1``; small p handled directly."""
    if p >= 2:
        t = build_tower(p, max(m, 1))
        return t.a(m - 1), t.a(m), list(t.kappa[m - 1])
    if m == 1:
        return 1, p, [Matrix.from_flat(p, 1, [1 if r == k else 0 for r in range(p)]) for k in range(p)]
    raise ValueError(f"C_m with m >= 2 needs p >= 2 (p={p})")


def make_C(m: int, A: TwoVertexAlgebra) -> ProjComplex:
    """``C_m``: ``A_{m-1} ⊗ P_1 -> A_m ⊗ P_2`` with differential ``Σ κ_{m-1,k} ⊗ α_k``;
    ``C_{-1} = P_1`` and ``C_0 = P_2``."""
    if m < -1:
        raise ValueError("C_m is defined for m >= -1")
    if m == -1:
        return stalk(A, (1, 0))
    if m == 0:
        return stalk(A, (0, 1))
    a, b, K = c_kappas(A.p, m)
    return _alpha_complex(A, a, b, K)


def dual_star(X: ProjComplex) -> ProjComplex:
    """Transpose the multiplicity matrices of a two-term complex.

    ``P_1^a -> P_2^b`` becomes ``P_1^b -> P_2^a`` and ``P_2^a -> P_1^b``
    becomes ``P_2^b -> P_1^a``; stalks are covered as the degenerate cases.
    """
    A = X.algebra
    da = alpha_data(X)
    if da is not None:
        a, b, D = da
        return _alpha_complex(A, b, a, [M.T for M in D])
    if beta_data(X) is not None:
        a, b = X.term(-1)[1], X.term(0)[0]
        d = X.diff(-1)
        E = [d.comp(A.beta(j)) for j in range(A.q)]
        return _beta_complex(A, b, a, [M.T for M in E])
    raise ValueError("dual_star expects P_1^a -> P_2^b or P_2^a -> P_1^b in degrees -1, 0")


def make_C_bar(m: int, A: TwoVertexAlgebra) -> ProjComplex:
    """``C̄_m``: the transpose of ``C_m^{q,p}[-1]``, i.e.
    ``(A^{q,p}_m)^* ⊗ P_2 -> (A^{q,p}_{m-1})^* ⊗ P_1``."""
    B = make_lambda(A.q, A.p)
    Y = transpose_to_opposite(shift(make_C(m, B), -1))
    return ProjComplex(A, Y.terms, Y.diffs)


def make_C_bar_star(m: int, A: TwoVertexAlgebra) -> ProjComplex:
    return dual_star(make_C_bar(m, A))


# -- nodes and flags ----------------------------------------------------------------


def det2(u: tuple[int, int], v: tuple[int, int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(eq=False)
class SiltingNode:
    """Basic two-term complex ``X_0 ⊕ X_1`` with its g-vectors, flags and the
    table ``homs[(i, j, r)] = dim Hom_K(X_i, X_j[r])`` for ``r in (-1, 0, 1)``."""

    summands: tuple[ProjComplex, ProjComplex]
    g: tuple[tuple[int, int], tuple[int, int]]
    presilting: bool
    silting: bool
    tilting: bool
    homs: dict
    depth: int | None = None
    family: str | None = None
    index: int | None = None

    @property
    def key(self) -> frozenset:
        return frozenset(self.g)

    @property
    def algebra(self) -> TwoVertexAlgebra:
        return self.summands[0].algebra

    def complex(self) -> ProjComplex:
        return direct_sum(*self.summands)

    def end_table(self) -> dict[str, int]:
        return {f"{i}{j}{r:+d}": v for (i, j, r), v in sorted(self.homs.items())}

    def to_json(self) -> dict:
        return {
            "g": [list(v) for v in self.g],
            "presilting": self.presilting,
            "silting": self.silting,
            "tilting": self.tilting,
            "homs": self.end_table(),
            "depth": self.depth,
            "family": self.family,
            "index": self.index,
        }


def make_node(X0: ProjComplex, X1: ProjComplex) -> SiltingNode:
    Xs = (minimize(X0), minimize(X1))
    g = (g_vector(Xs[0]), g_vector(Xs[1]))
    homs = {}
    for i in range(2):
        for j in range(2):
            for r in (-1, 0, 1):
                homs[(i, j, r)] = hom_complex_dims(Xs[i], Xs[j], r)[2]
    pre = all(homs[(i, j, 1)] == 0 for i in range(2) for j in range(2))
    sil = pre and abs(det2(*g)) == 1
    til = sil and all(homs[(i, j, -1)] == 0 for i in range(2) for j in range(2))
    return SiltingNode(Xs, g, pre, sil, til, homs)


def silting_flags(X: ProjComplex, seed: int = 0) -> dict:
    """Flags of an arbitrary bounded complex.

    presilting: ``Hom_K(X, X[r]) = 0`` for ``0 < r <= span``; tilting adds the
    negative shifts.  silting: presilting with exactly two non-isomorphic
    indecomposable summands (for two-term X also ``det(g_0, g_1) = ±1``).
    """
    M = minimize(X)
    if M.is_zero():
        return {"presilting": True, "silting": False, "tilting": False, "summands": []}
    span = M.hi - M.lo
    pos = {r: hom_complex_dims(M, M, r)[2] for r in range(1, span + 2)}
    neg = {r: hom_complex_dims(M, M, -r)[2] for r in range(1, span + 2)}
    pre = all(v == 0 for v in pos.values())
    parts = decompose(M, seed)
    two_term = M.lo >= -1 and M.hi <= 0
    distinct: list[ProjComplex] = []
    gs: list = []
    for P in parts:
        if two_term and pre:
            g = g_vector(P)
            if g in gs:
                continue
            gs.append(g)
            distinct.append(P)
        elif not any(_iso(P, Q) for Q in distinct):
            distinct.append(P)
    sil = pre and len(distinct) == 2
    if sil and two_term:
        sil = abs(det2(gs[0], gs[1])) == 1
    til = sil and all(v == 0 for v in neg.values())
    return {
        "presilting": pre,
        "silting": sil,
        "tilting": til,
        "summands": distinct,
        "multiplicity": len(parts),
        "hom_pos": pos,
        "hom_neg": neg,
    }


def _iso(X: ProjComplex, Y: ProjComplex) -> bool:
    from .complexes import iso_in_homotopy

    return iso_in_homotopy(X, Y)


# -- mutation ------------------------------------------------------------------------


class NotTwoTerm(ValueError):
    """The mutated summand has no two-term representative."""


def _is_two_term(M: ProjComplex) -> bool:
    return M.is_zero() or (M.lo >= -1 and M.hi <= 0)


def _stack_column(A, maps: Sequence[ProjMap]) -> ProjMap:
    return ProjMap.block(A, [[m] for m in maps])


def _stack_row(A, maps: Sequence[ProjMap]) -> ProjMap:
    return ProjMap.block(A, [list(maps)])


def _kron_lift(X: ProjComplex, Y: ProjComplex, F0: Matrix, F1: Matrix) -> ChainMap:
    """Chain map ``X -> Y`` of α-type complexes with components F0 on P_1 and F1 on P_2."""
    A = X.algebra
    maps = {-1: ProjMap(A, X.term(-1), Y.term(-1), {0: F0}),
            0: ProjMap(A, X.term(0), Y.term(0), {1: F1})}
    return ChainMap(X, Y, 0, maps)


def _end_kron_dim(Y) -> int:
    a, b, D = Y
    return kronecker.hom_dim(D, D, a, b, a, b)


def _plus_maps(X: ProjComplex, Y: ProjComplex) -> list[ChainMap]:
    """Basis of ``Hom_K(X, Y)`` modulo ``rad End(Y) · Hom_K(X, Y)``."""
    dx, dy = alpha_data(X), alpha_data(Y)
    if dx is not None and dy is not None and _end_kron_dim(dy) == 1:
        aX, bX, DX = dx
        aY, bY, DY = dy
        basis = kronecker.hom_basis(DX, DY, aX, bX, aY, bY)
        if not basis and aX > 0:
            raise NotTwoTerm("no Kronecker maps: the cone keeps a term in degree -2")
        if basis and (bX == 0 or rank(Matrix.vstack([F1 for _, F1 in basis])) == bX):
            return [_kron_lift(X, Y, F0, F1) for F0, F1 in basis]
    return _generic_approx(X, Y, plus=True)


def _minus_maps(X: ProjComplex, Y: ProjComplex) -> list[ChainMap]:
    """Basis of ``Hom_K(Y, X)`` modulo ``Hom_K(Y, X) · rad End(Y)``."""
    dx, dy = alpha_data(X), alpha_data(Y)
    if dx is not None and dy is not None and _end_kron_dim(dy) == 1:
        aX, bX, DX = dx
        aY, bY, DY = dy
        basis = kronecker.hom_basis(DY, DX, aY, bY, aX, bX)
        if not basis and bX > 0:
            raise NotTwoTerm("no Kronecker maps: the cocone keeps a term in degree 1")
        if basis and (bX == 0 or rank(Matrix.hstack([F1 for _, F1 in basis])) == bX):
            return [_kron_lift(Y, X, F0, F1) for F0, F1 in basis]
    return _generic_approx(X, Y, plus=False)


def _generic_approx(X: ProjComplex, Y: ProjComplex, plus: bool) -> list[ChainMap]:
    H = HomSpace(X, Y, 0) if plus else HomSpace(Y, X, 0)
    if H.dim == 0:
        return []
    E, HY = end_algebra_of([Y])
    R = E.radical()
    cols = []
    for c in range(R.cols):
        r = HY[0][0].combination(R.submatrix(range(R.rows), [c]).entries)
        for f in H.basis:
            comp = r.compose(f) if plus else f.compose(r)
            cols.append(H.coords(comp))
    J = Matrix.from_rows(cols, H.dim).T if cols else Matrix.zeros(H.dim, 0)
    return [H.basis[i] for i in complement_pivots(J)]


def mutate_summand(X: ProjComplex, Y: ProjComplex, direction: str) -> ProjComplex:
    """Replace X in ``X ⊕ Y``: ``+`` gives the cone of ``X -> Y^n``, ``-`` the
    cocone of ``Y^n -> X`` (minimal approximations).  Raises
    :class:`NotTwoTerm` when the result is not two-term."""
    A = X.algebra
    if direction == "+":
        maps = _plus_maps(X, Y)
        if not maps:
            out = minimize(shift(X, 1))
        else:
            Yn = direct_sum(*([Y] * len(maps)))
            degs = X.degrees
            f = ChainMap(X, Yn, 0, {n: _stack_column(A, [g.at(n) for g in maps]) for n in degs})
            out = minimize(cone(f))
    elif direction == "-":
        maps = _minus_maps(X, Y)
        if not maps:
            out = minimize(shift(X, -1))
        else:
            Yn = direct_sum(*([Y] * len(maps)))
            degs = Yn.degrees
            g = ChainMap(Yn, X, 0, {n: _stack_row(A, [h.at(n) for h in maps]) for n in degs})
            out = minimize(shift(cone(g), -1))
    else:
        raise ValueError("direction must be '+' or '-'")
    if not _is_two_term(out):
        raise NotTwoTerm(f"mutation {direction} gives a complex in degrees [{out.lo}, {out.hi}]")
    return out


def _d_prime(Z: ProjComplex) -> ProjComplex:
    return shift(transpose_to_opposite(Z), 1)


def _d_prime_inv(W: ProjComplex) -> ProjComplex:
    return transpose_to_opposite(shift(W, -1))


def _mutate_pair(X: ProjComplex, Y: ProjComplex, direction: str) -> ProjComplex:
    """Dispatch: complexes of type ``P_2 -> P_1`` go through the contravariant
    transpose, which exchanges cones and cocones."""
    if alpha_data(X) is None and alpha_data(Y) is None and beta_data(X) and beta_data(Y):
        flip = "-" if direction == "+" else "+"
        try:
            W = mutate_summand(_d_prime(X), _d_prime(Y), flip)
        except NotTwoTerm as e:
            raise NotTwoTerm(str(e)) from None
        Z = _d_prime_inv(W)
        return ProjComplex(X.algebra, Z.terms, Z.diffs)
    return mutate_summand(X, Y, direction)


def mutate(node: SiltingNode, summand: int, direction: str) -> SiltingNode:
    """Replace ``node.summands[summand]`` by mutation in ``direction``."""
    if summand not in (0, 1):
        raise ValueError("summand must be 0 or 1")
    X, Y = node.summands[summand], node.summands[1 - summand]
    try:
        Z = _mutate_pair(X, Y, direction)
    except NotTwoTerm as e:
        other = "-" if direction == "+" else "+"
        raise NotTwoTerm(f"{e}; mutate summand {1 - summand} with '{direction}' "
                         f"(or summand {summand} with '{other}') instead") from None
    parts = (Z, Y) if summand == 0 else (Y, Z)
    return make_node(*parts)


def lambda_node(A: TwoVertexAlgebra) -> SiltingNode:
    return make_node(stalk(A, (1, 0)), stalk(A, (0, 1)))


def lambda_shift_node(A: TwoVertexAlgebra) -> SiltingNode:
    return make_node(stalk(A, (1, 0), -1), stalk(A, (0, 1), -1))


# -- the walk -----------------------------------------------------------------------


@dataclass
class Walk:
    p: int
    q: int
    depth: int
    nodes: list[SiltingNode]
    edges: list[tuple[frozenset, frozenset, int, str]] = field(default_factory=list)
    dichotomy_failures: list[tuple] = field(default_factory=list)
    inverse_failures: list[tuple] = field(default_factory=list)

    def keys(self) -> set[frozenset]:
        return {n.key for n in self.nodes}


def explore(p: int, q: int, depth: int, check_inverse: bool = True) -> Walk:
    """Breadth-first closure of ``{Λ, Λ[1]}`` under mutation up to ``depth``.

    Every node below the depth limit is mutated in all four ways.  Away from
    Λ and Λ[1], exactly one summand index ``i`` should make both the ``+``
    mutation of the other summand and the ``-`` mutation of ``X_i`` two-term;
    each ``+`` edge is also checked to be undone by the matching ``-``.
    """
    A = make_lambda(p, q)
    start = [lambda_node(A), lambda_shift_node(A)]
    seen: dict[frozenset, SiltingNode] = {}
    for n in start:
        n.depth = 0
        seen[n.key] = n
    walk = Walk(p, q, depth, [])
    queue = deque(start)
    special = {start[0].key: "Lambda", start[1].key: "Lambda[1]"}
    while queue:
        node = queue.popleft()
        if node.depth >= depth:
            continue
        ok = {}
        for s in (0, 1):
            for d in ("+", "-"):
                try:
                    ok[(s, d)] = mutate(node, s, d)
                except NotTwoTerm:
                    ok[(s, d)] = None
        kind = special.get(node.key)
        if kind == "Lambda":
            good = ok[(0, "+")] and ok[(1, "+")] and not ok[(0, "-")] and not ok[(1, "-")]
        elif kind == "Lambda[1]":
            good = ok[(0, "-")] and ok[(1, "-")] and not ok[(0, "+")] and not ok[(1, "+")]
        else:
            # keep X_i: + replaces X_{1-i}, - replaces X_i
            choices = [i for i in (0, 1) if ok[(1 - i, "+")] and ok[(i, "-")]]
            good = len(choices) == 1
        if not good:
            walk.dichotomy_failures.append((node.g, {k: v is not None for k, v in ok.items()}))
        for (s, d), new in ok.items():
            if new is None:
                continue
            walk.edges.append((node.key, new.key, s, d))
            if check_inverse:
                back = "-" if d == "+" else "+"
                try:
                    undo = mutate(new, s, back)
                    if undo.key != node.key:
                        walk.inverse_failures.append((node.g, s, d, undo.g))
                except NotTwoTerm:
                    walk.inverse_failures.append((node.g, s, d, None))
            if new.key not in seen:
                new.depth = node.depth + 1
                seen[new.key] = new
                queue.append(new)
    walk.nodes = sorted(seen.values(), key=lambda n: (n.depth, sorted(n.g)))
    cf = closed_form_pairs(p, q, depth + 2)
    for n in walk.nodes:
        info = cf.get(n.key)
        if info is not None:
            n.family, n.index = info["family"], info["index"]
    return walk


def mutation_walk(p: int, q: int, depth: int) -> list[SiltingNode]:
    return explore(p, q, depth).nodes


# -- closed form ----------------------------------------------------------------------


def _dims_any(p: int, M: int) -> list[int]:
    return recursion_dims(p, M)


def _s_list(p: int, mmax: int) -> list[tuple[tuple, str, int]]:
    """Pairs of g-vectors of C_{m-1} ⊕ C_m and their transposes over Λ^{p,*}."""
    out = [(((1, 0), (0, 1)), "Lambda", 0)]
    if p == 0:
        out.append((((0, 1), (-1, 0)), "Cstar", 1))
        return out
    if p == 1:
        out.append((((0, 1), (-1, 1)), "C", 1))
        out.append((((-1, 1), (-1, 0)), "Cstar", 1))
        return out
    a = _dims_any(p, mmax + 1)

    def am(m):
        return 0 if m < 0 else a[m]

    for m in range(1, mmax + 1):
        out.append((((-am(m - 2), am(m - 1)), (-am(m - 1), am(m))), "C", m))
        out.append((((-am(m - 1), am(m - 2)), (-am(m), am(m - 1))), "Cstar", m))
    return out


def _neg(pair):
    return tuple((-u[0], -u[1]) for u in pair)


def _adjacent(k1: frozenset, k2: frozenset) -> bool:
    return len(k1 & k2) == 1


def closed_form_pairs(p: int, q: int, depth: int) -> dict[frozenset, dict]:
    """All basic two-term silting complexes over Λ^{p,q} up to ``depth`` mutations
    from Λ or Λ[1], as g-vector pairs with family and index.

    Families: ``C`` (C_{m-1} ⊕ C_m), ``Cstar`` (its transpose dual), ``Cbar`` and
    ``Cbarstar`` (the same over Λ^{q,p}, negated); ``Lambda``/``Lambda[1]``.
    """
    mmax = depth + 2
    nodes: dict[frozenset, dict] = {}
    for pair, fam, m in _s_list(p, mmax):
        nodes.setdefault(frozenset(pair), {"g": pair, "family": fam, "index": m})
    bar = {"Lambda": "Lambda[1]", "C": "Cbar", "Cstar": "Cbarstar"}
    for pair, fam, m in _s_list(q, mmax):
        npair = _neg(pair)
        nodes.setdefault(frozenset(npair), {"g": npair, "family": bar[fam], "index": m})
    keys = list(nodes)
    roots = [frozenset({(1, 0), (0, 1)}), frozenset({(-1, 0), (0, -1)})]
    dist = {r: 0 for r in roots}
    queue = deque(roots)
    while queue:
        k = queue.popleft()
        for k2 in keys:
            if k2 not in dist and _adjacent(k, k2):
                dist[k2] = dist[k] + 1
                queue.append(k2)
    out = {}
    for k, info in nodes.items():
        if k in dist and dist[k] <= depth:
            info = dict(info, depth=dist[k], label=cone_label(p, q, info["family"], info["index"]))
            out[k] = info
    return out


def cone_label(p: int, q: int, family: str, m: int) -> str:
    """Algebra derived equivalent to Λ^{p,q} attached to a cone of the fan."""
    if family in ("Lambda", "Lambda[1]"):
        return f"Λ^{{{p},{q}}}"
    if family == "C":
        return f"Λ^{{{p},{q}}}_{m}"
    if family == "Cbar":
        return f"(Λ^{{{q},{p}}}_{m})^op"
    if family == "Cstar":
        if m == 1:
            return f"δ_{{{p},{q}}}"
        if m == 2:
            return f"Λ^{{{q},{p}}}"
        return f"(Λ^{{{p},{q}}}_{m - 2})^op"
    if family == "Cbarstar":
        if m == 1:
            return f"δ_{{{q},{p}}}"
        if m == 2:
            return f"Λ^{{{q},{p}}}"
        return f"Λ^{{{q},{p}}}_{m - 2}"
    raise ValueError(f"unknown family {family!r}")


def family_complexes(A: TwoVertexAlgebra, family: str, m: int) -> tuple[ProjComplex, ProjComplex]:
    """The two summands of the closed-form node ``(family, m)``."""
    if family == "Lambda":
        return stalk(A, (1, 0)), stalk(A, (0, 1))
    if family == "Lambda[1]":
        return stalk(A, (1, 0), -1), stalk(A, (0, 1), -1)
    if family == "C":
        return make_C(m - 1, A), make_C(m, A)
    if family == "Cstar":
        if A.p == 0:
            return make_C(0, A), stalk(A, (1, 0), -1)
        return dual_star(make_C(m - 1, A)), dual_star(make_C(m, A))
    if family == "Cbar":
        return make_C_bar(m - 1, A), make_C_bar(m, A)
    if family == "Cbarstar":
        if A.q == 0:
            return stalk(A, (0, 1), -1), stalk(A, (1, 0))
        return make_C_bar_star(m - 1, A), make_C_bar_star(m, A)
    raise ValueError(f"unknown family {family!r}")


# -- fan ---------------------------------------------------------------------------------


class FanError(RuntimeError):
    """Two cones of the fan overlap in their interiors."""


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = det2(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def _strictly_inside(w, u1, u2) -> bool:
    return det2(u1, w) > 0 and det2(w, u2) > 0


def fan(nodes: Iterable[SiltingNode | tuple]) -> dict:
    """Cones spanned by the g-vector pairs, ordered counterclockwise.

    Every comparison is an integer cross product.  Raises :class:`FanError` if
    two distinct cones share interior points.  Returns the ordered arcs and
    the uncovered gaps between consecutive arcs.
    """
    arcs = []
    for n in nodes:
        g = n.g if isinstance(n, SiltingNode) else n
        u, v = g
        d = det2(u, v)
        if d == 0:
            raise FanError(f"degenerate cone {g}")
        arcs.append((u, v) if d > 0 else (v, u))
    if len(set(arcs)) != len(arcs):
        raise FanError("duplicate cones")
    for i, (u1, u2) in enumerate(arcs):
        for j, (w1, w2) in enumerate(arcs):
            if i == j:
                continue
            if _strictly_inside(w1, u1, u2) or _strictly_inside(w2, u1, u2) or (w1 == u1 or w2 == u2):
                raise FanError(f"cones {arcs[i]} and {arcs[j]} overlap")
    arcs.sort(key=cmp_to_key(lambda a, b: _angle_cmp(a[0], b[0])))
    gaps = []
    for i, (u1, u2) in enumerate(arcs):
        nxt = arcs[(i + 1) % len(arcs)][0]
        if u2 != nxt:
            gaps.append((u2, nxt))
    return {"arcs": arcs, "gaps": gaps}


def gray_witness(p: int) -> tuple[int, int] | None:
    """A ray ``(-2, p)`` with ``a^2 + b^2 - p a b <= 0`` inside the uncovered
    region of the second quadrant (None for p < 2)."""
    return (-2, p) if p >= 2 else None


def gaps_contain_gray(fan_data: dict, p: int, q: int) -> bool:
    """Exactly one gap per gray region, each containing its witness ray."""
    want = []
    if p >= 2:
        want.append((-2, p))
    if q >= 2:
        want.append((q, -2))
    gaps = fan_data["gaps"]
    if len(gaps) != len(want):
        return False
    for w in want:
        hits = [g for g in gaps if _strictly_inside(w, g[0], g[1]) or det2(g[0], w) == 0 == det2(w, g[1])]
        if len(hits) != 1:
            return False
    return True


def gray_cone_rays(p: int) -> tuple[float, float] | None:
    """Floating slopes of the gray boundary rays (rendering only)."""
    if p < 2:
        return None
    r = math.sqrt(p * p - 4)
    return (p - r) / 2, (p + r) / 2


# -- random complexes and the gray region -------------------------------------------------


def random_two_term(A: TwoVertexAlgebra, a: int, b: int, rng: random.Random, box: int = 2,
                    kind: str = "alpha") -> ProjComplex:
    """Random ``P_1^a -> P_2^b`` (kind alpha) or ``P_2^a -> P_1^b`` (kind beta)."""
    def rnd(r, c):
        return Matrix.from_flat(r, c, [rng.randint(-box, box) for _ in range(r * c)])

    if kind == "alpha":
        return _alpha_complex(A, a, b, [rnd(b, a) for _ in range(A.p)])
    return _beta_complex(A, a, b, [rnd(b, a) for _ in range(A.q)])


def sample_gray_region(p: int, q: int, bound: int = 8, samples: int = 100, seed: int = 0) -> list[dict]:
    """Sample complexes whose g-vector lies in a gray cone.

    For ``P_1^a -> P_2^b`` with ``a^2 + b^2 <= p a b`` (and the mirror
    ``P_2^a -> P_1^b`` with ``q``) count presilting hits and check that
    null-homotopic maps ``X -> X[1]`` number at most ``a^2 + b^2 - 1``.
    Sampling evidence only.
    """
    A = make_lambda(p, q)
    rows = []
    for kind, n in (("alpha", p), ("beta", q)):
        for a in range(1, bound):
            for b in range(1, bound - a + 1):
                if a * a + b * b > n * a * b:
                    continue
                rng = random.Random(f"{seed}:{kind}:{a}:{b}")
                hits = 0
                worst = -1
                for _ in range(samples):
                    X = random_two_term(A, a, b, rng, kind=kind)
                    Z, B, H = hom_complex_dims(X, X, 1)
                    if H == 0:
                        hits += 1
                    worst = max(worst, B)
                rows.append({"kind": kind, "a": a, "b": b, "samples": samples, "presilting": hits,
                             "max_null_homotopic": worst, "bound": a * a + b * b - 1,
                             "bound_ok": worst <= a * a + b * b - 1})
    return rows
