"""Bounded complexes of projective Λ^{p,q}-modules and the homotopy category.

A term of a complex is ``P_1^a ⊕ P_2^b``; a map between such sums is stored
componentwise: for each basis element ``x = e_t x e_s`` of the algebra a
rational matrix whose rows index the ``P_t`` summands of the target and whose
columns index the ``P_s`` summands of the source.  Composition is matrix
multiplication twisted by the structure constants.

Conventions used throughout:

* ``X[r]^n = X^{n+r}`` with differential ``(-1)^r d``.
* A chain map ``X -> Y[r]`` is a family ``f_n: X^n -> Y^{n+r}`` with
  ``(-1)^r d_Y f_n = f_{n+1} d_X``; it is null-homotopic when
  ``f_n = (-1)^r d_Y h_n + h_{n+1} d_X`` for some ``h_n: X^n -> Y^{n+r-1}``.
* ``cone(f)^n = X^{n+1} ⊕ Y^n`` with differential ``[[-d_X, 0], [f, d_Y]]``.
"""
from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import flint

from . import kronecker
from .algebra import FDAlgebra, TwoVertexAlgebra, find_idempotent, make_lambda
from .linalg import Matrix, NoSolution, column_space_basis, nullspace, rank, rref, solve, sparse_nullspace, sparse_rank

__all__ = [
    "ProjMap",
    "ProjComplex",
    "ChainMap",
    "HomSpace",
    "shift",
    "direct_sum",
    "hom_complex_dims",
    "hom_dim",
    "hom_space",
    "minimize",
    "cone",
    "g_vector",
    "is_indecomposable",
    "decompose",
    "iso_in_homotopy",
    "end_dims",
    "transpose_to_opposite",
    "sigma_index",
    "kronecker_hom_dim",
    "stalk",
    "InvalidComplex",
    "BlockShapeError",
    "NotSquareZero",
]


class InvalidComplex(ValueError):
    """Malformed complex data."""


class BlockShapeError(InvalidComplex):
    """A differential block has the wrong size or lives in the wrong Hom space."""


class NotSquareZero(InvalidComplex):
    """Two consecutive differentials compose to a nonzero map."""


def _count(m: tuple[int, int], t: int) -> int:
    return m[t - 1]


# -- maps between sums of projectives ------------------------------------------


class ProjMap:
    """Map ``P_1^a ⊕ P_2^b -> P_1^c ⊕ P_2^d`` (``src=(a,b)``, ``tgt=(c,d)``)."""

    __slots__ = ("algebra", "src", "tgt", "comps")

    def __init__(self, algebra: TwoVertexAlgebra, src, tgt, comps: Mapping[int, Matrix] | None = None):
        self.algebra = algebra
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        clean = {}
        for x, m in (comps or {}).items():
            t, s = algebra.sides[x]
            if m.shape != (self.tgt[t - 1], self.src[s - 1]):
                raise InvalidComplex(
                    f"component {algebra.labels[x]} has shape {m.shape}, "
                    f"expected {(self.tgt[t - 1], self.src[s - 1])}"
                )
            if not m.is_zero():
                clean[x] = m
        self.comps = clean

    @classmethod
    def zero(cls, A, src, tgt) -> "ProjMap":
        return cls(A, src, tgt, {})

    @classmethod
    def identity(cls, A, mult) -> "ProjMap":
        return cls(A, mult, mult, {0: Matrix.identity(mult[0]), 1: Matrix.identity(mult[1])})

    def comp(self, x: int) -> Matrix:
        m = self.comps.get(x)
        if m is not None:
            return m
        t, s = self.algebra.sides[x]
        return Matrix.zeros(self.tgt[t - 1], self.src[s - 1])

    def is_zero(self) -> bool:
        return not self.comps

    def is_radical(self) -> bool:
        return 0 not in self.comps and 1 not in self.comps

    def __matmul__(self, f: "ProjMap") -> "ProjMap":
        """Composition ``self ∘ f``."""
        if f.tgt != self.src:
            raise ValueError(f"cannot compose: {f.tgt} vs {self.src}")
        A = self.algebra
        out: dict[int, flint.fmpq_mat] = {}
        for x, gx in self.comps.items():
            for y, fy in f.comps.items():
                prod = A.table.get((x, y))
                if not prod:
                    continue
                gf = (gx @ fy).flint
                for z, c in prod.items():
                    term = gf if c == 1 else gf * flint.fmpq(c.numerator, c.denominator)
                    out[z] = out[z] + term if z in out else term
        return ProjMap(A, f.src, self.tgt, {z: Matrix(m) for z, m in out.items()})

    def __add__(self, other: "ProjMap") -> "ProjMap":
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise ValueError("shape mismatch in map sum")
        comps = dict(self.comps)
        for x, m in other.comps.items():
            comps[x] = comps[x] + m if x in comps else m
        return ProjMap(self.algebra, self.src, self.tgt, comps)

    def __neg__(self) -> "ProjMap":
        return ProjMap(self.algebra, self.src, self.tgt, {x: -m for x, m in self.comps.items()})

    def __sub__(self, other: "ProjMap") -> "ProjMap":
        return self + (-other)

    def scale(self, c) -> "ProjMap":
        if c == 0:
            return ProjMap.zero(self.algebra, self.src, self.tgt)
        return ProjMap(self.algebra, self.src, self.tgt, {x: m.scale(c) for x, m in self.comps.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProjMap):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.src == other.src
            and self.tgt == other.tgt
            and self.comps == other.comps
        )

    def __hash__(self) -> int:
        return hash((self.src, self.tgt, tuple(sorted((x, hash(m)) for x, m in self.comps.items()))))

    def __repr__(self) -> str:
        labs = ",".join(self.algebra.labels[x] for x in sorted(self.comps))
        return f"ProjMap({self.src}->{self.tgt}; {labs})"

    def restrict(self, rows: Sequence[Sequence[int]], cols: Sequence[Sequence[int]]) -> "ProjMap":
        """Submap on chosen target rows and source columns, per vertex type."""
        A = self.algebra
        comps = {}
        for x, m in self.comps.items():
            t, s = A.sides[x]
            comps[x] = m.submatrix(rows[t - 1], cols[s - 1])
        return ProjMap(A, (len(cols[0]), len(cols[1])), (len(rows[0]), len(rows[1])), comps)

    @staticmethod
    def block(A: TwoVertexAlgebra, blocks: Sequence[Sequence["ProjMap"]]) -> "ProjMap":
        """Assemble a block matrix of maps; summands of each type concatenated."""
        nrow, ncol = len(blocks), len(blocks[0])
        tgts = [blocks[i][0].tgt for i in range(nrow)]
        srcs = [blocks[0][j].src for j in range(ncol)]
        tgt = (sum(t[0] for t in tgts), sum(t[1] for t in tgts))
        src = (sum(s[0] for s in srcs), sum(s[1] for s in srcs))
        row_off = {1: [0], 2: [0]}
        col_off = {1: [0], 2: [0]}
        for t in tgts:
            row_off[1].append(row_off[1][-1] + t[0])
            row_off[2].append(row_off[2][-1] + t[1])
        for s in srcs:
            col_off[1].append(col_off[1][-1] + s[0])
            col_off[2].append(col_off[2][-1] + s[1])
        out: dict[int, flint.fmpq_mat] = {}
        for i in range(nrow):
            for j in range(ncol):
                b = blocks[i][j]
                if b.tgt != tgts[i] or b.src != srcs[j]:
                    raise ValueError("inconsistent block shapes")
                for x, m in b.comps.items():
                    t, s = A.sides[x]
                    if x not in out:
                        out[x] = flint.fmpq_mat(tgt[t - 1], src[s - 1])
                    r0, c0 = row_off[t][i], col_off[s][j]
                    M = out[x]
                    for r, c, v in m.nonzero():
                        M[r0 + r, c0 + c] = v
        return ProjMap(A, src, tgt, {x: Matrix(m) for x, m in out.items()})

    @staticmethod
    def diag(A: TwoVertexAlgebra, maps: Sequence["ProjMap"]) -> "ProjMap":
        n = len(maps)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                row.append(maps[i] if i == j else ProjMap.zero(A, maps[j].src, maps[i].tgt))
            rows.append(row)
        return ProjMap.block(A, rows)

    # summand-level view (interchange format)
    def entry(self, row: int, col: int) -> list[Fraction]:
        """Coefficient vector of the entry at target summand ``row``, source ``col``."""
        A = self.algebra
        t, r = (1, row) if row < self.tgt[0] else (2, row - self.tgt[0])
        s, c = (1, col) if col < self.src[0] else (2, col - self.src[0])
        vec = [Fraction(0)] * A.dim
        for x in A.piece(t, s):
            m = self.comps.get(x)
            if m is not None:
                vec[x] = m[r, c]
        return vec

    def to_blocks(self) -> list[list[list]]:
        nt, ns = sum(self.tgt), sum(self.src)
        return [[_encode_vec(self.entry(i, j)) for j in range(ns)] for i in range(nt)]

    @classmethod
    def from_blocks(cls, A: TwoVertexAlgebra, src, tgt, blocks) -> "ProjMap":
        src, tgt = tuple(src), tuple(tgt)
        nt, ns = sum(tgt), sum(src)
        if len(blocks) != nt or any(len(r) != ns for r in blocks):
            raise BlockShapeError(f"block matrix must be {nt}x{ns}")
        mats: dict[int, flint.fmpq_mat] = {}
        for i, row in enumerate(blocks):
            t, r = (1, i) if i < tgt[0] else (2, i - tgt[0])
            for j, vec in enumerate(row):
                s, c = (1, j) if j < src[0] else (2, j - src[0])
                vec = _decode_vec(vec)
                if len(vec) != A.dim:
                    raise BlockShapeError(f"coefficient vector must have length {A.dim}")
                for x, v in enumerate(vec):
                    if not v:
                        continue
                    if A.sides[x] != (t, s):
                        raise BlockShapeError(
                            f"entry ({i},{j}) maps P_{s} -> P_{t} but uses {A.labels[x]}"
                        )
                    if x not in mats:
                        mats[x] = flint.fmpq_mat(tgt[t - 1], src[s - 1])
                    mats[x][r, c] = flint.fmpq(v.numerator, v.denominator)
        return cls(A, src, tgt, {x: Matrix(m) for x, m in mats.items()})


def _sparse_rows(d: ProjMap) -> dict:
    """``{(t, i): {(s, j): {x: value}}}`` for the nonzero entries of ``d``."""
    A = d.algebra
    R: dict = {}
    for x, M in d.comps.items():
        t, s = A.sides[x]
        for i, j, v in M.nonzero():
            R.setdefault((t, i), {}).setdefault((s, j), {})[x] = v
    return R


def _composite_is_zero(g: ProjMap, f: ProjMap) -> bool:
    """Whether ``g ∘ f`` vanishes, computed on sparse entries."""
    return sparse_square_zero(g.algebra, {0: _sparse_rows(f), 1: _sparse_rows(g)})


def _encode_vec(vec: Sequence[Fraction]) -> list:
    return [int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}" for v in vec]


def _decode_vec(vec) -> list[Fraction]:
    try:
        return [Fraction(v) for v in vec]
    except (TypeError, ValueError) as exc:
        raise InvalidComplex(f"bad coefficient vector {vec!r}") from exc


# -- complexes ---------------------------------------------------------------


class ProjComplex:
    """Bounded complex of projectives; ``diffs[n]`` maps degree n to n+1.

    Zero terms at either end are dropped, so ``lo``/``hi`` are the extreme
    nonzero degrees.  Instances are immutable and hashable by content.
    """

    def __init__(self, algebra: TwoVertexAlgebra, terms: Mapping[int, Sequence[int]],
                 diffs: Mapping[int, ProjMap] | None = None, check: bool = True):
        self.algebra = algebra
        terms = {int(n): (int(m[0]), int(m[1])) for n, m in terms.items()}
        for n, m in terms.items():
            if m[0] < 0 or m[1] < 0:
                raise InvalidComplex("negative multiplicity")
        nz = [n for n, m in terms.items() if m != (0, 0)]
        self.terms = {n: terms[n] for n in sorted(nz)}
        self.lo = min(nz) if nz else 0
        self.hi = max(nz) if nz else -1
        self.diffs: dict[int, ProjMap] = {}
        for n, d in (diffs or {}).items():
            n = int(n)
            if d.src != self.term(n) or d.tgt != self.term(n + 1):
                if d.is_zero() and (self.term(n) == (0, 0) or self.term(n + 1) == (0, 0)):
                    continue
                raise BlockShapeError(f"differential {n} has shape {d.src}->{d.tgt}, "
                                     f"terms are {self.term(n)}->{self.term(n + 1)}")
            if not d.is_zero():
                self.diffs[n] = d
        if check:
            self.check()

    def term(self, n: int) -> tuple[int, int]:
        return self.terms.get(n, (0, 0))

    def diff(self, n: int) -> ProjMap:
        d = self.diffs.get(n)
        if d is None:
            return ProjMap.zero(self.algebra, self.term(n), self.term(n + 1))
        return d

    def check(self) -> None:
        for n in range(self.lo, self.hi - 1):
            if n in self.diffs and n + 1 in self.diffs:
                if not _composite_is_zero(self.diffs[n + 1], self.diffs[n]):
                    raise NotSquareZero(f"d∘d != 0 at degree {n}")

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def span(self) -> int:
        return 0 if self.is_zero() else self.hi - self.lo + 1

    def is_radical(self) -> bool:
        return all(d.is_radical() for d in self.diffs.values())

    @cached_property
    def _key(self):
        return (
            self.algebra.p,
            self.algebra.q,
            tuple(self.terms.items()),
            tuple((n, hash(d)) for n, d in sorted(self.diffs.items())),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProjComplex):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.terms == other.terms
            and self.diffs == other.diffs
        )

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        parts = []
        for n in self.degrees:
            a, b = self.term(n)
            parts.append(f"{n}:P1^{a}+P2^{b}")
        return f"ProjComplex[{self.algebra}]({', '.join(parts)})"

    # interchange format
    def to_json(self) -> dict:
        return {
            "algebra": {"p": self.algebra.p, "q": self.algebra.q},
            "terms": {str(n): list(m) for n, m in self.terms.items()},
            "diff": {str(n): d.to_blocks() for n, d in sorted(self.diffs.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: Mapping) -> "ProjComplex":
        try:
            alg = data["algebra"]
            A = make_lambda(int(alg["p"]), int(alg["q"]))
            terms = {int(n): tuple(m) for n, m in data["terms"].items()}
            for m in terms.values():
                if len(m) != 2:
                    raise InvalidComplex("terms must be [a, b] pairs")
            diffs = {}
            for n, blocks in data.get("diff", {}).items():
                n = int(n)
                src = terms.get(n, (0, 0))
                tgt = terms.get(n + 1, (0, 0))
                diffs[n] = ProjMap.from_blocks(A, src, tgt, blocks)
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            if isinstance(exc, InvalidComplex):
                raise
            raise InvalidComplex(f"malformed complex: {exc}") from exc
        return cls(A, terms, diffs)

    @classmethod
    def loads(cls, text: str) -> "ProjComplex":
        return cls.from_json(json.loads(text))


def stalk(A: TwoVertexAlgebra, mult: Sequence[int], degree: int = 0) -> ProjComplex:
    """``P_1^a ⊕ P_2^b`` concentrated in one degree."""
    return ProjComplex(A, {degree: tuple(mult)}, {})


def zero_complex(A: TwoVertexAlgebra) -> ProjComplex:
    return ProjComplex(A, {}, {})


def shift(X: ProjComplex, r: int) -> ProjComplex:
    """``X[r]``: terms reindexed by ``r``, differential times ``(-1)^r``."""
    sgn = -1 if r % 2 else 1
    terms = {n - r: m for n, m in X.terms.items()}
    diffs = {n - r: (d if sgn == 1 else -d) for n, d in X.diffs.items()}
    return ProjComplex(X.algebra, terms, diffs, check=False)


def direct_sum(*Xs: ProjComplex) -> ProjComplex:
    """Direct sum; within each term the ``P_1`` (then ``P_2``) summands of the
    arguments appear in argument order."""
    if not Xs:
        raise ValueError("empty direct sum")
    A = Xs[0].algebra
    for X in Xs:
        if X.algebra != A:
            raise ValueError("algebra mismatch")
    nonzero = [X for X in Xs if not X.is_zero()]
    if not nonzero:
        return zero_complex(A)
    lo = min(X.lo for X in nonzero)
    hi = max(X.hi for X in nonzero)
    terms = {}
    for n in range(lo, hi + 1):
        terms[n] = (sum(X.term(n)[0] for X in Xs), sum(X.term(n)[1] for X in Xs))
    diffs = {n: ProjMap.diag(A, [X.diff(n) for X in Xs]) for n in range(lo, hi)}
    return ProjComplex(A, terms, diffs, check=False)


def summand_restriction(X: ProjComplex, keep: Mapping[int, tuple[Sequence[int], Sequence[int]]]) -> ProjComplex:
    """Restrict every term to the chosen summands (caller guarantees a subcomplex
    that is also a direct summand)."""
    A = X.algebra
    terms = {n: (len(keep[n][0]), len(keep[n][1])) for n in keep}
    diffs = {}
    for n in X.diffs:
        if n in keep and n + 1 in keep:
            diffs[n] = X.diffs[n].restrict(keep[n + 1], keep[n])
    return ProjComplex(A, terms, diffs)


# -- chain maps ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChainMap:
    """Chain map ``X -> Y[r]`` given by ``maps[n]: X^n -> Y^{n+r}``."""

    source: ProjComplex
    target: ProjComplex
    r: int
    maps: Mapping[int, ProjMap]

    def at(self, n: int) -> ProjMap:
        m = self.maps.get(n)
        if m is None:
            return ProjMap.zero(self.source.algebra, self.source.term(n), self.target.term(n + self.r))
        return m

    def check(self) -> None:
        X, Y, r = self.source, self.target, self.r
        sgn = -1 if r % 2 else 1
        for n in range(X.lo - 1, X.hi + 1):
            lhs = Y.diff(n + r) @ self.at(n)
            rhs = self.at(n + 1) @ X.diff(n)
            if sgn == -1:
                lhs = -lhs
            if lhs != rhs:
                raise InvalidComplex(f"not a chain map at degree {n}")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self ∘ other`` where ``other: W -> X[s]`` and ``self: X -> Y[r]``."""
        s = other.r
        maps = {}
        for n in other.source.degrees:
            maps[n] = self.at(n + s) @ other.at(n)
        return ChainMap(other.source, self.target, self.r + s, maps)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        maps = {}
        for n in set(self.maps) | set(other.maps):
            maps[n] = self.at(n) + other.at(n)
        return ChainMap(self.source, self.target, self.r, maps)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, self.r, {n: m.scale(c) for n, m in self.maps.items()})

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.maps.values())

    @staticmethod
    def identity(X: ProjComplex) -> "ChainMap":
        return ChainMap(X, X, 0, {n: ProjMap.identity(X.algebra, X.term(n)) for n in X.degrees})


def cone(f: ChainMap) -> ProjComplex:
    """Mapping cone of a degree-0 chain map."""
    if f.r != 0:
        raise ValueError("cone expects a degree-0 chain map; shift the target first")
    f.check()
    X, Y = f.source, f.target
    A = X.algebra
    parts = [D for D in (X, Y) if not D.is_zero()]
    if not parts:
        return zero_complex(A)
    lo = min(([X.lo - 1] if not X.is_zero() else []) + ([Y.lo] if not Y.is_zero() else []))
    hi = max(([X.hi - 1] if not X.is_zero() else []) + ([Y.hi] if not Y.is_zero() else []))
    terms, diffs = {}, {}
    for n in range(lo, hi + 1):
        a, b = X.term(n + 1), Y.term(n)
        terms[n] = (a[0] + b[0], a[1] + b[1])
    for n in range(lo, hi):
        dX = -X.diff(n + 1)
        fz = f.at(n + 1)
        z = ProjMap.zero(A, Y.term(n), X.term(n + 2))
        diffs[n] = ProjMap.block(A, [[dX, z], [fz, Y.diff(n)]])
    return ProjComplex(A, terms, diffs)


# -- minimization (Gaussian elimination over the algebra) ----------------------


def _invert_local(phi: ProjMap, t: int) -> ProjMap:
    """Inverse of an endomorphism-like map ``P_t^k -> P_t^k`` whose idempotent
    part is invertible; the remaining part squares to zero."""
    A = phi.algebra
    e = t - 1
    S = phi.comp(e)
    Sinv = Matrix(S.flint.inv())
    Smap = ProjMap(A, phi.tgt, phi.src, {e: Sinv})
    N = ProjMap(A, phi.src, phi.tgt, {x: m for x, m in phi.comps.items() if x != e})
    if N.is_zero():
        return Smap
    return Smap - Smap @ N @ Smap


def _pivot_rows_cols(E: Matrix) -> tuple[list[int], list[int]]:
    _R, cols = rref(E)
    _R2, rows = rref(E.T)
    return list(rows), list(cols)


_FTABLES: dict = {}


def _ftable(A: TwoVertexAlgebra) -> dict:
    """Structure constants as flint rationals, keyed by ``(x, y)``."""
    key = (A.p, A.q)
    hit = _FTABLES.get(key)
    if hit is None:
        hit = {xy: [(z, flint.fmpq(c.numerator, c.denominator)) for z, c in prod.items()]
               for xy, prod in A.table.items() if prod}
        _FTABLES[key] = hit
    return hit


def _elt_mul(ft: dict, a: dict, b: dict) -> dict:
    out: dict = {}
    for x, u in a.items():
        for y, v in b.items():
            prod = ft.get((x, y))
            if not prod:
                continue
            uv = u * v
            for z, c in prod:
                out[z] = out.get(z, 0) + uv * c
    return {z: v for z, v in out.items() if v}


def minimize(X: ProjComplex) -> ProjComplex:
    """Homotopy-equivalent radical complex obtained by cancelling, one pair of
    summands at a time, every differential entry with an idempotent part."""
    A = X.algebra
    alive = {n: {(t, i) for t in (1, 2) for i in range(X.term(n)[t - 1])} for n in X.degrees}
    rows = {n: _sparse_rows(d) for n, d in X.diffs.items()}
    return minimize_sparse(A, alive, rows)


def sparse_square_zero(A: TwoVertexAlgebra, rows: Mapping[int, dict]) -> bool:
    """``d ∘ d = 0`` for a differential in the sparse form used by :func:`minimize_sparse`."""
    ft = _ftable(A)
    for n, F in rows.items():
        G = rows.get(n + 1)
        if not G:
            continue
        for r, grow in G.items():
            acc: dict = {}
            for m, a in grow.items():
                frow = F.get(m)
                if not frow:
                    continue
                for c, b in frow.items():
                    prod = _elt_mul(ft, a, b)
                    if prod:
                        cur = acc.setdefault(c, {})
                        for z, v in prod.items():
                            cur[z] = cur.get(z, 0) + v
            for cur in acc.values():
                if any(cur.values()):
                    return False
    return True


def minimize_sparse(A: TwoVertexAlgebra, alive: dict[int, set], rows: dict[int, dict]) -> ProjComplex:
    """:func:`minimize` on a sparse complex: ``alive[n]`` holds the summand keys
    ``(type, index)`` of degree ``n`` and ``rows[n][r][c]`` the algebra element
    (``{basis index: value}``) of the differential from ``c`` to ``r``.
    Both arguments are consumed."""
    ft = _ftable(A)
    cols: dict[int, dict] = {}
    for n, R in rows.items():
        C: dict = {}
        for r, row in R.items():
            for c in row:
                C.setdefault(c, set()).add(r)
        cols[n] = C

    def pivots(n):
        out = []
        for r, row in rows.get(n, {}).items():
            for c, elt in row.items():
                if r[0] == c[0] and elt.get(r[0] - 1):
                    out.append(((len(cols[n][c]) - 1) * (len(row) - 1), r, c))
        out.sort(key=lambda z: z[0])
        return out

    def drop_row(n, r):
        row = rows.get(n, {}).pop(r, None)
        if row:
            for c in row:
                cols[n][c].discard(r)

    def drop_col(n, c):
        rs = cols.get(n, {}).pop(c, None)
        if rs:
            for r in rs:
                rows[n][r].pop(c, None)

    def eliminate(n, r, c):
        R, C = rows[n], cols[n]
        phi = R[r][c]
        t = r[0]
        e = t - 1
        v = phi[e]
        inv = {e: 1 / v}
        for x, u in phi.items():
            if x != e:
                inv[x] = -u / (v * v)
        gamma = [(r2, R[r2][c]) for r2 in C[c] if r2 != r]
        delta = [(c2, elt) for c2, elt in R[r].items() if c2 != c]
        for r2, g in gamma:
            w = _elt_mul(ft, g, inv)
            if not w:
                continue
            row = R[r2]
            for c2, dl in delta:
                upd = _elt_mul(ft, w, dl)
                if not upd:
                    continue
                cur = row.get(c2)
                if cur is None:
                    cur = row[c2] = {}
                    C.setdefault(c2, set()).add(r2)
                for z, u in upd.items():
                    val = cur.get(z, 0) - u
                    if val:
                        cur[z] = val
                    else:
                        cur.pop(z, None)
                if not cur:
                    del row[c2]
                    C[c2].discard(r2)
        drop_col(n, c)
        drop_row(n, r)
        drop_row(n - 1, c)
        drop_col(n + 1, r)
        alive[n].discard(c)
        alive[n + 1].discard(r)

    changed = True
    while changed:
        changed = False
        for n in sorted(rows):
            for _cost, r, c in pivots(n):
                if c not in alive[n] or r not in alive[n + 1]:
                    continue
                elt = rows[n].get(r, {}).get(c)
                if not elt or not elt.get(r[0] - 1):
                    continue
                eliminate(n, r, c)
                changed = True

    index = {}
    terms = {}
    for n, keys in sorted(alive.items()):
        order = sorted(keys)
        a = sum(1 for k in order if k[0] == 1)
        terms[n] = (a, len(order) - a)
        pos = {1: 0, 2: 0}
        for k in order:
            index[(n, k)] = pos[k[0]]
            pos[k[0]] += 1
    diffs = {}
    for n, R in rows.items():
        if n not in terms or n + 1 not in terms:
            continue
        src, tgt = terms[n], terms[n + 1]
        mats: dict[int, flint.fmpq_mat] = {}
        for r, row in R.items():
            for c, elt in row.items():
                for x, v in elt.items():
                    if x not in mats:
                        t, s_ = A.sides[x]
                        mats[x] = flint.fmpq_mat(tgt[t - 1], src[s_ - 1])
                    mats[x][index[(n + 1, r)], index[(n, c)]] = v
        if mats:
            diffs[n] = ProjMap(A, src, tgt, {x: Matrix(m) for x, m in mats.items()})
    return ProjComplex(A, terms, diffs, check=False)


# -- Hom in the homotopy category ---------------------------------------------


def _sgn(r: int) -> int:
    return -1 if r % 2 else 1


def _nz_by_col(m: Matrix) -> dict[int, list[tuple[int, flint.fmpq]]]:
    out: dict[int, list] = {}
    for i, j, v in m.nonzero():
        out.setdefault(j, []).append((i, v))
    return out


def _nz_by_row(m: Matrix) -> dict[int, list[tuple[int, flint.fmpq]]]:
    out: dict[int, list] = {}
    for i, j, v in m.nonzero():
        out.setdefault(i, []).append((j, v))
    return out


class _MapSpace:
    """Coordinates for degreewise maps ``X^n -> Y^{n+r}``."""

    def __init__(self, X: ProjComplex, Y: ProjComplex, r: int):
        A = X.algebra
        self.X, self.Y, self.r, self.A = X, Y, r, A
        self.keys: list[tuple[int, int, int, int]] = []
        for n in X.degrees:
            src, tgt = X.term(n), Y.term(n + r)
            for x in range(A.dim):
                t, s = A.sides[x]
                for i in range(tgt[t - 1]):
                    for j in range(src[s - 1]):
                        self.keys.append((n, x, i, j))
        self.index = {k: c for c, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def to_maps(self, vec: Mapping[int, Fraction]) -> dict[int, ProjMap]:
        A, X, Y, r = self.A, self.X, self.Y, self.r
        mats: dict[tuple[int, int], flint.fmpq_mat] = {}
        for c, v in vec.items():
            if not v:
                continue
            n, x, i, j = self.keys[c]
            if (n, x) not in mats:
                t, s = A.sides[x]
                mats[(n, x)] = flint.fmpq_mat(Y.term(n + r)[t - 1], X.term(n)[s - 1])
            v = Fraction(v)
            mats[(n, x)][i, j] = flint.fmpq(v.numerator, v.denominator)
        out = {}
        for n in X.degrees:
            comps = {x: Matrix(m) for (k, x), m in mats.items() if k == n}
            out[n] = ProjMap(A, X.term(n), Y.term(n + r), comps)
        return out

    def to_vec(self, maps: Mapping[int, ProjMap]) -> dict[int, Fraction]:
        vec = {}
        for n, m in maps.items():
            for x, M in m.comps.items():
                for i, j, v in M.nonzero():
                    key = (n, x, i, j)
                    if key not in self.index:
                        raise ValueError("map outside the degree range")
                    vec[self.index[key]] = Fraction(int(v.p), int(v.q))
        return vec


def _left_images(A, D: ProjMap, x: int, i: int, j: int, n_out: int, sgn: int, acc_key, out: dict):
    """Add ``sgn * D ∘ (x at (i, j))`` to ``out`` keyed by ``acc_key(n, z, row, j)``."""
    t = A.sides[x][0]
    for y, M in D.comps.items():
        if A.sides[y][1] != t:
            continue
        prod = A.table.get((y, x))
        if not prod:
            continue
        col = _col_cache(M).get(i)
        if not col:
            continue
        for z, c in prod.items():
            for k, v in col:
                key = acc_key(n_out, z, k, j)
                out[key] = out.get(key, 0) + sgn * c * v


def _right_images(A, D: ProjMap, x: int, i: int, j: int, n_out: int, sgn: int, acc_key, out: dict):
    """Add ``sgn * (x at (i, j)) ∘ D`` to ``out``."""
    s = A.sides[x][1]
    for w, M in D.comps.items():
        if A.sides[w][0] != s:
            continue
        prod = A.table.get((x, w))
        if not prod:
            continue
        row = _row_cache(M).get(j)
        if not row:
            continue
        for z, c in prod.items():
            for l, v in row:
                key = acc_key(n_out, z, i, l)
                out[key] = out.get(key, 0) + sgn * c * v


_COLS: dict[int, tuple[Matrix, dict]] = {}
_ROWS: dict[int, tuple[Matrix, dict]] = {}


def _col_cache(M: Matrix) -> dict:
    hit = _COLS.get(id(M))
    if hit is not None and hit[0] is M:
        return hit[1]
    if len(_COLS) > 4096:
        _COLS.clear()
    d = {k: [(i, Fraction(int(v.p), int(v.q))) for i, v in lst] for k, lst in _nz_by_col(M).items()}
    _COLS[id(M)] = (M, d)
    return d


def _row_cache(M: Matrix) -> dict:
    hit = _ROWS.get(id(M))
    if hit is not None and hit[0] is M:
        return hit[1]
    if len(_ROWS) > 4096:
        _ROWS.clear()
    d = {k: [(j, Fraction(int(v.p), int(v.q))) for j, v in lst] for k, lst in _nz_by_row(M).items()}
    _ROWS[id(M)] = (M, d)
    return d


def _constraint_images(F: _MapSpace) -> list[dict]:
    """Image of each coordinate under ``f -> (-1)^r d_Y f - f d_X``."""
    X, Y, r, A = F.X, F.Y, F.r, F.A
    sgn = _sgn(r)
    key = lambda n, z, a, b: (n, z, a, b)  # noqa: E731
    out = []
    for (n, x, i, j) in F.keys:
        img: dict = {}
        _left_images(A, Y.diff(n + r), x, i, j, n, sgn, key, img)
        _right_images(A, X.diff(n - 1), x, i, j, n - 1, -1, key, img)
        out.append({k: v for k, v in img.items() if v})
    return out


def _homotopy_images(F: _MapSpace, H: _MapSpace) -> list[dict]:
    """Image of each homotopy coordinate in the coordinates of ``F``."""
    X, Y, r, A = F.X, F.Y, F.r, F.A
    sgn = _sgn(r)
    idx = F.index
    key = lambda n, z, a, b: idx[(n, z, a, b)]  # noqa: E731
    out = []
    for (n, x, i, j) in H.keys:
        img: dict = {}
        _left_images(A, Y.diff(n + r - 1), x, i, j, n, sgn, key, img)
        _right_images(A, X.diff(n - 1), x, i, j, n - 1, 1, key, img)
        out.append({k: v for k, v in img.items() if v})
    return out


def _generic_dims(X: ProjComplex, Y: ProjComplex, r: int) -> tuple[int, int, int]:
    F = _MapSpace(X, Y, r)
    if len(F) == 0:
        return 0, 0, 0
    H = _MapSpace(X, Y, r - 1)
    Z = len(F) - sparse_rank(_constraint_images(F))
    B = sparse_rank(_homotopy_images(F, H)) if len(H) else 0
    return Z, B, Z - B


# -- two-term fast path ---------------------------------------------------------


def alpha_data(X: ProjComplex):
    """``(a, b, [D_1..D_p])`` if X is ``P_1^a -> P_2^b`` in degrees -1, 0
    (differential ``Σ α_k D_k``), else None."""
    A = X.algebra
    if X.is_zero():
        return None
    if X.lo < -1 or X.hi > 0:
        return None
    a1, b1 = X.term(-1)
    a0, b0 = X.term(0)
    if b1 or a0:
        return None
    d = X.diff(-1)
    D = [d.comp(A.alpha(k)) for k in range(A.p)]
    return a1, b0, D


def beta_data(X: ProjComplex):
    """``(a, b, ...)`` if X is ``P_2^a -> P_1^b`` in degrees -1, 0."""
    if X.is_zero() or X.lo < -1 or X.hi > 0:
        return None
    a1, b1 = X.term(-1)
    a0, b0 = X.term(0)
    if a1 or b0:
        return None
    return b1, a0


def kronecker_hom_dim(phiV, phiW, aV: int, bV: int, aW: int, bW: int) -> int:
    """See :func:`lambdapq.kronecker.hom_dim`."""
    return kronecker.hom_dim(phiV, phiW, aV, bV, aW, bW)


def _alpha_dims(dx, dy, r: int, A: TwoVertexAlgebra) -> tuple[int, int, int]:
    aX, bX, DX = dx
    aY, bY, DY = dy
    p, q = A.p, A.q
    if abs(r) >= 2:
        return 0, 0, 0
    rkY = rank(Matrix.vstack(DY)) if aY and bY else 0
    if r == -1:
        h = q * bX * (aY - rkY)
        return h, 0, h
    K = kronecker_hom_dim(DX, DY, aX, bX, aY, bY)
    if r == 0:
        B = q * bX * rkY
        hom = K + p * q * bX * bY - B
        return hom + B, B, hom
    Z = p * aX * bY
    hom = Z - aX * aY - bX * bY + K
    return Z, Z - hom, hom


def hom_complex_dims(X: ProjComplex, Y: ProjComplex, r: int = 0, generic: bool = False) -> tuple[int, int, int]:
    """``(dim chain maps X -> Y[r], dim null-homotopic ones, dim Hom_K)``."""
    if X.algebra != Y.algebra:
        raise ValueError("complexes over different algebras")
    if X.is_zero() or Y.is_zero():
        return 0, 0, 0
    if not generic:
        dx, dy = alpha_data(X), alpha_data(Y)
        if dx is not None and dy is not None:
            return _alpha_dims(dx, dy, r, X.algebra)
        if beta_data(X) is not None and beta_data(Y) is not None:
            Xt = shift(transpose_to_opposite(X), 1)
            Yt = shift(transpose_to_opposite(Y), 1)
            return hom_complex_dims(Yt, Xt, r)
    return _generic_dims(X, Y, r)


def hom_dim(X: ProjComplex, Y: ProjComplex, r: int = 0) -> int:
    return hom_complex_dims(X, Y, r)[2]


# -- explicit Hom bases ---------------------------------------------------------


class _Reducer:
    """Incremental echelon form whose rows carry coordinate tags.

    Every stored row has its pivot as its smallest key, so a vector is reduced
    in one pass over its keys in increasing order.
    """

    def __init__(self):
        self.pivots: dict[int, tuple[dict, dict]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Mapping, tag: Mapping | None = None):
        v = {k: Fraction(x) for k, x in v.items() if x}
        tag = dict(tag or {})
        heap = list(v)
        heapq.heapify(heap)
        done = -1
        while heap:
            k = heapq.heappop(heap)
            if k <= done:
                continue
            done = k
            c = v.get(k)
            if not c:
                continue
            hit = self.pivots.get(k)
            if hit is None:
                continue
            row, rtag = hit
            f = c / row[k]
            for kk, x in row.items():
                nv = v.get(kk, 0) - f * x
                if nv:
                    if kk not in v:
                        heapq.heappush(heap, kk)
                    v[kk] = nv
                else:
                    v.pop(kk, None)
            for kk, x in rtag.items():
                nv = tag.get(kk, 0) - f * x
                if nv:
                    tag[kk] = nv
                else:
                    tag.pop(kk, None)
        return v, tag

    def add(self, v: Mapping, tag: Mapping | None = None) -> bool:
        v, tag = self.reduce(v, tag)
        if not v:
            return False
        self.pivots[min(v)] = (v, tag)
        return True


class HomSpace:
    """``Hom_K(X, Y[r])`` with a basis of chain-map representatives.

    Coordinates of an arbitrary chain map in this basis come from
    :meth:`coords`, which reduces modulo null-homotopic maps.
    """

    def __init__(self, X: ProjComplex, Y: ProjComplex, r: int = 0):
        if X.algebra != Y.algebra:
            raise ValueError("complexes over different algebras")
        self.X, self.Y, self.r = X, Y, r
        F = _MapSpace(X, Y, r)
        self._F = F
        red = _Reducer()
        if len(F):
            H = _MapSpace(X, Y, r - 1)
            if len(H):
                for img in _homotopy_images(F, H):
                    red.add(img)
            eqs: dict = {}
            for c, img in enumerate(_constraint_images(F)):
                for k, v in img.items():
                    eqs.setdefault(k, {})[c] = v
            Zb = sparse_nullspace(list(eqs.values()), len(F))
        else:
            Zb = []
        self.basis_vectors: list[dict] = []
        for z in Zb:
            k = len(self.basis_vectors)
            if red.add(z, {k: Fraction(1)}):
                self.basis_vectors.append(z)
        self._red = red
        self.null_dim = len(red) - len(self.basis_vectors)

    @property
    def dim(self) -> int:
        return len(self.basis_vectors)

    def map(self, k: int) -> ChainMap:
        return ChainMap(self.X, self.Y, self.r, self._F.to_maps(self.basis_vectors[k]))

    @cached_property
    def basis(self) -> list[ChainMap]:
        return [self.map(k) for k in range(self.dim)]

    def combination(self, coeffs: Sequence) -> ChainMap:
        vec: dict = {}
        for c, b in zip(coeffs, self.basis_vectors):
            if c:
                for k, v in b.items():
                    vec[k] = vec.get(k, 0) + Fraction(c) * v
        return ChainMap(self.X, self.Y, self.r, self._F.to_maps(vec))

    def sparse_coords(self, f: ChainMap) -> dict[int, Fraction]:
        """Nonzero coordinates of the homotopy class of ``f`` in :attr:`basis`."""
        v = self._F.to_vec(f.maps)
        rest, tag = self._red.reduce(v, {})
        if rest:
            raise ValueError("map is not a chain map into this Hom space")
        return {k: -c for k, c in tag.items() if 0 <= k < self.dim}

    def coords(self, f: ChainMap) -> list[Fraction]:
        """Coordinates of the homotopy class of ``f`` in :attr:`basis`."""
        co = self.sparse_coords(f)
        return [co.get(k, Fraction(0)) for k in range(self.dim)]


def hom_space(X: ProjComplex, Y: ProjComplex, r: int = 0) -> HomSpace:
    return HomSpace(X, Y, r)


# -- endomorphism algebras -------------------------------------------------------


def end_algebra_of(summands: Sequence[ProjComplex]) -> tuple[FDAlgebra, list[list[HomSpace]]]:
    """``End_K(⊕ X_i)`` with idempotents the summand identities.

    Basis: concatenation over ``(i, j)`` of bases of ``Hom_K(X_j, X_i)``
    (maps from summand j to summand i, i.e. the piece ``e_i End e_j``).
    """
    n = len(summands)
    H = [[HomSpace(summands[j], summands[i], 0) for j in range(n)] for i in range(n)]
    offsets = {}
    labels = []
    for i in range(n):
        for j in range(n):
            offsets[(i, j)] = len(labels)
            labels += [f"h{i}{j}_{k}" for k in range(H[i][j].dim)]
    table: dict = {}
    for i in range(n):
        for j in range(n):
            for l in range(n):
                # (j -> i) ∘ (l -> j) lands in Hom(X_l, X_i)
                Hij, Hjl, Hil = H[i][j], H[j][l], H[i][l]
                for a in range(Hij.dim):
                    ga = Hij.basis[a]
                    for b in range(Hjl.dim):
                        fb = Hjl.basis[b]
                        co = Hil.sparse_coords(ga.compose(fb))
                        d = {offsets[(i, l)] + k: c for k, c in co.items()}
                        if d:
                            table[(offsets[(i, j)] + a, offsets[(j, l)] + b)] = d
    idem = []
    for i in range(n):
        e = [Fraction(0)] * len(labels)
        co = H[i][i].coords(ChainMap.identity(summands[i]))
        for k, c in enumerate(co):
            e[offsets[(i, i)] + k] = c
        idem.append(e)
    return FDAlgebra(labels, table, idem), H


def end_dims(X: ProjComplex) -> int:
    return hom_dim(X, X, 0)


def is_indecomposable(X: ProjComplex) -> bool:
    """True iff ``End_K(X)`` modulo its radical is one-dimensional."""
    if X.is_zero():
        raise ValueError("the zero complex is not indecomposable")
    if end_dims(X) == 1:
        return True
    E, _ = end_algebra_of([X])
    return E.dim - E.radical().cols == 1


def _invert_unit(phi: ProjMap) -> ProjMap:
    """Inverse of ``P -> P`` whose idempotent part is invertible (the rest is
    radical, hence nilpotent of order at most three)."""
    A = phi.algebra
    S = ProjMap(A, phi.tgt, phi.src,
                {e: Matrix(phi.comp(e).flint.inv()) for e in (0, 1) if phi.src[e]})
    N = ProjMap(A, phi.src, phi.tgt, {x: m for x, m in phi.comps.items() if x > 1})
    out = term = S
    step = -(N @ S)
    for _ in range(3):
        term = term @ step
        if term.is_zero():
            break
        out = out + term
    return out


def _lift_idempotent(f: ChainMap) -> ChainMap:
    """Genuine idempotent chain map congruent to ``f`` modulo null-homotopic maps."""
    degs = f.source.degrees
    for _ in range(64):
        f2 = f.compose(f)
        if all(f2.at(n) == f.at(n) for n in degs):
            return f
        f = f2.scale(3) + f2.compose(f).scale(-2)
    raise ArithmeticError("idempotent lifting did not converge")


def _split_term(eps: ProjMap) -> tuple[ProjMap, ProjMap]:
    """``(inc, proj)`` with ``proj∘inc = id`` and ``inc∘proj = eps``."""
    A = eps.algebra
    U, W = {}, {}
    for e in (0, 1):
        if eps.src[e] == 0:
            continue
        B = column_space_basis(eps.comp(e))
        if B.cols:
            U[e] = B
            W[e] = solve(B.T @ B, B.T)
    ranks = tuple(U[e].cols if e in U else 0 for e in (0, 1))
    inc = eps @ ProjMap(A, ranks, eps.tgt, U)
    proj0 = ProjMap(A, eps.src, ranks, W) @ eps
    return inc, _invert_unit(proj0 @ inc) @ proj0


def decompose(X: ProjComplex, seed: int = 0) -> list[ProjComplex]:
    """Indecomposable summands of ``X`` (radical representatives).

    Raises ``ArithmeticError`` if ``End_K/rad`` is bigger than a field but no
    idempotent is found over Q.
    """
    A = X.algebra
    M = minimize(X)
    if M.is_zero():
        return []
    E, H = end_algebra_of([M])
    if E.dim - E.radical().cols <= 1:
        return [M]
    e = find_idempotent(E, seed)
    if e is None:
        raise ArithmeticError("End_K(X)/rad has dimension > 1 but no idempotent splits it over Q")
    f = _lift_idempotent(H[0][0].combination(e))
    parts = []
    for eps in (f, ChainMap.identity(M) + f.scale(-1)):
        inc, proj = {}, {}
        for n in M.degrees:
            inc[n], proj[n] = _split_term(eps.at(n))
        terms = {n: inc[n].src for n in M.degrees}
        diffs = {n: proj[n + 1] @ M.diff(n) @ inc[n] for n in M.degrees if n + 1 in inc}
        parts += decompose(ProjComplex(A, terms, diffs), seed + 1)
    return parts


# -- g-vectors and isomorphism ---------------------------------------------------


def g_vector(X: ProjComplex) -> tuple[int, int]:
    """``(c - a, d - b)`` for a complex equivalent to ``P_1^a ⊕ P_2^b -> P_1^c ⊕ P_2^d``
    in degrees -1, 0."""
    M = X if X.is_radical() else minimize(X)
    if not M.is_zero() and (M.lo < -1 or M.hi > 0):
        raise ValueError(f"not two-term in degrees -1, 0 (range [{M.lo}, {M.hi}])")
    a, b = M.term(-1)
    c, d = M.term(0)
    return c - a, d - b


def is_contractible(X: ProjComplex) -> bool:
    return minimize(X).is_zero()


def iso_in_homotopy(X: ProjComplex, Y: ProjComplex, seed: int = 0, attempts: int = 32) -> bool:
    """Randomized search for ``f: X -> Y`` whose cone is contractible."""
    if X.algebra != Y.algebra:
        return False
    Xm, Ym = minimize(X), minimize(Y)
    if Xm.terms != Ym.terms:
        return False
    if Xm.is_zero():
        return True
    H = HomSpace(Xm, Ym, 0)
    if H.dim == 0:
        return False
    rng = random.Random(seed)
    for _ in range(attempts):
        coeffs = [rng.randint(-3, 3) for _ in range(H.dim)]
        if not any(coeffs):
            continue
        if is_contractible(cone(H.combination(coeffs))):
            return True
    return False


# -- transpose to the opposite algebra ---------------------------------------------


def sigma_index(A: TwoVertexAlgebra, x: int) -> int:
    """Index in Λ^{q,p} of the image of basis element ``x`` under the
    anti-isomorphism ``Λ^{p,q} -> Λ^{q,p}`` swapping the arrow families."""
    B = make_lambda(A.q, A.p)
    if x < 2:
        return x
    if x < 2 + A.p:
        return B.beta(x - 2)
    if x < 2 + A.p + A.q:
        return B.alpha(x - 2 - A.p)
    i, j = divmod(x - 2 - A.p - A.q, A.q)
    return B.ab(j, i)


def transpose_map(d: ProjMap) -> ProjMap:
    A = d.algebra
    B = make_lambda(A.q, A.p)
    return ProjMap(B, d.tgt, d.src, {sigma_index(A, x): m.T for x, m in d.comps.items()})


def transpose_to_opposite(X: ProjComplex) -> ProjComplex:
    """``Hom_Λ(X, Λ)`` read over Λ^{q,p}: degrees negated, blocks transposed."""
    A = X.algebra
    B = make_lambda(A.q, A.p)
    terms = {-n: m for n, m in X.terms.items()}
    diffs = {-n - 1: transpose_map(d) for n, d in X.diffs.items()}
    return ProjComplex(B, terms, diffs, check=False)
