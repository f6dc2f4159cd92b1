"""Finite dimensional algebras by structure constants, and the algebras Λ^{p,q}.

Λ^{p,q} is the path algebra of the quiver with vertices 1, 2, arrows
``α_1..α_p: 1 -> 2`` and ``β_1..β_q: 2 -> 1`` modulo all ``β_j α_i``.
Paths compose right to left, so ``α_i β_j`` (first ``β_j``, then ``α_i``) is a
nonzero element of ``e_2 Λ e_2`` and ``e_2 Λ e_1`` is spanned by the ``α_i``.

Modules are right modules.  The indecomposable projectives are
``P_i = e_i Λ`` and ``Hom(P_i, P_j) = e_j Λ e_i`` acting by left
multiplication.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import flint

from .linalg import Matrix, complement_pivots, nullspace, rank, solve

__all__ = [
    "FDAlgebra",
    "TwoVertexAlgebra",
    "QuiverRep",
    "ModuleMap",
    "make_lambda",
    "cartan_matrix",
    "radical",
    "projective_cover",
    "quasi_hereditary_data",
    "projective_module",
    "injective_module",
    "simple_module",
    "find_idempotent",
]

Table = Mapping[tuple[int, int], Mapping[int, Fraction]]


class FDAlgebra:
    """Finite dimensional algebra given by a basis and sparse structure constants.

    ``table[(i, j)]`` maps ``k`` to the coefficient of basis element ``k`` in
    the product ``b_i * b_j``; missing keys are zero products.
    """

    def __init__(
        self,
        labels: Sequence[str],
        table: Table,
        idempotents: Sequence[Sequence[Fraction]],
        check: bool = True,
    ):
        self.labels = tuple(labels)
        self.table = {k: dict(v) for k, v in table.items() if v}
        self.idempotents = tuple(tuple(Fraction(x) for x in e) for e in idempotents)
        if check:
            self.check()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def basis_vector(self, i: int) -> tuple[Fraction, ...]:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return tuple(v)

    def mult(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.dim
        xs = [(i, c) for i, c in enumerate(x) if c]
        ys = [(j, c) for j, c in enumerate(y) if c]
        for i, a in xs:
            for j, b in ys:
                prod = self.table.get((i, j))
                if prod:
                    ab = a * b
                    for k, c in prod.items():
                        out[k] += ab * c
        return tuple(out)

    @cached_property
    def unit(self) -> tuple[Fraction, ...]:
        u = [Fraction(0)] * self.dim
        for e in self.idempotents:
            for k, c in enumerate(e):
                u[k] += c
        return tuple(u)

    def check(self) -> None:
        """Verify associativity on all basis triples and the idempotent data.

        Only triples where one side can be nonzero are visited; on every other
        triple both sides vanish.
        """
        by_left: dict[int, list] = {}
        for (i, j), prod in self.table.items():
            by_left.setdefault(i, []).append((j, prod))
        triples = set()
        for (i, j), prod in self.table.items():
            for m in prod:
                for k, _ in by_left.get(m, ()):
                    triples.add((i, j, k))
            for k, _ in by_left.get(j, ()):
                triples.add((i, j, k))
        for i, j, k in triples:
            left: dict[int, Fraction] = {}
            for m, c in self.table.get((i, j), {}).items():
                for t, d in self.table.get((m, k), {}).items():
                    left[t] = left.get(t, 0) + c * d
            right: dict[int, Fraction] = {}
            for m, c in self.table.get((j, k), {}).items():
                for t, d in self.table.get((i, m), {}).items():
                    right[t] = right.get(t, 0) + c * d
            left = {t: c for t, c in left.items() if c}
            right = {t: c for t, c in right.items() if c}
            if left != right:
                raise ValueError(f"not associative on basis triple {(i, j, k)}")
        es = self.idempotents
        for a, e in enumerate(es):
            for b, f in enumerate(es):
                ef = self.mult(e, f)
                want = e if a == b else tuple(Fraction(0) for _ in e)
                if ef != want:
                    raise ValueError("idempotents are not pairwise orthogonal")
        for i in range(self.dim):
            b = self.basis_vector(i)
            if self.mult(self.unit, b) != b or self.mult(b, self.unit) != b:
                raise ValueError("idempotents do not sum to the unit")

    def trace_form(self) -> Matrix:
        """Gram matrix of ``(x, y) -> tr(L_x L_y) = tr(L_{xy})``."""
        n = self.dim
        tr = [Fraction(0)] * n
        for (i, j), prod in self.table.items():
            c = prod.get(j)
            if c:
                tr[i] += c
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), prod in self.table.items():
            s = sum((c * tr[k] for k, c in prod.items()), Fraction(0))
            rows[i][j] = s
        return Matrix.from_rows(rows, n)

    def radical(self) -> Matrix:
        """Columns form a basis of the Jacobson radical (characteristic zero)."""
        if self.dim == 0:
            return Matrix.zeros(0, 0)
        return nullspace(self.trace_form())

    def span_products(self, X: Matrix, Y: Matrix) -> Matrix:
        """Columns spanning ``span{x y}`` for columns ``x`` of X and ``y`` of Y."""
        xs = [X.submatrix(range(X.rows), [c]).entries for c in range(X.cols)]
        ys = [Y.submatrix(range(Y.rows), [c]).entries for c in range(Y.cols)]
        cols = [self.mult(x, y) for x in xs for y in ys]
        if not cols:
            return Matrix.zeros(self.dim, 0)
        return Matrix.from_rows(cols, self.dim).T

    def opposite(self) -> "FDAlgebra":
        table = {(j, i): v for (i, j), v in self.table.items()}
        return FDAlgebra(self.labels, table, self.idempotents, check=False)


class TwoVertexAlgebra(FDAlgebra):
    """The algebra Λ^{p,q}.

    Basis order: ``e1, e2, α_1..α_p, β_1..β_q, α_1β_1, α_1β_2, ..., α_pβ_q``.
    """

    def __init__(self, p: int, q: int):
        if p < 0 or q < 0:
            raise ValueError("p and q must be non-negative")
        if p + q == 0:
            raise ValueError("Λ^{0,0} is semisimple; p + q must be at least 1")
        self.p, self.q = p, q
        labels = ["e1", "e2"]
        labels += [f"a{i + 1}" for i in range(p)]
        labels += [f"b{j + 1}" for j in range(q)]
        labels += [f"a{i + 1}b{j + 1}" for i in range(p) for j in range(q)]
        one = Fraction(1)
        t: dict[tuple[int, int], dict[int, Fraction]] = {}
        E1, E2 = 0, 1
        t[(E1, E1)] = {E1: one}
        t[(E2, E2)] = {E2: one}
        for i in range(p):
            a = self.alpha(i)
            t[(E2, a)] = {a: one}
            t[(a, E1)] = {a: one}
            for j in range(q):
                t[(a, self.beta(j))] = {self.ab(i, j): one}
        for j in range(q):
            b = self.beta(j)
            t[(E1, b)] = {b: one}
            t[(b, E2)] = {b: one}
        for i in range(p):
            for j in range(q):
                x = self.ab(i, j)
                t[(E2, x)] = {x: one}
                t[(x, E2)] = {x: one}
        n = len(labels)
        e1 = [Fraction(0)] * n
        e2 = [Fraction(0)] * n
        e1[E1] = one
        e2[E2] = one
        super().__init__(labels, t, [e1, e2], check=True)

    # basis indices (0-based arrow indices)
    def alpha(self, i: int) -> int:
        return 2 + i

    def beta(self, j: int) -> int:
        return 2 + self.p + j

    def ab(self, i: int, j: int) -> int:
        return 2 + self.p + self.q + i * self.q + j

    @cached_property
    def sides(self) -> tuple[tuple[int, int], ...]:
        """``(t, s)`` for each basis element ``x = e_t x e_s``."""
        out = [(1, 1), (2, 2)]
        out += [(2, 1)] * self.p
        out += [(1, 2)] * self.q
        out += [(2, 2)] * (self.p * self.q)
        return tuple(out)

    def piece(self, t: int, s: int) -> list[int]:
        """Basis indices spanning ``e_t Λ e_s``."""
        return [k for k, ts in enumerate(self.sides) if ts == (t, s)]

    def hom_basis(self, i: int, j: int) -> list[int]:
        """Basis of ``Hom(P_i, P_j) = e_j Λ e_i``."""
        return self.piece(j, i)

    def projective_dim(self, i: int) -> int:
        return len(self.piece(i, 1)) + len(self.piece(i, 2))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TwoVertexAlgebra) and (self.p, self.q) == (other.p, other.q)

    def __hash__(self) -> int:
        return hash(("Lambda", self.p, self.q))

    def __repr__(self) -> str:
        return f"Λ^{{{self.p},{self.q}}}"

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q}


_CACHE: dict[tuple[int, int], TwoVertexAlgebra] = {}


def make_lambda(p: int, q: int) -> TwoVertexAlgebra:
    """Return Λ^{p,q} (cached; instances are immutable)."""
    key = (p, q)
    if key not in _CACHE:
        _CACHE[key] = TwoVertexAlgebra(p, q)
    return _CACHE[key]


def cartan_matrix(A: TwoVertexAlgebra) -> list[list[int]]:
    """Entry ``(i, j)`` is ``dim e_i Λ e_j``."""
    return [[len(A.piece(i, j)) for j in (1, 2)] for i in (1, 2)]


def radical(A: FDAlgebra) -> Matrix:
    """Basis (columns) of the Jacobson radical of ``A``."""
    return A.radical()


# -- right modules ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuiverRep:
    """Right Λ^{p,q}-module ``M = M e_1 ⊕ M e_2``.

    ``alpha[i]`` is the matrix of ``m -> m α_i`` from ``M e_2`` to ``M e_1``
    (shape ``n1 x n2``) and ``beta[j]`` that of ``m -> m β_j`` from ``M e_1`` to
    ``M e_2``; right-module relations force ``alpha[i] @ beta[j] == 0``.
    """

    algebra: TwoVertexAlgebra
    n1: int
    n2: int
    alpha: tuple[Matrix, ...]
    beta: tuple[Matrix, ...]
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        A = self.algebra
        if len(self.alpha) != A.p or len(self.beta) != A.q:
            raise ValueError("wrong number of arrow matrices")
        for m in self.alpha:
            if m.shape != (self.n1, self.n2):
                raise ValueError("alpha action has wrong shape")
        for m in self.beta:
            if m.shape != (self.n2, self.n1):
                raise ValueError("beta action has wrong shape")
        for a in self.alpha:
            for b in self.beta:
                if not (a @ b).is_zero():
                    raise ValueError("relation beta_j alpha_i = 0 violated")

    @property
    def dim_vector(self) -> tuple[int, int]:
        return self.n1, self.n2

    @property
    def dim(self) -> int:
        return self.n1 + self.n2

    def is_zero(self) -> bool:
        return self.dim == 0

    def size(self, v: int) -> int:
        return self.n1 if v == 1 else self.n2

    def act(self, x: int) -> tuple[int, int, Matrix]:
        """``(from_vertex, to_vertex, matrix)`` of ``m -> m b_x``."""
        A = self.algebra
        t, s = A.sides[x]
        if x in (0, 1):
            return t, s, Matrix.identity(self.size(t))
        if x < 2 + A.p:
            return 2, 1, self.alpha[x - 2]
        if x < 2 + A.p + A.q:
            return 1, 2, self.beta[x - 2 - A.p]
        k = x - 2 - A.p - A.q
        i, j = divmod(k, A.q)
        return 2, 2, self.beta[j] @ self.alpha[i]

    def radical_images(self, v: int) -> Matrix:
        """Columns spanning ``(M J) e_v``."""
        A = self.algebra
        blocks = []
        if v == 1:
            blocks = list(self.alpha)
        else:
            blocks = list(self.beta)
        blocks = [b for b in blocks if b.cols]
        if not blocks:
            return Matrix.zeros(self.size(v), 0)
        return Matrix.hstack(blocks)

    @staticmethod
    def direct_sum(mods: Sequence["QuiverRep"], algebra: TwoVertexAlgebra) -> "QuiverRep":
        n1 = sum(m.n1 for m in mods)
        n2 = sum(m.n2 for m in mods)
        alpha = []
        for i in range(algebra.p):
            alpha.append(_block_diag([m.alpha[i] for m in mods], n1, n2))
        beta = []
        for j in range(algebra.q):
            beta.append(_block_diag([m.beta[j] for m in mods], n2, n1))
        return QuiverRep(algebra, n1, n2, tuple(alpha), tuple(beta))


def _block_diag(blocks: Sequence[Matrix], rows: int, cols: int) -> Matrix:
    import flint

    out = flint.fmpq_mat(rows, cols)
    r0 = c0 = 0
    for b in blocks:
        for i, j, v in b.nonzero():
            out[r0 + i, c0 + j] = v
        r0 += b.rows
        c0 += b.cols
    return Matrix(out)


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """Right-module map given vertexwise: ``f1: M e_1 -> N e_1``, ``f2`` likewise."""

    source: QuiverRep
    target: QuiverRep
    f1: Matrix
    f2: Matrix

    def check(self) -> None:
        M, N = self.source, self.target
        for i in range(M.algebra.p):
            if self.f1 @ M.alpha[i] != N.alpha[i] @ self.f2:
                raise ValueError("module map does not commute with alpha")
        for j in range(M.algebra.q):
            if self.f2 @ M.beta[j] != N.beta[j] @ self.f1:
                raise ValueError("module map does not commute with beta")

    def part(self, v: int) -> Matrix:
        return self.f1 if v == 1 else self.f2

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self ∘ other``."""
        return ModuleMap(other.source, self.target, self.f1 @ other.f1, self.f2 @ other.f2)


def submodule(M: QuiverRep, emb1: Matrix, emb2: Matrix) -> tuple[QuiverRep, ModuleMap]:
    """Module structure on the subspace with basis columns ``emb1``, ``emb2``."""
    A = M.algebra
    alpha = tuple(solve(emb1, M.alpha[i] @ emb2) if emb1.cols else Matrix.zeros(0, emb2.cols)
                  for i in range(A.p))
    beta = tuple(solve(emb2, M.beta[j] @ emb1) if emb2.cols else Matrix.zeros(0, emb1.cols)
                 for j in range(A.q))
    alpha = tuple(a if a.rows == emb1.cols else Matrix.zeros(emb1.cols, emb2.cols) for a in alpha)
    beta = tuple(b if b.rows == emb2.cols else Matrix.zeros(emb2.cols, emb1.cols) for b in beta)
    K = QuiverRep(A, emb1.cols, emb2.cols, alpha, beta)
    return K, ModuleMap(K, M, emb1, emb2)


def kernel(f: ModuleMap) -> tuple[QuiverRep, ModuleMap]:
    """Kernel of a module map with its embedding into the source."""
    return submodule(f.source, _null(f.f1, f.source.n1), _null(f.f2, f.source.n2))


def _null(m: Matrix, n: int) -> Matrix:
    if m.rows == 0:
        return Matrix.identity(n)
    return nullspace(m)


# -- projective, injective and simple modules --------------------------------


def _module_from_basis(A: TwoVertexAlgebra, basis1: list, basis2: list, action) -> QuiverRep:
    """Build a module whose vertex bases are given; ``action(x, b)`` returns a
    coefficient dict over the same labels for ``b · x``."""
    pos1 = {b: k for k, b in enumerate(basis1)}
    pos2 = {b: k for k, b in enumerate(basis2)}
    alpha = []
    for i in range(A.p):
        rows = [[Fraction(0)] * len(basis2) for _ in basis1]
        for c, b in enumerate(basis2):
            for lab, v in action(A.alpha(i), b).items():
                rows[pos1[lab]][c] += v
        alpha.append(Matrix.from_rows(rows, len(basis2)) if basis1 else Matrix.zeros(0, len(basis2)))
    beta = []
    for j in range(A.q):
        rows = [[Fraction(0)] * len(basis1) for _ in basis2]
        for c, b in enumerate(basis1):
            for lab, v in action(A.beta(j), b).items():
                rows[pos2[lab]][c] += v
        beta.append(Matrix.from_rows(rows, len(basis1)) if basis2 else Matrix.zeros(0, len(basis1)))
    return QuiverRep(A, len(basis1), len(basis2), tuple(alpha), tuple(beta),
                     labels=(tuple(basis1), tuple(basis2)))


def projective_module(A: TwoVertexAlgebra, i: int) -> QuiverRep:
    """``P_i = e_i Λ`` with basis the algebra basis elements of ``e_i Λ e_v``."""
    basis1 = A.piece(i, 1)
    basis2 = A.piece(i, 2)

    def action(x, b):
        prod = A.table.get((b, x), {})
        return dict(prod)

    return _module_from_basis(A, basis1, basis2, action)


def injective_module(A: TwoVertexAlgebra, i: int) -> QuiverRep:
    """``I_i = D(Λ e_i)``; basis dual to the basis of ``e_v Λ e_i``.

    ``(f · x)(y) = f(x y)``.
    """
    basis1 = A.piece(1, i)
    basis2 = A.piece(2, i)

    def action(x, u):
        # f_u · x sends y to coeff_u(x y); express in the dual basis {f_w}
        out = {}
        for w in basis1 + basis2:
            c = A.table.get((x, w), {}).get(u)
            if c:
                out[w] = out.get(w, 0) + c
        return out

    return _module_from_basis(A, basis1, basis2, action)


def simple_module(A: TwoVertexAlgebra, i: int) -> QuiverRep:
    n1, n2 = (1, 0) if i == 1 else (0, 1)
    return QuiverRep(
        A, n1, n2,
        tuple(Matrix.zeros(n1, n2) for _ in range(A.p)),
        tuple(Matrix.zeros(n2, n1) for _ in range(A.q)),
    )


# -- projective covers ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProjectiveCover:
    """Surjection ``P_1^a ⊕ P_2^b -> M`` and its kernel.

    ``generators`` lists ``(vertex, vector in M e_vertex)``; P_1 copies first.
    """

    multiplicities: tuple[int, int]
    generators: tuple[tuple[int, Matrix], ...]
    surjection: ModuleMap
    kernel: QuiverRep
    kernel_embedding: ModuleMap


def projective_sum(A: TwoVertexAlgebra, a: int, b: int) -> tuple[QuiverRep, list, list]:
    """Module ``P_1^a ⊕ P_2^b`` and, per vertex, labels ``(summand, basis index)``."""
    mods = [projective_module(A, 1)] * a + [projective_module(A, 2)] * b
    M = QuiverRep.direct_sum(mods, A)
    lab1, lab2 = [], []
    for s, P in enumerate(mods):
        lab1 += [(s, x) for x in P.labels[0]]
        lab2 += [(s, x) for x in P.labels[1]]
    return M, lab1, lab2


def _element_times(M: QuiverRep, v: int, m: Matrix, x: int) -> tuple[int, Matrix]:
    t, s, mat = M.act(x)
    assert t == v
    return s, mat @ m


def cover_map(M: QuiverRep, gens: Sequence[tuple[int, Matrix]]) -> tuple[QuiverRep, ModuleMap, tuple[int, int]]:
    """Map ``⊕ P_{v} -> M`` sending the generator of each summand to ``gens``."""
    A = M.algebra
    gens = sorted(gens, key=lambda g: g[0])
    a = sum(1 for g in gens if g[0] == 1)
    b = len(gens) - a
    P, lab1, lab2 = projective_sum(A, a, b)
    cols = {1: [], 2: []}
    for v, labs in ((1, lab1), (2, lab2)):
        for s, x in labs:
            gv, g = gens[s]
            tgt, img = _element_times(M, gv, g, x)
            assert tgt == v
            cols[v].append(img)
    f1 = Matrix.hstack(cols[1]) if cols[1] else Matrix.zeros(M.n1, 0)
    f2 = Matrix.hstack(cols[2]) if cols[2] else Matrix.zeros(M.n2, 0)
    return P, ModuleMap(P, M, f1, f2), (a, b)


def top_generators(M: QuiverRep, extra: Mapping[int, Matrix] | None = None) -> list[tuple[int, Matrix]]:
    """Vectors whose classes form a basis of ``M / (M J + S)``.

    ``extra[v]`` (columns) spans the vertex-``v`` part of a submodule ``S``.
    """
    gens = []
    for v in (1, 2):
        n = M.size(v)
        if n == 0:
            continue
        span = M.radical_images(v)
        if extra is not None and extra.get(v) is not None and extra[v].cols:
            span = Matrix.hstack([span, extra[v]]) if span.cols else extra[v]
        for k in complement_pivots(span) if span.cols else range(n):
            e = Matrix.zeros(n, 1)
            e = Matrix.from_flat(n, 1, [1 if r == k else 0 for r in range(n)])
            gens.append((v, e))
    return gens


def projective_cover(R: QuiverRep, A: TwoVertexAlgebra | None = None) -> ProjectiveCover:
    """Projective cover of a nonzero module and its kernel (first syzygy)."""
    if R.is_zero():
        raise ValueError("the zero module has no projective cover")
    gens = top_generators(R)
    P, surj, mult = cover_map(R, gens)
    K, emb = kernel(surj)
    return ProjectiveCover(mult, tuple(gens), surj, K, emb)


def quasi_hereditary_data(A: TwoVertexAlgebra) -> dict[str, list[tuple[int, int]]]:
    """Dimension vectors of the standard ``(S_2, P_1)`` and costandard
    ``(I_1, S_2)`` modules, computed from the modules themselves."""
    S2 = simple_module(A, 2).dim_vector
    P1 = projective_module(A, 1).dim_vector
    I1 = injective_module(A, 1).dim_vector
    return {"standard": [S2, P1], "costandard": [I1, S2]}


# -- idempotents ---------------------------------------------------------------


def _poly_eval(E: FDAlgebra, coeffs: Sequence[Fraction], x: Sequence[Fraction]) -> tuple:
    acc = tuple(Fraction(0) for _ in range(E.dim))
    for c in reversed(coeffs):
        acc = E.mult(acc, x)
        acc = tuple(u + c * e for u, e in zip(acc, E.unit))
    return acc


def _min_poly(E: FDAlgebra, x) -> flint.fmpq_poly:
    powers = [E.unit]
    while True:
        nxt = E.mult(powers[-1], x)
        M = Matrix.from_rows(powers, E.dim).T
        try:
            c = solve(M, Matrix.column(nxt))
        except ArithmeticError:
            powers.append(nxt)
            continue
        coeffs = [-c[k, 0] for k in range(len(powers))] + [Fraction(1)]
        return flint.fmpq_poly([flint.fmpq(v.numerator, v.denominator) for v in coeffs])


def find_idempotent(E: FDAlgebra, seed: int = 0):
    """A nontrivial idempotent of ``E`` as a coefficient tuple, or None.

    Splits the minimal polynomial of a random element, then lifts the
    resulting approximate idempotent by ``e -> 3e^2 - 2e^3``.
    """
    rng = random.Random(seed)
    for _ in range(24):
        x = tuple(Fraction(rng.randint(-4, 4)) for _ in range(E.dim))
        mp = _min_poly(E, x)
        _c, facs = mp.factor()
        if len(facs) < 2:
            continue
        f1 = facs[0][0] ** facs[0][1]
        rest = mp // f1
        # u ≡ 1 mod f1, u ≡ 0 mod rest
        _g, _s, t = _xgcd(f1, rest)
        u = (t * rest) % mp
        coeffs = [Fraction(int(c.p), int(c.q)) for c in u.coeffs()]
        e = _poly_eval(E, coeffs, x)
        for _ in range(64):
            e2 = E.mult(e, e)
            if e2 == e:
                if any(e) and tuple(e) != tuple(E.unit):
                    return e
                break
            e3 = E.mult(e2, e)
            e = tuple(3 * a - 2 * b for a, b in zip(e2, e3))
    return None


def _xgcd(a: flint.fmpq_poly, b: flint.fmpq_poly):
    r0, r1 = a, b
    s0, s1 = flint.fmpq_poly([1]), flint.fmpq_poly([0])
    t0, t1 = flint.fmpq_poly([0]), flint.fmpq_poly([1])
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lc = r0.coeffs()[-1]
    return r0 / lc, s0 / lc, t0 / lc
