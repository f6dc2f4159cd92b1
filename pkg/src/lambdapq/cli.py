"""Command-line interface.

    lambdapq algebra P Q
    lambdapq check FILE
    lambdapq mutate FILE --summand I --direction {+,-}
    lambdapq walk P Q --depth D --out fan.json
    lambdapq fan-svg fan.json --out fan.svg
    lambdapq endo FILE
    lambdapq reduce FILE --max-steps N
    lambdapq classify P Q --bound B --seed S

Complexes are read and written in the JSON interchange format of
:class:`lambdapq.complexes.ProjComplex`.  Reports go to stdout (or ``--out``)
as JSON with sorted keys, so fixed flags give byte-identical output.

Exit codes: 0 success; 2 invalid input (unreadable or malformed file, bad
arguments, unsupported algebra); 3 a mathematical invariant failed (overlapping
fan cones, walk/closed-form mismatch, a presilting hit in the gray region);
4 a differential with d∘d != 0; 5 a block of the wrong shape or Hom space.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .algebra import cartan_matrix, make_lambda, quasi_hereditary_data
from .complexes import (
    BlockShapeError,
    InvalidComplex,
    NotSquareZero,
    ProjComplex,
    decompose,
    g_vector,
    hom_complex_dims,
    minimize,
)
from .endo import end_algebra, hom_dims_of, present
from .equiv import ReductionError, reduce_to_two_term
from .silting import (
    FanError,
    NotTwoTerm,
    closed_form_pairs,
    cone_label,
    explore,
    fan,
    make_node,
    mutate,
    recursion_dims,
    sample_gray_region,
    silting_flags,
)

OK, INVALID, VIOLATION, NOT_SQUARE_ZERO, BAD_SHAPE = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, message: str, code: int = INVALID):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    q: int | None = None
    depth: int = 4
    bound: int = 8
    seed: int = 0
    max_steps: int = 6
    input: str | None = None
    out: str | None = None

    def validate(self) -> None:
        if self.p is not None:
            if self.p < 0 or self.q < 0:
                raise CliError("p and q must be non-negative")
            if self.p + self.q < 1:
                raise CliError("p + q must be at least 1 (Λ^{0,0} is semisimple)")
        if self.depth < 0 or self.bound < 0 or self.max_steps < 0:
            raise CliError("--depth, --bound and --max-steps must be non-negative")


# -- I/O ---------------------------------------------------------------------------


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(f"{path}: malformed JSON ({e})") from None


def load_complex(path: str) -> ProjComplex:
    data = _read_json(path)
    try:
        return ProjComplex.from_json(data)
    except NotSquareZero as e:
        raise CliError(f"{path}: {e}", NOT_SQUARE_ZERO) from None
    except BlockShapeError as e:
        raise CliError(f"{path}: {e}", BAD_SHAPE) from None
    except InvalidComplex as e:
        raise CliError(f"{path}: {e}") from None


def _emit(payload, out: str | None) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True, indent=1)
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as e:
        raise CliError(f"cannot write {out}: {e.strerror}") from None


def _shape(X: ProjComplex) -> dict:
    return {str(n): list(m) for n, m in X.terms.items()}


# -- commands --------------------------------------------------------------------------


def cmd_algebra(cfg: RunConfig) -> int:
    A = make_lambda(cfg.p, cfg.q)
    qh = quasi_hereditary_data(A)
    _emit({
        "p": A.p,
        "q": A.q,
        "dim": A.dim,
        "basis": list(A.labels),
        "cartan": cartan_matrix(A),
        "projective_dims": [A.projective_dim(1), A.projective_dim(2)],
        "standard": [list(v) for v in qh["standard"]],
        "costandard": [list(v) for v in qh["costandard"]],
    }, cfg.out)
    return OK


def _summand_report(parts: list[ProjComplex]) -> list[dict]:
    out = []
    for P in parts:
        row = {"terms": _shape(P)}
        try:
            row["g"] = list(g_vector(P))
        except ValueError:
            row["g"] = None
        out.append(row)
    return out


def cmd_check(cfg: RunConfig) -> int:
    X = load_complex(cfg.input)
    M = minimize(X)
    flags = silting_flags(M, seed=cfg.seed)
    parts = flags["summands"] or (decompose(M, cfg.seed) if not M.is_zero() else [])
    end = {}
    for i, Y in enumerate(parts):
        for j, Z in enumerate(parts):
            for r in (-1, 0, 1):
                end[f"{i}{j}{r:+d}"] = hom_complex_dims(Y, Z, r)[2]
    _emit({
        "d2": True,
        "terms": _shape(X),
        "minimal_terms": _shape(M),
        "presilting": flags["presilting"],
        "silting": flags["silting"],
        "tilting": flags["tilting"],
        "summands": _summand_report(parts),
        "homs": end,
    }, cfg.out)
    return OK


def _two_summands(X: ProjComplex, seed: int):
    parts = decompose(minimize(X), seed)
    if len(parts) != 2:
        raise CliError(f"expected a basic complex with two indecomposable summands, found {len(parts)}")
    return parts


def cmd_mutate(cfg: RunConfig, summand: int, direction: str) -> int:
    X = load_complex(cfg.input)
    node = make_node(*_two_summands(X, cfg.seed))
    if not node.silting:
        raise CliError("mutation expects a two-term silting complex")
    try:
        new = mutate(node, summand, direction)
    except NotTwoTerm as e:
        raise CliError(str(e)) from None
    _emit({"g": [list(v) for v in new.g], "tilting": new.tilting,
           "complex": new.complex().to_json()}, cfg.out)
    return OK


def _ray_names(p: int, q: int, depth: int) -> dict[tuple[int, int], str]:
    """Names of the indecomposable two-term presilting complexes by g-vector."""
    names = {(1, 0): "P_1", (0, 1): "P_2", (-1, 0): "P_1[1]", (0, -1): "P_2[1]"}
    for n, sign, plain, star in ((p, 1, "C_{m}", "C_{m}^*"), (q, -1, "C̄_{m}", "C̄_{m}^*")):
        if n < 1:
            continue
        a = recursion_dims(n, depth + 3)
        for m in range(1, len(a)):
            u = (-sign * a[m - 1], sign * a[m])
            v = (-sign * a[m], sign * a[m - 1])
            names.setdefault(u, plain.format(m=m))
            names.setdefault(v, star.format(m=m))
    return names


def walk_report(p: int, q: int, depth: int) -> dict:
    walk = explore(p, q, depth)
    try:
        geo = fan(walk.nodes)
    except FanError as e:
        raise CliError(f"fan invariant violated: {e}", VIOLATION) from None
    cf = closed_form_pairs(p, q, depth)
    names = _ray_names(p, q, depth)
    nodes = []
    for n in walk.nodes:
        row = n.to_json()
        row["label"] = cone_label(p, q, n.family, n.index) if n.family else None
        row["names"] = [names.get(v, str(v)) for v in n.g]
        nodes.append(row)
    rays = sorted({v for n in walk.nodes for v in n.g})
    return {
        "p": p,
        "q": q,
        "depth": depth,
        "nodes": nodes,
        "rays": [{"g": list(v), "name": names.get(v, str(v))} for v in rays],
        "arcs": [[list(u), list(v)] for u, v in geo["arcs"]],
        "gaps": [[list(u), list(v)] for u, v in geo["gaps"]],
        "closed_form_match": walk.keys() == set(cf),
        "dichotomy_failures": len(walk.dichotomy_failures),
        "inverse_failures": len(walk.inverse_failures),
    }


def cmd_walk(cfg: RunConfig) -> int:
    report = walk_report(cfg.p, cfg.q, cfg.depth)
    _emit(report, cfg.out)
    bad = (not report["closed_form_match"]) or report["dichotomy_failures"] or report["inverse_failures"]
    return VIOLATION if bad else OK


# -- SVG ------------------------------------------------------------------------------

_SIZE = 640
_R = 250
_LEGEND = 220


def _unit(v) -> tuple[float, float]:
    n = math.hypot(v[0], v[1])
    return v[0] / n, v[1] / n


def _pt(u, r=_R) -> str:
    c = _SIZE / 2
    return f"{c + r * u[0]:.3f},{c - r * u[1]:.3f}"


def _wedge(u, v, fill: str, extra: str = "") -> str:
    # u -> v counterclockwise; screen y points down so the sweep flag is 0
    a = math.atan2(u[1], u[0])
    b = math.atan2(v[1], v[0])
    span = (b - a) % (2 * math.pi)
    large = 1 if span > math.pi else 0
    c = _SIZE / 2
    return (f'<path d="M{c:.3f},{c:.3f} L{_pt(u)} A{_R},{_R} 0 {large} 0 {_pt(v)} Z" '
            f'fill="{fill}"{extra}/>')


def _mid(u, v) -> tuple[float, float]:
    a = math.atan2(u[1], u[0])
    span = (math.atan2(v[1], v[0]) - a) % (2 * math.pi)
    t = a + span / 2
    return math.cos(t), math.sin(t)


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _angle(u) -> float:
    return math.atan2(u[1], u[0]) % (2 * math.pi)


def fan_svg(data: dict) -> str:
    """SVG of the g-vector fan stored in a ``walk`` report.

    Adjacency and ordering come from the exact arcs in ``data``; floats only
    enter as rendering coordinates.  Uncovered cones are gray; for ``n > 2``
    the exact region ``a² + b² <= n a b`` is drawn darker inside them.  Cones
    and rays too narrow to label in place are numbered and listed on the right.
    """
    p, q = data["p"], data["q"]
    labels = {tuple(sorted(map(tuple, n["g"]))): n.get("label") for n in data["nodes"]}
    width = _SIZE + _LEGEND
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{_SIZE}" '
        f'viewBox="0 0 {width} {_SIZE}" font-family="serif" font-size="11">',
        f"<!-- lambdapq {__version__} -->",
        f"<title>g-vector fan of Λ^{{{p},{q}}}, depth {data['depth']}</title>",
        f'<rect width="{width}" height="{_SIZE}" fill="white"/>',
    ]
    for u, v in data["gaps"]:
        out.append(_wedge(_unit(u), _unit(v), "#d9d9d9"))
    for n, sign in ((p, 1), (q, -1)):
        if n < 3:
            continue
        r = math.sqrt(n * n - 4)
        lo, hi = (n - r) / 2, (n + r) / 2
        # the ratio |b|/|a| lies between the roots: second quadrant for p, fourth for q
        out.append(_wedge(_unit((-sign, sign * hi)), _unit((-sign, sign * lo)), "#9a9a9a"))
    legend = []
    texts = []
    for k, (u, v) in enumerate(data["arcs"]):
        fill = "#eef3fb" if k % 2 == 0 else "#f8f1e6"
        uu, vv = _unit(u), _unit(v)
        out.append(_wedge(uu, vv, fill))
        lab = labels.get(tuple(sorted((tuple(u), tuple(v)))))
        if not lab:
            continue
        wide = (_angle(vv) - _angle(uu)) % (2 * math.pi) > math.radians(14)
        if not wide:
            legend.append(lab)
            lab = str(len(legend))
        x, y = _pt(_mid(uu, vv), _R * (0.62 if wide else 0.9 - 0.12 * (len(legend) % 3))).split(",")
        texts.append(f'<text x="{x}" y="{y}" text-anchor="middle" font-size="{11 if wide else 8}">'
                     f'{_esc(lab)}</text>')
    last = None
    rays = sorted(data["rays"], key=lambda r: _angle(_unit(r["g"])))
    ray_legend = []
    for ray in rays:
        u = _unit(ray["g"])
        x2, y2 = _pt(u).split(",")
        out.append(f'<line x1="{_SIZE / 2:.3f}" y1="{_SIZE / 2:.3f}" x2="{x2}" y2="{y2}" '
                   f'stroke="black" stroke-width="0.8"/>')
        g = ray["g"]
        name = f'{ray["name"]} ({g[0]},{g[1]})'
        if last is not None and abs(_angle(u) - last) < math.radians(5):
            ray_legend.append(name)
            continue
        last = _angle(u)
        x, y = _pt(u, _R + 18).split(",")
        texts.append(f'<text x="{x}" y="{y}" text-anchor="middle" font-size="9">{_esc(name)}</text>')
    out.extend(texts)
    x0, y = _SIZE + 10, 30
    if legend:
        out.append(f'<text x="{x0}" y="{y}" font-weight="bold">narrow cones</text>')
        for i, lab in enumerate(legend, 1):
            y += 14
            out.append(f'<text x="{x0}" y="{y}">{i}: {_esc(lab)}</text>')
        y += 24
    if ray_legend:
        out.append(f'<text x="{x0}" y="{y}" font-weight="bold">further rays</text>')
        for name in ray_legend:
            y += 14
            out.append(f'<text x="{x0}" y="{y}" font-size="9">{_esc(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_fan_svg(cfg: RunConfig) -> int:
    data = _read_json(cfg.input)
    try:
        svg = fan_svg(data)
    except (KeyError, TypeError, ValueError) as e:
        raise CliError(f"{cfg.input}: not a walk report ({e})") from None
    _emit(svg, cfg.out)
    return OK


# -- endo / reduce / classify -----------------------------------------------------------


def cmd_endo(cfg: RunConfig) -> int:
    X = load_complex(cfg.input)
    E = end_algebra(X, seed=cfg.seed)
    if len(E.idempotents) != 2:
        raise CliError(f"expected two indecomposable summands, found {len(E.idempotents)}")
    P = present(E)
    dims = hom_dims_of(E)
    _emit({
        "dim": E.dim,
        "presilting": E.presilting,
        "hom_dims": {f"{s}{t}": d for (s, t), d in sorted(dims.items())},
        "arrow_counts": {f"{s}{t}": c for (s, t), c in sorted(P.arrow_counts().items())},
        "relation_dim": P.relation_dim,
        "presentation": P.to_json(),
    }, cfg.out)
    return OK


def cmd_reduce(cfg: RunConfig) -> int:
    X = load_complex(cfg.input)
    try:
        m, Y = reduce_to_two_term(X, max_steps=cfg.max_steps)
    except ReductionError as e:
        raise CliError(str(e), VIOLATION) from None
    except ValueError as e:
        raise CliError(str(e)) from None
    _emit({"exponent": m, "terms": _shape(Y), "complex": Y.to_json()}, cfg.out)
    return OK


def cmd_classify(cfg: RunConfig, samples: int) -> int:
    p, q = cfg.p, cfg.q
    walk = explore(p, q, cfg.depth)
    cf = closed_form_pairs(p, q, cfg.depth)
    wk = walk.keys()
    positive = []
    for key, info in sorted(cf.items(), key=lambda kv: (kv[1]["depth"], sorted(kv[1]["g"]))):
        positive.append({"g": [list(v) for v in info["g"]], "family": info["family"],
                         "index": info["index"], "depth": info["depth"], "label": info["label"],
                         "in_walk": key in wk})
    try:
        geo = fan(walk.nodes)
        disjoint = True
    except FanError:
        geo, disjoint = {"gaps": []}, False
    rows = sample_gray_region(p, q, bound=cfg.bound, samples=samples, seed=cfg.seed)
    hits = sum(r["presilting"] for r in rows)
    non_tilting = [[list(v) for v in n.g] for n in walk.nodes if n.silting and not n.tilting]
    report = {
        "p": p,
        "q": q,
        "depth": cfg.depth,
        "positive": positive,
        "walk_only": [[list(v) for v in n.g] for n in walk.nodes if n.key not in cf],
        "match": wk == set(cf),
        "silting_not_tilting": non_tilting,
        "fan_disjoint": disjoint,
        "gaps": [[list(u), list(v)] for u, v in geo["gaps"]],
        "negative": {"note": "sampling evidence, not a proof", "bound": cfg.bound,
                     "seed": cfg.seed, "rows": rows, "presilting_hits": hits},
    }
    _emit(report, cfg.out)
    ok = report["match"] and disjoint and hits == 0 and all(r["bound_ok"] for r in rows)
    return OK if ok else VIOLATION


# -- entry point --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lambdapq", description="Silting theory and derived "
                                 "equivalences of the algebras Λ^{p,q}.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def pq(sp):
        sp.add_argument("p", type=int)
        sp.add_argument("q", type=int)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="write to this file instead of stdout")

    sp = sub.add_parser("algebra", help="dimensions, Cartan matrix, standard modules")
    pq(sp)
    common(sp)
    sp = sub.add_parser("check", help="presilting/silting/tilting flags of a complex file")
    sp.add_argument("input")
    common(sp)
    sp = sub.add_parser("mutate", help="mutate a two-term silting complex at one summand")
    sp.add_argument("input")
    sp.add_argument("--summand", type=int, choices=(0, 1), default=0)
    sp.add_argument("--direction", choices=("+", "-"), default="+")
    common(sp)
    sp = sub.add_parser("walk", help="mutation walk from Λ and Λ[1]; writes fan.json")
    pq(sp)
    sp.add_argument("--depth", type=int, default=4)
    common(sp)
    sp = sub.add_parser("fan-svg", help="draw a fan.json produced by walk")
    sp.add_argument("input")
    common(sp)
    sp = sub.add_parser("endo", help="quiver presentation of End_K of a complex file")
    sp.add_argument("input")
    common(sp)
    sp = sub.add_parser("reduce", help="find m with ν^m(X) two-term")
    sp.add_argument("input")
    sp.add_argument("--max-steps", type=int, default=6)
    common(sp)
    sp = sub.add_parser("classify", help="walk vs closed form, plus gray-region sampling")
    pq(sp)
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--bound", type=int, default=8)
    sp.add_argument("--samples", type=int, default=100)
    common(sp)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return INVALID if e.code else OK
    cfg = RunConfig(
        command=ns.command,
        p=getattr(ns, "p", None),
        q=getattr(ns, "q", None),
        depth=getattr(ns, "depth", 4),
        bound=getattr(ns, "bound", 8),
        seed=ns.seed,
        max_steps=getattr(ns, "max_steps", 6),
        input=getattr(ns, "input", None),
        out=ns.out,
    )
    try:
        cfg.validate()
        if cfg.command == "algebra":
            return cmd_algebra(cfg)
        if cfg.command == "check":
            return cmd_check(cfg)
        if cfg.command == "mutate":
            return cmd_mutate(cfg, ns.summand, ns.direction)
        if cfg.command == "walk":
            return cmd_walk(cfg)
        if cfg.command == "fan-svg":
            return cmd_fan_svg(cfg)
        if cfg.command == "endo":
            return cmd_endo(cfg)
        if cfg.command == "reduce":
            return cmd_reduce(cfg)
        if cfg.command == "classify":
            return cmd_classify(cfg, ns.samples)
    except CliError as e:
        print(f"lambdapq {cfg.command}: {e}", file=sys.stderr)
        return e.code
    raise AssertionError(f"unhandled command {cfg.command}")


if __name__ == "__main__":
    sys.exit(main())
