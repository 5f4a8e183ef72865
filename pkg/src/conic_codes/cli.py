"""Command-line front end: ``conic-codes <command> --q Q ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Sequence

from .finite_field import FieldCtx, FieldError, factor_prime_power, make_field
from .projective_plane import PLANE_LIMIT, PlaneCtx, make_plane

SUITES = ("geometry", "matrix", "group", "blocks")
MATRICES = ("A", "A22", "A23", "A32", "A33", "B", "C", "D")
RANK_P_LIMIT = 49


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    q: int
    p: int
    e: int
    modulus: tuple[int, ...] | None = None
    suites: tuple[str, ...] = SUITES
    out: str | None = None
    fmt: str = "json"
    threads: int = 1
    timestamp: bool = True


@dataclass
class Check:
    name: str
    expected: Any
    actual: Any
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class Report:
    config: RunConfig
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        rows = []
        for c in self.checks:
            row = {"name": c.name, "expected": _jsonable(c.expected),
                   "actual": _jsonable(c.actual), "pass": c.passed}
            if self.config.timestamp:
                row["elapsed"] = round(c.elapsed, 6)
            rows.append(row)
        out: dict[str, Any] = {"q": self.config.q, "suites": list(self.config.suites),
                               "pass": self.passed, "checks": rows}
        if self.config.timestamp:
            out["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return out

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            if c.expected is True:
                lines.append(f"{c.name}: {status}")
            else:
                lines.append(f"{c.name}: expected {_short(c.expected)}, actual {_short(c.actual)} [{status}]")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=repr)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def _short(x: Any) -> str:
    return json.dumps(_jsonable(x), separators=(",", ":"))


# --- configuration -------------------------------------------------------------------

def _thread_count(arg: int | None) -> int:
    if arg is not None:
        return max(1, arg)
    env = os.environ.get("CONIC_CODES_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError("CONIC_CODES_THREADS must be an integer") from None
    return os.cpu_count() or 1


def _resolve(args: argparse.Namespace) -> RunConfig:
    if args.q is not None:
        if args.p is not None or args.e is not None:
            raise UsageError("give either --q or --p/--e, not both")
        try:
            p, e = factor_prime_power(args.q)
        except FieldError as exc:
            raise UsageError(str(exc)) from None
    elif args.p is not None:
        p, e = args.p, args.e or 1
        try:
            if factor_prime_power(p) != (p, 1):
                raise UsageError(f"{p} is not prime")
        except FieldError:
            raise UsageError(f"{p} is not prime") from None
    else:
        raise UsageError("--q (or --p) is required")
    q = p ** e
    if p == 2:
        raise UsageError("q must be odd")
    if q < 5:
        raise UsageError("q must be at least 5")
    if q > PLANE_LIMIT:
        raise UsageError(f"q must be at most {PLANE_LIMIT}")
    modulus = None
    if getattr(args, "poly", None):
        try:
            modulus = tuple(int(c) for c in args.poly.split(","))
        except ValueError:
            raise UsageError("--poly takes comma-separated integer coefficients, constant first") from None
    suites: tuple[str, ...] = SUITES
    if getattr(args, "suite", None) and args.suite != "all":
        suites = (args.suite,)
    return RunConfig(q=q, p=p, e=e, modulus=modulus, suites=suites,
                     out=getattr(args, "out", None), fmt=getattr(args, "format", "json") or "json",
                     threads=_thread_count(getattr(args, "threads", None)),
                     timestamp=not getattr(args, "no_timestamp", False))


def _field(cfg: RunConfig) -> FieldCtx:
    try:
        return make_field(cfg.p, cfg.e, cfg.modulus)
    except FieldError as exc:
        raise UsageError(str(exc)) from None


def _plane(cfg: RunConfig) -> PlaneCtx:
    return make_plane(_field(cfg))


def _require_group_range(cfg: RunConfig) -> None:
    from .group_action import GROUP_LIMIT
    if cfg.q > GROUP_LIMIT:
        raise UsageError(f"group computations need q <= {GROUP_LIMIT}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- verification suites -------------------------------------------------------------

def _timed(fn: Callable[[], Any]) -> tuple[Any, float]:
    t0 = time.perf_counter()
    v = fn()
    return v, time.perf_counter() - t0


def _bool_checks(prefix: str, results: dict[str, bool], elapsed: float) -> list[Check]:
    share = elapsed / max(1, len(results))
    return [Check(f"{prefix}{k}", True, bool(v), share) for k, v in results.items()]


def _geometry_suite(plane: PlaneCtx) -> list[Check]:
    from .incidence_codes import parity_checks
    q = plane.q
    out = []
    tables, dt = _timed(plane.verify_incidence_tables)
    want = PlaneCtx.expected_incidence_tables(q)
    for key in ("census", "per_line", "per_point"):
        out.append(Check(key, want[key], tables[key], dt / 3))

    def involution() -> bool:
        return bool((plane.pole[plane.perp] == list(range(plane.n))).all())
    v, dt = _timed(involution)
    out.append(Check("polarity_involution", True, v, dt))

    def swaps_incidence() -> bool:
        inc = plane.incidence
        return bool((inc[plane.perp][:, plane.pole] == inc.T).all())
    v, dt = _timed(swaps_incidence)
    out.append(Check("polarity_reverses_incidence", True, v, dt))

    par, dt = _timed(lambda: parity_checks(plane))
    out += _bool_checks("", par, dt)
    return out


def _matrix_suite(plane: PlaneCtx) -> list[Check]:
    from .incidence_codes import (code_dims, direct_sum_checks, expected_dim_L, ldpc_dims,
                                  power_identities, rank_2, rank_p)
    q, p, e = plane.q, plane.field.p, plane.field.e
    out = []
    dims, dt = _timed(lambda: ldpc_dims(plane, "A33"))
    out.append(Check("dim_L", expected_dim_L(q), dims["k"], dt))
    ids, dt = _timed(lambda: power_identities(plane))
    for k, v in ids.items():
        want = (q % 8 in (3, 5)) if k == "B3_eq_B" else True
        out.append(Check(k, want, v, dt / len(ids)))
    ds, dt = _timed(lambda: direct_sum_checks(plane))
    out += _bool_checks("direct_sum_", ds, dt)
    r2, dt = _timed(lambda: rank_2(plane))
    out.append(Check("rank_2_A", q * q + q, r2, dt))
    if q <= RANK_P_LIMIT:
        base = (p * (p + 1) // 2) ** e
        rp, dt = _timed(lambda: rank_p(plane))
        out.append(Check("rank_p_A", base + 1, rp, dt))
        rp33, dt = _timed(lambda: rank_p(plane, "A33"))
        out.append(Check("rank_p_A33", base, rp33, dt))
    cd, dt = _timed(lambda: code_dims(plane))
    for name, rep in cd.items():
        out.append(Check(f"code_{name}_length", len(plane.E if name[2] == "3" else plane.I), rep.n, dt / 4))
    return out


def _group_suite(plane: PlaneCtx) -> list[Check]:
    from .group_action import make_group
    from .parity_sweeps import parity_class_checks
    q = plane.q
    out = []
    G, dt = _timed(lambda: make_group(plane))
    out.append(Check("order_H", q * (q * q - 1) // 2, G.order, dt))
    out.append(Check("class_sizes", G.expected_class_sizes(), G.class_sizes(), 0.0))
    v, dt = _timed(G.class_conjugation_check)
    out.append(Check("classes_are_conjugacy_classes", True, v, dt))

    def stab_checks() -> tuple[bool, bool, bool]:
        want = G.expected_stabilizer_profile()
        sizes_h = all(len(G.stab_H(x)) == q - 1 for x in plane.E)
        sizes_g = all(len(G.stab_G(x)) == 2 * (q - 1) for x in plane.E)
        prof = all(G.stabilizer_profile(x) == want for x in plane.E)
        return sizes_h, sizes_g, prof
    (sh, sg, pr), dt = _timed(stab_checks)
    out.append(Check("stab_H_order", True, sh, dt / 3))
    out.append(Check("stab_G_order", True, sg, dt / 3))
    out.append(Check("stabilizer_profile", True, pr, dt / 3))
    orb, dt = _timed(G.orbit_checks)
    out += _bool_checks("", orb, dt)
    v, dt = _timed(G.polarity_commutes)
    out.append(Check("polarity_commutes_with_G", True, v, dt))
    par, dt = _timed(lambda: parity_class_checks(G))
    out += _bool_checks("parity_", par["checks"], dt)
    return out


def _blocks_suite(plane: PlaneCtx) -> list[Check]:
    from .character_blocks import (block_shape, block_sanity, expected_block_shape,
                                   expression_checks, induced_expectations,
                                   kernel_decomposition_checks, make_block_data,
                                   stab_induced_decomposition)
    from .group_action import make_group
    q = plane.q
    out = []
    data, dt = _timed(lambda: make_block_data(q))
    t = data.table
    out.append(Check("first_orthogonality", True, t.first_orthogonality(), dt))
    out.append(Check("second_orthogonality", True, t.second_orthogonality(), 0.0))
    out.append(Check("block_shape", expected_block_shape(q), block_shape(data.blocks), 0.0))
    ex, dt = _timed(lambda: expression_checks(data))
    out += _bool_checks("", ex, dt)
    G = make_group(plane)
    san, dt = _timed(lambda: block_sanity(data, G))
    out += _bool_checks("", san, dt)
    mult, dt = _timed(lambda: stab_induced_decomposition(t, G))
    out += _bool_checks("induced_", induced_expectations(t, mult), dt)
    ker, dt = _timed(lambda: kernel_decomposition_checks(data, G))
    out += _bool_checks("kernel_", ker, dt)
    return out


SUITE_FUNCS: dict[str, Callable[[PlaneCtx], list[Check]]] = {
    "geometry": _geometry_suite,
    "matrix": _matrix_suite,
    "group": _group_suite,
    "blocks": _blocks_suite,
}


def run_verify(cfg: RunConfig) -> Report:
    if any(s in ("group", "blocks") for s in cfg.suites):
        _require_group_range(cfg)
    plane = _plane(cfg)
    report = Report(cfg)
    with ThreadPoolExecutor(max_workers=min(cfg.threads, len(cfg.suites))) as pool:
        futures = [pool.submit(SUITE_FUNCS[s], plane) for s in cfg.suites]
        for f in futures:
            report.checks += [Check(f"{c.name}", c.expected, c.actual, c.elapsed) for c in f.result()]
    return report


# --- commands ------------------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    report = run_verify(cfg)
    if cfg.fmt == "text":
        _emit(report.to_text(), cfg.out)
    else:
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", cfg.out)
    return 0 if report.passed else 1


def _matrix(plane: PlaneCtx, name: str):
    from .incidence_codes import incidence_matrix, matrix_B, matrix_C, matrix_D, submatrix
    if name == "A":
        return incidence_matrix(plane)
    if name == "B":
        return matrix_B(plane)
    if name == "C":
        return matrix_C(plane)
    if name == "D":
        return matrix_D(plane)
    return submatrix(plane, name)


def cmd_dims(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    H = _matrix(_plane(cfg), args.matrix)
    r = H.rank()
    _emit(json.dumps({"n": H.ncols, "k": H.ncols - r, "rank": r}) + "\n", cfg.out)
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    from .incidence_codes import write_alist
    cfg = _resolve(args)
    H = _matrix(_plane(cfg), args.matrix)
    buf = io.StringIO()
    write_alist(H, buf)
    _emit(buf.getvalue(), cfg.out)
    return 0


def cmd_group(args: argparse.Namespace) -> int:
    from .group_action import make_group
    from .parity_sweeps import parity_class_checks
    cfg = _resolve(args)
    _require_group_range(cfg)
    G = make_group(_plane(cfg))
    out: dict[str, Any] = {"q": cfg.q, "order": G.order}
    ok = True
    show_all = not (args.classes or args.parities)
    if args.classes or show_all:
        want = G.expected_class_sizes()
        out["classes"] = [
            {"label": str(c), "size": len(G.class_members[c]), "expected_size": want[c],
             "representative": list(G.class_reps[c]),
             "order": G.element_order(G.index[G.class_reps[c]])}
            for c in G.classes
        ]
        ok &= G.class_sizes() == want
    if args.parities or show_all:
        par = parity_class_checks(G)
        out["parities"] = {"checks": par["checks"],
                           "observed": {k: [list(s) for s in v] for k, v in par["observed"].items()}}
        ok &= all(par["checks"].values())
    out["pass"] = ok
    _emit(json.dumps(out, indent=2) + "\n", cfg.out)
    return 0 if ok else 1


def cmd_blocks(args: argparse.Namespace) -> int:
    from .character_blocks import block_module_dims, make_block_data
    from .group_action import make_group
    cfg = _resolve(args)
    _require_group_range(cfg)
    data = make_block_data(cfg.q)
    G = make_group(_plane(cfg))
    dims = block_module_dims(data, G)
    red = data.reduction
    out = {
        "q": cfg.q,
        "reduction": red.description,
        "blocks": [
            {"kind": b.kind, "characters": list(b.names), "defect": b.defect,
             "idempotent": {str(c): v for c, v in e.items()}, "dims": d}
            for b, e, d in zip(data.blocks, data.idempotents, dims)
        ],
    }
    _emit(json.dumps(out, indent=2) + "\n", cfg.out)
    return 0


def _format_value(x) -> str:
    r = x.rational()
    if r is not None:
        return str(r)
    return " + ".join(f"{c}*z^{e}" for e, c in sorted(x.terms.items()))


def cmd_chartable(args: argparse.Namespace) -> int:
    from .characters import build_char_table
    cfg = _resolve(args)
    t = build_char_table(cfg.q)
    header = ["character"] + [str(c) for c in t.classes]
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["size"] + [t.sizes[c] for c in t.classes])
        w.writerow(header)
        for name, row in zip(t.names, t.values):
            w.writerow([name] + [_format_value(v) for v in row])
        _emit(buf.getvalue(), cfg.out)
    else:
        out = {"q": cfg.q, "N": t.N, "classes": header[1:],
               "sizes": [t.sizes[c] for c in t.classes],
               "characters": {name: [_format_value(v) for v in row]
                              for name, row in zip(t.names, t.values)}}
        _emit(json.dumps(out, indent=2) + "\n", cfg.out)
    return 0


def _coord(F: FieldCtx, text: str | int) -> int:
    """Field element code; integers are reduced mod p over a prime field."""
    v = int(text)
    if F.e == 1:
        return v % F.p
    if not 0 <= v < F.q:
        raise UsageError(f"element codes must lie in [0, {F.q})")
    return v


def _triple(plane: PlaneCtx, text: Sequence[int]) -> tuple[int, int, int]:
    if len(text) != 3:
        raise UsageError("expected three coordinates")
    F = plane.field
    vals = tuple(_coord(F, x) for x in text)
    if not any(vals):
        raise UsageError("the zero vector is not a projective point")
    return vals  # type: ignore[return-value]


def cmd_classify(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    plane = _plane(cfg)
    out: dict[str, Any] = {"q": cfg.q}
    if args.point:
        i = plane.point_index(_triple(plane, args.point))
        out["point"] = list(plane.points[i])
        out["class"] = plane.point_class[i].value
        out["polar"] = list(plane.lines[int(plane.perp[i])])
        out["polar_class"] = plane.line_class[int(plane.perp[i])].value
    elif args.line:
        coords = plane.normalize(_triple(plane, args.line))
        j = plane.lines.index(coords)
        out["line"] = list(plane.lines[j])
        out["class"] = plane.line_class[j].value
        out["pole"] = list(plane.points[int(plane.pole[j])])
    elif args.element:
        from .group_action import GroupError, make_group
        _require_group_range(cfg)
        G = make_group(plane)
        F = plane.field
        g = [_coord(F, x) for x in args.element]
        try:
            out["element"] = g
            out["class"] = str(G.classify_element(g))
        except GroupError as exc:
            raise UsageError(str(exc)) from None
    else:
        raise UsageError("give --point, --line or --element")
    if args.json:
        _emit(json.dumps(out) + "\n", cfg.out)
    else:
        _emit("".join(f"{k}: {v}\n" for k, v in out.items()), cfg.out)
    return 0


# --- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conic-codes",
                                     description="Binary codes from a conic in PG(2, q).")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--q", type=int, help="odd prime power")
        p.add_argument("--p", type=int, help="characteristic (with --e)")
        p.add_argument("--e", type=int, help="extension degree (with --p)")
        p.add_argument("--poly", help="field modulus, comma-separated coefficients, constant first")
        p.add_argument("--out", help="write output to this file")

    v = sub.add_parser("verify", help="run verification suites")
    common(v)
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--threads", type=int)
    v.add_argument("--no-timestamp", action="store_true", help="omit timing fields")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("dims", help="length and dimension of a code")
    common(d)
    d.add_argument("--matrix", choices=MATRICES, default="A33")
    d.set_defaults(func=cmd_dims)

    x = sub.add_parser("export", help="write a parity-check matrix")
    common(x)
    x.add_argument("--matrix", choices=MATRICES, default="A33")
    x.add_argument("--format", choices=("alist",), default="alist")
    x.set_defaults(func=cmd_export)

    g = sub.add_parser("group", help="class census and parity sweeps")
    common(g)
    g.add_argument("--classes", action="store_true")
    g.add_argument("--parities", action="store_true")
    g.set_defaults(func=cmd_group)

    b = sub.add_parser("blocks", help="2-blocks, idempotents and module dimensions")
    common(b)
    b.set_defaults(func=cmd_blocks)

    c = sub.add_parser("chartable", help="ordinary character table")
    common(c)
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.set_defaults(func=cmd_chartable)

    k = sub.add_parser("classify", help="classify a point, line or group element")
    common(k)
    grp = k.add_mutually_exclusive_group()
    grp.add_argument("--point", nargs=3, metavar="X")
    grp.add_argument("--line", nargs=3, metavar="B")
    grp.add_argument("--element", nargs=4, metavar="A")
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_classify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
