"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check ran and failed,
2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import sys

import numpy as np

from . import jsonio
from .blaschke import BlaschkeProduct, ZeroSequence
from .errors import BlabError, CertificateError, DomainError
from .factors import DEFAULT_ETAS, level_set_sweep, theorem_2_9_pipeline
from .homotopy import (
    HomotopyPath,
    YSearch,
    auto_r1,
    continuity_certificate,
    nestoridis_bound,
)
from .regions import StripCone, cone_to_strip
from .sequences import (
    admit_hsc,
    certify_fine,
    consecutive_rho,
    generate_halfplane_geometric,
    generate_radial_geometric,
    generate_random_hsc,
    greedy_fine_subsequence,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- parsing helpers -------------------------------------------------------

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_NAMES = {"pi": math.pi, "inf": math.inf, "e": math.e}


def parse_real(text: str) -> float:
    """A number or a small arithmetic expression such as ``pi/2`` or ``-inf``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise UsageError(f"cannot parse number {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    if t in ("i", "+i"):
        return 1j
    if t == "-i":
        return -1j
    try:
        return complex(t.replace("i", "j"))
    except ValueError:
        return complex(parse_real(t))


def parse_cone(text: str) -> StripCone:
    """``xi=1,theta=pi/2,t1=1,t2=-1``."""
    fields = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"bad cone field {part!r}; expected key=value")
        k, v = part.split("=", 1)
        fields[k.strip().lower()] = v.strip()
    missing = {"xi", "theta", "t1", "t2"} - fields.keys()
    if missing:
        raise UsageError(f"cone is missing {', '.join(sorted(missing))}")
    return StripCone(parse_complex(fields["xi"]), parse_real(fields["theta"]),
                     parse_real(fields["t1"]), parse_real(fields["t2"]))


def parse_list(text: str) -> list:
    return [parse_real(p) for p in text.split(",") if p.strip()]


def load_product(path: str) -> BlaschkeProduct:
    try:
        data = jsonio.load(path)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict) or "zeros" not in data:
        raise UsageError(f"{path} is not a zeros/product file")
    try:
        return BlaschkeProduct.from_dict(data)
    except (TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"malformed product in {path}: {exc}") from exc


def cone_for(args, zs: ZeroSequence) -> StripCone:
    if getattr(args, "cone", None):
        return parse_cone(args.cone)
    meta_cone = (zs.meta or {}).get("cone")
    if meta_cone:
        return StripCone.from_dict(meta_cone)
    raise UsageError("no --cone given and the input carries none")


def emit(obj, path):
    text = jsonio.dumps(obj)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _product_dict(zs: ZeroSequence) -> dict:
    return BlaschkeProduct(zeros=zs).to_dict()


# -- commands --------------------------------------------------------------


def cmd_generate(args) -> int:
    cone = parse_cone(args.cone)
    if args.count < 0:
        raise UsageError("count must be nonnegative")
    if args.family == "geometric":
        zs = generate_halfplane_geometric(cone, parse_complex(args.w0), args.ratio, args.count)
    elif args.family == "radial":
        zs = generate_radial_geometric(cone.xi, args.q, args.count, args.scale)
        zs = ZeroSequence(zs.zeros, dict(zs.meta, cone=cone.to_dict()))
    else:
        zs = generate_random_hsc(cone, args.count, args.seed, args.ratio_min, args.ratio_max)
    emit(_product_dict(zs), args.output)
    return EXIT_OK


def cmd_admit(args) -> int:
    zs = load_product(args.input).zeros
    adm = admit_hsc(zs, cone_for(args, zs), args.delta)
    emit(adm, args.output)
    return EXIT_OK if adm.passed else EXIT_FAIL


def cmd_select(args) -> int:
    zs = load_product(args.input).zeros
    idx = greedy_fine_subsequence(zs, args.epsilon)
    sub = zs.subsequence(idx)
    emit({"epsilon": args.epsilon, "indices": idx, "product": _product_dict(sub)}, args.output)
    return EXIT_OK


def cmd_certify(args) -> int:
    zs = load_product(args.input).zeros
    cert = certify_fine(zs, cone_for(args, zs), args.epsilon, args.delta)
    emit(cert, args.output)
    return EXIT_OK if cert.passed else EXIT_FAIL


def _etas(args):
    return tuple(parse_list(args.eta)) if args.eta else DEFAULT_ETAS


def cmd_verify_factor(args) -> int:
    zs = load_product(args.input).zeros
    verdict = theorem_2_9_pipeline(zs, cone_for(args, zs), args.epsilon, _etas(args), args.grid, args.margin)
    emit(verdict, args.output)
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_levelset(args) -> int:
    if args.grid < 128:
        raise UsageError("grid must be at least 128")
    b = load_product(args.input)
    reports = level_set_sweep(b, _etas(args), args.grid, args.margin)
    counts = [r.component_count for r in reports]
    emit({"reports": reports, "counts": counts}, args.output)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            reports[-1].write_cells_csv(fh)
    return EXIT_OK if all(c >= 1 for c in counts) else EXIT_FAIL


def cmd_nestoridis(args) -> int:
    left, right = load_product(args.left), load_product(args.right)
    out = nestoridis_bound(left, right, YSearch(), parse_complex(args.xi))
    emit(out, args.output)
    return EXIT_OK


def _certify_input(zs, cone, args):
    # default window: the consecutive distances the truncation actually has
    rho = consecutive_rho(zs)
    eps = args.epsilon if args.epsilon is not None else float(rho.min())
    delta = args.delta if args.delta is not None else float(rho.max())
    return certify_fine(zs, cone, eps, delta)


def _continuity(zs, cone, cert, args):
    start = args.start_n if args.start_n else _default_start(zs, cert, args.r)
    path = HomotopyPath(BlaschkeProduct(zeros=zs), start, cone.xi)
    r1 = auto_r1(path) if args.R1 == "auto" else parse_real(args.R1)
    cc = continuity_certificate(path, cert, cone_to_strip(cone), parse_list(args.dt), args.samples,
                                args.r, r1, args.eps_geom)
    return path, cc


def _default_start(zs, cert, r):
    mods = np.abs(zs.zeros)
    for n in range(max(cert.start_n, 1), len(zs) - 1):
        if np.all(mods[n - 1:] >= r):
            return n
    raise CertificateError("no start index keeps the zeros outside radius r")


def cmd_homotopy(args) -> int:
    zs = load_product(args.input).zeros
    cone = cone_for(args, zs)
    cert = _certify_input(zs, cone, args)
    if not cert.passed:
        emit({"pass": False, "stage": "certify", "certificate": cert}, args.output)
        return EXIT_FAIL
    _, cc = _continuity(zs, cone, cert, args)
    emit(cc, args.output)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            cc.write_csv(fh)
    return EXIT_OK if cc.passed else EXIT_FAIL


def cmd_pipeline(args) -> int:
    zs = load_product(args.input).zeros
    cone = cone_for(args, zs)
    report = {"input": args.input, "cone": cone.to_dict(), "seed": (zs.meta or {}).get("seed"), "pass": False}
    verdict = theorem_2_9_pipeline(zs, cone, args.epsilon, _etas(args), args.grid, args.margin)
    report["factor"] = verdict
    if not verdict.passed:
        report["stage"] = verdict.stage or "factor"
        emit(report, args.output)
        return EXIT_FAIL
    cert = verdict.certificate
    try:
        path, cc = _continuity(cert.zeros, cone, cert, args)
    except CertificateError as exc:
        report["stage"] = "homotopy"
        report["error"] = str(exc)
        report["witness"] = exc.witness
        emit(report, args.output)
        return EXIT_FAIL
    report["homotopy"] = {"start_n": path.start_n, "continuity": cc}
    report["pass"] = bool(cc.passed)
    report["stage"] = None if cc.passed else "homotopy"
    emit(report, args.output)
    return EXIT_OK if cc.passed else EXIT_FAIL


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--input", "-i", required=True, help="zeros/product JSON file")
        sp.add_argument("--output", "-o", default="-", help="output JSON path (default stdout)")

    g = sub.add_parser("generate", help="generate a strip-cone zero sequence")
    g.add_argument("--cone", required=True, help="xi=..,theta=..,t1=..,t2=..")
    g.add_argument("--family", choices=("geometric", "radial", "random"), default="geometric")
    g.add_argument("--w0", default="1")
    g.add_argument("--ratio", type=parse_real, default=2.0)
    g.add_argument("--q", type=parse_real, default=0.5)
    g.add_argument("--scale", type=parse_real, default=1.0)
    g.add_argument("--ratio-min", type=parse_real, default=1.2)
    g.add_argument("--ratio-max", type=parse_real, default=1.8)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, required=True)
    common(g, needs_input=False)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("admit", help="check the strip-cone class conditions")
    a.add_argument("--cone")
    a.add_argument("--delta", type=parse_real)
    common(a)
    a.set_defaults(func=cmd_admit)

    s = sub.add_parser("select", help="greedy fine subsequence")
    s.add_argument("--epsilon", type=parse_real, required=True)
    common(s)
    s.set_defaults(func=cmd_select)

    c = sub.add_parser("certify", help="fine-sequence certificate")
    c.add_argument("--cone")
    c.add_argument("--epsilon", type=parse_real, required=True)
    c.add_argument("--delta", type=parse_real, required=True)
    common(c)
    c.set_defaults(func=cmd_certify)

    def factor_opts(sp):
        sp.add_argument("--cone")
        sp.add_argument("--epsilon", type=parse_real)
        sp.add_argument("--eta", help="comma-separated eta sweep")
        sp.add_argument("--grid", type=int, default=512)
        sp.add_argument("--margin", type=parse_real, default=0.02)

    v = sub.add_parser("verify-factor", help="interpolating and one-component checks")
    factor_opts(v)
    common(v)
    v.set_defaults(func=cmd_verify_factor)

    ls = sub.add_parser("levelset", help="level-set connectivity report")
    ls.add_argument("--eta", help="comma-separated eta values")
    ls.add_argument("--grid", type=int, default=512)
    ls.add_argument("--margin", type=parse_real, default=0.02)
    ls.add_argument("--csv", help="write covered cells of the last eta here")
    common(ls)
    ls.set_defaults(func=cmd_levelset)

    n = sub.add_parser("nestoridis", help="three-sum bound for two products")
    n.add_argument("--left", required=True)
    n.add_argument("--right", required=True)
    n.add_argument("--xi", default="1")
    common(n, needs_input=False)
    n.set_defaults(func=cmd_nestoridis)

    def homotopy_opts(sp):
        sp.add_argument("--start-n", type=int, default=0, help="N of the path (0 = automatic)")
        sp.add_argument("--dt", default="0.1,0.01")
        sp.add_argument("--samples", type=int, default=4096)
        sp.add_argument("--r", type=parse_real, default=0.5)
        sp.add_argument("--R1", default="1", help="number or 'auto'")
        sp.add_argument("--eps-geom", type=parse_real, default=0.2)

    h = sub.add_parser("homotopy", help="continuity certificate for B_t")
    h.add_argument("--cone")
    h.add_argument("--epsilon", type=parse_real)
    h.add_argument("--delta", type=parse_real)
    h.add_argument("--csv", help="per-step rows (t, dt, measured, bound)")
    homotopy_opts(h)
    common(h)
    h.set_defaults(func=cmd_homotopy)

    pl = sub.add_parser("pipeline", help="admit, select, certify, verify-factor, homotopy")
    factor_opts(pl)
    homotopy_opts(pl)
    common(pl)
    pl.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"blab {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CertificateError, BlabError) as exc:
        print(f"blab {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
