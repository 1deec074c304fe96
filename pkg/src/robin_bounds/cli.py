"""Command-line front end: one JSON object per result line on stdout.

Exit status: 0 success, 1 a ``check-all`` check failed, 2 domain or
configuration error, 3 solver non-convergence.
"""

import argparse
import csv
import itertools
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds, finsler, geometry, oned, pde, ptrig
from .errors import ConvergenceError, DomainError

SPEC_VERSION = "1.0"
DEFAULT_H = 0.02

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_DOMAIN = 2
EXIT_SOLVER = 3

PTRIG_FUNCTIONS = ("pi_p", "arccos_p", "cos_p", "arccosh_p", "cosh_p")


class ConfigError(DomainError):
    pass


# -- output -------------------------------------------------------------------


def _clean(value):
    """Round floats to 12 significant digits; NaN and infinities become null."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return None
        return float(f"{v:.12g}")
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    return value


def emit(module, params, result, stream=None):
    record = {"spec_version": SPEC_VERSION, "module": module, "params": params}
    record.update(result)
    line = json.dumps(_clean(record), sort_keys=False, separators=(",", ":"))
    print(line, file=stream or sys.stdout, flush=True)
    return record


# -- argument handling --------------------------------------------------------


def _float_list(text):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _str_list(text):
    # domain and norm specs contain commas themselves; lists use ';'
    return [x.strip() for x in str(text).split(";") if x.strip()]


def _bool(text):
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _add_common(sub, *names):
    spec = {
        "p": dict(type=float, help="exponent p > 1"),
        "beta": dict(type=float, help="Robin parameter"),
        "s0": dict(type=float, help="interval length s0 > 0"),
        "h": dict(type=float, help=f"grid spacing (default {DEFAULT_H})"),
        "domain": dict(type=str, help="square, disk64, slab:a=..,l=.., rect:a=..,b=.. or a vertex file"),
        "norm": dict(type=str, help="euclidean, lq:q=.. or quad:a11=..,a12=..,a22=.. (default euclidean)"),
    }
    for name in names:
        sub.add_argument(f"--{name.replace('_', '-')}", dest=name, default=None, **spec[name])


def build_parser():
    parser = argparse.ArgumentParser(prog="robin-bounds", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("ptrig", help="evaluate a p-trigonometric function")
    sp.add_argument("--fn", dest="fn", choices=PTRIG_FUNCTIONS, default=None)
    _add_common(sp, "p")
    sp.add_argument("--x", dest="x", type=float, default=None, help="argument (not used by pi_p)")
    sp.add_argument("--plain", dest="plain", type=_bool, nargs="?", const=True, default=None, help="print the bare value")

    sp = subs.add_parser("mu1", help="first eigenvalue of the 1D Robin problem")
    _add_common(sp, "p", "beta", "s0")
    sp.add_argument("--oracle-n", dest="oracle_n", type=int, default=None, help="also run the variational oracle on n cells")

    sp = subs.add_parser("bounds", help="bound report for one instance or a sweep")
    _add_common(sp, "domain", "norm", "h")
    sp.add_argument("--p", dest="p", type=str, default=None)
    sp.add_argument("--beta", dest="beta", type=str, default=None)
    sp.add_argument("--numeric", dest="numeric", type=_bool, nargs="?", const=True, default=None)
    sp.add_argument("--sweep", dest="sweep", type=_bool, nargs="?", const=True, default=None,
                    help="p and beta take comma lists, domain and norm ';' lists")

    sp = subs.add_parser("torsion", help="numerical torsion function maximum")
    _add_common(sp, "domain", "norm", "p", "h")

    sp = subs.add_parser("eigen", help="numerical first Robin eigenvalue")
    _add_common(sp, "domain", "norm", "p", "beta", "h")

    sp = subs.add_parser("verify-slab", help="slab ratio experiment")
    _add_common(sp, "p", "beta", "norm", "h")
    sp.add_argument("--a", dest="a", type=float, default=None)
    sp.add_argument("--l", dest="l", type=_float_list, default=None, help="comma-separated increasing lengths")
    sp.add_argument("--csv", dest="csv", type=str, default=None, help="write (l, ratio) rows to this path")

    sp = subs.add_parser("check-all", help="quick self-checks")
    _add_common(sp, "h")

    for sp in subs.choices.values():
        sp.add_argument("--config", dest="config", type=str, default=None, help="file of 'key = value' lines")
    return parser, subs


def _config_actions(subparser):
    return {a.dest: a for a in subparser._actions if a.dest not in ("help", "config")}


def read_config(path):
    entries = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        entries[key.strip().replace("-", "_")] = value.strip()
    return entries


def merge_config(args, subparser):
    """Fill unset options from ``--config``; unknown keys are an error."""
    if not args.config:
        return args
    actions = _config_actions(subparser)
    for key, raw in read_config(args.config).items():
        if key not in actions:
            raise ConfigError(f"unknown config key {key!r} for {args.command}; allowed: {sorted(actions)}")
        if getattr(args, key) is not None:
            continue  # flags override the file
        action = actions[key]
        conv = action.type or str
        try:
            value = conv(raw)
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from None
        if action.choices is not None and value not in action.choices:
            raise ConfigError(f"{key!r} must be one of {list(action.choices)}")
        setattr(args, key, value)
    return args


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ConfigError("missing required parameters: " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _check_p(p):
    if not (math.isfinite(p) and p > 1):
        raise ConfigError(f"p must be > 1, got {p}")


def _check_finite(name, value):
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite")


def _check_positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be positive, got {value}")


def _h(args):
    h = DEFAULT_H if args.h is None else args.h
    _check_positive("h", h)
    return h


def _norm_text(args):
    return args.norm or "euclidean"


# -- commands -----------------------------------------------------------------


def cmd_ptrig(args):
    _require(args, "fn", "p")
    _check_p(args.p)
    if args.fn != "pi_p":
        _require(args, "x")
        _check_finite("x", args.x)
    params = {"fn": args.fn, "p": args.p, "x": args.x}
    fn = getattr(ptrig, args.fn)
    value = fn(args.p) if args.fn == "pi_p" else fn(args.p, args.x)
    if args.plain:
        print(repr(float(value)))
    else:
        emit("ptrig", params, {"value": value})
    return EXIT_OK


def cmd_mu1(args):
    _require(args, "p", "beta", "s0")
    _check_p(args.p)
    _check_finite("beta", args.beta)
    _check_positive("s0", args.s0)
    if args.oracle_n is not None and args.oracle_n < 64:
        raise ConfigError("oracle-n must be at least 64")
    params = {"p": args.p, "beta": args.beta, "s0": args.s0}
    res = oned.mu1(args.p, args.beta, args.s0)
    out = {"mu1": res.mu1, "mu_tilde": res.mu_tilde, "branch": res.branch, "residual": res.residual}
    if args.oracle_n is not None:
        params["oracle_n"] = args.oracle_n
        out["oracle_mu1"] = oned.variational_oracle(args.p, args.beta, args.s0, n=args.oracle_n)
    emit("oned", params, out)
    return EXIT_OK


def _report_record(rep):
    d = rep.as_dict()
    d["all_ok"] = rep.all_ok
    return d


def cmd_bounds(args):
    _require(args, "p", "beta")
    h = _h(args)
    domains = _str_list(args.domain or "square")
    norms = _str_list(_norm_text(args))
    ps = _float_list(args.p)
    betas = _float_list(args.beta)
    if not args.sweep and (len(ps) != 1 or len(betas) != 1 or len(domains) != 1 or len(norms) != 1):
        raise ConfigError("lists of values need --sweep")
    for p in ps:
        _check_p(p)
    for b in betas:
        _check_finite("beta", b)
    # parse every domain and norm before any computation
    built = {(dt, nt): (geometry.parse_domain(dt, h), finsler.parse_norm(nt)) for dt in domains for nt in norms}
    for dt, nt, p, b in itertools.product(domains, norms, ps, betas):
        dom, norm = built[(dt, nt)]
        params = {"domain": dt, "norm": nt, "p": p, "beta": b, "h": h, "numeric": bool(args.numeric)}
        rep = bounds.assemble_report(dom, norm, p, b, with_numeric=bool(args.numeric))
        emit("bounds", params, _report_record(rep))
    return EXIT_OK


def cmd_torsion(args):
    _require(args, "domain", "p")
    _check_p(args.p)
    h = _h(args)
    dom = geometry.parse_domain(args.domain, h)
    norm = finsler.parse_norm(_norm_text(args))
    params = {"domain": args.domain, "norm": _norm_text(args), "p": args.p, "h": h}
    w, M, info = pde.solve_torsion(dom, norm, args.p, return_info=True)
    R = geometry.inradius(dom, norm)
    lo, hi = bounds.torsion_max_bounds(args.p, norm.dim, R)
    emit("pde", params, {
        "M": M,
        "R_F": R,
        "torsion_lower": lo,
        "torsion_upper": hi,
        "iterations": info["iterations"],
        "pfunction_violation": pde.pfunction_check(w, norm, args.p, M),
    })
    return EXIT_OK


def cmd_eigen(args):
    _require(args, "domain", "p", "beta")
    _check_p(args.p)
    _check_finite("beta", args.beta)
    h = _h(args)
    dom = geometry.parse_domain(args.domain, h)
    norm = finsler.parse_norm(_norm_text(args))
    params = {"domain": args.domain, "norm": _norm_text(args), "p": args.p, "beta": args.beta, "h": h}
    res = pde.solve_robin_eig(dom, norm, args.p, args.beta)
    emit("pde", params, {"lambda": res.lam, "iterations": res.iterations, "n_unknowns": len(res.u.values)})
    return EXIT_OK


def cmd_verify_slab(args):
    _require(args, "p", "beta", "a", "l")
    _check_p(args.p)
    _check_finite("beta", args.beta)
    _check_positive("a", args.a)
    if not args.l:
        raise ConfigError("--l needs at least one length")
    for ell in args.l:
        _check_positive("l", ell)
    h = _h(args)
    norm = finsler.parse_norm(_norm_text(args))
    records = pde.slab_experiment(args.p, args.beta, args.a, args.l, norm, h)
    status = EXIT_OK
    for rec in records:
        params = {"p": args.p, "beta": args.beta, "a": args.a, "l": rec.ell, "norm": _norm_text(args), "h": h}
        emit("pde", params, rec.as_dict())
        if rec.error:
            status = EXIT_SOLVER
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["l", "ratio"])
            for rec in records:
                writer.writerow([f"{rec.ell:.12g}", "" if rec.ratio is None else f"{rec.ratio:.12g}"])
    return status


def _quick_checks(h):
    """(name, value, reference, tolerance) tuples; each is cheap."""
    from .pde import oracles

    yield "mu1_classical_positive", oned.mu1(2, 1, 1).mu1, 0.740173884394967, 1e-8
    yield "mu1_classical_negative", oned.mu1(2, -1, 1).mu1, -1.4392288398906454, 1e-8
    for p in (1.5, 3.0):
        yield f"pi_p_closed_form_p{p:g}", ptrig.pi_p(p), 2 * math.pi / (p * math.sin(math.pi / p)), 1e-10
    yield "dirichlet_limit", bounds.lower_bound_inradius(2, 1e8, 1.0), bounds.dirichlet_bound(2, 1.0), 1e-4 * bounds.dirichlet_bound(2, 1.0)
    sq = geometry.make_square(h)
    e = finsler.euclidean()
    M = pde.solve_torsion(sq, e, 2)[1]
    ref = oracles.rectangle_torsion_max(1.0, 1.0)
    yield "square_torsion_series", M, ref, 0.02 * ref
    for beta in (1.0, -1.0):
        lam = pde.solve_robin_eig(sq, e, 2, beta).lam
        ref = oracles.rectangle_robin_p2(1.0, 1.0, beta)
        yield f"square_eigen_separable_beta{beta:+g}", lam, ref, 0.02 * abs(ref)


def cmd_check_all(args):
    h = 0.05 if args.h is None else args.h
    _check_positive("h", h)
    failed = False
    for name, value, ref, tol in _quick_checks(h):
        ok = abs(value - ref) <= tol
        failed |= not ok
        emit("check", {"check": name, "h": h}, {"value": value, "reference": ref, "tolerance": tol, "ok": ok})
    return EXIT_CHECK_FAILED if failed else EXIT_OK


COMMANDS = {
    "ptrig": cmd_ptrig,
    "mu1": cmd_mu1,
    "bounds": cmd_bounds,
    "torsion": cmd_torsion,
    "eigen": cmd_eigen,
    "verify-slab": cmd_verify_slab,
    "check-all": cmd_check_all,
}


def _attach_negative_values(argv):
    """Turn ``--beta -1,1`` into ``--beta=-1,1``; argparse takes ``-1,1`` for an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok.startswith("--") and "=" not in tok and nxt and nxt.startswith("-") and "," in nxt:
            try:
                _float_list(nxt)
            except argparse.ArgumentTypeError:
                pass
            else:
                out.append(f"{tok}={nxt}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def main(argv=None):
    parser, subs = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_DOMAIN
    try:
        merge_config(args, subs.choices[args.command])
        return COMMANDS[args.command](args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.diagnostics:
            print(json.dumps(_clean({k: v for k, v in exc.diagnostics.items() if k != "history"})), file=sys.stderr)
        return EXIT_SOLVER
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
