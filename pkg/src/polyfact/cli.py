"""Command-line front end: ``polyfact <group> <command> [options]``.

Forms are written as comma-separated coefficients ``a_n,...,a_0`` or as a
homogeneous polynomial in x and y ("x^2+y^2", "x^3 - 2*y^3").  Univariate
polynomials (``--poly``) use x only.

Right-hand sides (``--rhs``)::

    factorial | lcm | primorial | multinomial:a
    pik:D                  Pi_K for the quadratic field of discriminant D
    pik-table:path         Pi_K from a splitting table ("p f1,f2,..." per line,
                           ramified primes as f^e)
    bharg:<set>@B          Bhargava factorial of <set>, primes <= B

Bhargava sets: ``Z``, ``AP a b``, ``POLY c_d ... c_0``, ``WINDOW path``.

A config file (``--config``) holds ``key = value`` lines for the RunConfig
fields; flags override it.  POLYFACT_OUT_DIR, if set, is where relative
``--output`` paths are written.

Exit codes: 0 success, 1 when Unknown verdicts dominate a report, 2 on
usage errors or unsupported inputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import arith
from .bhargava import BhargavaSet, bhargava_profile, p_ordering
from .formclass import (
    PSet,
    Unsupported,
    factor_over_Z,
    in_pset,
    is_irreducible,
    parse_form,
    parse_poly,
    prime_status,
    residue_class_check,
    root_density,
)
from .genfact import HSeq, PiK, ideal_count
from .hunt import bertrand_gap_check, brocard_search, certificate_search, family_check, parse_rhs
from .quadrep import (
    QuadForm,
    is_sum_three_squares,
    representable_bruteforce,
    representable_criterion,
)


@dataclass
class RunConfig:
    digit_bound: int = 100_000
    sieve_budget: int = 50_000_000
    l_min: int = 1
    l_max: int = 100
    prime_bound: int = 1000
    window_multiplier: int = 8
    ratio: float = 2.0
    workers: int = 1
    output: str | None = None

    def validate(self):
        for name in ("digit_bound", "sieve_budget", "l_min", "l_max", "prime_bound", "window_multiplier"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.ratio <= 1:
            raise ValueError("ratio must exceed 1")


def load_config(path) -> dict:
    types = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or key not in types:
            raise ValueError(f"{path}:{n}: expected 'key = value' with a known key")
        if key == "output":
            out[key] = value
        elif key == "ratio":
            out[key] = float(value)
        else:
            out[key] = int(value)
    return out


def _config(args) -> RunConfig:
    values = load_config(args.config) if args.config else {}
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    cfg = RunConfig(**values)
    cfg.validate()
    arith.LIMITS.digit_bound = cfg.digit_bound
    arith.LIMITS.sieve_budget = cfg.sieve_budget
    return cfg


def _range(text: str | None, cfg: RunConfig) -> tuple[int, int]:
    if text is None:
        return cfg.l_min, cfg.l_max
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError(f"range must look like lo:hi, got {text!r}")
    return int(lo), int(hi)


def _emit(text: str, cfg: RunConfig):
    if cfg.output:
        path = Path(cfg.output)
        outdir = os.environ.get("POLYFACT_OUT_DIR")
        if outdir and not path.is_absolute():
            path = Path(outdir) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")
    else:
        print(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=1, default=str)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue().rstrip("\n")


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------


def cmd_form_info(args, cfg):
    F = parse_form(args.form)
    info = {
        "form": str(F),
        "coefficients": list(F.coeffs),
        "degree": F.degree,
        "content": F.content,
        "disc": F.disc,
        "disc_mod": F.disc_mod,
    }
    try:
        info["irreducible"] = is_irreducible(F)
        info["factors"] = [{"factor": str(f), "multiplicity": m} for f, m in factor_over_Z(F)]
    except Unsupported as exc:
        info["factors"] = f"unsupported: {exc}"
    _emit(_json(info), cfg)


def cmd_form_cycletype(args, cfg):
    F = parse_form(args.form)
    if args.prime is not None:
        st = prime_status(F, args.prime)
        out = {"prime": st.prime, "bad": st.bad, "cycle_type": list(st.cycle) if st.cycle else None}
        _emit(_json(out), cfg)
        return
    rows = []
    for p in arith.primes_up_to(args.upto).tolist():
        st = prime_status(F, p)
        rows.append({"p": p, "bad": st.bad, "cycle_type": " ".join(map(str, st.cycle)) if st.cycle else ""})
    _emit(_csv(rows) if args.csv else _json(rows), cfg)


def cmd_form_pset(args, cfg):
    F = parse_form(args.form)
    if args.residue:
        a, _, b = args.residue.partition(":")
        found = residue_class_check(F, (int(a), int(b)), args.upto)
        _emit(_json({"form": str(F), "upto": args.upto, **found}), cfg)
        return
    ps = [p for p in arith.primes_up_to(args.upto).tolist() if in_pset(F, p) is PSet.IN]
    _emit(_csv([{"p": p} for p in ps]) if args.csv else _json({"form": str(F), "upto": args.upto, "primes": ps}), cfg)


def cmd_form_density(args, cfg):
    F = parse_form(args.form)
    frac, n = root_density(F, args.upto, cfg.workers)
    row = {"form": str(F), "upto": args.upto, "good_primes": n, "with_root": int(frac * n),
           "density": float(frac)}
    _emit(_csv([row]) if args.csv else _json(row), cfg)


def cmd_rep_test(args, cfg):
    Q = QuadForm.from_binary(parse_form(args.form))
    if not Q.positive_definite:
        raise Unsupported("rep test needs a positive definite form")
    N = args.N
    w = representable_bruteforce(Q, N)
    out = {"form": str(Q), "N": N, "representable": w is not None, "witness": list(w) if w else None}
    try:
        dec = representable_criterion(Q, N)
        out["criterion"] = {"representable": dec.representable, "reason": dec.reason,
                            "prime": dec.prime, "exponent": dec.exponent}
        out["agree"] = dec.representable == (w is not None)
    except Unsupported as exc:
        out["criterion"] = f"unsupported: {exc}"
    _emit(_json(out), cfg)
    return 0 if out.get("agree", True) else 1


def cmd_rep_three_squares(args, cfg):
    _emit(_json({"N": args.N, "sum_of_three_squares": is_sum_three_squares(args.N)}), cfg)


def _profile_json(v, **extra) -> str:
    out = dict(extra)
    out["factors"] = {str(p): e for p, e in sorted(v.factors.items())}
    out["log_value"] = v.log_value
    if v.truncated_at is not None:
        out["truncated_at"] = v.truncated_at
    if v.unstable:
        out["unstable"] = sorted(v.unstable)
    return _json(out)


def cmd_fact_profile(args, cfg):
    kind = HSeq.parse(args.kind)
    _emit(_profile_json(kind.profile(args.l), kind=str(kind), l=args.l), cfg)


def cmd_pik_profile(args, cfg):
    _emit(_profile_json(PiK.quadratic(args.delta).profile(args.l), delta=args.delta, l=args.l), cfg)


def cmd_pik_count(args, cfg):
    _emit(_json({"delta": args.delta, "n": args.n, "ideal_count": ideal_count(args.delta, args.n)}), cfg)


def cmd_bharg_profile(args, cfg):
    S = BhargavaSet.parse(args.set)
    v = bhargava_profile(S, args.l, cfg.prime_bound, cfg.window_multiplier)
    _emit(_profile_json(v, set=str(S), l=args.l), cfg)


def cmd_bharg_order(args, cfg):
    S = BhargavaSet.parse(args.set)
    seq = p_ordering(S, args.p, args.len, multiplier=cfg.window_multiplier)
    _emit(_json({"set": str(S), "p": args.p, "ordering": list(seq.ordering), "p_sequence": list(seq.values),
                 "stable": list(seq.stable)}), cfg)


def cmd_hunt_brocard(args, cfg):
    report = brocard_search(parse_poly(args.poly), args.lmax if args.lmax is not None else cfg.l_max)
    _emit(report.to_json(meta=not args.no_meta), cfg)


def cmd_hunt_certify(args, cfg):
    lo, hi = _range(args.range, cfg)
    rhs = parse_rhs(args.rhs, cfg.window_multiplier)
    report = certificate_search(parse_form(args.form), rhs, lo, hi, args.mode, cfg.workers)
    _emit(report.to_json(meta=not args.no_meta), cfg)
    return 1 if report.unknown_dominated else 0


def cmd_hunt_family(args, cfg):
    lo, hi = _range(args.arange, cfg)
    rows = family_check(lo, hi)
    _emit(_json({"range": {"lo": lo, "hi": hi}, "all_ok": all(r["ok"] for r in rows), "rows": rows}), cfg)
    return 0 if all(r["ok"] for r in rows) else 1


def cmd_hunt_gaps(args, cfg):
    lo, hi = _range(args.range, cfg)
    if args.residue:
        a, _, b = args.residue.partition(":")
        eligible, label = (int(a), int(b)), args.residue
    elif args.form:
        eligible = parse_form(args.form)
        label = str(eligible)
    else:
        raise ValueError("give --residue a:b or --form F")
    viol = bertrand_gap_check(eligible, lo, hi, cfg.ratio)
    rows = [{"p": p, "next": q} for p, q in viol]
    if args.csv:
        _emit(_csv(rows) if rows else "p,next", cfg)
    else:
        _emit(_json({"eligible": label, "range": {"lo": lo, "hi": hi}, "ratio": cfg.ratio, "violations": rows}), cfg)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--digit-bound", dest="digit_bound", type=int)
    common.add_argument("--sieve-budget", dest="sieve_budget", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--no-meta", dest="no_meta", action="store_true", help="omit timing for reproducible JSON")
    common.add_argument("--csv", action="store_true", help="CSV instead of JSON (tables only)")

    ap = argparse.ArgumentParser(prog="polyfact", description=__doc__.split("\n\n")[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    groups = ap.add_subparsers(dest="group", required=True)

    def add(group, name, func, help_text):
        sp = group.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    g = groups.add_parser("form", help="binary forms").add_subparsers(dest="cmd", required=True)
    sp = add(g, "info", cmd_form_info, "discriminants and factorization")
    sp.add_argument("form")
    sp = add(g, "cycletype", cmd_form_cycletype, "cycle type of Frobenius")
    sp.add_argument("form")
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--prime", type=int)
    which.add_argument("--upto", type=int)
    sp = add(g, "pset", cmd_form_pset, "primes where the form has no nontrivial zero")
    sp.add_argument("form")
    sp.add_argument("--upto", type=int, required=True)
    sp.add_argument("--residue", help="a:b; report primes = a mod b outside the set instead")
    sp = add(g, "density", cmd_form_density, "share of good primes with a zero")
    sp.add_argument("form")
    sp.add_argument("--upto", type=int, required=True)

    g = groups.add_parser("rep", help="quadratic representation").add_subparsers(dest="cmd", required=True)
    sp = add(g, "test", cmd_rep_test, "criterion and brute force, cross-checked")
    sp.add_argument("form")
    sp.add_argument("N", type=int)
    sp = add(g, "three-squares", cmd_rep_three_squares, "sum of three squares test")
    sp.add_argument("N", type=int)

    g = groups.add_parser("fact", help="factorial-like profiles").add_subparsers(dest="cmd", required=True)
    sp = add(g, "profile", cmd_fact_profile, "exponent profile of H_l")
    sp.add_argument("--kind", required=True)
    sp.add_argument("--l", type=int, required=True)

    g = groups.add_parser("pik", help="Pi_K for quadratic fields").add_subparsers(dest="cmd", required=True)
    sp = add(g, "profile", cmd_pik_profile, "exponent profile of Pi_K(l)")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp = add(g, "count", cmd_pik_count, "number of ideals of norm n")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    g = groups.add_parser("bharg", help="Bhargava factorials").add_subparsers(dest="cmd", required=True)
    sp = add(g, "profile", cmd_bharg_profile, "exponents of l!_S")
    sp.add_argument("--set", required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--primes", dest="prime_bound", type=int)
    sp.add_argument("--window-multiplier", dest="window_multiplier", type=int)
    sp = add(g, "order", cmd_bharg_order, "greedy p-ordering")
    sp.add_argument("--set", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--len", type=int, required=True)
    sp.add_argument("--window-multiplier", dest="window_multiplier", type=int)

    g = groups.add_parser("hunt", help="searches and certificates").add_subparsers(dest="cmd", required=True)
    sp = add(g, "brocard", cmd_hunt_brocard, "all (x, l) with P(x) = l!")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--lmax", type=int)
    sp = add(g, "certify", cmd_hunt_certify, "per-l verdicts for F(x, y) = RHS(l)")
    sp.add_argument("--form", required=True)
    sp.add_argument("--rhs", default="factorial")
    sp.add_argument("--range")
    sp.add_argument("--mode", choices=("auto", "norm"), default="auto")
    sp.add_argument("--window-multiplier", dest="window_multiplier", type=int)
    sp = add(g, "family", cmd_hunt_family, "check the x^2 - y^2 = a! family")
    sp.add_argument("--arange", required=True)
    sp = add(g, "gaps", cmd_hunt_gaps, "eligible primes without a successor in (p, A p)")
    sp.add_argument("--residue")
    sp.add_argument("--form")
    sp.add_argument("--range")
    sp.add_argument("--ratio", type=float)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _config(args)
        code = args.func(args, cfg)
    except (ValueError, Unsupported, OverflowError, MemoryError, LookupError, OSError) as exc:
        print(f"polyfact: error: {exc}", file=sys.stderr)
        return 2
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
