"""Command-line entry point: certification, face table, search, diagnostics.

Reports are plain structured text: `key = value` lines with `name { ... }`
nesting.  Scalar values are JSON-encoded (floats through repr, so every
numeric field round-trips bit-exactly); exact rationals are written a/b.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__, caratheodory, certify, functionals, objective, search, series
from ._kernels import backend_name

_RATIONAL_RE = re.compile(r"^-?\d+/\d+$")


# ---------------------------------------------------------------------------
# structured-text reports

def _emit_value(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, (list, tuple, np.ndarray)):
        items = [json.dumps(x.item() if isinstance(x, (np.floating, np.integer)) else x)
                 for x in v]
        return "[" + ", ".join(items) + "]"
    return json.dumps(v)


def _emit_lines(data: dict, indent: int, out: list) -> None:
    pad = "  " * indent
    for key, value in data.items():
        if isinstance(value, dict):
            out.append(f"{pad}{key} {{")
            _emit_lines(value, indent + 1, out)
            out.append(f"{pad}}}")
        else:
            out.append(f"{pad}{key} = {_emit_value(value)}")


def format_report(data: dict) -> str:
    lines: list = []
    _emit_lines(data, 0, lines)
    return "\n".join(lines) + "\n"


def emit_report(data: dict, path) -> None:
    text = format_report(data)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _parse_value(text: str):
    text = text.strip()
    if _RATIONAL_RE.match(text):
        return Fraction(text)
    return json.loads(text)


def parse_report(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    root: dict = {}
    stack = [root]
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        if line == "}":
            stack.pop()
        elif line.endswith("{"):
            child: dict = {}
            stack[-1][line[:-1].strip()] = child
            stack.append(child)
        else:
            key, _, value = line.partition("=")
            stack[-1][key.strip()] = _parse_value(value)
    if len(stack) != 1:
        raise ValueError("unbalanced braces in report")
    return root


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None
    duration_seconds: float

    def as_dict(self) -> dict:
        d = {
            "command": self.command,
            "version": __version__,
            "backend": backend_name(),
            "duration_seconds": self.duration_seconds,
        }
        if self.seed is not None:
            d["seed"] = self.seed
        d["parameters"] = dict(self.parameters)
        return d


def _report_with_manifest(body: dict, command: str, params: dict, seed, t0: float) -> dict:
    body["manifest"] = RunManifest(
        command=command,
        parameters=params,
        seed=seed,
        duration_seconds=time.monotonic() - t0,
    ).as_dict()
    return body


# ---------------------------------------------------------------------------
# subcommands

def _cert_report_dict(rep: certify.CertificationReport) -> dict:
    return rep.as_dict()


def _cmd_certify(args) -> int:
    t0 = time.monotonic()
    target = Fraction(args.target)
    rep = certify.certify_global(
        target=target, tol=args.tol, max_boxes=args.max_boxes, workers=args.workers
    )
    body = _cert_report_dict(rep)
    params = {"target": str(target), "tol": args.tol, "max_boxes": args.max_boxes,
              "workers": args.workers}
    body = _report_with_manifest(body, "certify", params, None, t0)
    if args.out:
        emit_report(body, args.out)
    print(f"target          : {target} (scaled {float(target) * certify.SCALE:g})")
    print(f"verdict         : {rep.verdict}")
    print(f"upper bound     : {rep.certified_upper_bound!r} (scaled {rep.scaled_upper_bound!r})")
    print(f"lower bound     : {rep.best_lower_bound!r} at {rep.witness}")
    print(f"boxes processed : {rep.boxes_processed}, max depth {rep.max_depth}")
    return 0 if rep.verdict == "certified" else 1


def _face_table(tol_override, max_boxes, workers):
    tols = None
    if tol_override is not None:
        tols = {name: tol_override for name in objective.FACE_IDS}
    reports = certify.certify_faces(tols=tols, max_boxes=max_boxes, workers=workers)
    table = {}
    for name in objective.FACE_IDS:
        face = objective.FACES[name]
        computed, argmax = objective.face_maximum(name)
        rep = reports[name]
        table[name] = {
            "paper_value": face.quoted_max,
            "computed_max": computed,
            "argmax": {nm: x for nm, x in zip(face.poly.var_names, argmax)},
            "delta": computed - face.quoted_max,
            "certified_upper_bound": rep.certified_upper_bound,
            "best_lower_bound": rep.best_lower_bound,
            "verdict": rep.verdict,
            "boxes_processed": rep.boxes_processed,
        }
    return table


def _cmd_faces(args) -> int:
    t0 = time.monotonic()
    table = _face_table(args.tol, args.max_boxes, args.workers)
    params = {"tol": args.tol, "max_boxes": args.max_boxes, "workers": args.workers}
    body = _report_with_manifest({"faces": table}, "faces", params, None, t0)
    if args.out:
        emit_report(body, args.out)
    print(f"{'face':<5} {'quoted':>12} {'computed':>20} {'delta':>12} "
          f"{'certified UB':>20} {'verdict':>12}")
    ok = True
    for name, row in table.items():
        print(f"{name:<5} {row['paper_value']:>12.6f} {row['computed_max']:>20.12f} "
              f"{row['delta']:>12.2e} {row['certified_upper_bound']:>20.12f} "
              f"{row['verdict']:>12}")
        ok = ok and row["verdict"] == "certified"
    return 0 if ok else 1


def _measure_dict(m: caratheodory.HerglotzMeasure) -> dict:
    return {
        "angles": list(m.angles),
        "weights": list(m.weights),
        "conjugate_symmetric": m.conjugate_symmetric,
    }


def _cmd_search(args) -> int:
    t0 = time.monotonic()
    cfg = search.SearchConfig(
        samples=args.samples,
        atoms_g=args.atoms,
        atoms_h=args.atoms,
        real_b2=args.real_b2,
        refine_steps=args.refine_steps,
        seed=args.seed,
    )
    result = search.run_search(cfg, workers=args.workers, csv_path=args.csv)
    best = result.best
    body = {
        "config": {
            "samples": cfg.samples, "atoms_g": cfg.atoms_g, "atoms_h": cfg.atoms_h,
            "real_b2": cfg.real_b2, "refine_steps": cfg.refine_steps, "seed": cfg.seed,
        },
        "best_gamma3": best.gamma3_abs,
        "best_origin": list(map(str, best.origin)),
        "witness_measures": {
            "p_side": _measure_dict(best.p_measure),
            "h_side": _measure_dict(best.h_measure),
        },
        "max_gamma1": result.max_gamma1,
        "max_gamma2": result.max_gamma2,
        "max_gamma3": result.max_gamma3,
        "exceed_7_12": result.exceed_7_12,
        "violations": result.violations,
        "histogram": {
            "edges": result.histogram_edges,
            "counts": result.histogram,
        },
    }
    body = _report_with_manifest(body, "search", body["config"], cfg.seed, t0)
    if args.out:
        emit_report(body, args.out)
    print(f"samples         : {cfg.samples} (real_b2={cfg.real_b2}, atoms={args.atoms})")
    print(f"best |gamma3|   : {best.gamma3_abs!r} (origin {best.origin})")
    print(f"max |gamma1|    : {result.max_gamma1!r} (bound 1)")
    print(f"max |gamma2|    : {result.max_gamma2!r} (bound 11/18 = {11 / 18:.6f})")
    print(f"max |gamma3|    : {result.max_gamma3!r} (bound 7/12 = {7 / 12:.6f})")
    if not cfg.real_b2:
        print(f"samples > 7/12  : {result.exceed_7_12}")
    failed = sum(result.violations.values())
    if failed:
        print(f"BOUND VIOLATIONS: {result.violations}")
    return 1 if failed else 0


_PRESETS = {
    "koebe": lambda order: series.koebe(order + 1),
    "identity": lambda order: series.SchlichtSeries((0, 1) + (0,) * order),
    "odd-starlike": lambda order: series.SchlichtSeries(
        tuple(1 if (k % 2 == 1) else 0 for k in range(order + 2))
    ),
}


def _cmd_gamma(args) -> int:
    order = args.order
    if args.coeffs:
        tail = [complex(tok) for tok in args.coeffs.split(",")]
        f = series.SchlichtSeries((0, 1, *tail))
        order = min(order, f.order - 1)
    else:
        f = _PRESETS[args.preset](order)
    gv = functionals.gamma_vector(f, order)
    print(f"{'n':>3} {'gamma_n':>44} {'|gamma_n|':>22}")
    for n in range(1, order + 1):
        g = gv[n]
        print(f"{n:>3} {g!r:>44} {abs(g):>22.16f}")
    return 0


def _cmd_verify(args) -> int:
    n = args.samples
    rng = np.random.default_rng(args.seed)
    failures = 0

    def check(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        tag = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        print(f"{tag}  {name}  {detail}")

    # series round trips
    worst_log = worst_div = 0.0
    for _ in range(n):
        order = 12
        coeffs = rng.uniform(-1, 1, order + 1) + 1j * rng.uniform(-1, 1, order + 1)
        a = series.series([1 + 0j, *coeffs[1:]])
        back = series.exp_series(series.log_series(a))
        worst_log = max(worst_log, max(abs(x - y) for x, y in zip(back.coeffs, a.coeffs)))
        b = series.series([coeffs[0] + 2.5, *coeffs[1:]])
        back2 = series.mul(series.div(a, b), b)
        worst_div = max(worst_div, max(abs(x - y) for x, y in zip(back2.coeffs, a.coeffs)))
    check("series exp(log(a)) = a", worst_log < 1e-12, f"max err {worst_log:.2e}")
    check("series (a/b)*b = a", worst_div < 1e-12, f"max err {worst_div:.2e}")

    # parametrization round trip on sampled measures
    worst = 0.0
    bad = 0
    for _ in range(n):
        m = caratheodory.sample_measure(3, True, rng)
        c1, c2, c3 = caratheodory.herglotz_coefficients(m, 3)
        c1 = c1.real
        if not 0 <= c1 < 2:
            continue
        try:
            inv = caratheodory.lemma_invert(c1, c2, c3)
        except caratheodory.NotInClassError:
            bad += 1
            continue
        if inv.t_determined:
            f2, f3 = caratheodory.lemma_forward(
                caratheodory.LemmaParams(c1, inv.x, inv.t)
            )
            worst = max(worst, abs(f2 - c2), abs(f3 - c3))
    check("parametrization round trip", worst < 1e-10 and bad == 0,
          f"max err {worst:.2e}, infeasible {bad}")

    # closed forms vs recurrences
    worst = 0.0
    for _ in range(n):
        mp = caratheodory.sample_measure(2, True, rng)
        mh = caratheodory.sample_measure(2, False, rng)
        from .classes import CtcInstance, a234_from_cp

        inst = CtcInstance.from_measures(mp, mh, 4)
        p = caratheodory.herglotz_coefficients(mp, 3)
        c = caratheodory.herglotz_coefficients(mh, 3)
        a2, a3, a4 = a234_from_cp(*c, *p)
        worst = max(worst, abs(a2 - inst.f.coeffs[2]), abs(a3 - inst.f.coeffs[3]),
                    abs(a4 - inst.f.coeffs[4]))
    check("closed forms vs recurrences", worst < 1e-12, f"max err {worst:.2e}")

    # triangle-inequality chain, vectorized
    m = 10 * n
    c1 = rng.uniform(0, 2, m)
    p1 = rng.uniform(-2, 2, m)
    def disk(k):
        r = np.sqrt(rng.uniform(0, 1, k))
        a = rng.uniform(0, 2 * math.pi, k)
        return r * np.exp(1j * a)
    lhs, rhs = objective.bound_chain_arrays(c1, disk(m), disk(m), p1, disk(m), disk(m))
    worst = float((lhs - rhs).max())
    check("bound chain lhs <= F", worst <= 1e-12, f"max lhs-rhs {worst:.2e}")

    # Milin diagnostic
    cfg = search.SearchConfig(samples=max(n, 64), seed=args.seed)
    milin = search.milin_max(cfg, n_samples=max(n, 64))
    check("Milin partial sums <= 0", milin <= 1e-12, f"max {milin:.2e}")

    # gradient against central differences
    worst = 0.0
    for _ in range(n):
        pt = objective.FPoint(*(rng.uniform(0.05, 0.95, 4) * [2, 2, 1, 1]))
        g = objective.grad_F(pt)
        h = 1e-5
        for i in range(4):
            up = list(pt.as_tuple())
            dn = list(pt.as_tuple())
            up[i] += h
            dn[i] -= h
            fd = (objective.f48_fn(*up) - objective.f48_fn(*dn)) / (2 * h * objective.SCALE)
            denom = max(1.0, abs(fd))
            worst = max(worst, abs(g[i] - fd) / denom)
    check("gradient vs central differences", worst < 1e-6, f"max rel err {worst:.2e}")

    print(f"{failures} failure(s)")
    return 1 if failures else 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="logcoef",
        description="Certified bounds and extremal search for logarithmic "
                    "coefficients of close-to-convex functions.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    fmt = {"formatter_class": argparse.ArgumentDefaultsHelpFormatter}

    p = sub.add_parser("certify", help="certify the global bound on the majorant", **fmt)
    p.add_argument("--target", default="7/6", help="exact rational target for F")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="tolerance on the 48-scaled polynomial")
    p.add_argument("--max-boxes", type=int, default=10_000_000, help="box budget")
    p.add_argument("--workers", type=int, default=1, help="parallel workers")
    p.add_argument("--out", default=None, help="write the structured report here")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("faces", help="bracket all eight face maxima, compare with the quoted values", **fmt)
    p.add_argument("--tol", type=float, default=None,
                   help="override the per-face bracket tolerance (48-scaled)")
    p.add_argument("--max-boxes", type=int, default=4_000_000, help="box budget per face")
    p.add_argument("--workers", type=int, default=1, help="parallel workers")
    p.add_argument("--out", default=None, help="write the structured report here")
    p.set_defaults(func=_cmd_faces)

    p = sub.add_parser("search", help="Monte-Carlo extremal search over the class", **fmt)
    p.add_argument("--samples", type=int, default=10_000, help="instances to draw")
    p.add_argument("--atoms", type=int, default=3, help="atoms per measure")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--real-b2", dest="real_b2", action="store_true", default=True,
                     help="force a real starlike second coefficient (the sharp-bound hypothesis)")
    grp.add_argument("--complex-b2", dest="real_b2", action="store_false",
                     help="drop the real-b2 restriction (exploratory mode)")
    p.add_argument("--refine-steps", type=int, default=0, help="hill-climbing steps on the best record")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--workers", type=int, default=1, help="parallel workers")
    p.add_argument("--csv", default=None, help="dump per-sample moduli as CSV")
    p.add_argument("--out", default=None, help="write the structured report here")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("gamma", help="logarithmic coefficients of presets or supplied coefficients", **fmt)
    p.add_argument("--preset", choices=sorted(_PRESETS), default="koebe", help="built-in function")
    p.add_argument("--coeffs", default=None,
                   help="comma-separated a2,a3,... (overrides --preset)")
    p.add_argument("--order", type=int, default=8, help="highest coefficient index to print")
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("verify", help="run the quick property suite", **fmt)
    p.add_argument("--samples", type=int, default=500, help="draws per property")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.set_defaults(func=_cmd_verify)

    return ap


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
