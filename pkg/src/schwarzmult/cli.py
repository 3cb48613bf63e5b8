"""Command-line front end.

Results go to stdout (or ``--out FILE``) as JSON with 15 significant digits,
or as CSV with a header row.  Exit codes: 0 success, 2 usage error or unknown
function, 3 numeric divergence where divergence is an error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bergman, curveclass, grunsky, multiplier, schwarzian, spectrum
from .errors import DomainError, NormInfinite, NumericalError, RegistryError, SeriesError
from .series import DEFAULT_ORDER, build_from_spec, parse_number

EXIT_OK, EXIT_USAGE, EXIT_DIVERGED = 0, 2, 3

REGISTRY_HELP = {
    "identity": "z",
    "moebius": "moebius:a,b,c,d  (az+b)/(cz+d), ad-bc != 0, |c| < |d|",
    "koebe": "z/(1-z)^2",
    "scaled-koebe": "scaled-koebe:q  z/(1-qz)^2, 0 < q < 1",
    "quad": "quad:eps  z + eps z^2, |eps| <= 1/2",
    "poly": "poly:c1,c2,...  c1 z + c2 z^2 + ..., c1 != 0",
    "series-file": "series-file:PATH  Taylor coefficients, lines 'n re im'",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    fn_spec: Optional[str]
    alpha: float
    tol: float
    seed: int
    order: int
    output: str
    unit_mass: bool

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        cfg = cls(ns.subcommand, getattr(ns, "fn_spec", None), ns.alpha, ns.tol, ns.seed,
                  ns.order, ns.output, ns.unit_mass)
        if not cfg.tol > 0:
            raise UsageError("--tol must be positive")
        if cfg.order < 4:
            raise UsageError("--order must be at least 4")
        if not math.isfinite(cfg.alpha):
            raise UsageError("--alpha must be finite")
        return cfg


def _clean(x):
    """Round floats to 15 significant digits, map complex to {re, im}, inf/nan to null."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(f"{x:.15g}") + 0.0 if math.isfinite(x) else None
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _clean(x.real), "im": _clean(x.imag)}
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_clean(v) for v in x]
    return x


def to_json(obj) -> str:
    return json.dumps(_clean(obj), allow_nan=False) + "\n"


def rows_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.15g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _common(p: argparse.ArgumentParser, fn: bool = True) -> None:
    if fn:
        p.add_argument("--fn", dest="fn_spec", help="function spec name:p1,p2 (see `fn list`)")
    p.add_argument("--alpha", type=float, default=3.0, help="Bergman weight alpha (default 3)")
    p.add_argument("--tol", type=float, default=1e-8, help="quadrature tolerance (default 1e-8)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER, help="series truncation order")
    p.add_argument("--output", choices=("json", "csv"), default="json", help="output format")
    p.add_argument("--unit-mass", action="store_true", help="divide Bergman norms by sqrt(pi)")
    p.add_argument("--out", help="write the result to FILE instead of stdout")
    p.add_argument("--config", help="key=value file of defaults; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="schwarzmult", description="Schwarzian multiplier toolkit")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    p = sub.add_parser("fn", help="function registry")
    p.add_argument("action", choices=("list",))
    _common(p, fn=False)

    p = sub.add_parser("schwarzian", help="S_f at a point")
    _common(p)
    p.add_argument("--z", required=True, help="point in the disk, e.g. 0.3+0.1i")
    p.add_argument("--mode", choices=("auto", "series", "derivs", "closed"), default="auto")

    p = sub.add_parser("bloch-norm", help="sup |S_f| (1-|z|^2)^2")
    _common(p)
    p.add_argument("--depth", type=int, default=10, help="radial grid depth")

    p = sub.add_parser("aw-k", help="Ahlfors-Weill dilatation bound ||S_f||/2 when below 1")
    _common(p)
    p.add_argument("--depth", type=int, default=10, help="radial grid depth")

    p = sub.add_parser("bergman-norm", help="||h||_alpha for h = f, a monomial or a kernel probe")
    _common(p)
    p.add_argument("--monomial", type=int, help="use h = z^n instead of --fn")
    p.add_argument("--probe", help="use the normalized kernel probe psi_a instead of --fn")

    p = sub.add_parser("multiplier-check", help="observed multiplier ratios against the k-bound")
    _common(p)
    p.add_argument("--k", type=float, help="dilatation bound (default: Ahlfors-Weill)")
    p.add_argument("--trials", type=int, default=100, help="random polynomial trials")

    p = sub.add_parser("shimorin-bound", help="36(alpha+1)(alpha+3)/(alpha(alpha+2))")
    _common(p, fn=False)

    p = sub.add_parser("thresholds", help="5/8, k*, k0, k1")
    _common(p, fn=False)

    p = sub.add_parser("spectrum", help="integral means spectrum estimate")
    _common(p)
    p.add_argument("--t", type=float, required=True, help="real exponent t")
    p.add_argument("--jmin", type=int, default=5, help="first radius 1 - 2^-jmin")
    p.add_argument("--jmax", type=int, default=12, help="last radius 1 - 2^-jmax (<= 14)")

    p = sub.add_parser("hedenmalm-bound", help="spectrum bound for a k-quasidisk")
    _common(p, fn=False)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--t", type=float, required=True)

    p = sub.add_parser("grunsky", help="Grunsky matrix, norm and a seeded inequality check")
    _common(p)
    p.add_argument("--N", type=int, default=8, help="matrix size")
    p.add_argument("--k", type=float, default=1.0, help="k in the strengthened inequality")
    p.add_argument("--vectors", type=int, default=200, help="seeded lambda vectors")

    p = sub.add_parser("classify", help="boundary-curve classification report")
    _common(p)
    p.add_argument("--depth", type=int, default=8, help="Carleson dyadic depth")
    p.add_argument("--terms", type=int, default=48, help="Hilbert-Schmidt partial sum length")

    p = sub.add_parser("chordarc", help="chord-arc constant of f(S^1)")
    _common(p)
    p.add_argument("--M", type=int, default=1024, help="boundary samples")

    p = sub.add_parser("ode-check", help="series residual of the third-order identity for 1/f'")
    _common(p)
    p.add_argument("--ode-order", type=int, default=20, help="coefficients compared")
    return parser


def read_config(path: str) -> list[str]:
    """Turn key=value lines into flag tokens placed before the real flags."""
    tokens = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"config line without '=': {raw!r}")
        flag = "--" + key.strip().replace("_", "-")
        if flag == "--fn-spec":
            flag = "--fn"
        value = value.strip()
        if flag == "--unit-mass":
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(flag)
            continue
        tokens += [flag, value]
    return tokens


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    argv = list(argv)
    if not argv or argv[0].startswith("-"):
        if argv and argv[0] in ("-h", "--help"):
            parser.parse_args(argv)
        raise UsageError("a subcommand is required")
    ns = parser.parse_args(argv)
    if ns.config:
        ns = parser.parse_args([argv[0], *read_config(ns.config), *argv[1:]])
    return ns


def _need_fn(ns):
    if not ns.fn_spec:
        raise UsageError("--fn is required")
    return build_from_spec(ns.fn_spec, order=ns.order, with_dilatation=False)


def _scale_norm(ns, value: float) -> float:
    return value / math.sqrt(math.pi) if ns.unit_mass else value


def run_fn(ns):
    rows = [(n, REGISTRY_HELP[n]) for n in REGISTRY_HELP]
    if ns.output == "csv":
        return rows_csv(["name", "usage"], rows)
    return to_json({"functions": [{"name": n, "usage": u} for n, u in rows]})


def run_schwarzian(ns):
    f = _need_fn(ns)
    z = complex(parse_number(ns.z))
    s = schwarzian.schwarzian_at(f, z, ns.mode)
    if ns.output == "csv":
        return rows_csv(["z_re", "z_im", "S_re", "S_im"], [(z.real, z.imag, s.real, s.imag)])
    return to_json({"f": f.label, "z": z, "schwarzian": s})


def run_bloch(ns):
    f = _need_fn(ns)
    est = schwarzian.bloch_estimate(f, ns.depth)
    out = {"f": f.label, "bloch_norm": est.value, "argmax": est.argmax, "refinement_delta": est.refinement_delta}
    if ns.output == "csv":
        return rows_csv(["f", "bloch_norm"], [(f.label, est.value)])
    return to_json(out)


def run_awk(ns):
    f = _need_fn(ns)
    norm = schwarzian.bloch_norm(f, ns.depth)
    k = norm / 2 if norm < schwarzian.AHLFORS_WEILL_LIMIT else None
    if ns.output == "csv":
        return rows_csv(["f", "bloch_norm", "k"], [(f.label, norm, "" if k is None else k)])
    return to_json({"f": f.label, "bloch_norm": norm, "k": k, "admissible": k is not None})


def run_bergman(ns):
    alpha = bergman.check_alpha(ns.alpha)
    if ns.monomial is not None:
        from .series import TaylorSeries

        h, label = TaylorSeries.monomial(ns.monomial), f"z^{ns.monomial}"
    elif ns.probe is not None:
        a = complex(parse_number(ns.probe))
        h, label = bergman.kernel_probe(a, alpha), f"psi_{ns.probe}"
    else:
        f = _need_fn(ns)
        h, label = f, f.label
    norm = _scale_norm(ns, bergman.bergman_norm(h, alpha, ns.tol))
    if ns.output == "csv":
        return rows_csv(["h", "alpha", "norm"], [(label, alpha, norm)])
    return to_json({"h": label, "alpha": alpha, "norm": norm, "unit_mass": ns.unit_mass})


def run_multiplier(ns):
    f = _need_fn(ns)
    k = ns.k if ns.k is not None else schwarzian.ahlfors_weill_k(f)
    if k is None:
        raise DomainError(f"no admissible dilatation bound for {f.label}; pass --k")
    rep = multiplier.theorem1_check(f, k, ns.alpha, ns.trials, ns.seed, ns.tol)
    # ratios of squared norms are unchanged by the unit-mass rescaling
    d = rep.to_dict()
    if ns.output == "csv":
        return rows_csv(list(d), [tuple(d.values())])
    return to_json(d)


def run_shimorin(ns):
    v = multiplier.shimorin_bound(ns.alpha)
    if ns.output == "csv":
        return rows_csv(["alpha", "shimorin_bound"], [(ns.alpha, v)])
    return to_json({"alpha": ns.alpha, "shimorin_bound": v})


def thresholds(tol: float = 1e-12) -> dict:
    b = multiplier.brennan_threshold()
    k0, k1 = spectrum.hedenmalm_roots(min(tol, 1e-12))
    return {
        "five_eighths": b.inf_value,
        "k_star": b.k_star,
        "k0": k0,
        "k1": k1,
        "k_star_truncated_5": math.floor(b.k_star * 1e5) / 1e5,
        "k_star_rounded_5": round(b.k_star, 5),
        "alpha_argmin": b.alpha_argmin,
        "note": b.note,
    }


def run_thresholds(ns):
    d = thresholds(ns.tol)
    if ns.output == "csv":
        return rows_csv(["name", "value"], [(k, v) for k, v in d.items() if k != "note"])
    return to_json(d)


def run_spectrum(ns):
    f = _need_fn(ns)
    est = spectrum.spectrum_estimate(f, ns.t, ns.jmin, ns.jmax)
    if ns.output == "csv":
        return est.to_csv()
    d = est.to_dict()
    d["f"] = f.label
    return to_json(d)


def run_hedenmalm(ns):
    b = spectrum.hedenmalm_bound(ns.k, ns.t)
    if ns.output == "csv":
        return rows_csv(["k", "t", "bound", "regime"], [(ns.k, ns.t, b.bound, b.regime)])
    return to_json({"k": ns.k, "t": ns.t, "bound": b.bound, "regime": b.regime,
                    "switch": spectrum.hedenmalm_switch(ns.k)})


def run_grunsky(ns):
    f = _need_fn(ns)
    G = grunsky.grunsky_coefficients(f, ns.N)
    if ns.output == "csv":
        return G.to_csv()
    rng = np.random.default_rng(ns.seed)
    worst, holds = 0.0, True
    for _ in range(ns.vectors):
        lam = rng.standard_normal(ns.N) + 1j * rng.standard_normal(ns.N)
        form = grunsky.grunsky_form(G, lam, ns.k)
        holds &= form.holds
        worst = max(worst, form.lhs / form.rhs if form.rhs > 0 else 0.0)
    return to_json({
        "f": f.label, "N": ns.N, "convention": G.convention_note,
        "gamma": [[v for v in row] for row in G.gamma],
        "grunsky_norm": grunsky.grunsky_norm(G),
        "k": ns.k, "vectors": ns.vectors, "max_form_ratio": worst, "holds": holds,
    })


def run_classify(ns):
    f = _need_fn(ns)
    rep = curveclass.classify(f, ns.alpha, hs_terms=ns.terms, max_depth=ns.depth, tol=ns.tol)
    d = rep.to_dict()
    if ns.unit_mass:
        for key in ("partial_sum", "integral_value"):
            if d["hs_sum"][key] is not None:
                d["hs_sum"][key] /= math.pi
    if ns.output == "csv":
        return rep.profile_csv()
    return to_json(d)


def run_chordarc(ns):
    f = _need_fn(ns)
    c = curveclass.chordarc_constant(f, ns.M)
    if ns.output == "csv":
        return rows_csv(["f", "M", "chordarc"], [(f.label, ns.M, c)])
    return to_json({"f": f.label, "M": ns.M, "chordarc": c})


def run_ode(ns):
    f = _need_fn(ns)
    r = schwarzian.ode_identity_residual(f, ns.ode_order)
    if ns.output == "csv":
        return rows_csv(["f", "order", "residual"], [(f.label, ns.ode_order, r)])
    return to_json({"f": f.label, "order": ns.ode_order, "residual": r})


DISPATCH = {
    "fn": run_fn,
    "schwarzian": run_schwarzian,
    "bloch-norm": run_bloch,
    "aw-k": run_awk,
    "bergman-norm": run_bergman,
    "multiplier-check": run_multiplier,
    "shimorin-bound": run_shimorin,
    "thresholds": run_thresholds,
    "spectrum": run_spectrum,
    "hedenmalm-bound": run_hedenmalm,
    "grunsky": run_grunsky,
    "classify": run_classify,
    "chordarc": run_chordarc,
    "ode-check": run_ode,
}


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        ns = parse_args(argv)
        RunConfig.from_namespace(ns)
        text = DISPATCH[ns.subcommand](ns)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (UsageError, RegistryError, DomainError, SeriesError, FileNotFoundError) as exc:
        print(f"schwarzmult: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (NormInfinite, NumericalError) as exc:
        print(f"schwarzmult: numeric divergence: {exc}", file=stderr)
        return EXIT_DIVERGED
    if ns.out:
        Path(ns.out).write_text(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
