"""Command-line front end.

All logarithms are natural.  Scalar reports are JSON, distributions and
series are CSV (``--json`` forces JSON).  Exact probabilities are written
as ``num,den`` column pairs so that every cell parses back losslessly.

Exit status: 0 on success, 2 on a usage error, 1 when an input violates a
precondition (the message names it).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from .errors import DomainError
from .series import GaussianRational

WEIGHT_HELP = "weights: uniform | ewens:<rational> | coprime:<int> | table:<path.csv>"


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


# -- output helpers -----------------------------------------------------------


def _cell(x):
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, tuple):
        return " ".join(str(v) for v in x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator, "float": float(x)}
    if isinstance(x, GaussianRational):
        return {"re": _jsonable(x.re), "im": _jsonable(x.im)}
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


class Output:
    def __init__(self, args, argv):
        self.args = args
        self.argv = list(argv)
        self.meta = {"command": args.command, "argv": self.argv, "version": _version()}

    def add_meta(self, **kw):
        self.meta.update({k: v for k, v in kw.items() if v is not None})

    def _write(self, text: str):
        out = getattr(self.args, "out", None)
        if out:
            with open(out, "w", newline="") as fh:
                fh.write(text)
            side = dict(self.meta, timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"))
            with open(out + ".meta.json", "w") as fh:
                json.dump(side, fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            sys.stdout.write(text)

    def json(self, payload: dict):
        body = dict(payload)
        body["meta"] = self.meta
        self._write(json.dumps(_jsonable(body), indent=2, sort_keys=True) + "\n")

    def table(self, header: list[str], rows, payload_name: str = "rows"):
        rows = [list(r) for r in rows]
        if self.args.json:
            recs = [dict(zip(header, r)) for r in rows]
            self.json({payload_name: recs})
            return
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(x) for x in r])
        self._write(buf.getvalue())


def _prob_columns(atoms):
    exact = all(isinstance(a.prob, Fraction) for a in atoms)
    if exact:
        return ["value", "probability_num", "probability_den"], [
            [a.value, a.prob.numerator, a.prob.denominator] for a in atoms]
    return ["value", "probability"], [[a.value, float(a.prob)] for a in atoms]


def _weights(spec: str, n: int, force_float: bool = False):
    from .weights import parse_weight_spec

    return parse_weight_spec(spec, n, exact=False if force_float else None)


def _parse_complex(s: str) -> complex:
    s = s.strip()
    if "," in s:
        re_, im_ = s.split(",", 1)
        return complex(float(re_), float(im_))
    return complex(s.replace("i", "j"))


def _exact_or_float(s: str):
    try:
        return Fraction(s)
    except ValueError:
        return float(s)


def _zeros(args):
    from .zeta import load_zeros

    return load_zeros(args.zeros)


# -- subcommands ----------------------------------------------------------------


def cmd_pn(args, out: Output):
    W = _weights(args.weights, args.n, args.float)
    out.add_meta(weights=W.label())
    if W.exact:
        out.table(["n", "p_num", "p_den"], [[m, W.p[m].numerator, W.p[m].denominator] for m in range(args.n + 1)])
    else:
        out.table(["n", "p"], [[m, float(W.p[m])] for m in range(args.n + 1)])


def _fhat_from_args(args, n):
    from .multiplicative import load_fhat_table

    if args.fhat:
        return load_fhat_table(args.fhat, n)
    if args.fhat_const is not None:
        c = args.fhat_const
        try:
            v = Fraction(c)
            return [v] * n
        except ValueError:
            return [_parse_complex(c)] * n
    raise DomainError("give --fhat PATH or --fhat-const VALUE")


def cmd_mean_mult(args, out: Output):
    from .multiplicative import mean_report, mean_value

    W = _weights(args.weights, args.n)
    f = _fhat_from_args(args, args.n)
    out.add_meta(weights=W.label())
    val = mean_value(W, f, args.n)
    payload = {"n": args.n, "weights": W.label(), "mean": val}
    if all(abs(complex(x)) <= 1 + 1e-12 for x in f):
        rep = mean_report(W, f, args.n, p=args.p, u=args.u)
        payload["report"] = rep.__dict__
    out.json(payload)


def _terms_from_args(args, N):
    from .series import EXACT, FLOAT, PowerSeries

    if args.terms:
        vals: dict[int, object] = {}
        with open(args.terms, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    k = int(row[0])
                except ValueError:
                    continue
                vals[k] = _exact_or_float(row[1])
        mode = EXACT if all(isinstance(v, Fraction) for v in vals.values()) else FLOAT
        return PowerSeries.from_terms(vals, N, mode)
    if args.preset == "alt-harmonic":
        return PowerSeries([0] + [Fraction((-1) ** (k + 1), k) for k in range(1, N + 1)])
    if args.preset == "alternating":
        return PowerSeries([Fraction((-1) ** k) for k in range(N + 1)])
    if args.preset == "geometric":
        return PowerSeries([1] * (N + 1))
    raise DomainError("give --terms PATH or --preset NAME")


def cmd_voronoi(args, out: Output):
    from .multiplicative import voronoi_mean
    from .series import FLOAT, PowerSeries

    N = args.n
    a = _terms_from_args(args, N)
    if args.weights == "tauber":
        r = PowerSeries([1] + [0] * N)
    else:
        W = _weights(args.weights, N)
        r = PowerSeries(list(W.p), "exact") if W.exact else PowerSeries(W.p_float(), FLOAT)
    if r.mode != a.mode:
        r, a = r.to_float(), a.to_float()
    res = voronoi_mean(r, a, N)
    out.json({"n": N, "value": res.value, "abel_value": res.abel_value, "tauber": res.tauber})


def cmd_exact(args, out: Output):
    from .additive import load_hhat_table
    from .partitions import exact_distribution, make_stat

    W = _weights(args.weights, args.n)
    hh = None
    if args.stat == "additive":
        if not args.hhat:
            raise DomainError("--stat additive needs --hhat PATH")
        hh = [_exact_or_float(x) for x in _read_column(args.hhat, args.n)]
    stat = make_stat(args.stat, hh)
    atoms = exact_distribution(W, args.n, stat, snk_k=args.snk_k)
    out.add_meta(weights=W.label(), snk_k=args.snk_k)
    header, rows = _prob_columns(atoms)
    out.table(header, rows, "distribution")


def _read_column(path, n):
    vals: dict[int, str] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                vals[int(row[0])] = row[1].strip()
            except ValueError:
                continue
    return [vals.get(j, "0") for j in range(1, n + 1)]


def cmd_sample(args, out: Output):
    from .additive import babu_manstavicius, load_hhat_table
    from .sampler import PRNG_ID, sample

    W = None if args.weights == "uniform" else _weights(args.weights, args.n, force_float=True)
    stat = args.stat
    hh = None
    dks = ()
    if stat == "additive":
        if args.hhat == "babu-manstavicius":
            hh = babu_manstavicius(args.n)
        elif args.hhat:
            hh = load_hhat_table(args.hhat, args.n)
        else:
            raise DomainError("--stat additive needs --hhat PATH or --hhat babu-manstavicius")
    elif stat.startswith("D:"):
        dks = (int(stat[2:]),)
    elif stat not in ("omega", "logP", "logO", "logP-logO"):
        raise DomainError(f"unsupported sample statistic {stat!r}")
    res = sample(W, args.n, args.R, args.seed, snk_k=args.snk_k, hhat=hh, dks=dks, threads=args.threads)
    col = {"omega": res.omega, "logP": res.logP, "logO": res.logO,
           "logP-logO": res.logP - res.logO, "additive": res.additive}.get(stat)
    if col is None:
        col = res.D[dks[0]]
    out.add_meta(seed=args.seed, R=args.R, measure=res.measure, prng=PRNG_ID, stat=stat)
    out.table(["replicate", "stat_value"], [[i, v] for i, v in enumerate(col.tolist())], "samples")


def cmd_et(args, out: Output):
    from .orderstat import et_experiment
    from .sampler import PRNG_ID

    th = Fraction(args.theta) if args.theta is not None else None
    rep = et_experiment(args.variant, args.n, args.R, args.seed, theta=th, k=args.k,
                        centering=args.centering, threads=args.threads,
                        mean_matched=not args.literal_model)
    out.add_meta(seed=args.seed, R=args.R, prng=PRNG_ID)
    out.json(rep.to_dict())


def cmd_mean_order(args, out: Output):
    from .orderstat import mean_logP, mu_exact

    lp = mean_logP(args.n)
    mu = mu_exact(args.n)
    payload = {"n": args.n, "mean_logP": lp, "mu": mu, "mean_logO": lp - mu}
    if args.asym:
        from .zeta import asym_mean_logO

        T = _zeros(args)
        out.add_meta(zeros=T.source, zeros_sha256=T.sha256)
        a = asym_mean_logO("uniform", args.n, T, args.zero_count)
        payload.update(asym_mean_logO=a, residual=lp - mu - a)
    out.json(payload)


def cmd_zeta_sum(args, out: Output):
    from .zeta import zero_sum

    T = _zeros(args)
    out.add_meta(zeros=T.source, zeros_sha256=T.sha256)
    out.json({"x": args.x, "count": args.zero_count, "zero_sum": zero_sum(args.x, T, args.zero_count)})


def cmd_fq(args, out: Output):
    from . import fqpoly

    q, n = args.q, args.n
    fqpoly._check_prime(q)
    if args.brute:
        B = fqpoly.brute_stats(q, n)
        if args.stat is None:
            out.table(["m", "I_m_brute", "I_m_mobius"],
                      [[m, B.irreducible_counts[m - 1], fqpoly.count_irreducible(q, m)] for m in range(1, n + 1)])
            return
        header, rows = _prob_columns(B.distribution(args.stat))
        out.table(header, rows, "distribution")
        return
    if args.stat is None:
        out.table(["m", "I_m", "A_m"], [[m, fqpoly.count_irreducible(q, m), fqpoly.A_coeff(q, m)]
                                        for m in range(1, n + 1)])
    elif args.stat.startswith("xi:"):
        k = int(args.stat[3:])
        out.json({"q": q, "n": n, "k": k, "mean_xi": fqpoly.mean_xi(q, n, k)})
    elif args.stat.startswith("Dzero:"):
        k = int(args.stat[6:])
        out.json({"q": q, "n": n, "k": k, "prob_Dnk_zero": fqpoly.prob_Dnk_zero_fq(q, n, k)})
    else:
        raise DomainError(f"stat {args.stat!r} needs --brute (exact formulas exist for xi:k and Dzero:k)")


def cmd_snk(args, out: Output):
    from .snk import snk_density, snk_density_asym, structure

    payload = {"k": args.k, "n": args.n, "c_n": snk_density(args.k, args.n)}
    if args.k >= 2:
        S = structure(args.k)
        payload["structure"] = {"k0": S.k0, "gamma": list(S.gamma), "gamma0": S.gamma0,
                                "gamma_prime": S.gamma_prime, "beta": S.beta, "A_k": S.A_k}
    if args.asym:
        payload["c_n_asym"] = snk_density_asym(args.k, args.n)
    out.json(payload)


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="permstat", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON even for tables")
    common.add_argument("--out", help="write to this file (metadata goes to <out>.meta.json)")
    zeros = argparse.ArgumentParser(add_help=False)
    zeros.add_argument("--zeros", help="zeta-zero ordinates file (default $PERMSTAT_ZEROS or bundled)")
    zeros.add_argument("--zero-count", type=int, default=100)
    threads = argparse.ArgumentParser(add_help=False)
    threads.add_argument("--threads", type=int, default=1, help="sampler threads (results do not depend on it)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pn", parents=[common], help="p_0..p_n for a weight system")
    p.add_argument("--weights", default="uniform", help=WEIGHT_HELP)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--float", action="store_true", help="floating-point p_n")
    p.set_defaults(func=cmd_pn)

    p = sub.add_parser("mean-mult", parents=[common], help="mean of a multiplicative function")
    p.add_argument("--weights", default="uniform", help=WEIGHT_HELP)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fhat", help="CSV j,re,im")
    p.add_argument("--fhat-const", help="constant value: rational, complex like 0.5+0.5j, or re,im")
    p.add_argument("--p", type=float, default=2.0, help="exponent for rho(p)")
    p.add_argument("--u", type=float, default=0.1, help="threshold for E(u)")
    p.set_defaults(func=cmd_mean_mult)

    p = sub.add_parser("voronoi", parents=[common], help="Voronoi mean of a series")
    p.add_argument("--weights", default="tauber",
                   help="r_j = p_j of these weights, or 'tauber' for r = (1, 0, 0, ...)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--terms", help="CSV k,a_k")
    p.add_argument("--preset", choices=["alt-harmonic", "alternating", "geometric"])
    p.set_defaults(func=cmd_voronoi)

    p = sub.add_parser("exact", parents=[common], help="exact distribution of a cycle-type statistic")
    p.add_argument("--weights", default="uniform", help=WEIGHT_HELP)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stat", required=True, help="omega | logP | logO | logP-logO | D:<k> | type | additive")
    p.add_argument("--hhat", help="CSV j,value for --stat additive")
    p.add_argument("--snk-k", type=int, help="restrict to k-th powers (uniform weights)")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("sample", parents=[common, threads], help="Monte Carlo samples of a statistic")
    p.add_argument("--weights", default="uniform", help=WEIGHT_HELP)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--stat", default="logO", help="omega | logP | logO | logP-logO | D:<k> | additive")
    p.add_argument("--hhat", help="CSV j,value or 'babu-manstavicius'")
    p.add_argument("--snk-k", type=int)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("et", parents=[common, threads], help="Erdos-Turan experiment for log O_n")
    p.add_argument("--variant", choices=["uniform", "snk", "ewens"], default="uniform")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--theta")
    p.add_argument("--centering", choices=["exact", "sample", "asymptotic"])
    p.add_argument("--literal-model", action="store_true",
                   help="snk: do not shift the model to mean zero")
    p.set_defaults(func=cmd_et)

    p = sub.add_parser("mean-order", parents=[common, zeros], help="E log P_n, mu_n and E log O_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--asym", action="store_true", help="also the zeta-zero asymptotic")
    p.set_defaults(func=cmd_mean_order)

    p = sub.add_parser("zeta-sum", parents=[common, zeros], help="sum over zeros of Gamma(-rho) x^rho")
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=cmd_zeta_sum)

    p = sub.add_parser("fq", parents=[common], help="monic polynomials over F_q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--brute", action="store_true", help="enumerate all q^n monics")
    p.add_argument("--stat", help="xi:<k> | logO | logP | Dzero:<k>")
    p.set_defaults(func=cmd_fq)

    p = sub.add_parser("snk", parents=[common], help="density of k-th powers in S_n")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--asym", action="store_true")
    p.set_defaults(func=cmd_snk)
    return ap


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    out = Output(args, argv)
    try:
        args.func(args, out)
    except (ValueError, ZeroDivisionError, OSError) as exc:  # DomainError is a ValueError
        print(f"permstat {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())
