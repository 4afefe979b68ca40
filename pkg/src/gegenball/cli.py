"""Command-line front end: basis tables, kernel reports, summability sweeps, verification.

Configuration comes from an optional JSON file plus flag overrides (flags
win).  All numeric output uses '.' decimals, '\\n' line endings and a header
row, so runs diff bit-exactly for a fixed configuration and platform.

Exit codes: 0 success, 1 configuration/validation error, 2 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import ball, oracle, quadrature, simplex, special
from .polyharmonics import WeightParams, h_harmonic_basis, h_laplacian

__all__ = ["main", "RunConfig", "run_verification"]


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _fmt(x):
    return format(float(x), ".17g")


@dataclass
class RunConfig:
    """Resolved run configuration; re-validates the weight constraints."""

    domain: str = "ball"
    d: int = 2
    kappa: tuple = (0.5, 0.0)
    mu: float = 1.0
    nu: float = 0.5
    n: int = 4
    delta: float = 0.0
    res: int = None
    method: str = "both"
    out: str = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.domain not in ("ball", "simplex"):
            raise CliError(f"domain must be 'ball' or 'simplex', got {self.domain!r}")
        if self.fmt not in ("csv", "json"):
            raise CliError(f"format must be 'csv' or 'json', got {self.fmt!r}")
        try:
            self.params = WeightParams(self.d, tuple(self.kappa), self.mu, self.nu)
        except ValueError as exc:
            raise CliError(f"invalid weight parameters: {exc}") from exc


def _build_config(args):
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg.update(json.load(fh))
    overrides = {
        "domain": args.domain,
        "d": args.d,
        "kappa": tuple(float(v) for v in args.kappa.split(",")) if args.kappa else None,
        "mu": args.mu,
        "nu": args.nu,
        "n": args.n,
        "delta": args.delta,
        "res": args.res,
        "method": args.method,
        "out": args.out,
        "fmt": args.format,
    }
    for k, v in overrides.items():
        if v is not None:
            cfg[k] = v
    if "format" in cfg:
        cfg["fmt"] = cfg.pop("format")
    if "kappa" in cfg:
        cfg["kappa"] = tuple(float(v) for v in cfg["kappa"])
    known = {k for k in RunConfig.__dataclass_fields__}
    unknown = set(cfg) - known
    if unknown:
        raise CliError(f"unknown configuration fields: {sorted(unknown)}")
    return RunConfig(**cfg)


def _write_lines(path, lines):
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _domain_elements(config, n):
    if config.domain == "ball":
        els = []
        for k in range(n + 1):
            els.extend(ball.ball_basis(config.params, k))
        return els
    els = []
    for k in range(n + 1):
        els.extend(simplex.simplex_basis(config.params, k))
    return els


def _domain_rule(config, exact_degree):
    if config.domain == "ball":
        return quadrature.ball_rule(config.params, exact_degree)
    return quadrature.simplex_rule(config.params, exact_degree)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_basis(config):
    n = config.n
    els = _domain_elements(config, n)
    rule = _domain_rule(config, 2 * n + 2)
    vals = np.vstack([el.poly.eval_many(rule.points) for el in els])
    gram = (vals * rule.weights) @ vals.T
    off = gram - np.diag(np.diag(gram))
    off_max = float(np.abs(off).max()) if len(els) > 1 else 0.0
    if config.fmt == "json":
        payload = {
            "domain": config.domain,
            "off_diagonal_max": off_max,
            "elements": [
                {
                    "degree": el.degree,
                    "j": el.radial_index,
                    "ell": el.harmonic_index,
                    "norm": el.norm,
                    "poly": el.poly.to_json_obj(),
                }
                for el in els
            ],
            "gram": gram.tolist(),
        }
        _write_lines(config.out, [json.dumps(payload, indent=1, sort_keys=True)])
    else:
        lines = ["degree,j,ell,exponents,coefficient"]
        for el in els:
            for e, c in sorted(el.poly.terms.items()):
                exps = " ".join(str(v) for v in e)
                lines.append(
                    f"{el.degree},{el.radial_index},{el.harmonic_index},{exps},{_fmt(c)}"
                )
        _write_lines(config.out, lines)
        if config.out:
            glines = [",".join(_fmt(v) for v in row) for row in gram]
            _write_lines(config.out + ".gram.csv", ["# gram matrix"] + glines)
    print(f"elements={len(els)} gram_offdiag_max={off_max:.3e}")
    return 0


def _parse_point(text, d):
    pt = tuple(float(v) for v in text.split(","))
    if len(pt) != d:
        raise CliError(f"point {text!r} does not have {d} coordinates")
    return np.array(pt)


def cmd_kernel(config, x, y):
    p = config.params
    n = config.n
    x = _parse_point(x, p.d)
    y = _parse_point(y, p.d)
    mod = ball if config.domain == "ball" else simplex
    try:
        report = {"domain": config.domain, "n": n}
        if config.method in ("direct", "both"):
            report["direct"] = mod.kernel_direct(p, n, x, y)
        if config.method in ("concise", "both"):
            report["concise"] = mod.kernel_concise(p, n, x, y, resolution=config.res)
        if config.method == "both":
            report["discrepancy"] = abs(report["direct"] - report["concise"])
        if config.domain == "simplex" and config.method == "both":
            report["folded"] = mod.kernel_folded(p, n, x, y)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if config.out:
        _write_lines(config.out, [json.dumps(report, sort_keys=True)])
    for k in sorted(report):
        v = report[k]
        print(f"{k}={_fmt(v) if isinstance(v, float) else v}")
    return 0


_FUNCTIONS = {
    "exp_x1": lambda pt: math.exp(pt[0]),
    "gaussian": lambda pt: math.exp(-float(np.sum(np.asarray(pt) ** 2))),
    "sum_sq": lambda pt: float(np.sum(np.asarray(pt) ** 2)),
}


def cmd_expand(config, function):
    if function not in _FUNCTIONS:
        raise CliError(f"unknown function {function!r}; choose from {sorted(_FUNCTIONS)}")
    p = config.params
    f = _FUNCTIONS[function]
    if config.domain == "ball":
        rule = quadrature.ball_rule(p, 2 * config.n + 12)
        exp = ball.expand(p, f, config.n, rule)
        if config.fmt == "json":
            _write_lines(config.out, [exp.to_json()])
        else:
            lines = ["degree,j,ell,coefficient"]
            for (n, j, ell), c in sorted(exp.coeffs.items()):
                lines.append(f"{n},{j},{ell},{_fmt(c)}")
            _write_lines(config.out, lines)
        print(f"coefficients={len(exp.coeffs)} parseval_tail={exp.parseval_sums()[-1]:.6g}")
        return 0
    # simplex expansion: coefficients against the simplex basis
    rule = quadrature.simplex_rule(p, 2 * config.n + 12)
    lines = ["degree,j,ell,coefficient"]
    count = 0
    for n in range(config.n + 1):
        for el in simplex.simplex_basis(p, n):
            vals = el.poly.eval_many(rule.points)
            fv = np.array([f(pt) for pt in rule.points])
            c = float(np.dot(rule.weights, fv * vals))
            lines.append(f"{n},{el.radial_index},{el.harmonic_index},{_fmt(c)}")
            count += 1
    _write_lines(config.out, lines)
    print(f"coefficients={count}")
    return 0


def cmd_cesaro(config, n_list, delta_list):
    p = config.params
    lines = ["domain,n,delta,lebesgue_est,min_kernel"]
    for n in n_list:
        for delta in delta_list:
            if config.domain == "ball":
                leb = ball.lebesgue_estimate(p, n, delta)
                mn = ball.kernel_min_on_grid(p, n, delta)
            else:
                rule = quadrature.simplex_rule(p, 2 * n + 3)
                grid = simplex.simplex_grid(p.d)
                K = simplex.cesaro_kernel_grid(p, n, delta, grid, rule.points)
                leb = float(np.max(np.abs(K) @ rule.weights))
                mn = simplex.kernel_min_on_grid(p, n, delta)
            lines.append(
                f"{config.domain},{n},{_fmt(delta)},{_fmt(leb)},{_fmt(mn)}"
            )
    _write_lines(config.out, lines)
    return 0


def cmd_poisson(config, r_list):
    p = config.params
    if config.domain != "ball":
        raise CliError("the Poisson sweep is exposed on the ball domain")
    rule = quadrature.ball_rule(p, 40)
    f = _FUNCTIONS["exp_x1"]
    series_degree = 24
    exp = ball.expand(p, f, series_degree, rule)
    grid = ball.polar_grid(p.d, 6, 10) * 0.98
    fg = np.array([f(pt) for pt in grid])
    x, y = ball.random_ball_points(p.d, 2, seed=17)
    lines = ["r,kernel_min_spot,series_vs_translation,sup_error_exp_x1"]
    for r in r_list:
        kt = ball.poisson_kernel(p, r, x, y, method="translation",
                                 resolution=config.res or 24)
        ks = ball.poisson_kernel(p, r, x, y, method="series",
                                 series_degree=series_degree)
        pv = exp.poisson_eval(r, grid)
        kmin = min(
            ball.poisson_kernel(p, r, g, g2, method="series", series_degree=series_degree)
            for g in grid[:12]
            for g2 in grid[:12:3]
        )
        lines.append(
            f"{_fmt(r)},{_fmt(kmin)},{_fmt(abs(kt - ks))},{_fmt(np.abs(pv - fg).max())}"
        )
    _write_lines(config.out, lines)
    return 0


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def run_verification(params, quick=False, corrupt_norms=False):
    """Run the module invariants at desk scale; returns (report, all_passed).

    ``corrupt_norms`` is a test hook that deliberately perturbs the
    closed-form norms so the negative control in the test suite can confirm
    the checks have teeth.
    """
    checks = {}

    def record(name, residual, tol):
        checks[name] = {
            "residual": float(residual),
            "tolerance": float(tol),
            "pass": bool(residual < tol),
        }

    d = params.d
    nmax = 2 if quick else 4

    # quadrature: mass, odd moment, squared-radius moment vs beta oracle
    rule = quadrature.ball_rule(params, 12)
    record("ball_rule_mass", abs(rule.mass - 1.0), 1e-12)
    record("ball_rule_odd", abs(float(rule.points[:, 0] @ rule.weights)), 1e-12)
    g, m, n_ = params.gamma_kappa, params.mu, params.nu
    base = n_ + g + d / 2
    moment = base / (base + m + 0.5)
    r2 = float((rule.points**2).sum(axis=1) @ rule.weights)
    record("ball_rule_radial_moment", abs(r2 - moment), 1e-12)

    # harmonic bases: dimension + harmonicity + orthonormality
    worst_gram, worst_harm = 0.0, 0.0
    for n in range(nmax + 1):
        hb = h_harmonic_basis(n, params.kappa)
        srule = quadrature.sphere_rule(params.kappa, 2 * n + 2)
        V = np.vstack([e.eval_many(srule.points) for e in hb.elements])
        G = (V * srule.weights) @ V.T
        worst_gram = max(worst_gram, float(np.abs(G - np.eye(len(hb))).max()))
        for e in hb.elements:
            lap = h_laplacian(e, params.kappa)
            worst_harm = max(worst_harm, float(lap.max_abs_coeff()))
    record("harmonic_gram", worst_gram, 1e-10)
    record("harmonic_exact", worst_harm, 1e-30)

    # ball basis Gram + norm formula
    brule = quadrature.ball_rule(params, 4 * nmax + 2)
    els = []
    for n in range(nmax + 1):
        els.extend(ball.ball_basis(params, n))
    vals = np.vstack([el.poly.eval_many(brule.points) for el in els])
    G = (vals * brule.weights) @ vals.T
    worst_norm = 0.0
    for i, el in enumerate(els):
        norm = el.norm * (1.01 if corrupt_norms else 1.0)
        worst_norm = max(worst_norm, abs(G[i, i] - norm) / norm)
    record("ball_norm_formula", worst_norm, 1e-8)
    scale = np.sqrt(np.outer(np.diag(G), np.diag(G)))
    record("ball_gram_offdiag", float(np.abs((G - np.diag(np.diag(G))) / scale).max()),
           1e-9)

    # kernels: concise vs direct, oracle vs direct
    X = ball.random_ball_points(d, 3, seed=1)
    Y = ball.random_ball_points(d, 3, seed=2)
    worst = 0.0
    for n in range(nmax + 1):
        for x, y in zip(X, Y):
            kd = ball.kernel_direct(params, n, x, y)
            kc = ball.kernel_concise(params, n, x, y)
            worst = max(worst, abs(kd - kc))
    record("kernel_concise_vs_direct", worst, 1e-6)
    orule = quadrature.ball_rule(params, 4 * nmax + 4)
    gsb = oracle.gs_basis(params, nmax, orule)
    worst = max(
        abs(
            oracle.kernel_oracle(params, nmax, x, y, orule, basis=gsb)
            - ball.kernel_direct(params, nmax, x, y)
        )
        for x, y in zip(X, Y)
    )
    record("kernel_oracle_vs_direct", worst, 1e-7)

    # addition formula on the sphere
    srule = quadrature.sphere_rule(params.kappa, 8)
    xs, ys = srule.points[0], srule.points[-1]
    worst = 0.0
    for n in range(1, nmax + 1):
        hb = h_harmonic_basis(n, params.kappa)
        lhs = sum(
            float(e.eval_many(xs[None, :])[0] * e.eval_many(ys[None, :])[0])
            for e in hb.elements
        )
        from .polyharmonics import addition_kernel

        rhs = addition_kernel(n, params.kappa, xs, ys)
        worst = max(worst, abs(lhs - rhs))
    record("addition_formula", worst, 1e-8)

    # differential-difference equation + contiguous relations
    xpt = ball.random_ball_points(d, 1, seed=5)[0]
    worst_de, worst_ct = 0.0, 0.0
    for n in range(nmax + 1):
        for j in range(n // 2 + 1):
            worst_de = max(worst_de, abs(ball.de_residual(params, n, j, 0, xpt)))
            r1, r2_ = ball.contiguous_residual(params, n, j, 0)
            worst_ct = max(worst_ct, r1, r2_)
    record("de_residual", worst_de, 1e-9)
    record("contiguous_residual", worst_ct, 1e-9)

    # simplex: Gram + folded vs concise
    sels = []
    for n in range(nmax + 1):
        sels.extend(simplex.simplex_basis(params, n))
    srule2 = quadrature.simplex_rule(params, 2 * nmax + 2)
    vals = np.vstack([el.poly.eval_many(srule2.points) for el in sels])
    G = (vals * srule2.weights) @ vals.T
    scale = np.sqrt(np.outer(np.diag(G), np.diag(G)))
    record("simplex_gram_offdiag",
           float(np.abs((G - np.diag(np.diag(G))) / scale).max()), 1e-9)
    XT = simplex.random_simplex_points(d, 2, seed=3)
    YT = simplex.random_simplex_points(d, 2, seed=4)
    worst = 0.0
    for n in range(nmax + 1):
        for x, y in zip(XT, YT):
            kf = simplex.kernel_folded(params, n, x, y)
            kc = simplex.kernel_concise(params, n, x, y)
            worst = max(worst, abs(kf - kc))
    record("simplex_concise_vs_folded", worst, 1e-6)

    # convolution multiplier identity
    lam = params.lambda_total
    el = ball.ball_basis(params, 2)[0]
    f = lambda pt: el.poly.eval_many(np.asarray(pt)[None, :])[0]
    gprof = lambda t: 0.25 + t * t
    conv = ball.convolve(params, f, gprof, brule, resolution=8)
    ghat = ball.gegenbauer_coefficient(gprof, 2, lam)
    worst = max(abs(conv(x) - ghat * f(x)) for x in X)
    record("convolution_multiplier", worst, 1e-7)

    # normalization constants against independent (scipy) quadrature masses
    from scipy.special import roots_jacobi

    def _mass(alpha, beta):
        return float(np.sum(roots_jacobi(24, alpha, beta)[1]))

    def _mass01(alpha, beta):
        return _mass(alpha, beta) * 2.0 ** (-(alpha + beta + 1))

    worst = 0.0
    raw_kernel = 1.0
    for k in params.kappa:
        if k > 0:
            worst = max(
                worst, abs(special.norm_const_symmetric(k) * _mass(k - 1, k - 1) - 1)
            )
            raw_kernel *= _mass(k - 1, k)
    if m > 0:
        worst = max(
            worst, abs(special.norm_const_symmetric(m) * _mass(m - 1, m - 1) - 1)
        )
        raw_kernel *= _mass(m - 1, m - 1)
    if n_ > 0:
        lam0 = g + (d - 2) / 2
        raw_kernel *= _mass01(lam0, n_ - 1) * _mass(n_ - 0.5, n_ - 0.5)
    worst = max(
        worst,
        abs(
            special.norm_const_kernel(d, params.kappa, m, n_) * raw_kernel - 1
        ),
    )
    if d == 2:
        k1, k2 = params.kappa
        sphere_raw = 2 * _mass01(k2 - 0.5, k1 - 0.5)
    else:
        k1, k2, k3 = params.kappa
        sphere_raw = 2 * _mass01(k2 + k3, k1 - 0.5) * _mass01(k3 - 0.5, k2 - 0.5)
    worst = max(worst, abs(special.norm_const_sphere(params.kappa) * sphere_raw - 1))
    ball_raw = sphere_raw * 0.5 * _mass01(m - 0.5, n_ + g + d / 2 - 1)
    worst = max(
        worst, abs(special.norm_const_ball(d, params.kappa, m, n_) * ball_raw - 1)
    )
    record("normalization_constants", worst, 1e-10)

    ok = all(c["pass"] for c in checks.values())
    return checks, ok


def cmd_verify(config, quick=False):
    report, ok = run_verification(config.params, quick=quick)
    payload = {
        "domain": config.domain,
        "parameters": {
            "d": config.params.d,
            "kappa": list(config.params.kappa),
            "mu": config.params.mu,
            "nu": config.params.nu,
        },
        "checks": report,
        "pass": ok,
    }
    text = json.dumps(payload, indent=1, sort_keys=True)
    if config.out:
        _write_lines(config.out, [text])
    for name in sorted(report):
        c = report[name]
        status = "PASS" if c["pass"] else "FAIL"
        print(f"{status} {name}: residual={c['residual']:.3e} tol={c['tolerance']:.1e}")
    print("OK" if ok else "VERIFICATION FAILED")
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _parse_list(text, cast):
    return [cast(v) for v in text.split(",") if v != ""]


def main(argv=None):
    parser = _Parser(prog="gegenball", description=__doc__)
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--domain", choices=("ball", "simplex"))
    parser.add_argument("--d", type=int)
    parser.add_argument("--kappa", help="comma-separated reflection exponents")
    parser.add_argument("--mu", type=float)
    parser.add_argument("--nu", type=float)
    parser.add_argument("--n", type=int)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--res", type=int)
    parser.add_argument("--method", choices=("direct", "concise", "both"))
    parser.add_argument("--out")
    parser.add_argument("--format", choices=("csv", "json"))
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("basis")
    pk = sub.add_parser("kernel")
    pk.add_argument("--x", required=True)
    pk.add_argument("--y", required=True)
    pe = sub.add_parser("expand")
    pe.add_argument("--function", default="exp_x1")
    pc = sub.add_parser("cesaro")
    pc.add_argument("--n-list", default="4,8,12")
    pc.add_argument("--delta-list", default=None)
    pp = sub.add_parser("poisson")
    pp.add_argument("--r-list", default="0.5,0.9,0.99")
    pv = sub.add_parser("verify")
    pv.add_argument("--quick", action="store_true")

    try:
        args = parser.parse_args(argv)
        config = _build_config(args)
        if args.command == "basis":
            return cmd_basis(config)
        if args.command == "kernel":
            return cmd_kernel(config, args.x, args.y)
        if args.command == "expand":
            return cmd_expand(config, args.function)
        if args.command == "cesaro":
            deltas = (
                _parse_list(args.delta_list, float)
                if args.delta_list
                else [0.0, config.params.lambda_total + 0.5,
                      2 * config.params.lambda_total + 1]
            )
            return cmd_cesaro(config, _parse_list(args.n_list, int), deltas)
        if args.command == "poisson":
            return cmd_poisson(config, _parse_list(args.r_list, float))
        if args.command == "verify":
            return cmd_verify(config, quick=args.quick)
        raise CliError(f"unknown command {args.command!r}")
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
