"""Command line interface.

Commands
--------
xent discrete       cross-entropy of two finite probability vectors
xent expfam         closed-form cross-entropy inside one exponential family
xent special        reducers: uniform source/reference, exponential,
                    Gaussian, or half-normal reference via MGFs
rate markov         asymptotic rate for a pair of Markov sources
rate gauss          spectral rate for stationary Gaussian processes
sweep <target>      any of the above over an inclusive alpha grid a:b:step

File formats (CSV)
------------------
* probability vector: one line of comma-separated masses
* transition matrix: K lines of K comma-separated probabilities
* autocovariance: one value per line, starting at lag 0

Values print in nats (``--bits`` divides by ln 2) with 12 significant
digits.  A divergent value prints ``inf`` or ``-inf`` and the process exits
with status 2; usage and computation errors exit with status 1.  Orders:
``--alpha 1`` selects the Shannon limit, ``--alpha inf`` the min-entropy
limit (discrete only); other floats within 1e-9 of 1 are rejected.  Sweep
grid points that land on 1 are evaluated at the Shannon limit.  The
environment variable ``XENT_QUAD_TOL`` overrides the relative tolerance of
the quadrature used for ``--oracle`` checks.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import differential, discrete, gaussproc, markov, oracle
from .alpha import AlphaOrder
from .errors import InvalidParameterError, RenyiError
from .expfam import ExpFamilyDistribution, Family
from .support import SupportSpec, UNIT_INTERVAL


class Command(Enum):
    XENT_DISCRETE = "xent discrete"
    XENT_EXPFAM = "xent expfam"
    XENT_SPECIAL = "xent special"
    RATE_MARKOV = "rate markov"
    RATE_GAUSS = "rate gauss"


class OutputFormat(Enum):
    PLAIN = "plain"
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class JobSpec:
    """A fully parsed CLI invocation."""

    command: Command
    alphas: tuple[AlphaOrder, ...]
    sweep: bool
    oracle_check: bool
    output_format: OutputFormat
    bits: bool
    options: dict = field(default_factory=dict)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route usage problems to exit code 1
        raise UsageError(message)


# ---------------------------------------------------------------------------
# parsing helpers

_SCALAR_FAMILY_PARAMS = {
    "gaussian": ("mu", "var"),
    "exponential": ("lambda",),
    "beta": ("a", "b"),
    "gamma": ("k", "theta"),
    "chi2": ("nu",),
    "laplace": ("mu", "b"),
}

_FAMILY_ALIASES = {
    "gaussian": "gaussian",
    "normal": "gaussian",
    "exponential": "exponential",
    "exp": "exponential",
    "beta": "beta",
    "gamma": "gamma",
    "chi2": "chi2",
    "chi_squared": "chi2",
    "chisquared": "chi2",
    "laplace": "laplace",
    "mvgauss": "mvgauss",
}


def _parse_kv(text: str) -> dict[str, float]:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise UsageError(f"expected key=value, got {part!r}")
        key, _, raw = part.partition("=")
        try:
            out[key.strip()] = float(raw)
        except ValueError:
            raise UsageError(f"cannot parse number {raw!r} for {key.strip()!r}") from None
    return out


def _make_distribution(family: str, spec: str) -> ExpFamilyDistribution:
    family = _FAMILY_ALIASES.get(family.lower())
    if family is None or family == "mvgauss":
        raise UsageError(f"unknown scalar family {family!r}")
    kv = _parse_kv(spec)
    names = _SCALAR_FAMILY_PARAMS[family]
    aliases = {"rate": "lambda", "scale": "b", "s": "b"}
    kv = {aliases.get(k, k): v for k, v in kv.items()}
    missing = [n for n in names if n not in kv]
    extra = [k for k in kv if k not in names]
    if missing or extra:
        raise UsageError(
            f"{family} takes parameters {','.join(names)}; got {spec!r}"
        )
    if family == "gaussian":
        return ExpFamilyDistribution.gaussian(kv["mu"], kv["var"])
    if family == "exponential":
        return ExpFamilyDistribution.exponential(kv["lambda"])
    if family == "beta":
        return ExpFamilyDistribution.beta(kv["a"], kv["b"])
    if family == "gamma":
        return ExpFamilyDistribution.gamma(kv["k"], kv["theta"])
    if family == "chi2":
        return ExpFamilyDistribution.chi_squared(kv["nu"])
    return ExpFamilyDistribution.laplace(kv["mu"], kv["b"])


def _read_masses(path: str) -> discrete.DiscreteDistribution:
    values = np.loadtxt(path, delimiter=",", ndmin=1).reshape(-1)
    return discrete.DiscreteDistribution(values)


def _read_matrix(path: str) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def _read_autocov(path: str) -> np.ndarray:
    return np.loadtxt(path, ndmin=1).reshape(-1)


def _parse_process(text: str) -> gaussproc.StationaryGaussianSpec:
    """A process argument: 'white:VAR', 'ar1:RHO[,VAR]', or a CSV path."""
    if text.startswith("white:"):
        return gaussproc.StationaryGaussianSpec.white_noise(float(text[6:]))
    if text.startswith("ar1:"):
        parts = text[4:].split(",")
        rho = float(parts[0])
        variance = float(parts[1]) if len(parts) > 1 else 1.0
        return gaussproc.StationaryGaussianSpec.ar1(rho, variance)
    return gaussproc.StationaryGaussianSpec.from_autocovariance(_read_autocov(text))


def _parse_alpha_grid(text: str) -> tuple[AlphaOrder, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--alphas wants start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--alphas wants numbers, got {text!r}") from None
    if step <= 0 or start <= 0 or stop < start:
        raise UsageError("--alphas needs 0 < start <= stop and step > 0")
    grid = []
    k = 0
    while True:
        point = start + k * step
        if point > stop + 1e-12:
            break
        grid.append(AlphaOrder.one() if abs(point - 1.0) <= 1e-9 else AlphaOrder(point))
        k += 1
    if not grid:
        raise UsageError("--alphas produced an empty grid")
    return tuple(grid)


# ---------------------------------------------------------------------------
# parser construction

def _add_common(sp, sweep: bool):
    if sweep:
        sp.add_argument("--alphas", required=True,
                        help="inclusive grid start:stop:step (points on 1 use the Shannon limit)")
    else:
        sp.add_argument("--alpha", required=True,
                        help="order: a positive float, '1' (Shannon), or 'inf'")
    sp.add_argument("--oracle", action="store_true",
                    help="also print an independent oracle value and the gap")
    sp.add_argument("--format", choices=[f.value for f in OutputFormat],
                    default=None, help="plain (default), json, or csv")
    sp.add_argument("--bits", action="store_true", help="report in bits instead of nats")


def _add_discrete_opts(sp):
    sp.add_argument("--p", required=True, metavar="CSV", help="source masses")
    sp.add_argument("--q", required=True, metavar="CSV", help="reference masses")
    sp.add_argument("--definition", choices=["standard", "alternate"], default="standard",
                    help="alternate adds the divergence-plus-entropy variant")


def _add_expfam_opts(sp):
    sp.add_argument("--family", required=True,
                    help="gaussian, exponential, beta, gamma, chi2, laplace, or mvgauss")
    sp.add_argument("--p", required=True,
                    help="source parameters k=v,... (mvgauss: covariance CSV path)")
    sp.add_argument("--q", required=True,
                    help="reference parameters k=v,... (mvgauss: covariance CSV path)")
    sp.add_argument("--method", choices=["closed", "natural"], default="closed",
                    help="closed form (default) or the natural-parameter engine")


def _add_special_opts(sp):
    sp.add_argument("variant", choices=["q-uniform", "p-uniform", "q-exponential",
                                        "q-gaussian", "q-half-normal"])
    sp.add_argument("--lower", type=float, default=0.0, help="q-uniform support start")
    sp.add_argument("--upper", type=float, default=1.0, help="q-uniform support end")
    sp.add_argument("--q", help="p-uniform: Beta reference parameters a=..,b=..")
    sp.add_argument("--rate", type=float, help="q-exponential: reference rate")
    sp.add_argument("--mean", type=float, default=0.0, help="q-gaussian: reference mean")
    sp.add_argument("--var", type=float, help="q-gaussian / q-half-normal: reference variance")
    sp.add_argument("--p-family", help="source family for the MGF-based variants")
    sp.add_argument("--p", help="source parameters k=v,...")


def _add_markov_opts(sp):
    sp.add_argument("--p", required=True, metavar="CSV", help="source transition matrix")
    sp.add_argument("--q", required=True, metavar="CSV", help="reference transition matrix")
    sp.add_argument("--p-init", metavar="CSV", help="source start masses (default uniform)")
    sp.add_argument("--q-init", metavar="CSV", help="reference start masses (default uniform)")
    sp.add_argument("--finite-n", type=int, default=4000,
                    help="block length for the --oracle finite-n check")


def _add_gauss_opts(sp):
    sp.add_argument("--x", required=True,
                    help="source process: autocovariance CSV, white:VAR, or ar1:RHO[,VAR]")
    sp.add_argument("--y", required=True,
                    help="reference process: autocovariance CSV, white:VAR, or ar1:RHO[,VAR]")
    sp.add_argument("--finite-n", type=int, default=2048,
                    help="matrix order for the --oracle finite-n check")


_TARGET_BUILDERS = {
    "discrete": (_add_discrete_opts, Command.XENT_DISCRETE),
    "expfam": (_add_expfam_opts, Command.XENT_EXPFAM),
    "special": (_add_special_opts, Command.XENT_SPECIAL),
    "markov": (_add_markov_opts, Command.RATE_MARKOV),
    "gauss": (_add_gauss_opts, Command.RATE_GAUSS),
}


def build_parser() -> _Parser:
    parser = _Parser(prog="rxent", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    top = parser.add_subparsers(dest="group", required=True)

    xent = top.add_parser("xent", help="cross-entropy of a single pair")
    xsub = xent.add_subparsers(dest="target", required=True)
    for name in ("discrete", "expfam", "special"):
        sp = xsub.add_parser(name)
        _TARGET_BUILDERS[name][0](sp)
        _add_common(sp, sweep=False)

    rate = top.add_parser("rate", help="asymptotic cross-entropy rates")
    rsub = rate.add_subparsers(dest="target", required=True)
    for name in ("markov", "gauss"):
        sp = rsub.add_parser(name)
        _TARGET_BUILDERS[name][0](sp)
        _add_common(sp, sweep=False)

    sweep = top.add_parser("sweep", help="evaluate over an alpha grid")
    ssub = sweep.add_subparsers(dest="target", required=True)
    for name, (builder, _) in _TARGET_BUILDERS.items():
        sp = ssub.add_parser(name)
        builder(sp)
        _add_common(sp, sweep=True)

    return parser


def parse_args(argv) -> JobSpec:
    ns = build_parser().parse_args(argv)
    sweep = ns.group == "sweep"
    command = _TARGET_BUILDERS[ns.target][1]
    if sweep:
        alphas = _parse_alpha_grid(ns.alphas)
        if ns.oracle:
            raise UsageError("--oracle applies to single evaluations, not sweeps")
    else:
        try:
            alphas = (AlphaOrder.coerce(ns.alpha),)
        except RenyiError as exc:
            raise UsageError(str(exc)) from None
    fmt = ns.format
    if fmt is None:
        fmt = OutputFormat.CSV if sweep else OutputFormat.PLAIN
    else:
        fmt = OutputFormat(fmt)
    options = {k: v for k, v in vars(ns).items()
               if k not in ("group", "target", "alpha", "alphas", "oracle",
                            "format", "bits")}
    return JobSpec(command=command, alphas=alphas, sweep=sweep,
                   oracle_check=ns.oracle, output_format=fmt, bits=ns.bits,
                   options=options)


# ---------------------------------------------------------------------------
# evaluation

def _oracle_settings() -> oracle.QuadratureSettings:
    raw = os.environ.get("XENT_QUAD_TOL")
    if raw is None:
        return oracle.DEFAULT_SETTINGS
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"XENT_QUAD_TOL must be a float, got {raw!r}") from None
    return oracle.QuadratureSettings(relative_tolerance=tol)


def _discrete_oracle(p, q, alpha: AlphaOrder, definition: str) -> float:
    """Plain-float power sums, independent of the logsumexp implementation."""
    pv, qv = p.probs, q.probs
    def xent(av, bv):
        if alpha.is_one:
            return sum(-a * math.log(b) if a > 0 else 0.0 for a, b in zip(av, bv))
        if alpha.is_inf:
            return -math.log(max(b for a, b in zip(av, bv) if a > 0))
        e = alpha.value - 1.0
        total = 0.0
        for a, b in zip(av, bv):
            if a > 0:
                if b == 0 and e < 0:
                    return math.inf
                total += a * b ** e
        return math.log(total) / (1.0 - alpha.value) if total > 0 else math.inf
    if definition == "standard":
        return xent(pv, qv)
    return (discrete.renyi_divergence(p, q, alpha)
            + discrete.renyi_entropy(p, alpha))


def _evaluate_discrete(opts, alpha, want_oracle, settings):
    p = _read_masses(opts["p"])
    q = _read_masses(opts["q"])
    if opts["definition"] == "standard":
        value = discrete.renyi_cross_entropy(p, q, alpha)
    else:
        value = discrete.alt_cross_entropy(p, q, alpha)
    oracle_value = _discrete_oracle(p, q, alpha, opts["definition"]) if want_oracle else None
    return value, oracle_value


def _evaluate_expfam(opts, alpha, want_oracle, settings):
    family = _FAMILY_ALIASES.get(opts["family"].lower())
    if family == "mvgauss":
        cov1 = _read_matrix(opts["p"])
        cov2 = _read_matrix(opts["q"])
        value = differential.cross_entropy_multivariate_gaussian(cov1, cov2, alpha).value
        oracle_value = None
        if want_oracle:
            if cov1.shape[0] != 2:
                raise InvalidParameterError("the grid oracle is bivariate only")
            oracle_value = oracle.cross_entropy_grid2d_gaussian(cov1, cov2, alpha)
        return value, oracle_value
    f1 = _make_distribution(opts["family"], opts["p"])
    f2 = _make_distribution(opts["family"], opts["q"])
    if opts["method"] == "natural":
        value = differential.cross_entropy_natural(f1, f2, alpha).value
    else:
        value = differential.cross_entropy_closed(f1, f2, alpha).value
    oracle_value = None
    if want_oracle:
        oracle_value = oracle.cross_entropy_numeric(f1.pdf, f2.pdf, f1.support,
                                                    alpha, settings,
                                                    p_logpdf=f1.logpdf,
                                                    q_logpdf=f2.logpdf)
    return value, oracle_value


def _uniform_pdf(supp: SupportSpec):
    density = 1.0 / supp.length

    def pdf(x):
        return density if supp.lower < x < supp.upper else 0.0

    def logpdf(x):
        return math.log(density) if supp.lower < x < supp.upper else -math.inf

    return pdf, logpdf


def _half_normal_pdf(variance: float):
    log_norm = 0.5 * math.log(2.0 / (math.pi * variance))

    def pdf(x):
        lp = logpdf(x)
        return math.exp(lp) if lp > -math.inf else 0.0

    def logpdf(x):
        if x < 0:
            return -math.inf
        return log_norm - x * x / (2.0 * variance)

    return pdf, logpdf


def _require(opts, key, variant):
    value = opts.get(key)
    if value is None:
        raise UsageError(f"{variant} requires --{key.replace('_', '-')}")
    return value


def _evaluate_special(opts, alpha, want_oracle, settings):
    variant = opts["variant"]
    if variant == "q-uniform":
        supp = SupportSpec.interval(opts["lower"], opts["upper"])
        value = differential.cross_entropy_q_uniform(supp)
        uniform, log_uniform = _uniform_pdf(supp)
        oracle_value = (oracle.cross_entropy_numeric(uniform, uniform, supp, alpha,
                                                     settings, p_logpdf=log_uniform,
                                                     q_logpdf=log_uniform)
                        if want_oracle else None)
        return value, oracle_value

    if variant == "p-uniform":
        q = _make_distribution("beta", _require(opts, "q", variant))
        value = differential.cross_entropy_p_uniform(UNIT_INTERVAL, q, alpha).value
        uniform, log_uniform = _uniform_pdf(UNIT_INTERVAL)
        oracle_value = (oracle.cross_entropy_numeric(uniform, q.pdf,
                                                     UNIT_INTERVAL, alpha, settings,
                                                     p_logpdf=log_uniform,
                                                     q_logpdf=q.logpdf)
                        if want_oracle else None)
        return value, oracle_value

    p = _make_distribution(_require(opts, "p_family", variant), _require(opts, "p", variant))

    if variant == "q-exponential":
        rate = _require(opts, "rate", variant)
        if p.support.kind.value == "all_reals":
            raise InvalidParameterError(
                "the exponential reference needs a source supported on x > 0"
            )
        value = differential.cross_entropy_q_exponential(differential.mgf_of(p),
                                                         rate, alpha).value
        q = ExpFamilyDistribution.exponential(rate)
        oracle_value = (oracle.cross_entropy_numeric(p.pdf, q.pdf, p.support, alpha,
                                                     settings, p_logpdf=p.logpdf,
                                                     q_logpdf=q.logpdf)
                        if want_oracle else None)
        return value, oracle_value

    variance = _require(opts, "var", variant)
    if variant == "q-gaussian":
        mean = opts["mean"]
        mgf = differential.mgf_of_centered_square(p, mean)
        value = differential.cross_entropy_q_gaussian(mgf, mean, variance, alpha).value
        q = ExpFamilyDistribution.gaussian(mean, variance)
        oracle_value = (oracle.cross_entropy_numeric(p.pdf, q.pdf, p.support, alpha,
                                                     settings, p_logpdf=p.logpdf,
                                                     q_logpdf=q.logpdf)
                        if want_oracle else None)
        return value, oracle_value

    # q-half-normal
    if p.support.kind.value == "all_reals":
        raise InvalidParameterError(
            "the half-normal reference needs a source supported on x > 0"
        )
    mgf = differential.mgf_of_centered_square(p, 0.0)
    value = differential.cross_entropy_q_gaussian(mgf, 0.0, variance, alpha,
                                                  half_normal=True).value
    hn_pdf, hn_logpdf = _half_normal_pdf(variance)
    oracle_value = (oracle.cross_entropy_numeric(p.pdf, hn_pdf, p.support, alpha,
                                                 settings, p_logpdf=p.logpdf,
                                                 q_logpdf=hn_logpdf)
                    if want_oracle else None)
    return value, oracle_value


def _evaluate_markov(opts, alpha, want_oracle, settings):
    p_init = _read_masses(opts["p_init"]) if opts.get("p_init") else None
    q_init = _read_masses(opts["q_init"]) if opts.get("q_init") else None
    p = markov.MarkovSource.of(_read_matrix(opts["p"]), p_init)
    q = markov.MarkovSource.of(_read_matrix(opts["q"]), q_init)
    value = markov.cross_entropy_rate(p, q, alpha)
    oracle_value = None
    if want_oracle:
        if alpha.is_one:
            oracle_value = markov.shannon_rate_slope(p, q, max(2, opts["finite_n"]))
        else:
            oracle_value = markov.finite_n_cross_entropy(p, q, alpha, opts["finite_n"])
    return value, oracle_value


def _evaluate_gauss(opts, alpha, want_oracle, settings):
    x = _parse_process(opts["x"])
    y = _parse_process(opts["y"])
    value = gaussproc.rate_spectral(x, y, alpha)
    oracle_value = (gaussproc.rate_finite_n(x, y, alpha, opts["finite_n"])
                    if want_oracle else None)
    return value, oracle_value


_EVALUATORS = {
    Command.XENT_DISCRETE: _evaluate_discrete,
    Command.XENT_EXPFAM: _evaluate_expfam,
    Command.XENT_SPECIAL: _evaluate_special,
    Command.RATE_MARKOV: _evaluate_markov,
    Command.RATE_GAUSS: _evaluate_gauss,
}


# ---------------------------------------------------------------------------
# rendering

def _fmt(v: float) -> str:
    return format(v + 0.0 if v == 0.0 else v, ".12g")


def _alpha_text(a: AlphaOrder) -> str:
    if a.is_one:
        return "1"
    if a.is_inf:
        return "inf"
    return format(a.value, ".12g")


def _json_number(v: float | None):
    if v is None:
        return None
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _render(job: JobSpec, rows) -> str:
    fmt = job.output_format
    if job.sweep:
        if fmt is OutputFormat.JSON:
            payload = [
                {"command": job.command.value, "alpha": _json_number(a.value),
                 "value": _json_number(v), "oracle": None, "gap": None}
                for a, v, _ in rows
            ]
            return json.dumps(payload)
        lines = ["alpha,value"] if fmt is OutputFormat.CSV else []
        sep = "," if fmt is OutputFormat.CSV else " "
        lines += [f"{_alpha_text(a)}{sep}{_fmt(v)}" for a, v, _ in rows]
        return "\n".join(lines)

    alpha, value, oracle_value = rows[0]
    gap = None if oracle_value is None else abs(value - oracle_value)
    if fmt is OutputFormat.JSON:
        payload = {
            "command": job.command.value,
            "alpha": _json_number(alpha.value),
            "value": _json_number(value),
            "oracle": _json_number(oracle_value),
            "gap": _json_number(gap),
        }
        return json.dumps(payload)
    if fmt is OutputFormat.CSV:
        lines = ["alpha,value"] if oracle_value is None else ["alpha,value,oracle,gap"]
        row = f"{_alpha_text(alpha)},{_fmt(value)}"
        if oracle_value is not None:
            row += f",{_fmt(oracle_value)},{_fmt(gap)}"
        return "\n".join([lines[0], row])
    out = [_fmt(value)]
    if oracle_value is not None:
        out.append(f"oracle {_fmt(oracle_value)}")
        out.append(f"gap {_fmt(gap)}")
    return "\n".join(out)


def run(job: JobSpec) -> tuple[int, str]:
    """Evaluate a job and return (exit_code, rendered_output)."""
    settings = _oracle_settings()
    evaluate = _EVALUATORS[job.command]
    rows = []
    for alpha in job.alphas:
        value, oracle_value = evaluate(job.options, alpha, job.oracle_check, settings)
        if job.bits:
            value = value / math.log(2)
            if oracle_value is not None:
                oracle_value = oracle_value / math.log(2)
        rows.append((alpha, value, oracle_value))
    if job.sweep:
        finite = [(a, v) for a, v, _ in rows]
        for (_, earlier), (later_a, later) in zip(finite, finite[1:]):
            if later > earlier + 1e-9:
                print(
                    f"warning: sweep is not non-increasing at alpha={_alpha_text(later_a)}",
                    file=sys.stderr,
                )
                break
    code = 2 if any(math.isinf(v) for _, v, _ in rows) else 0
    return code, _render(job, rows)


def main(argv=None) -> int:
    try:
        job = parse_args(argv if argv is not None else sys.argv[1:])
        code, text = run(job)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except RenyiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
