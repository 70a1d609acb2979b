"""Quadrature reference values for cross-entropy integrals.

Every closed form in this library is checked against direct numeric
evaluation of its defining integral.  Infinite domains are folded onto a
compact interval first (tangent or exponential map) so the adaptive rule
sees the whole line; divergence of nonnegative integrands is detected by a
window-doubling probe before the folded integral is attempted.

The routines here never call the closed forms they are used to check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

import numpy as np
from scipy.integrate import IntegrationWarning, quad, trapezoid

from .alpha import AlphaOrder
from .errors import InvalidAlphaError, InvalidParameterError, NonConvergenceError
from .support import SupportKind, SupportSpec

# Below this density value a factor of |ln q| ~ 1e3 cannot matter at any
# tolerance used here, and evaluating logs would overflow to -inf.
_TINY_DENSITY = 1e-290
_LOG_TINY = math.log(_TINY_DENSITY)
# exp() bounds of a double
_LOG_HUGE = 700.0
_LOG_UNDERFLOW = -745.0

# Window-doubling probe: partial integrals over windows W, 2W, 4W, ...
# An integral is declared divergent when the last _PROBE_RUN doublings all
# grow the partial integral by more than _PROBE_GROWTH, or when a partial
# overflows.  Slowly (logarithmically) divergent integrands can escape the
# growth test; they then fail loudly in the folded integral instead.
_PROBE_GROWTH = 1.01
_PROBE_RUN = 5
_PROBE_DOUBLINGS = 24
_PROBE_START_WINDOW = 1.0
_PROBE_OVERFLOW = 1e280


class DomainTransform(Enum):
    """Change of variables used to fold an infinite domain onto a box."""

    TANGENT = "tangent"          # x = tan(u)
    EXPONENTIAL = "exponential"  # x = -ln(v)


@dataclass(frozen=True)
class QuadratureSettings:
    relative_tolerance: float = 1e-10
    absolute_tolerance: float = 1e-12
    max_subdivisions: int = 2000
    infinite_domain_transform: DomainTransform = DomainTransform.TANGENT

    def __post_init__(self):
        if self.relative_tolerance <= 0 or self.absolute_tolerance <= 0:
            raise InvalidParameterError("quadrature tolerances must be positive")
        if self.max_subdivisions < 10:
            raise InvalidParameterError("max_subdivisions must be at least 10")


DEFAULT_SETTINGS = QuadratureSettings()


def _quad_interval(f, a, b, settings: QuadratureSettings):
    """scipy.integrate.quad with warnings returned instead of emitted."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, abserr = quad(
            f,
            a,
            b,
            epsabs=settings.absolute_tolerance,
            epsrel=settings.relative_tolerance,
            limit=settings.max_subdivisions,
        )
    messages = [str(w.message) for w in caught if issubclass(w.category, IntegrationWarning)]
    divergent = any("divergent" in m for m in messages)
    return value, abserr, messages, divergent


def _folded(f: Callable[[float], float], supp: SupportSpec, transform: DomainTransform):
    """Return (g, a, b) with integral of f over supp equal to quad of g on (a, b)."""
    if supp.kind is SupportKind.INTERVAL:
        return f, supp.lower, supp.upper

    if transform is DomainTransform.TANGENT:
        def g(u):
            x = math.tan(u)
            fx = f(x)
            if fx == 0.0:
                return 0.0
            return fx * (1.0 + x * x)

        if supp.kind is SupportKind.POSITIVE_REALS:
            return g, 0.0, math.pi / 2
        if supp.kind is SupportKind.ALL_REALS:
            return g, -math.pi / 2, math.pi / 2

    if transform is DomainTransform.EXPONENTIAL:
        if supp.kind is SupportKind.POSITIVE_REALS:
            def g(v):
                x = -math.log(v)
                fx = f(x)
                if fx == 0.0:
                    return 0.0
                return fx / v

            return g, 0.0, 1.0
        if supp.kind is SupportKind.ALL_REALS:
            def g(v):
                x = -math.log(v)
                fx = f(x) + f(-x)
                if fx == 0.0:
                    return 0.0
                return fx / v

            return g, 0.0, 1.0

    raise InvalidParameterError(f"cannot integrate over support kind {supp.kind}")


def integrate(
    f: Callable[[float], float],
    supp: SupportSpec,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> tuple[float, float]:
    """Integrate f over a scalar support.

    Returns (value, error_estimate).  Raises NonConvergenceError when the
    adaptive rule reports trouble and its error estimate misses the
    requested tolerance, or when the result is not finite.
    """
    g, a, b = _folded(f, supp, settings.infinite_domain_transform)
    value, abserr, messages, divergent = _quad_interval(g, a, b, settings)
    if divergent or not math.isfinite(value):
        raise NonConvergenceError(
            f"integral did not converge: {messages[0] if messages else 'non-finite value'}"
        )
    tol = max(settings.absolute_tolerance, settings.relative_tolerance * abs(value))
    if messages and abserr > tol:
        raise NonConvergenceError(
            f"quadrature error estimate {abserr:.3e} above tolerance {tol:.3e}: {messages[0]}"
        )
    return value, abserr


def _probe_window(supp: SupportSpec, width: float) -> tuple[float, float]:
    if supp.kind is SupportKind.POSITIVE_REALS:
        return 0.0, width
    return -width, width


def _diverges(f, supp: SupportSpec, settings: QuadratureSettings) -> bool:
    """Window-doubling divergence probe for a nonnegative integrand.

    Only growth of the partial integrals and overflow count as evidence;
    QUADPACK's own "probably divergent" flag is ignored here because it
    also fires on wide compact windows of perfectly convergent tails.
    """
    if supp.kind is SupportKind.INTERVAL:
        return False  # compact: endpoint divergence surfaces as a quad warning
    loose = replace(settings, relative_tolerance=1e-8, absolute_tolerance=1e-12,
                    max_subdivisions=200)
    previous = None
    run = 0
    stable = 0
    for k in range(_PROBE_DOUBLINGS + 1):
        a, b = _probe_window(supp, _PROBE_START_WINDOW * 2.0 ** k)
        partial, _, _, _ = _quad_interval(f, a, b, loose)
        if math.isnan(partial) or partial > _PROBE_OVERFLOW:
            return True
        if previous is not None and previous > 0.0:
            ratio = partial / previous
            run = run + 1 if ratio > _PROBE_GROWTH else 0
            stable = stable + 1 if abs(ratio - 1.0) <= 1e-12 else 0
            if stable >= 3:
                return False  # mass exhausted at this scale
        elif previous is not None and partial > 0.0:
            run += 1  # first mass appearing counts as growth
        previous = partial
    return run >= _PROBE_RUN


def _nonnegative_integral(f, supp: SupportSpec, settings: QuadratureSettings) -> float:
    """Integral of a nonnegative integrand, or +inf when it diverges."""
    if _diverges(f, supp, settings):
        return math.inf
    g, a, b = _folded(f, supp, settings.infinite_domain_transform)
    value, abserr, messages, divergent = _quad_interval(g, a, b, settings)
    if divergent or not math.isfinite(value):
        return math.inf
    tol = max(settings.absolute_tolerance, settings.relative_tolerance * abs(value))
    if messages and abserr > tol:
        raise NonConvergenceError(
            f"quadrature error estimate {abserr:.3e} above tolerance {tol:.3e}: {messages[0]}"
        )
    return value


def cross_entropy_numeric(
    p_pdf: Callable[[float], float],
    q_pdf: Callable[[float], float],
    supp: SupportSpec,
    alpha,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    *,
    p_logpdf: Callable[[float], float] | None = None,
    q_logpdf: Callable[[float], float] | None = None,
) -> float:
    """Order-alpha differential cross-entropy by direct quadrature.

    Evaluates (1/(1-alpha)) ln integral of p q^(alpha-1) over the common
    support; at the alpha -> 1 marker it evaluates -integral of p ln q.
    Returns +inf (alpha < 1) or -inf (alpha > 1) when the defining integral
    diverges.

    When both log-densities are supplied, the integrand is formed in log
    space.  For alpha < 1 this matters: a reference density that underflows
    to 0.0 in a tail where p is still representable would otherwise be
    indistinguishable from a genuine zero of q (where the integrand really
    is infinite).
    """
    alpha = AlphaOrder.coerce(alpha)
    if alpha.is_inf:
        raise InvalidAlphaError("no quadrature form for the alpha -> infinity limit")
    use_logs = p_logpdf is not None and q_logpdf is not None

    if alpha.is_one:
        if use_logs:
            def integrand(x):
                lp = p_logpdf(x)
                if lp < _LOG_TINY:
                    return 0.0
                lq = q_logpdf(x)
                if lq == -math.inf:
                    return math.inf
                return -math.exp(lp) * lq
        else:
            def integrand(x):
                pv = p_pdf(x)
                if pv < _TINY_DENSITY:
                    return 0.0
                qv = q_pdf(x)
                if qv <= 0.0:
                    return math.inf
                return -pv * math.log(qv)

        value, _ = integrate(integrand, supp, settings)
        return value

    a = alpha.value

    if use_logs:
        def integrand(x):
            lp = p_logpdf(x)
            if lp < _LOG_TINY:
                return 0.0
            lq = q_logpdf(x)
            if lq == -math.inf:
                return math.inf if a < 1.0 else 0.0
            z = lp + (a - 1.0) * lq
            if z > _LOG_HUGE:
                return math.inf
            if z < _LOG_UNDERFLOW:
                return 0.0
            return math.exp(z)
    else:
        def integrand(x):
            pv = p_pdf(x)
            if pv < _TINY_DENSITY:
                return 0.0
            qv = q_pdf(x)
            if qv <= 0.0:
                return math.inf if a < 1.0 else 0.0
            return math.exp(math.log(pv) + (a - 1.0) * math.log(qv))

    total = _nonnegative_integral(integrand, supp, settings)
    if math.isinf(total):
        return math.inf if a < 1.0 else -math.inf
    if total <= 0.0:
        raise NonConvergenceError("defining integral evaluated to a nonpositive value")
    return math.log(total) / (1.0 - a)


def renyi_entropy_numeric(
    pdf: Callable[[float], float],
    supp: SupportSpec,
    alpha,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """Order-alpha differential entropy (1/(1-alpha)) ln integral f^alpha."""
    alpha = AlphaOrder.coerce(alpha)
    if alpha.is_inf:
        raise InvalidAlphaError("no quadrature form for the alpha -> infinity limit")
    if alpha.is_one:
        def integrand(x):
            fv = pdf(x)
            if fv < _TINY_DENSITY:
                return 0.0
            return -fv * math.log(fv)

        value, _ = integrate(integrand, supp, settings)
        return value

    a = alpha.value

    def integrand(x):
        fv = pdf(x)
        if fv <= 0.0:
            return 0.0
        return math.exp(a * math.log(fv))

    total = _nonnegative_integral(integrand, supp, settings)
    if math.isinf(total):
        return math.inf if a < 1.0 else -math.inf
    if total <= 0.0:
        raise NonConvergenceError("entropy integral evaluated to a nonpositive value")
    return math.log(total) / (1.0 - a)


def mgf_numeric(
    pdf: Callable[[float], float],
    supp: SupportSpec,
    t: float,
    square_center: float | None = None,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """E[exp(t X)] by quadrature, or E[exp(t (X - c)^2)] when a center is given.

    Returns +inf when the integral diverges.
    """
    t = float(t)

    def integrand(x):
        pv = pdf(x)
        if pv == 0.0:
            return 0.0
        if square_center is None:
            z = math.log(pv) + t * x
        else:
            d = x - square_center
            z = math.log(pv) + t * d * d
        if z > 700.0:
            return math.inf
        return math.exp(z)

    return _nonnegative_integral(integrand, supp, settings)


def gaussian_pdf_2d(cov) -> Callable:
    """Vectorized zero-mean bivariate normal density (for grid quadrature)."""
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2, 2):
        raise InvalidParameterError(f"need a 2x2 covariance, got shape {cov.shape}")
    det = float(np.linalg.det(cov))
    if det <= 0:
        raise InvalidParameterError("covariance must be positive definite")
    inv = np.linalg.inv(cov)
    norm = 1.0 / (2.0 * math.pi * math.sqrt(det))

    def pdf(x, y):
        quad_form = inv[0, 0] * x * x + 2.0 * inv[0, 1] * x * y + inv[1, 1] * y * y
        return norm * np.exp(-0.5 * quad_form)

    return pdf

def cross_entropy_grid2d_gaussian(cov1, cov2, alpha, points: int = 1501,
                                  sd_multiple: float = 12.0) -> float:
    """Cross-entropy of two zero-mean bivariate normals on a fixed tensor grid.

    Trapezoid rule over [-w, w]^2 with w = sd_multiple standard deviations of
    the wider marginal.  Independent of the matrix closed form: the densities
    are evaluated directly and the defining integral is summed.
    """
    alpha = AlphaOrder.coerce(alpha)
    if alpha.is_inf:
        raise InvalidAlphaError("no grid form for the alpha -> infinity limit")
    p_pdf = gaussian_pdf_2d(cov1)
    q_pdf = gaussian_pdf_2d(cov2)
    scale = math.sqrt(max(np.max(np.diag(np.asarray(cov1, dtype=float))),
                          np.max(np.diag(np.asarray(cov2, dtype=float)))))
    w = sd_multiple * scale
    axis = np.linspace(-w, w, points)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    p = p_pdf(gx, gy)
    q = q_pdf(gx, gy)
    if alpha.is_one:
        vals = np.where(p > 0, p * -np.log(np.maximum(q, 1e-320)), 0.0)
        return float(trapezoid(trapezoid(vals, axis, axis=1), axis))
    a = alpha.value
    vals = p * q ** (a - 1.0)
    total = float(trapezoid(trapezoid(vals, axis, axis=1), axis))
    if total <= 0.0:
        raise NonConvergenceError("grid integral evaluated to a nonpositive value")
    return math.log(total) / (1.0 - a)
