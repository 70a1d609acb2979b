"""Exponential-family representation of six scalar families plus the
zero-mean multivariate Gaussian.

Every density is written as

    f(x) = b(x) * exp( eta . T(x) + A(eta) )

where b is the base measure, T the sufficient statistic, eta the natural
parameter, and A(eta) = -ln integral b exp(eta . T) the log-normalizer.
The conventions fixed here (and relied on throughout):

    family            b(x)              T(x)                 eta            natural domain
    ----------------  ----------------  -------------------  -------------  ----------------------
    Beta(a, c)        1/(x(1-x))        (ln x, ln(1-x))      (a, c)         eta1 > 0, eta2 > 0
    ChiSquared(nu)    exp(-x/2)         ln x                 nu/2 - 1       eta > -1
    Exponential(lam)  1                 x                    -lam           eta < 0
    Gamma(k, theta)   1                 (ln x, x)            (k-1, -1/th)   eta1 > -1, eta2 < 0
    Gaussian(mu, v)   (2 pi)^(-1/2)     (x, x^2)             (mu/v,         eta2 < 0
                                                              -1/(2v))
    Laplace(mu, s)    1                 |x - mu|             -1/s           eta < 0
    MV Gaussian(S)    (2 pi)^(-n/2)     x x^T                -(1/2) S^-1    -2 eta pos. definite

Each natural domain is exactly the set where the normalizing integral
converges, so an out-of-domain combined parameter certifies a divergent
cross-entropy integral.  The Laplace location enters T itself, so two
Laplace members belong to the same family (share T) only when their
locations agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import betaln, gammaln

from .alpha import AlphaOrder
from .errors import (
    DimensionMismatchError,
    InvalidAlphaError,
    InvalidParameterError,
    OutOfDomainError,
)
from .linalg import as_symmetric_matrix, cholesky_lower, spd_inverse, spd_logdet
from .oracle import QuadratureSettings, integrate
from .support import ALL_REALS, POSITIVE_REALS, UNIT_INTERVAL, SupportSpec

LOG_2PI = math.log(2.0 * math.pi)

# Tolerances for the base-expectation quadrature (Beta and chi-squared carry
# non-constant base measures).  Tight, so the natural-parameter route stays
# within 1e-10 of the closed forms.
_BASE_EXPECTATION_SETTINGS = QuadratureSettings(
    relative_tolerance=5e-13, absolute_tolerance=1e-15, max_subdivisions=1000
)


class Family(Enum):
    BETA = "beta"
    CHI_SQUARED = "chi_squared"
    EXPONENTIAL = "exponential"
    GAMMA = "gamma"
    GAUSSIAN = "gaussian"
    LAPLACE_EQUAL_MEAN = "laplace"
    MV_GAUSSIAN_ZERO_MEAN = "mv_gaussian"


_SCALAR_FAMILIES = frozenset(
    {Family.BETA, Family.CHI_SQUARED, Family.EXPONENTIAL, Family.GAMMA,
     Family.GAUSSIAN, Family.LAPLACE_EQUAL_MEAN}
)


def _require_finite(name: str, *values: float):
    for v in values:
        if not math.isfinite(v):
            raise InvalidParameterError(f"{name}: parameters must be finite, got {v}")


@dataclass(frozen=True, eq=False)
class ExpFamilyDistribution:
    """One member of a supported family, in classical parameters.

    Use the family classmethods; the raw constructor does not validate.
    ``params`` holds the classical parameters in the documented order;
    ``cov`` is only set for the multivariate Gaussian.
    """

    family: Family
    params: tuple[float, ...] = ()
    cov: np.ndarray | None = None

    @classmethod
    def beta(cls, a: float, b: float) -> "ExpFamilyDistribution":
        """Beta(a, b) on (0, 1): x^(a-1) (1-x)^(b-1) / B(a, b)."""
        a, b = float(a), float(b)
        _require_finite("beta", a, b)
        if a <= 0 or b <= 0:
            raise InvalidParameterError(f"beta needs a > 0 and b > 0, got ({a}, {b})")
        return cls(Family.BETA, (a, b))

    @classmethod
    def chi_squared(cls, nu: float) -> "ExpFamilyDistribution":
        """Chi-squared with nu > 0 degrees of freedom (real nu accepted)."""
        nu = float(nu)
        _require_finite("chi_squared", nu)
        if nu <= 0:
            raise InvalidParameterError(f"chi_squared needs nu > 0, got {nu}")
        return cls(Family.CHI_SQUARED, (nu,))

    @classmethod
    def exponential(cls, rate: float) -> "ExpFamilyDistribution":
        """Exponential with rate lambda > 0: lambda exp(-lambda x) on x > 0."""
        rate = float(rate)
        _require_finite("exponential", rate)
        if rate <= 0:
            raise InvalidParameterError(f"exponential needs rate > 0, got {rate}")
        return cls(Family.EXPONENTIAL, (rate,))

    @classmethod
    def gamma(cls, shape: float, scale: float) -> "ExpFamilyDistribution":
        """Gamma(k, theta): x^(k-1) exp(-x/theta) / (Gamma(k) theta^k)."""
        shape, scale = float(shape), float(scale)
        _require_finite("gamma", shape, scale)
        if shape <= 0 or scale <= 0:
            raise InvalidParameterError(
                f"gamma needs shape > 0 and scale > 0, got ({shape}, {scale})"
            )
        return cls(Family.GAMMA, (shape, scale))

    @classmethod
    def gaussian(cls, mean: float, variance: float) -> "ExpFamilyDistribution":
        """Normal with the given mean and variance."""
        mean, variance = float(mean), float(variance)
        _require_finite("gaussian", mean, variance)
        if variance <= 0:
            raise InvalidParameterError(f"gaussian needs variance > 0, got {variance}")
        return cls(Family.GAUSSIAN, (mean, variance))

    @classmethod
    def laplace(cls, mean: float, scale: float) -> "ExpFamilyDistribution":
        """Laplace with location mu and scale s: exp(-|x-mu|/s) / (2s)."""
        mean, scale = float(mean), float(scale)
        _require_finite("laplace", mean, scale)
        if scale <= 0:
            raise InvalidParameterError(f"laplace needs scale > 0, got {scale}")
        return cls(Family.LAPLACE_EQUAL_MEAN, (mean, scale))

    @classmethod
    def mv_gaussian(cls, cov) -> "ExpFamilyDistribution":
        """Zero-mean multivariate normal with SPD covariance."""
        cov = as_symmetric_matrix(cov, name="covariance")
        cholesky_lower(cov, name="covariance")  # SPD check
        cov.setflags(write=False)
        return cls(Family.MV_GAUSSIAN_ZERO_MEAN, (), cov)

    @property
    def support(self) -> SupportSpec:
        if self.family is Family.BETA:
            return UNIT_INTERVAL
        if self.family in (Family.CHI_SQUARED, Family.EXPONENTIAL, Family.GAMMA):
            return POSITIVE_REALS
        if self.family in (Family.GAUSSIAN, Family.LAPLACE_EQUAL_MEAN):
            return ALL_REALS
        return SupportSpec.real_vector(self.cov.shape[0])

    @property
    def dim(self) -> int:
        return 1 if self.family in _SCALAR_FAMILIES else self.cov.shape[0]

    def pdf(self, x):
        return pdf(self, x)

    def logpdf(self, x):
        return logpdf(self, x)

    def __repr__(self) -> str:
        if self.family is Family.MV_GAUSSIAN_ZERO_MEAN:
            return f"ExpFamilyDistribution.mv_gaussian(dim={self.dim})"
        args = ", ".join(f"{p:g}" for p in self.params)
        return f"ExpFamilyDistribution({self.family.value}, {args})"


@dataclass(frozen=True, eq=False)
class NaturalParam:
    """Natural parameter of one family member.

    ``components`` is 1-D for the scalar families and the flattened n x n
    matrix for the multivariate Gaussian.  ``anchor`` carries the Laplace
    location, which lives inside the sufficient statistic |x - anchor|.
    """

    family: Family
    components: np.ndarray
    anchor: float | None = None

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=float)
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    @property
    def dim(self) -> int:
        if self.family is Family.MV_GAUSSIAN_ZERO_MEAN:
            return int(round(math.sqrt(self.components.size)))
        return 1

    def matrix(self) -> np.ndarray:
        """The n x n natural-parameter matrix (multivariate Gaussian only)."""
        n = self.dim
        return self.components.reshape(n, n)


def pdf(d: ExpFamilyDistribution, x) -> float:
    """Density of d at x (classical closed form; 0 outside the support)."""
    lp = logpdf(d, x)
    return math.exp(lp) if lp > -math.inf else 0.0


def logpdf(d: ExpFamilyDistribution, x) -> float:
    """Log-density of d at x (-inf outside the support).

    Unlike pdf, this never underflows in the tails, so quadrature oracles
    can form p q^(alpha-1) in log space.
    """
    if d.family is Family.MV_GAUSSIAN_ZERO_MEAN:
        xv = np.asarray(x, dtype=float)
        n = d.dim
        if xv.shape != (n,):
            raise DimensionMismatchError(f"point must have shape ({n},), got {xv.shape}")
        quad_form = float(xv @ spd_inverse(d.cov) @ xv)
        logdet = spd_logdet(d.cov)
        return -0.5 * (n * LOG_2PI + logdet + quad_form)

    x = float(x)
    p = d.params
    if d.family is Family.BETA:
        a, b = p
        if not 0.0 < x < 1.0:
            return -math.inf
        return (a - 1) * math.log(x) + (b - 1) * math.log1p(-x) - float(betaln(a, b))
    if d.family is Family.CHI_SQUARED:
        nu, = p
        if x < 0.0 or (x == 0.0 and nu != 2.0):
            return -math.inf
        if x == 0.0:
            return math.log(0.5)
        return (nu / 2 - 1) * math.log(x) - x / 2 - (nu / 2) * math.log(2) - float(gammaln(nu / 2))
    if d.family is Family.EXPONENTIAL:
        lam, = p
        if x < 0.0:
            return -math.inf
        return math.log(lam) - lam * x
    if d.family is Family.GAMMA:
        k, theta = p
        if x < 0.0 or (x == 0.0 and k != 1.0):
            return -math.inf
        if x == 0.0:
            return -math.log(theta)
        return (k - 1) * math.log(x) - x / theta - float(gammaln(k)) - k * math.log(theta)
    if d.family is Family.GAUSSIAN:
        mu, var = p
        return -((x - mu) ** 2) / (2 * var) - 0.5 * math.log(2 * math.pi * var)
    if d.family is Family.LAPLACE_EQUAL_MEAN:
        mu, s = p
        return -abs(x - mu) / s - math.log(2 * s)
    raise InvalidParameterError(f"unknown family {d.family}")


def to_natural(d: ExpFamilyDistribution) -> NaturalParam:
    """Natural parameter of d under this module's conventions."""
    p = d.params
    if d.family is Family.BETA:
        return NaturalParam(d.family, np.array([p[0], p[1]]))
    if d.family is Family.CHI_SQUARED:
        return NaturalParam(d.family, np.array([p[0] / 2 - 1]))
    if d.family is Family.EXPONENTIAL:
        return NaturalParam(d.family, np.array([-p[0]]))
    if d.family is Family.GAMMA:
        return NaturalParam(d.family, np.array([p[0] - 1, -1.0 / p[1]]))
    if d.family is Family.GAUSSIAN:
        mu, var = p
        return NaturalParam(d.family, np.array([mu / var, -0.5 / var]))
    if d.family is Family.LAPLACE_EQUAL_MEAN:
        mu, s = p
        return NaturalParam(d.family, np.array([-1.0 / s]), anchor=mu)
    if d.family is Family.MV_GAUSSIAN_ZERO_MEAN:
        eta = -0.5 * spd_inverse(d.cov)
        return NaturalParam(d.family, eta.reshape(-1))
    raise InvalidParameterError(f"unknown family {d.family}")


def natural_in_domain(eta: NaturalParam) -> bool:
    """Whether eta lies in the family's natural domain (integral converges)."""
    c = eta.components
    if eta.family is Family.BETA:
        return c[0] > 0 and c[1] > 0
    if eta.family is Family.CHI_SQUARED:
        return c[0] > -1
    if eta.family in (Family.EXPONENTIAL, Family.LAPLACE_EQUAL_MEAN):
        return c[0] < 0
    if eta.family is Family.GAMMA:
        return c[0] > -1 and c[1] < 0
    if eta.family is Family.GAUSSIAN:
        return c[1] < 0
    if eta.family is Family.MV_GAUSSIAN_ZERO_MEAN:
        m = -2.0 * eta.matrix()
        try:
            cholesky_lower(as_symmetric_matrix(m))
            return True
        except (InvalidParameterError, ValueError):
            return False
    raise InvalidParameterError(f"unknown family {eta.family}")


def log_partition(eta: NaturalParam) -> float:
    """Log-normalizer A(eta) = -ln integral b(x) exp(eta . T(x)) dx.

    With this sign, f = b exp(eta . T + A).  Raises OutOfDomainError when
    eta is outside the natural domain.
    """
    if not natural_in_domain(eta):
        raise OutOfDomainError(
            f"{eta.family.value} natural parameter {eta.components} is outside "
            "the natural domain (normalizing integral diverges)"
        )
    c = eta.components
    if eta.family is Family.BETA:
        return -float(betaln(c[0], c[1]))
    if eta.family is Family.CHI_SQUARED:
        h = c[0] + 1  # = nu / 2
        return -h * math.log(2) - float(gammaln(h))
    if eta.family is Family.EXPONENTIAL:
        return math.log(-c[0])
    if eta.family is Family.GAMMA:
        k = c[0] + 1
        return -float(gammaln(k)) + k * math.log(-c[1])
    if eta.family is Family.GAUSSIAN:
        return 0.5 * math.log(-2.0 * c[1]) + c[0] ** 2 / (4.0 * c[1])
    if eta.family is Family.LAPLACE_EQUAL_MEAN:
        return math.log(-c[0] / 2.0)
    if eta.family is Family.MV_GAUSSIAN_ZERO_MEAN:
        m = as_symmetric_matrix(-2.0 * eta.matrix())
        return 0.5 * spd_logdet(m)
    raise InvalidParameterError(f"unknown family {eta.family}")


def combine_natural(eta1: NaturalParam, eta2: NaturalParam, alpha) -> NaturalParam:
    """The combined parameter eta1 + (alpha - 1) eta2.

    This is the natural parameter of the tilted density proportional to
    f1 f2^(alpha-1) (up to the base-measure power).  At the alpha -> 1
    marker it returns eta1 exactly.  Raises OutOfDomainError when the
    combination leaves the natural domain, which certifies that the
    cross-entropy integral diverges for every constant-base family.
    """
    if eta1.family is not eta2.family:
        raise InvalidParameterError(
            f"cannot combine parameters of {eta1.family.value} and {eta2.family.value}"
        )
    if eta1.components.shape != eta2.components.shape:
        raise DimensionMismatchError(
            f"natural parameters have shapes {eta1.components.shape} and "
            f"{eta2.components.shape}"
        )
    if eta1.family is Family.LAPLACE_EQUAL_MEAN and eta1.anchor != eta2.anchor:
        raise InvalidParameterError(
            "Laplace members share a sufficient statistic only with equal "
            f"locations, got {eta1.anchor} and {eta2.anchor}"
        )
    alpha = AlphaOrder.coerce(alpha)
    if alpha.is_inf:
        raise InvalidAlphaError("cannot combine natural parameters at alpha = infinity")
    if alpha.is_one:
        return NaturalParam(eta1.family, eta1.components.copy(), eta1.anchor)
    combined = NaturalParam(
        eta1.family,
        eta1.components + (alpha.value - 1.0) * eta2.components,
        eta1.anchor,
    )
    if not natural_in_domain(combined):
        raise OutOfDomainError(
            f"combined {eta1.family.value} parameter {combined.components} leaves "
            f"the natural domain at alpha={alpha.value:g} (integral diverges)"
        )
    return combined


def log_base_measure(family: Family, x: float, dim: int = 1) -> float:
    """ln b(x) for the family's base measure."""
    if family is Family.BETA:
        return -math.log(x) - math.log1p(-x)
    if family is Family.CHI_SQUARED:
        return -x / 2.0
    if family in (Family.EXPONENTIAL, Family.GAMMA, Family.LAPLACE_EQUAL_MEAN):
        return 0.0
    if family is Family.GAUSSIAN:
        return -0.5 * LOG_2PI
    if family is Family.MV_GAUSSIAN_ZERO_MEAN:
        return -0.5 * dim * LOG_2PI
    raise InvalidParameterError(f"unknown family {family}")


def constant_log_base(family: Family, dim: int = 1) -> float | None:
    """ln b when the base measure is constant on the support, else None."""
    if family in (Family.EXPONENTIAL, Family.GAMMA, Family.LAPLACE_EQUAL_MEAN):
        return 0.0
    if family is Family.GAUSSIAN:
        return -0.5 * LOG_2PI
    if family is Family.MV_GAUSSIAN_ZERO_MEAN:
        return -0.5 * dim * LOG_2PI
    return None


def _suff_stat(eta: NaturalParam, x: float) -> np.ndarray:
    if eta.family is Family.BETA:
        return np.array([math.log(x), math.log1p(-x)])
    if eta.family is Family.CHI_SQUARED:
        return np.array([math.log(x)])
    if eta.family is Family.EXPONENTIAL:
        return np.array([x])
    if eta.family is Family.GAMMA:
        return np.array([math.log(x), x])
    if eta.family is Family.GAUSSIAN:
        return np.array([x, x * x])
    if eta.family is Family.LAPLACE_EQUAL_MEAN:
        return np.array([abs(x - eta.anchor)])
    raise InvalidParameterError(f"unknown family {eta.family}")


def _interior(family: Family, x: float) -> bool:
    if family is Family.BETA:
        return 0.0 < x < 1.0
    if family in (Family.CHI_SQUARED, Family.EXPONENTIAL, Family.GAMMA):
        return x > 0.0
    return True


def natural_pdf(eta: NaturalParam, x) -> float:
    """Density reconstructed from the representation b exp(eta . T + A)."""
    if eta.family is Family.MV_GAUSSIAN_ZERO_MEAN:
        xv = np.asarray(x, dtype=float)
        quad_form = float(xv @ eta.matrix() @ xv)
        return math.exp(
            log_base_measure(eta.family, 0.0, eta.dim) + quad_form + log_partition(eta)
        )
    x = float(x)
    if not _interior(eta.family, x):
        return 0.0
    exponent = float(eta.components @ _suff_stat(eta, x))
    return math.exp(log_base_measure(eta.family, x) + exponent + log_partition(eta))


def log_base_expectation(eta: NaturalParam, alpha) -> float:
    """ln E[ b(X)^(alpha-1) ] under the member with natural parameter eta.

    For the constant-base families this is (alpha - 1) ln b exactly.  For
    Beta and chi-squared the expectation is evaluated by quadrature of
    b(x)^(alpha-1) against the density of eta; it returns +inf when that
    integral diverges (possible for Beta), and raises NonConvergenceError
    if the quadrature cannot reach its tolerance.
    """
    alpha = AlphaOrder.coerce(alpha)
    if alpha.is_inf:
        raise InvalidAlphaError("no base expectation at alpha = infinity")
    if not natural_in_domain(eta):
        raise OutOfDomainError(
            f"{eta.family.value} natural parameter {eta.components} is outside "
            "the natural domain"
        )
    if alpha.is_one:
        return 0.0  # E[b^0] = 1 regardless of the family
    a = alpha.value
    const = constant_log_base(eta.family, eta.dim)
    if const is not None:
        return (a - 1.0) * const

    if eta.family is Family.BETA:
        # Integrand x^(eta1 - a) (1-x)^(eta2 - a) / B(eta1, eta2); it is
        # integrable iff both exponents exceed -1.
        if not (eta.components[0] - a > -1.0 and eta.components[1] - a > -1.0):
            return math.inf
        supp = UNIT_INTERVAL
    else:  # chi-squared: exp(-a x / 2) x^eta / (2^h Gamma(h)) always integrable
        supp = POSITIVE_REALS

    log_a = log_partition(eta)
    fam = eta.family

    def integrand(x):
        if not _interior(fam, x):
            return 0.0
        z = (
            a * log_base_measure(fam, x)
            + float(eta.components @ _suff_stat(eta, x))
            + log_a
        )
        return math.exp(z)

    value, _ = integrate(integrand, supp, _BASE_EXPECTATION_SETTINGS)
    return math.log(value)
