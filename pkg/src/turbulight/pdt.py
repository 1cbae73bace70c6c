"""Probability distributions of channel transmittance (PDTs).

A fluctuating-loss channel is described by the law of its intensity
transmittance eta in [0, 1]; the amplitude transmission seen by field
operators is T = sqrt(eta).  Four one-mode families cover the practical
cases:

* :class:`Dirac` -- a constant channel (pure deterministic loss),
* :class:`TruncatedLogNormal` -- log-normal turbulence statistics,
  conditioned on eta <= 1,
* :class:`Beta` -- a flexible bounded family for synthetic studies,
* :class:`Empirical` -- histogram atoms ingested from measured data.

Deterministic absorption enters as a multiplicative pre-factor on eta
(:meth:`TransmittanceDistribution.scale`), and pre/postselection on a
monitored transmittance is the renormalized restriction to [threshold, 1]
(:meth:`TransmittanceDistribution.truncate`).

Two-mode channels combine one-mode laws three ways: :class:`Product`
(independent arms, counterpropagation), :class:`PerfectlyCorrelated`
(both modes ride the same realization, copropagation) and
:class:`AdaptiveCorrelated` (feedback equalizes both arms onto the weaker
momentary channel, so both modes see min(T_a, T_b)).

Moments use closed forms of the underlying families (incomplete beta /
normal integrals); generic expectations fall back on the deterministic
quadrature from :mod:`turbulight.numerics`, or exact sums for atomic laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .numerics import DEFAULT_QUADRATURE, RandomSource, integrate, integrate2

__all__ = [
    "EmptySelectionError",
    "TransmittanceDistribution",
    "Dirac",
    "TruncatedLogNormal",
    "Beta",
    "Empirical",
    "Scaled",
    "SelectionPolicy",
    "JointTransmittanceDistribution",
    "Product",
    "PerfectlyCorrelated",
    "AdaptiveCorrelated",
    "adaptive_correlate",
    "sample",
]


class EmptySelectionError(ValueError):
    """Selection threshold removed (essentially) all probability mass."""

    def __init__(self, threshold, surviving_mass):
        super().__init__(
            f"selection threshold {threshold!r} leaves surviving probability "
            f"mass {surviving_mass!r}"
        )
        self.threshold = threshold
        self.surviving_mass = surviving_mass


def _check_unit_interval(name, value, *, open_left=False, open_right=False):
    lo_ok = value > 0.0 if open_left else value >= 0.0
    hi_ok = value < 1.0 if open_right else value <= 1.0
    if not (np.isfinite(value) and lo_ok and hi_ok):
        raise ValueError(f"{name} must lie in the unit interval, got {value!r}")


class TransmittanceDistribution:
    """Base class for one-mode transmittance laws.

    Concrete subclasses implement ``moment``, ``survival``, ``sample``,
    ``truncate``, ``scale`` and either ``atoms`` (atomic laws) or
    ``density`` with ``support`` (continuous laws).  Everything here is
    immutable and safe to share between threads.
    """

    # ---- interface -----------------------------------------------------

    def moment(self, k, spec=DEFAULT_QUADRATURE):
        """<eta**k> for real k >= 0 (k = 0 gives exactly 1)."""
        raise NotImplementedError

    def density(self, eta):
        """Normalized density at eta (vectorized). Atomic laws raise."""
        raise NotImplementedError

    def survival(self, eta, include_equal=False):
        """P(X > eta), or P(X >= eta) when include_equal (vectorized)."""
        raise NotImplementedError

    def sample(self, n, rng: RandomSource) -> np.ndarray:
        """n independent draws, reproducible for a fixed RandomSource."""
        raise NotImplementedError

    def truncate(self, threshold) -> "TransmittanceDistribution":
        """Renormalized restriction to [threshold, 1]."""
        raise NotImplementedError

    def scale(self, factor) -> "TransmittanceDistribution":
        """Law of factor * eta, for a deterministic factor in (0, 1]."""
        raise NotImplementedError

    @property
    def atoms(self):
        """((eta, weight), ...) for atomic laws, else None."""
        return None

    @property
    def support(self):
        """(inf, sup) of the support."""
        raise NotImplementedError

    # ---- shared helpers ------------------------------------------------

    def mean(self, spec=DEFAULT_QUADRATURE):
        return self.moment(1.0, spec)

    def variance(self, spec=DEFAULT_QUADRATURE):
        return self.moment(2.0, spec) - self.moment(1.0, spec) ** 2

    def t_mean(self, spec=DEFAULT_QUADRATURE):
        """<T> = <sqrt(eta)>."""
        return self.moment(0.5, spec)

    def t_variance(self, spec=DEFAULT_QUADRATURE):
        """<(Delta T)^2> = <eta> - <sqrt(eta)>^2."""
        return self.moment(1.0, spec) - self.moment(0.5, spec) ** 2

    def expectation(self, f, spec=DEFAULT_QUADRATURE):
        """<f(eta)> for a vectorized, possibly vector-valued f."""
        atoms = self.atoms
        if atoms is not None:
            etas = np.array([a for a, _ in atoms])
            weights = np.array([w for _, w in atoms])
            values = np.asarray(f(etas))
            w = weights.reshape(weights.shape + (1,) * (values.ndim - 1))
            return np.sum(values * w, axis=0) if values.ndim > 1 else float(
                np.sum(values * w)
            )
        lo, hi = self.support

        def integrand(x):
            values = np.asarray(f(x))
            dens = self.density(x)
            return values * dens.reshape(dens.shape + (1,) * (values.ndim - 1))

        return integrate(integrand, lo, hi, spec)


@dataclass(frozen=True)
class Dirac(TransmittanceDistribution):
    """Deterministic channel: eta is always ``value``."""

    value: float

    def __post_init__(self):
        _check_unit_interval("Dirac value", self.value)

    def moment(self, k, spec=DEFAULT_QUADRATURE):
        if k == 0:
            return 1.0
        return float(self.value**k)

    def survival(self, eta, include_equal=False):
        eta = np.asarray(eta, dtype=float)
        if include_equal:
            out = np.where(eta <= self.value, 1.0, 0.0)
        else:
            out = np.where(eta < self.value, 1.0, 0.0)
        return out if out.ndim else float(out)

    def sample(self, n, rng):
        return np.full(n, self.value)

    def truncate(self, threshold):
        _check_unit_interval("threshold", threshold, open_right=True)
        if self.value >= threshold:
            return self
        raise EmptySelectionError(threshold, 0.0)

    def scale(self, factor):
        _check_unit_interval("scale factor", factor, open_left=True)
        if factor == 1.0:
            return self
        return Dirac(self.value * factor)

    @property
    def atoms(self):
        return ((self.value, 1.0),)

    @property
    def support(self):
        return (self.value, self.value)


@dataclass(frozen=True)
class Empirical(TransmittanceDistribution):
    """Atomic law from histogram bins (eta_i, weight_i), renormalized."""

    etas: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.etas) != len(self.weights) or not self.etas:
            raise ValueError("need matching, nonempty eta and weight sequences")
        total = math.fsum(self.weights)
        if not np.isfinite(total) or total <= 0.0:
            raise ValueError("bin weights must sum to a positive finite value")
        for e, w in zip(self.etas, self.weights):
            _check_unit_interval("bin eta", e)
            if not (np.isfinite(w) and w >= 0.0):
                raise ValueError(f"bin weight must be nonnegative, got {w!r}")
        order = np.argsort(np.asarray(self.etas), kind="stable")
        etas = tuple(float(self.etas[i]) for i in order)
        weights = tuple(float(self.weights[i]) / total for i in order)
        object.__setattr__(self, "etas", etas)
        object.__setattr__(self, "weights", weights)

    def moment(self, k, spec=DEFAULT_QUADRATURE):
        if k == 0:
            return 1.0
        e = np.asarray(self.etas)
        w = np.asarray(self.weights)
        return float(np.sum(w * np.power(e, k)))

    def survival(self, eta, include_equal=False):
        eta_arr = np.asarray(eta, dtype=float)
        flat = eta_arr.reshape(-1)
        e = np.asarray(self.etas)
        w = np.asarray(self.weights)
        cmp = e[None, :] >= flat[:, None] if include_equal else e[None, :] > flat[:, None]
        out = np.sum(cmp * w[None, :], axis=1)
        if eta_arr.ndim == 0:
            return float(out[0])
        return out.reshape(eta_arr.shape)

    def sample(self, n, rng):
        gen = rng.generator()
        idx = gen.choice(len(self.etas), size=n, p=np.asarray(self.weights))
        return np.asarray(self.etas)[idx]

    def truncate(self, threshold):
        _check_unit_interval("threshold", threshold, open_right=True)
        keep = [
            (e, w) for e, w in zip(self.etas, self.weights) if e >= threshold
        ]
        surviving = math.fsum(w for _, w in keep)
        if not keep or surviving <= 0.0:
            raise EmptySelectionError(threshold, surviving)
        return Empirical(tuple(e for e, _ in keep), tuple(w for _, w in keep))

    def scale(self, factor):
        _check_unit_interval("scale factor", factor, open_left=True)
        if factor == 1.0:
            return self
        return Empirical(tuple(e * factor for e in self.etas), self.weights)

    @property
    def atoms(self):
        return tuple(zip(self.etas, self.weights))

    @property
    def support(self):
        return (self.etas[0], self.etas[-1])


@dataclass(frozen=True)
class Beta(TransmittanceDistribution):
    """Beta(p, q) law on [0, 1], optionally restricted to [lo, 1]."""

    p: float
    q: float
    lo: float = 0.0

    def __post_init__(self):
        if not (self.p > 0.0 and self.q > 0.0):
            raise ValueError("Beta shape parameters must be positive")
        _check_unit_interval("lower truncation point", self.lo, open_right=True)

    def _mass(self):
        # Probability of the untruncated Beta landing in [lo, 1].
        if self.lo == 0.0:
            return 1.0
        return float(1.0 - special.betainc(self.p, self.q, self.lo))

    def moment(self, k, spec=DEFAULT_QUADRATURE):
        if k == 0:
            return 1.0
        if self.p + k <= 0.0:
            # The incomplete-beta representation needs p + k > 0.  With a
            # positive lower edge the moment is still finite; integrate it.
            if self.lo == 0.0:
                raise ValueError(
                    f"moment of order {k!r} diverges for Beta({self.p!r}, "
                    f"{self.q!r}) supported down to 0"
                )
            return float(self.expectation(lambda e: np.power(e, k), spec))
        # E[x^k; x >= lo] = B(p+k, q)/B(p, q) * (1 - I_lo(p+k, q))
        ratio = math.exp(special.betaln(self.p + k, self.q) - special.betaln(self.p, self.q))
        if self.lo == 0.0:
            upper = 1.0
        else:
            upper = float(1.0 - special.betainc(self.p + k, self.q, self.lo))
        return ratio * upper / self._mass()

    def density(self, eta):
        eta = np.asarray(eta, dtype=float)
        inside = (eta >= self.lo) & (eta <= 1.0) & (eta > 0.0) & (eta < 1.0)
        log_norm = special.betaln(self.p, self.q) + math.log(self._mass())
        with np.errstate(divide="ignore", invalid="ignore"):
            logd = (
                (self.p - 1.0) * np.log(eta)
                + (self.q - 1.0) * np.log1p(-eta)
                - log_norm
            )
            out = np.where(inside, np.exp(logd), 0.0)
        # eta exactly 0 or 1 sits on the support edge; the open quadrature
        # rule never asks for it, return the limit for completeness.
        out = np.where((eta == 0.0) & (self.lo == 0.0) & (self.p > 1.0), 0.0, out)
        out = np.where((eta == 1.0) & (self.q > 1.0), 0.0, out)
        return out if out.ndim else float(out)

    def survival(self, eta, include_equal=False):
        eta = np.asarray(eta, dtype=float)
        clipped = np.clip(eta, self.lo, 1.0)
        surv = (1.0 - special.betainc(self.p, self.q, clipped)) / self._mass()
        out = np.where(eta < self.lo, 1.0, np.where(eta >= 1.0, 0.0, surv))
        return out if out.ndim else float(out)

    def sample(self, n, rng):
        gen = rng.generator()
        u = gen.random(n)
        cdf_lo = float(special.betainc(self.p, self.q, self.lo)) if self.lo else 0.0
        return special.betaincinv(self.p, self.q, cdf_lo + u * (1.0 - cdf_lo))

    def truncate(self, threshold):
        _check_unit_interval("threshold", threshold, open_right=True)
        new_lo = max(self.lo, threshold)
        surviving = float(1.0 - special.betainc(self.p, self.q, new_lo))
        if surviving <= 0.0:
            raise EmptySelectionError(threshold, surviving)
        return Beta(self.p, self.q, new_lo)

    def scale(self, factor):
        _check_unit_interval("scale factor", factor, open_left=True)
        if factor == 1.0:
            return self
        return Scaled(self, factor)

    @property
    def support(self):
        return (self.lo, 1.0)


@dataclass(frozen=True)
class TruncatedLogNormal(TransmittanceDistribution):
    """Log-normal law for eta conditioned on [lo, 1].

    mu and sigma are the location and scale of ln(eta) before conditioning.
    The conditioning on eta <= 1 models the physical bound of a passive
    channel; turbulence fits supply (mu, sigma) from measured data.
    """

    mu: float
    sigma: float
    lo: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.sigma > 0.0):
            raise ValueError("need finite mu and positive sigma")
        _check_unit_interval("lower truncation point", self.lo, open_right=True)

    def _z(self, eta):
        return (np.log(eta) - self.mu) / self.sigma

    def _cdf_plain(self, eta):
        # Untruncated log-normal CDF, elementwise, eta > 0 assumed.
        return special.ndtr(self._z(eta))

    def _mass(self):
        upper = float(special.ndtr(-self.mu / self.sigma))
        lower = float(self._cdf_plain(self.lo)) if self.lo > 0.0 else 0.0
        mass = upper - lower
        if mass <= 0.0:
            raise ValueError(
                "log-normal parameters leave no probability mass in [lo, 1]"
            )
        return mass

    def moment(self, k, spec=DEFAULT_QUADRATURE):
        if k == 0:
            return 1.0
        # E[x^k; a <= x <= 1] = exp(k mu + k^2 s^2 / 2)
        #                       * [Phi(-mu/s - k s) - Phi((ln a - mu)/s - k s)]
        shift = k * self.sigma
        upper = special.ndtr(-self.mu / self.sigma - shift)
        lower = special.ndtr(self._z(self.lo) - shift) if self.lo > 0.0 else 0.0
        return float(
            math.exp(k * self.mu + 0.5 * k * k * self.sigma**2)
            * (upper - lower)
            / self._mass()
        )

    def density(self, eta):
        eta = np.asarray(eta, dtype=float)
        inside = (eta > max(self.lo, 0.0)) & (eta <= 1.0) & (eta > 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = self._z(np.where(inside, eta, 0.5))
            d = np.exp(-0.5 * z * z) / (
                np.where(inside, eta, 1.0) * self.sigma * math.sqrt(2.0 * math.pi)
            )
            out = np.where(inside, d / self._mass(), 0.0)
        return out if out.ndim else float(out)

    def survival(self, eta, include_equal=False):
        eta = np.asarray(eta, dtype=float)
        lo = max(self.lo, 0.0)
        upper = float(special.ndtr(-self.mu / self.sigma))
        safe = np.where(eta > 0.0, eta, 0.5)
        surv = (upper - special.ndtr(self._z(safe))) / self._mass()
        out = np.where(eta <= lo, 1.0, np.where(eta >= 1.0, 0.0, surv))
        return out if out.ndim else float(out)

    def sample(self, n, rng):
        gen = rng.generator()
        u = gen.random(n)
        cdf_hi = float(special.ndtr(-self.mu / self.sigma))
        cdf_lo = float(self._cdf_plain(self.lo)) if self.lo > 0.0 else 0.0
        return np.exp(self.mu + self.sigma * special.ndtri(cdf_lo + u * (cdf_hi - cdf_lo)))

    def truncate(self, threshold):
        _check_unit_interval("threshold", threshold, open_right=True)
        new_lo = max(self.lo, threshold)
        upper = float(special.ndtr(-self.mu / self.sigma))
        lower = float(self._cdf_plain(new_lo)) if new_lo > 0.0 else 0.0
        if upper - lower <= 0.0:
            raise EmptySelectionError(threshold, upper - lower)
        return TruncatedLogNormal(self.mu, self.sigma, new_lo)

    def scale(self, factor):
        _check_unit_interval("scale factor", factor, open_left=True)
        if factor == 1.0:
            return self
        return Scaled(self, factor)

    @property
    def support(self):
        return (self.lo, 1.0)


@dataclass(frozen=True)
class Scaled(TransmittanceDistribution):
    """Law of factor * eta for an inner law of eta (deterministic loss)."""

    inner: TransmittanceDistribution
    factor: float

    def __post_init__(self):
        _check_unit_interval("scale factor", self.factor, open_left=True)
        if isinstance(self.inner, Scaled):
            # Collapse nested pre-factors.
            object.__setattr__(self, "factor", self.factor * self.inner.factor)
            object.__setattr__(self, "inner", self.inner.inner)

    def moment(self, k, spec=DEFAULT_QUADRATURE):
        if k == 0:
            return 1.0
        return float(self.factor**k) * self.inner.moment(k, spec)

    def density(self, eta):
        eta = np.asarray(eta, dtype=float)
        inside = eta <= self.factor
        inner_d = self.inner.density(np.where(inside, eta, 0.0) / self.factor)
        out = np.where(inside, inner_d / self.factor, 0.0)
        return out if out.ndim else float(out)

    def survival(self, eta, include_equal=False):
        eta = np.asarray(eta, dtype=float)
        scaled = eta / self.factor
        inner_surv = self.inner.survival(np.minimum(scaled, 1.0), include_equal)
        # Beyond the scaled support there is nothing left; exactly at the
        # edge an inner atom at 1 still counts for the inclusive version.
        gone = scaled > 1.0 if include_equal else scaled >= 1.0
        out = np.where(gone, 0.0, inner_surv)
        return out if out.ndim else float(out)

    def sample(self, n, rng):
        return self.factor * self.inner.sample(n, rng)

    def truncate(self, threshold):
        _check_unit_interval("threshold", threshold, open_right=True)
        if threshold >= self.factor:
            raise EmptySelectionError(threshold, 0.0)
        return Scaled(self.inner.truncate(threshold / self.factor), self.factor)

    def scale(self, factor):
        _check_unit_interval("scale factor", factor, open_left=True)
        if factor == 1.0:
            return self
        return Scaled(self.inner, self.factor * factor)

    @property
    def atoms(self):
        inner_atoms = self.inner.atoms
        if inner_atoms is None:
            return None
        return tuple((e * self.factor, w) for e, w in inner_atoms)

    @property
    def support(self):
        lo, hi = self.inner.support
        return (lo * self.factor, hi * self.factor)


@dataclass(frozen=True)
class SelectionPolicy:
    """Threshold selection on a monitored transmittance.

    kind records whether the selection is made before the quantum signal is
    sent ("preselection") or on records after detection ("postselection");
    the induced conditional law is the same restriction either way.
    """

    threshold: float
    kind: str = "postselection"

    def __post_init__(self):
        _check_unit_interval("threshold", self.threshold, open_right=True)
        if self.kind not in ("preselection", "postselection"):
            raise ValueError(f"unknown selection kind {self.kind!r}")

    def apply(self, dist: TransmittanceDistribution) -> TransmittanceDistribution:
        return dist.truncate(self.threshold)


def sample(dist: TransmittanceDistribution, n: int, rng: RandomSource) -> np.ndarray:
    """Module-level alias for ``dist.sample(n, rng)``."""
    return dist.sample(n, rng)


# ---------------------------------------------------------------------------
# two-mode joint laws
# ---------------------------------------------------------------------------


class JointTransmittanceDistribution:
    """Joint law of the amplitude transmissions (T_a, T_b) of two arms."""

    def t_moment(self, j, k, spec=DEFAULT_QUADRATURE):
        """<T_a**j * T_b**k> with T = sqrt(eta), for real j, k >= 0."""
        raise NotImplementedError

    def average(self, f, spec=DEFAULT_QUADRATURE):
        """<f(eta_a, eta_b)> for broadcasting, possibly vector-valued f."""
        raise NotImplementedError

    def sample(self, n, rng: RandomSource):
        """n joint draws, returned as a pair of arrays (eta_a, eta_b)."""
        raise NotImplementedError

    def preselect(self, threshold) -> "JointTransmittanceDistribution":
        """Apply threshold selection to the underlying one-mode law(s)."""
        raise NotImplementedError

    @property
    def support_inf(self):
        """(inf eta_a, inf eta_b) of the joint support."""
        raise NotImplementedError


def _average_product(da, db, f, spec):
    """<f>: exact sums over atoms where possible, else tensor quadrature."""
    atoms_a, atoms_b = da.atoms, db.atoms
    if atoms_a is not None:
        pieces = [
            w * np.asarray(db.expectation(lambda y, e=e: f(e, y), spec))
            for e, w in atoms_a
        ]
        total = pieces[0]
        for p in pieces[1:]:
            total = total + p
        return total if getattr(total, "ndim", 0) else float(total)
    if atoms_b is not None:
        return _average_product_swapped(da, db, f, spec)
    (lo_a, hi_a), (lo_b, hi_b) = da.support, db.support

    def integrand(x, y):
        values = np.asarray(f(x, y))
        w = da.density(x.ravel())[:, None] * db.density(y.ravel())[None, :]
        return values * w.reshape(w.shape + (1,) * (values.ndim - 2))

    return integrate2(integrand, lo_a, hi_a, lo_b, hi_b, spec)


def _average_product_swapped(da, db, f, spec):
    pieces = [
        w * np.asarray(da.expectation(lambda x, e=e: f(x, e), spec))
        for e, w in db.atoms
    ]
    total = pieces[0]
    for p in pieces[1:]:
        total = total + p
    return total if getattr(total, "ndim", 0) else float(total)


@dataclass(frozen=True)
class Product(JointTransmittanceDistribution):
    """Statistically independent arms (e.g. counterpropagation)."""

    a: TransmittanceDistribution
    b: TransmittanceDistribution

    def t_moment(self, j, k, spec=DEFAULT_QUADRATURE):
        return self.a.moment(j / 2.0, spec) * self.b.moment(k / 2.0, spec)

    def average(self, f, spec=DEFAULT_QUADRATURE):
        return _average_product(self.a, self.b, f, spec)

    def sample(self, n, rng):
        return (
            self.a.sample(n, rng.child(0)),
            self.b.sample(n, rng.child(1)),
        )

    def preselect(self, threshold):
        return Product(self.a.truncate(threshold), self.b.truncate(threshold))

    @property
    def support_inf(self):
        return (self.a.support[0], self.b.support[0])


@dataclass(frozen=True)
class PerfectlyCorrelated(JointTransmittanceDistribution):
    """Both arms share one transmittance realization (copropagation)."""

    dist: TransmittanceDistribution

    def t_moment(self, j, k, spec=DEFAULT_QUADRATURE):
        # Depends on j + k only: T_a = T_b almost surely.
        return self.dist.moment((j + k) / 2.0, spec)

    def average(self, f, spec=DEFAULT_QUADRATURE):
        return self.dist.expectation(lambda e: f(e, e), spec)

    def sample(self, n, rng):
        e = self.dist.sample(n, rng.child(0))
        return (e, e.copy())

    def preselect(self, threshold):
        return PerfectlyCorrelated(self.dist.truncate(threshold))

    @property
    def support_inf(self):
        lo = self.dist.support[0]
        return (lo, lo)


@dataclass(frozen=True)
class AdaptiveCorrelated(JointTransmittanceDistribution):
    """Feedback equalization onto the weaker arm.

    Independent raw channels with laws ``a`` and ``b`` are monitored, and
    both quantum modes are routed so that each sees the instantaneous
    minimum amplitude transmission min(T_a, T_b); equivalently both see
    intensity transmittance min(eta_a, eta_b).
    """

    a: TransmittanceDistribution
    b: TransmittanceDistribution

    def _min_expectation(self, h, spec):
        # E[h(min(X, Y))] = E_X[h(x) P(Y > x)] + E_Y[h(y) P(X >= y)]
        # The strict/inclusive split double-counts no ties and handles
        # atomic laws exactly.
        def fa(x):
            values = np.asarray(h(x))
            w = np.asarray(self.b.survival(x, include_equal=False))
            return values * w.reshape(w.shape + (1,) * (values.ndim - 1))

        def fb(y):
            values = np.asarray(h(y))
            w = np.asarray(self.a.survival(y, include_equal=True))
            return values * w.reshape(w.shape + (1,) * (values.ndim - 1))

        term_a = np.asarray(self.a.expectation(fa, spec))
        term_b = np.asarray(self.b.expectation(fb, spec))
        total = term_a + term_b
        return total if total.ndim else float(total)

    def t_moment(self, j, k, spec=DEFAULT_QUADRATURE):
        s = (j + k) / 2.0
        if s == 0:
            return 1.0
        return self._min_expectation(lambda m: np.power(m, s), spec)

    def average(self, f, spec=DEFAULT_QUADRATURE):
        return self._min_expectation(lambda m: f(m, m), spec)

    def sample(self, n, rng):
        raw_a = self.a.sample(n, rng.child(0))
        raw_b = self.b.sample(n, rng.child(1))
        m = np.minimum(raw_a, raw_b)
        return (m, m.copy())

    def preselect(self, threshold):
        return AdaptiveCorrelated(
            self.a.truncate(threshold), self.b.truncate(threshold)
        )

    @property
    def support_inf(self):
        lo = min(self.a.support[0], self.b.support[0])
        return (lo, lo)


def adaptive_correlate(a, b) -> JointTransmittanceDistribution:
    """Joint law produced by min(T_a, T_b) feedback equalization.

    Two constant channels collapse to a perfectly correlated constant at
    the weaker value; anything else stays an :class:`AdaptiveCorrelated`.
    """
    if isinstance(a, Dirac) and isinstance(b, Dirac):
        return PerfectlyCorrelated(Dirac(min(a.value, b.value)))
    return AdaptiveCorrelated(a, b)
