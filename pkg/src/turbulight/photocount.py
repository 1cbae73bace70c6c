"""Photocounting with noisy on/off-style click detectors and Mandel statistics.

The detector model is a quantum efficiency ``efficiency`` (eta_c) plus a
mean number of noise counts ``noise_counts`` (nu, dark counts and stray
light).  Its counting POVM has the coherent-state expectation

    pi_n(|alpha|^2) = (eta_c |alpha|^2 + nu)^n / n! * exp(-(eta_c |alpha|^2 + nu)),

i.e. Poissonian counting at the attenuated intensity shifted by the noise
floor.  The detector efficiency is folded into the channel transmittance
throughout this module (eta_c and eta only ever appear as the product
eta_c * eta); the sub-Poissonian threshold below is unaffected because the
fold cancels in the ratio.

Count distributions through a fluctuating channel are conditional
distributions averaged over the transmittance law: for a Fock-diagonal
input the conditional law is (binomial thinning) convolved with Poisson
noise, for a coherent input it is Poisson at the attenuated intensity.
The averaging runs over one shared adaptive quadrature with the whole
probability vector as integrand, and collapses to exact sums for atomic
laws.

The Mandel parameter Q = <(Delta n)^2>/<n> - 1 transfers through the
channel in closed form:

    Q_out = (<h^2> n_in Q_in + <(Delta h)^2> n_in^2) / (<h> n_in + nu),
    h = eta_c * eta,

so channel fluctuations add a positive term that destroys sub-Poissonian
light beyond the input strength n* = -<h^2> Q_in / <(Delta h)^2>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .numerics import QuadratureSpec
from .pdt import TransmittanceDistribution

__all__ = [
    "DetectorModel",
    "PhotonNumberDist",
    "povm_qsymbol",
    "count_distribution_fock",
    "count_distribution_coherent",
    "mandel_q",
    "mandel_out",
    "sub_poisson_bound",
]

# Count distributions feed quadratic statistics (means, variances), so they
# are computed tighter than the package-wide default tolerance.
_COUNT_QUADRATURE = QuadratureSpec(rel_tol=1e-11, abs_tol=5e-14, max_depth=40)
_TAIL = 1e-12


@dataclass(frozen=True)
class DetectorModel:
    """Click detector: quantum efficiency and mean noise counts."""

    efficiency: float = 1.0
    noise_counts: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.efficiency <= 1.0):
            raise ValueError("detector efficiency must lie in (0, 1]")
        if not (np.isfinite(self.noise_counts) and self.noise_counts >= 0.0):
            raise ValueError("mean noise counts must be nonnegative")


class PhotonNumberDist:
    """Probabilities over counted photon numbers 0..N (tail truncated)."""

    def __init__(self, probabilities):
        p = np.asarray(probabilities, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("need a 1D, nonempty probability vector")
        if np.any(p < -1e-12):
            raise ValueError("negative probability entry")
        total = float(p.sum())
        if not (1.0 - 1e-9 <= total <= 1.0 + 1e-9):
            raise ValueError(f"probabilities sum to {total!r}, not 1 within 1e-9")
        self.probabilities = np.clip(p, 0.0, None)
        self.probabilities.flags.writeable = False

    def __len__(self):
        return self.probabilities.size

    def mean(self):
        n = np.arange(self.probabilities.size)
        return float(np.sum(n * self.probabilities))

    def second_moment(self):
        n = np.arange(self.probabilities.size)
        return float(np.sum(n * n * self.probabilities))

    def variance(self):
        m = self.mean()
        return self.second_moment() - m * m

    def mandel_q(self):
        m = self.mean()
        if m <= 0.0:
            raise ValueError("Mandel Q is undefined at zero mean count")
        return self.variance() / m - 1.0


def povm_qsymbol(n, intensity, det: DetectorModel):
    """Coherent-state expectation of the n-click POVM element at |alpha|^2."""
    if n < 0 or n != int(n):
        raise ValueError("count must be a nonnegative integer")
    if intensity < 0.0:
        raise ValueError("intensity must be nonnegative")
    lam = det.efficiency * intensity + det.noise_counts
    if lam == 0.0:
        return 1.0 if n == 0 else 0.0
    return float(math.exp(n * math.log(lam) - lam - math.lgamma(n + 1)))


def _poisson_vector(ns, mean):
    """Poisson pmf over the integer grid ns (mean 0 handled exactly)."""
    if mean == 0.0:
        out = np.zeros(len(ns))
        out[0] = 1.0
        return out
    return np.exp(ns * math.log(mean) - mean - special.gammaln(ns + 1.0))


def _noise_cutoff(mean, tail):
    """Smallest N with P(Poisson(mean) > N) <= tail."""
    if mean == 0.0:
        return 0
    n = int(mean)
    # P(X <= n) = Q(n + 1, mean) (regularized upper incomplete gamma).
    while special.gammaincc(n + 1.0, mean) < 1.0 - tail:
        n += 1
    return n


def count_distribution_fock(input_probs, dist: TransmittanceDistribution,
                            det: DetectorModel, spec=_COUNT_QUADRATURE) -> PhotonNumberDist:
    """Counted-photon distribution for a Fock-diagonal input.

    ``input_probs[m]`` is the input m-photon probability.  Conditioned on a
    transmittance eta, each photon survives with probability
    eta_c * eta (binomial thinning) and Poisson noise with mean nu adds on
    top; the conditional vector is then averaged over the transmittance
    law.  Exact (no quadrature) for atomic laws.
    """
    p_in = np.asarray(input_probs, dtype=float)
    if p_in.ndim != 1 or p_in.size == 0:
        raise ValueError("need a 1D, nonempty input photon-number vector")
    if np.any(p_in < 0.0) or not math.isclose(float(p_in.sum()), 1.0, abs_tol=1e-9):
        raise ValueError("input probabilities must be nonnegative and sum to 1")
    m_max = p_in.size - 1
    n_max = m_max + _noise_cutoff(det.noise_counts, _TAIL)
    ns = np.arange(n_max + 1)
    ms = np.arange(m_max + 1)
    noise = _poisson_vector(ns, det.noise_counts)
    log_binom = (
        special.gammaln(ms[:, None] + 1.0)
        - special.gammaln(ns[None, : m_max + 1] + 1.0)
        - special.gammaln(ms[:, None] - ns[None, : m_max + 1] + 1.0)
    )

    def conditional(eta_arr):
        eta_arr = np.atleast_1d(np.asarray(eta_arr, dtype=float))
        out = np.empty((eta_arr.size, n_max + 1))
        k = ns[None, : m_max + 1]
        for i, s in enumerate(det.efficiency * eta_arr):
            if s == 0.0:
                survived = np.zeros(m_max + 1)
                survived[0] = 1.0
            elif s == 1.0:
                survived = p_in
            else:
                log_thin = log_binom + k * math.log(s) + (ms[:, None] - k) * math.log1p(-s)
                thin = np.where(k <= ms[:, None], np.exp(log_thin), 0.0)
                survived = p_in @ thin
            out[i] = np.convolve(survived, noise)[: n_max + 1]
        return out

    averaged = dist.expectation(conditional, spec)
    averaged = np.asarray(averaged).reshape(-1)
    return PhotonNumberDist(averaged)


def count_distribution_coherent(alpha, dist: TransmittanceDistribution,
                                det: DetectorModel, spec=_COUNT_QUADRATURE) -> PhotonNumberDist:
    """Counted-photon distribution for a coherent input |alpha>.

    Conditioned on eta the counts are Poissonian with mean
    eta_c * eta * |alpha|^2 + nu; the vector is averaged over the
    transmittance law.
    """
    intensity = abs(complex(alpha)) ** 2
    sup = dist.support[1]
    mean_max = det.efficiency * sup * intensity + det.noise_counts
    n_max = _noise_cutoff(mean_max, _TAIL)
    ns = np.arange(n_max + 1)
    log_fact = special.gammaln(ns + 1.0)

    def conditional(eta_arr):
        eta_arr = np.atleast_1d(np.asarray(eta_arr, dtype=float))
        lam = det.efficiency * eta_arr * intensity + det.noise_counts  # (E,)
        out = np.empty((eta_arr.size, n_max + 1))
        positive = lam > 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            log_lam = np.where(positive, np.log(np.where(positive, lam, 1.0)), 0.0)
        out = np.where(
            positive[:, None],
            np.exp(ns[None, :] * log_lam[:, None] - lam[:, None] - log_fact[None, :]),
            np.concatenate(([1.0], np.zeros(n_max)))[None, :],
        )
        return out

    averaged = dist.expectation(conditional, spec)
    averaged = np.asarray(averaged).reshape(-1)
    return PhotonNumberDist(averaged)


def mandel_q(counts: PhotonNumberDist):
    """Mandel parameter of a counted distribution; negative is sub-Poissonian."""
    return counts.mandel_q()


def mandel_out(q_in, n_in, dist: TransmittanceDistribution, det: DetectorModel,
               spec=None):
    """Mandel parameter after the channel, in closed form.

    q_in and n_in are the input Mandel parameter and mean photon number.
    Valid for any input with finite second moments; exactly matches the
    count-distribution route for Fock-diagonal and coherent inputs.
    """
    if n_in < 0.0:
        raise ValueError("mean photon number must be nonnegative")
    h1 = det.efficiency * dist.moment(1.0)
    h2 = det.efficiency**2 * dist.moment(2.0)
    var_h = h2 - h1 * h1
    denom = h1 * n_in + det.noise_counts
    if denom <= 0.0:
        raise ValueError("output mean count vanishes, Mandel Q undefined")
    return (h2 * n_in * q_in + var_h * n_in * n_in) / denom


def sub_poisson_bound(q_in, dist: TransmittanceDistribution):
    """Largest input mean photon number with sub-Poissonian output.

    n* = -<eta^2> q_in / <(Delta eta)^2>; the detector folds out of the
    ratio, so only the channel law enters.  Constant channels never
    destroy sub-Poissonian statistics: the bound is infinite.
    """
    if q_in >= 0.0:
        raise ValueError("input must be sub-Poissonian (q_in < 0)")
    m1 = dist.moment(1.0)
    m2 = dist.moment(2.0)
    var = m2 - m1 * m1
    if var <= 0.0:
        return math.inf
    return -m2 * q_in / var
