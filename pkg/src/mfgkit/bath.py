"""Spectral densities and bath-derived scalar functions.

Covers the correlation function G(t), its half-Fourier coefficients
Gamma_m(t), the principal-value integral D_beta, the polaron factor kappa,
and reorganization energies. Everything is in natural units (hbar = k_B = 1).

Convention: G(t) and Gamma_m exclude the dimensionless coupling lambda;
the master-equation generators multiply their dissipators by lambda^2
explicitly. Eigenoperators satisfy [H_S, X_m] = +omega_m X_m, and
Gamma_m(t) = int_0^t dr e^(-i omega_m r) G(r), so for omega_m > 0 the rate
2 Re Gamma_m is an absorption rate proportional to the Bose factor n(omega_m).
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.interpolate import CubicSpline

ASYMPTOTIC = "asymptotic"

_QUAD_OPTS = dict(epsabs=1e-10, epsrel=1e-8, limit=400)


class BathIntegrationError(RuntimeError):
    """A bath quadrature failed to produce a finite value."""


class BathDivergenceError(ValueError):
    """The requested bath integral diverges for this spectral density."""


def coth(x):
    """Stable coth for positive arguments (series below 1e-4)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 / np.where(small, x, 1.0) + x / 3.0,
                   1.0 / np.tanh(safe))
    return out if out.ndim else float(out)


def _x_coth_x(x):
    """x*coth(x), smooth through x = 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 + x * x / 3.0, safe / np.tanh(safe))
    return out if out.ndim else float(out)


def bose(omega, beta):
    """Bose occupation 1/(e^(beta*omega) - 1); omega > 0."""
    return 1.0 / np.expm1(beta * np.asarray(omega, dtype=float))


# ---------------------------------------------------------------------------
# spectral density variants
# ---------------------------------------------------------------------------


class SpectralDensity:
    """Base class; subclasses implement j(), j_over_omega(), scale()."""

    discrete = False

    def j(self, omega):
        raise NotImplementedError

    def j_over_omega(self, omega):
        """J(omega)/omega with its analytic omega -> 0 limit."""
        raise NotImplementedError

    def scale(self) -> float:
        """Characteristic cutoff frequency used to place quadrature nodes."""
        raise NotImplementedError

    def low_freq_exponent(self) -> float:
        """s in J ~ omega^s as omega -> 0."""
        raise NotImplementedError


@dataclass(frozen=True)
class OhmicExp(SpectralDensity):
    """J(omega) = gamma * omega * exp(-omega/omega_c); gamma dimensionless."""

    gamma: float
    omega_c: float

    def __post_init__(self):
        if self.gamma < 0 or self.omega_c <= 0:
            raise ValueError("need gamma >= 0 and omega_c > 0")

    def j(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self.gamma * omega * np.exp(-omega / self.omega_c)

    def j_over_omega(self, omega):
        return self.gamma * np.exp(-np.asarray(omega, dtype=float) / self.omega_c)

    def scale(self):
        return self.omega_c

    def low_freq_exponent(self):
        return 1.0


@dataclass(frozen=True)
class SuperOhmicCubic(SpectralDensity):
    """J(omega) = (gamma/2) * (omega^3/omega_c^3) * exp(-omega/omega_c)."""

    gamma: float
    omega_c: float

    def __post_init__(self):
        if self.gamma < 0 or self.omega_c <= 0:
            raise ValueError("need gamma >= 0 and omega_c > 0")

    def j(self, omega):
        omega = np.asarray(omega, dtype=float)
        u = omega / self.omega_c
        return 0.5 * self.gamma * u**3 * np.exp(-u)

    def j_over_omega(self, omega):
        omega = np.asarray(omega, dtype=float)
        u = omega / self.omega_c
        return 0.5 * self.gamma * u * u * np.exp(-u) / self.omega_c

    def scale(self):
        return self.omega_c

    def low_freq_exponent(self):
        return 3.0


@dataclass(frozen=True)
class DrudeLorentz(SpectralDensity):
    """J(omega) = (2 gamma omega_D / pi) * omega omega_D / (omega^2 + omega_D^2)."""

    gamma: float
    omega_d: float

    def __post_init__(self):
        if self.gamma < 0 or self.omega_d <= 0:
            raise ValueError("need gamma >= 0 and omega_d > 0")

    def j(self, omega):
        omega = np.asarray(omega, dtype=float)
        return (2 * self.gamma * self.omega_d / np.pi) * omega * self.omega_d / (
            omega**2 + self.omega_d**2
        )

    def j_over_omega(self, omega):
        omega = np.asarray(omega, dtype=float)
        return (2 * self.gamma * self.omega_d**2 / np.pi) / (omega**2 + self.omega_d**2)

    def scale(self):
        return self.omega_d

    def low_freq_exponent(self):
        return 1.0


@dataclass(frozen=True)
class Tabulated(SpectralDensity):
    """Cubic-spline interpolation of sampled (omega, J) pairs.

    Below the first grid point J is linear through the origin (Ohmic-class
    small-omega behaviour); above the last grid point J is zero. Grids whose
    tail has not decayed are rejected by the semi-infinite integrals.
    """

    omegas: tuple
    values: tuple

    def __post_init__(self):
        w = np.asarray(self.omegas, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if w.ndim != 1 or w.shape != v.shape or len(w) < 4:
            raise ValueError("need matching 1-d grids with at least 4 points")
        if (np.diff(w) <= 0).any() or w[0] < 0:
            raise ValueError("omega grid must be ascending and nonnegative")
        if (v < -1e-12 * max(1.0, v.max())).any():
            raise ValueError("J(omega) must be nonnegative")
        object.__setattr__(self, "omegas", tuple(w))
        object.__setattr__(self, "values", tuple(np.clip(v, 0.0, None)))

    def _spline(self):
        return CubicSpline(np.asarray(self.omegas), np.asarray(self.values))

    def j(self, omega):
        w = np.asarray(self.omegas)
        v = np.asarray(self.values)
        omega = np.asarray(omega, dtype=float)
        out = np.zeros_like(omega, dtype=float)
        inside = (omega >= w[0]) & (omega <= w[-1])
        out[inside] = np.clip(self._spline()(omega[inside]), 0.0, None)
        below = omega < w[0]
        if below.any() and w[0] > 0:
            out[below] = v[0] * omega[below] / w[0]
        return out if out.ndim else float(out)

    def j_over_omega(self, omega):
        omega = np.asarray(omega, dtype=float)
        w0 = self.omegas[0]
        slope0 = self.values[0] / w0 if w0 > 0 else (
            np.asarray(self.values)[1] / np.asarray(self.omegas)[1]
        )
        tiny = omega < max(w0, 1e-12)
        safe = np.where(tiny, 1.0, omega)
        out = np.where(tiny, slope0, self.j(safe) / safe)
        return out if out.ndim else float(out)

    def scale(self):
        w = np.asarray(self.omegas)
        v = np.asarray(self.values)
        return float(w[np.argmax(v)]) or float(w[-1] / 4)

    def low_freq_exponent(self):
        w = np.asarray(self.omegas)[:4]
        v = np.asarray(self.values)[:4]
        keep = (w > 0) & (v > 0)
        if keep.sum() < 2:
            return 1.0
        p = np.polyfit(np.log(w[keep]), np.log(v[keep]), 1)
        return float(p[0])

    def check_tail(self):
        v = np.asarray(self.values)
        if v[-1] > 1e-3 * v.max():
            raise BathDivergenceError(
                "tabulated spectral density tail has not decayed; "
                "semi-infinite bath integrals are unreliable"
            )


@dataclass(frozen=True)
class DiscreteModes(SpectralDensity):
    """Delta-comb spectral density sum_k |g_k|^2 delta(omega - omega_k).

    All bath integrals become sums over the modes; pointwise evaluation of
    J(omega) is undefined and rejected.
    """

    modes: tuple  # of (omega_k, |g_k|^2)

    discrete = True

    def __post_init__(self):
        modes = tuple((float(w), float(g2)) for w, g2 in self.modes)
        if not modes or any(w <= 0 or g2 < 0 for w, g2 in modes):
            raise ValueError("modes need omega_k > 0 and |g_k|^2 >= 0")
        object.__setattr__(self, "modes", modes)

    def arrays(self):
        m = np.asarray(self.modes, dtype=float)
        return m[:, 0], m[:, 1]

    def j(self, omega):
        raise ValueError("pointwise J(omega) is undefined for a discrete mode set")

    def j_over_omega(self, omega):
        raise ValueError("pointwise J(omega) is undefined for a discrete mode set")

    def scale(self):
        w, g2 = self.arrays()
        return float(np.average(w, weights=g2 + 1e-300))

    def low_freq_exponent(self):
        return 1.0


@dataclass(frozen=True)
class BathParams:
    J: SpectralDensity
    beta: float
    lam: float

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta <= 0:
            raise ValueError(f"beta must be positive and finite, got {self.beta}")
        if self.lam < 0:
            raise ValueError(f"lambda must be nonnegative, got {self.lam}")


def load_tabulated(path, si_reference_energy=None) -> Tabulated:
    """Load a two-column CSV of (omega, J(omega)).

    A header comment line `# units: si|natural` declares the unit system.
    SI rows are rad/s and are converted with the time unit hbar/E_ref.
    """
    units = "natural"
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip().lower()
                if body.startswith("units:"):
                    units = body.split(":", 1)[1].strip()
                continue
            parts = line.replace(",", " ").split()
            rows.append((float(parts[0]), float(parts[1])))
    if units not in ("si", "natural"):
        raise ValueError(f"unknown unit declaration {units!r}")
    w = np.array([r[0] for r in rows])
    v = np.array([r[1] for r in rows])
    if units == "si":
        if si_reference_energy is None:
            raise ValueError("SI tabulated data needs a reference energy in joules")
        hbar = 1.054571817e-34
        t_unit = hbar / si_reference_energy
        w = w * t_unit
        v = v * t_unit
    return Tabulated(tuple(w), tuple(v))


# ---------------------------------------------------------------------------
# quadrature helpers
# ---------------------------------------------------------------------------


def _quad(f, a, b, points=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        if points is not None and np.isfinite(b):
            points = [p for p in points if a < p < b]
            val, _ = quad(f, a, b, points=points or None, **_QUAD_OPTS)
        else:
            val, _ = quad(f, a, b, **_QUAD_OPTS)
    if not np.isfinite(val):
        raise BathIntegrationError(f"quadrature over [{a}, {b}] returned {val}")
    return val


def semi_infinite_quad(f, scale, points=()):
    """Integrate f over [0, inf) with panel splits at multiples of scale."""
    splits = sorted({s for s in (*points, scale, 4 * scale, 16 * scale) if s > 0})
    total = 0.0
    lo = 0.0
    for s in splits:
        total += _quad(f, lo, s)
        lo = s
    total += _quad(f, lo, np.inf)
    return total


def principal_value(F, a, scale):
    """PV int_0^inf F(omega)/(omega - a) d omega for a pole at a > 0.

    Symmetric-window scheme: inside [a - delta, a + delta] the first-order
    pole integrates to zero, leaving the regular difference quotient.
    """
    if a <= 0:
        raise ValueError("pole must be at positive frequency")
    delta = min(a, scale) / 10.0
    fa = F(a)
    dfa = (F(a + 1e-6 * delta) - F(a - 1e-6 * delta)) / (2e-6 * delta)

    def regular(w):
        if abs(w - a) < 1e-8 * delta:
            return dfa
        return (F(w) - fa) / (w - a)

    window = _quad(regular, a - delta, a + delta)
    left = _quad(lambda w: F(w) / (w - a), 0.0, a - delta) if a - delta > 0 else 0.0
    right = _quad(lambda w: F(w) / (w - a), a + delta, 4 * scale + 2 * a) + _quad(
        lambda w: F(w) / (w - a), 4 * scale + 2 * a, np.inf
    )
    return left + window + right


# ---------------------------------------------------------------------------
# bath functions
# ---------------------------------------------------------------------------


def eval_J(J: SpectralDensity, omega):
    if np.any(np.asarray(omega) < 0):
        raise ValueError("spectral densities are defined for omega >= 0")
    return J.j(omega)


def d_beta(J: SpectralDensity, beta: float, omega_m: float) -> float:
    """The principal-value integral D_beta(omega_m).

    D_beta = PV int_0^inf J(w) [ (omega_m coth(beta w/2) + w)/(w^2 - omega_m^2)
                                 - 1/w ] dw; identically zero at omega_m = 0.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if omega_m == 0.0:
        return 0.0
    if J.discrete:
        w, g2 = J.arrays()
        if np.any(np.abs(w - abs(omega_m)) < 1e-12):
            raise BathIntegrationError("omega_m collides with a discrete bath mode")
        term = (omega_m * coth(beta * w / 2) + w) / (w**2 - omega_m**2) - 1.0 / w
        return float(np.sum(g2 * term))

    a = abs(omega_m)
    scale = J.scale()

    # Combine the 1/w counter term into one fraction:
    # D = PV int h(w)/(w^2 - a^2) dw with h = (J/w) omega_m (w coth(bw/2) + omega_m).
    # PV int_0^inf dw/(w^2 - a^2) = 0, so subtracting h(a) removes the pole
    # with no correction term and stays stable as omega_m -> 0.
    def h(w):
        wc = (2.0 / beta) * _x_coth_x(beta * w / 2.0)  # = w * coth(beta w / 2)
        return float(J.j_over_omega(w)) * omega_m * (wc + omega_m)

    ha = h(a)
    guard = 1e-8 * max(a, scale)
    dha = (h(a + guard) - h(max(a - guard, 0.0))) / (guard + min(a, guard))

    def integrand(w):
        if abs(w - a) < guard:
            return dha / (w + a)
        return (h(w) - ha) / ((w - a) * (w + a))

    return semi_infinite_quad(integrand, scale, points=(a, 2 * a))


def d_beta_deriv(J: SpectralDensity, beta: float, omega_m: float) -> float:
    """dD_beta/d omega_m by central differences with Richardson extrapolation."""
    h = 1e-5 * max(1.0, abs(omega_m))

    def central(step):
        return (d_beta(J, beta, omega_m + step) - d_beta(J, beta, omega_m - step)) / (
            2.0 * step
        )

    d1 = central(h)
    d2 = central(h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def _bose_ratio(x):
    """x / (1 - e^(-x)), smooth through x = 0."""
    if abs(x) < 1e-6:
        return 1.0 + x / 2.0 + x * x / 12.0
    return x / -np.expm1(-x)


def _osc_quad(envelope, t, scale, kind):
    """int_0^inf envelope(w) * cos/sin(w t) dw for decaying envelopes."""
    if t == 0.0:
        if kind == "sin":
            return 0.0
        return semi_infinite_quad(envelope, scale)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(envelope, 0, np.inf, weight=kind, wvar=t,
                      limit=400, epsabs=1e-11)
    if not np.isfinite(val):
        raise BathIntegrationError("oscillatory bath quadrature failed")
    return val


def corr_fn_complex_time(J: SpectralDensity, beta: float, tc: complex) -> complex:
    """G at complex time, valid on the KMS strip -beta <= Im(tc) <= 0.

    Evaluates int J(w) [(n+1) e^(-i w tc) + n e^(i w tc)] dw with every
    exponential factor kept individually bounded on the strip.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    tc = complex(tc)
    tr, ti = tc.real, tc.imag
    if not -beta - 1e-12 <= ti <= 1e-12:
        raise ValueError("Im(t) must lie in [-beta, 0] (KMS strip)")
    ti = min(0.0, max(-beta, ti))
    if J.discrete:
        w, g2 = J.arrays()
        n = bose(w, beta)
        return complex(np.sum(
            g2 * ((n + 1) * np.exp(-1j * w * tc) + n * np.exp(1j * w * tc))
        ))
    scale = J.scale()

    def a_env(w):  # J (n+1) e^{w ti}
        return float(J.j_over_omega(w)) / beta * _bose_ratio(beta * w) * np.exp(w * ti)

    def b_env(w):  # J n e^{-w ti}
        return float(J.j_over_omega(w)) / beta * _bose_ratio(beta * w) * np.exp(
            -w * (beta + ti)
        )

    re = _osc_quad(lambda w: a_env(w) + b_env(w), tr, scale, "cos")
    im = _osc_quad(lambda w: b_env(w) - a_env(w), tr, scale, "sin")
    return complex(re, im)


def corr_fn(J: SpectralDensity, beta: float, t: float) -> complex:
    """Bath correlation function G(t) (coupling lambda excluded).

    G(t) = int_0^inf J(w) [coth(beta w / 2) cos(w t) - i sin(w t)] dw,
    with G(-t) = conj(G(t)).
    """
    if t < 0:
        return np.conj(corr_fn(J, beta, -t))
    return corr_fn_complex_time(J, beta, float(t))


def corr_fn_kms_shifted(J: SpectralDensity, beta: float, t: float) -> complex:
    """G(-t - i beta): analytic continuation across the KMS strip.

    The KMS condition asserts equality with corr_fn(J, beta, t).
    """
    return corr_fn_complex_time(J, beta, complex(-t, -beta))


def _phase_integral(x, t):
    """int_0^t e^{i x r} dr = (e^{i x t} - 1)/(i x), stable at x = 0."""
    arg = x * t / 2.0
    return t * np.exp(1j * arg) * np.sinc(arg / np.pi)


def gamma_m(J: SpectralDensity, beta: float, omega_m: float, t) -> complex:
    """Half-Fourier coefficient Gamma_m(t) = int_0^t e^{-i omega_m r} G(r) dr.

    Pass t = ASYMPTOTIC for Gamma_m(infinity): the real part is the closed
    form (pi/2) J(|w_m|) [coth(beta |w_m|/2) - sign(w_m)] (absorption for
    raising eigenoperators), the imaginary part a principal-value integral.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if t == ASYMPTOTIC:
        return _gamma_asymptotic(J, beta, omega_m)
    t = float(t)
    if t < 0:
        raise ValueError("need t >= 0 or ASYMPTOTIC")
    if t == 0.0:
        return 0.0 + 0.0j

    if J.discrete:
        w, g2 = J.arrays()
        n = bose(w, beta)
        val = np.sum(
            g2 * ((n + 1) * _phase_integral(-(w + omega_m), t)
                  + n * _phase_integral(w - omega_m, t))
        )
        return complex(val)

    # time-domain quadrature: G(r) decays on the bath correlation time, so
    # the adaptive rule concentrates points near r = 0 even for large t
    def integrand(r, part):
        val = np.exp(-1j * omega_m * r) * corr_fn(J, beta, r)
        return val.real if part == "re" else val.imag

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        re, _ = quad(lambda r: integrand(r, "re"), 0.0, t,
                     limit=200, epsabs=1e-10, epsrel=1e-9)
        im, _ = quad(lambda r: integrand(r, "im"), 0.0, t,
                     limit=200, epsabs=1e-10, epsrel=1e-9)
    return complex(re, im)


def _gamma_asymptotic(J: SpectralDensity, beta: float, omega_m: float) -> complex:
    if J.discrete:
        raise BathDivergenceError(
            "Gamma_m(infinity) does not exist for a discrete mode set "
            "(no continuum decay)"
        )
    scale = J.scale()
    a = abs(omega_m)

    if omega_m == 0.0:
        re = (np.pi / beta) * float(J.j_over_omega(0.0))
        im = -semi_infinite_quad(lambda w: float(J.j_over_omega(w)), scale)
        return complex(re, im)

    re = (np.pi / 2.0) * float(J.j(a)) * (coth(beta * a / 2.0) - np.sign(omega_m))

    def j_times_n(w):
        # J(w) n(w), finite at 0
        return float(J.j_over_omega(w)) * w * 0.5 * (coth(beta * w / 2.0) - 1.0)

    def j_times_n1(w):
        return float(J.j_over_omega(w)) * w * 0.5 * (coth(beta * w / 2.0) + 1.0)

    # Im Gamma = PV int J [ n/(w - w_m) - (n+1)/(w + w_m) ] dw
    if omega_m > 0:
        im = principal_value(j_times_n, a, scale)
        im -= semi_infinite_quad(lambda w: j_times_n1(w) / (w + a), scale, points=(a,))
    else:
        im = semi_infinite_quad(lambda w: j_times_n(w) / (w + a), scale, points=(a,))
        im -= principal_value(j_times_n1, a, scale)
    return complex(re, im)


def polaron_kappa(J: SpectralDensity, beta: float, lam: float) -> float:
    """kappa = exp[-2 lambda^2 int_0^inf J(w)/w^2 coth(beta w/2) dw].

    Only converges for spectral densities steeper than w^2 at the origin;
    Ohmic-class input raises BathDivergenceError.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if J.discrete:
        w, g2 = J.arrays()
        integral = float(np.sum(g2 / w**2 * coth(beta * w / 2)))
        return float(np.exp(-2 * lam**2 * integral))
    if isinstance(J, Tabulated):
        J.check_tail()
    if J.low_freq_exponent() <= 2.0 + 1e-9:
        raise BathDivergenceError(
            "polaron kappa integral diverges: J(omega) must vanish faster "
            "than omega^2 at low frequency"
        )
    if lam == 0.0:
        return 1.0
    scale = J.scale()

    def integrand(w):
        # J/w^2 * coth = (J/w^3) * w coth, finite at 0 for s > 2 (here s = 3)
        jow = float(J.j_over_omega(w))
        return jow / max(w, 1e-300)**2 * (2.0 / beta) * _x_coth_x(beta * w / 2.0)

    integral = semi_infinite_quad(integrand, scale)
    return float(np.exp(-2 * lam**2 * integral))


def reorganization_energy(J: SpectralDensity, lam: float) -> float:
    """ell = lambda^2 int_0^inf J(omega)/omega d omega."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if J.discrete:
        w, g2 = J.arrays()
        return float(lam**2 * np.sum(g2 / w))
    if isinstance(J, Tabulated):
        J.check_tail()
    return float(lam**2 * semi_infinite_quad(lambda w: float(J.j_over_omega(w)), J.scale()))
