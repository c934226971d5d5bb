#include "pftg/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pftg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log-potential convex part on [-1,1]; (1-r)ln(1-r) extended by 0 at r=1.
double log_beta_hat(double r) {
    auto xlogx = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
    return xlogx(1.0 - r) + xlogx(1.0 + r);
}

// beta(s) for the logarithmic graph, s in (-1,1).
double log_beta(double s) { return std::log((1.0 + s) / (1.0 - s)); }

// beta'(s) = 2/(1-s^2)
double log_beta_prime(double s) { return 2.0 / ((1.0 - s) * (1.0 + s)); }

// Quartic convex part has derivative r(r^2-1) for |r| >= 1, 0 inside.
double quartic_beta_prime(double s) { return std::abs(s) >= 1.0 ? 3.0 * s * s - 1.0 : 0.0; }

// Safeguarded Newton with bisection fallback on a bracketing interval [lo, hi]
// with f(lo) <= 0 <= f(hi). f must be nondecreasing.
template <class F, class DF>
double solve_monotone(F f, DF df, double lo, double hi, double s0, double abs_tol) {
    double s = std::clamp(s0, lo, hi);
    double fs = f(s);
    for (int it = 0; it < 200; ++it) {
        if (std::abs(fs) <= abs_tol) return s;
        if (fs > 0)
            hi = s;
        else
            lo = s;
        double d = df(s);
        double step = d > 0 ? fs / d : 0.0;
        double cand = s - step;
        if (!(cand > lo) || !(cand < hi)) cand = 0.5 * (lo + hi); // bisect
        if (cand == s) cand = 0.5 * (lo + hi);
        if (cand == s) return s; // interval exhausted at machine precision
        s = cand;
        fs = f(s);
    }
    throw ResolventDivergence("resolvent iteration did not converge");
}

} // namespace

std::string to_string(PotentialKind k) {
    switch (k) {
    case PotentialKind::Quartic: return "quartic";
    case PotentialKind::Logarithmic: return "logarithmic";
    case PotentialKind::DoubleObstacle: return "double_obstacle";
    }
    return "?";
}

void PotentialSpec::validate() const {
    if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("potential.eps must be in (0,1)");
    if (kind == PotentialKind::Logarithmic && !(kappa >= 0.0))
        throw ValidationError("potential.kappa must be >= 0");
}

double beta_hat(const PotentialSpec& spec, double r) {
    switch (spec.kind) {
    case PotentialKind::Quartic: {
        double q = r * r - 1.0;
        return q > 0 ? 0.25 * q * q : 0.0;
    }
    case PotentialKind::Logarithmic:
        return std::abs(r) <= 1.0 ? log_beta_hat(r) : kInf;
    case PotentialKind::DoubleObstacle:
        return std::abs(r) <= 1.0 ? 0.0 : kInf;
    }
    return 0;
}

double lambda_value(const PotentialSpec& spec, double r) {
    double q = 1.0 - r * r;
    double qp = q > 0 ? q : 0.0;
    switch (spec.kind) {
    case PotentialKind::Quartic: return 0.25 * qp * qp;
    case PotentialKind::Logarithmic: return spec.kappa * qp;
    case PotentialKind::DoubleObstacle: return qp * qp;
    }
    return 0;
}

double lambda_prime(const PotentialSpec& spec, double r) {
    if (std::abs(r) > 1.0) return 0.0;
    switch (spec.kind) {
    case PotentialKind::Quartic: return -r * (1.0 - r * r);
    case PotentialKind::Logarithmic: return -2.0 * spec.kappa * r;
    case PotentialKind::DoubleObstacle: return -4.0 * r * (1.0 - r * r);
    }
    return 0;
}

double lambda_second(const PotentialSpec& spec, double r) {
    if (std::abs(r) > 1.0) return 0.0;
    switch (spec.kind) {
    case PotentialKind::Quartic: return 3.0 * r * r - 1.0;
    case PotentialKind::Logarithmic: return -2.0 * spec.kappa;
    case PotentialKind::DoubleObstacle: return -4.0 + 12.0 * r * r;
    }
    return 0;
}

double w_value(const PotentialSpec& spec, double r) {
    double bh = beta_hat(spec, r);
    return std::isfinite(bh) ? bh + lambda_value(spec, r) : kInf;
}

double resolvent(const PotentialSpec& spec, double r, double eps) {
    if (!(eps > 0)) throw ValidationError("resolvent requires eps > 0");
    const double abs_tol = 1e-13 * (1.0 + std::abs(r));
    switch (spec.kind) {
    case PotentialKind::DoubleObstacle:
        return std::clamp(r, -1.0, 1.0);
    case PotentialKind::Quartic: {
        if (std::abs(r) <= 1.0) return r; // beta = 0 there
        double sign = r > 0 ? 1.0 : -1.0;
        double a = std::abs(r);
        auto f = [&](double s) { return s + eps * s * (s * s - 1.0) - a; };
        auto df = [&](double s) { return 1.0 + eps * (3.0 * s * s - 1.0); };
        return sign * solve_monotone(f, df, 1.0, a, a, abs_tol);
    }
    case PotentialKind::Logarithmic: {
        const double m = 1.0 - 1e-15;
        auto f = [&](double s) { return s + eps * log_beta(s) - r; };
        auto df = [&](double s) { return 1.0 + eps * log_beta_prime(s); };
        // Root may sit closer to +-1 than machine precision allows; saturate.
        if (f(m) <= 0) return m;
        if (f(-m) >= 0) return -m;
        return solve_monotone(f, df, -m, m, std::clamp(r, -m, m), abs_tol);
    }
    }
    return r;
}

double beta_eps(const PotentialSpec& spec, double r) {
    if (spec.kind == PotentialKind::Quartic && std::abs(r) <= 1.0) return 0.0;
    if (spec.kind == PotentialKind::DoubleObstacle)
        return (r - std::clamp(r, -1.0, 1.0)) / spec.eps;
    return (r - resolvent(spec, r, spec.eps)) / spec.eps;
}

double beta_eps_prime(const PotentialSpec& spec, double r) {
    switch (spec.kind) {
    case PotentialKind::DoubleObstacle:
        return std::abs(r) > 1.0 ? 1.0 / spec.eps : 0.0;
    case PotentialKind::Quartic: {
        if (std::abs(r) <= 1.0) return 0.0;
        double bp = quartic_beta_prime(resolvent(spec, r, spec.eps));
        return bp / (1.0 + spec.eps * bp);
    }
    case PotentialKind::Logarithmic: {
        double bp = log_beta_prime(resolvent(spec, r, spec.eps));
        return bp / (1.0 + spec.eps * bp);
    }
    }
    return 0;
}

double beta_eps_moreau(const PotentialSpec& spec, double r) {
    double s = resolvent(spec, r, spec.eps);
    double be = (r - s) / spec.eps;
    return 0.5 * spec.eps * be * be + beta_hat(spec, s);
}

double w_eps_value(const PotentialSpec& spec, double r) {
    return beta_eps_moreau(spec, r) + lambda_value(spec, r);
}

double w_prime_smooth(const PotentialSpec& spec, double r) {
    if (spec.kind != PotentialKind::Quartic)
        throw UnsupportedPotential("w_prime_smooth requires the quartic potential, got " +
                                   to_string(spec.kind));
    return r * r * r - r;
}

void ProliferationSpec::validate() const {
    if (kind == Kind::Constant && !(value >= 0))
        throw ValidationError("proliferation.value must be >= 0");
    if (kind == Kind::SqrtW && !(p0 > 0)) throw ValidationError("proliferation.p0 must be > 0");
}

double p_value(const ProliferationSpec& pspec, const PotentialSpec& potential, double r) {
    if (pspec.kind == ProliferationSpec::Kind::Constant) return pspec.value;
    if (potential.kind == PotentialKind::Logarithmic)
        throw IncompatiblePotential("sqrt_w proliferation is not defined for the logarithmic potential");
    if (std::abs(r) > 1.0) return 0.0;
    return 2.0 * pspec.p0 * std::sqrt(w_value(potential, r));
}

double p_lipschitz_constant(const ProliferationSpec& pspec, const PotentialSpec& potential) {
    if (pspec.kind == ProliferationSpec::Kind::Constant) return 0.0;
    // On [-1,1]: quartic p = p0 (1-r^2), obstacle p = 2 p0 (1-r^2).
    switch (potential.kind) {
    case PotentialKind::Quartic: return 2.0 * pspec.p0;
    case PotentialKind::DoubleObstacle: return 4.0 * pspec.p0;
    default:
        throw IncompatiblePotential("sqrt_w proliferation is not defined for the logarithmic potential");
    }
}

double p_sup_bound(const ProliferationSpec& pspec, const PotentialSpec& potential) {
    if (pspec.kind == ProliferationSpec::Kind::Constant) return pspec.value;
    double wmax = 0;
    for (int i = 0; i <= 1000; ++i) {
        double r = -1.0 + 2.0 * i / 1000.0;
        wmax = std::max(wmax, w_value(potential, r));
    }
    return 2.0 * pspec.p0 * std::sqrt(wmax);
}

} // namespace pftg
