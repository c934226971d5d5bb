#ifndef PFTG_POTENTIALS_HPP
#define PFTG_POTENTIALS_HPP

#include <string>

#include "pftg/errors.hpp"

namespace pftg {

/// Built-in double-well potential families W = beta_hat + lambda, where
/// beta_hat is the convex (possibly singular) part and lambda the smooth part.
enum class PotentialKind {
    Quartic,        ///< W(r) = (1/4)(r^2-1)^2, finite everywhere
    Logarithmic,    ///< W(r) = (1-r)ln(1-r) + (1+r)ln(1+r) + kappa(1-r^2)+ on [-1,1]
    DoubleObstacle, ///< W(r) = I_[-1,1](r) + ((1-r^2)+)^2
};

struct PotentialSpec {
    PotentialKind kind = PotentialKind::Quartic;
    double eps = 0.01; ///< regularization parameter, in (0,1)
    double kappa = 0;  ///< Logarithmic only, >= 0

    void validate() const;
};

std::string to_string(PotentialKind k);

/// Convex part beta_hat(r); +infinity outside its domain.
double beta_hat(const PotentialSpec& spec, double r);

/// Smooth part lambda(r) (finite and nonnegative everywhere).
double lambda_value(const PotentialSpec& spec, double r);

/// lambda'(r); for Logarithmic the one-sided interior formula is used at +-1.
double lambda_prime(const PotentialSpec& spec, double r);

/// lambda''(r) with the same one-sided convention; Newton linearization term.
double lambda_second(const PotentialSpec& spec, double r);

/// W(r) = beta_hat(r) + lambda(r); +infinity allowed.
double w_value(const PotentialSpec& spec, double r);

/// Resolvent s = (I + eps*beta)^{-1}(r): solves s + eps*b = r with b in beta(s).
/// DoubleObstacle uses the closed-form clamp onto [-1,1].
double resolvent(const PotentialSpec& spec, double r, double eps);

/// Yosida regularization beta_eps(r) = (r - resolvent(r)) / eps.
/// Monotone nondecreasing, Lipschitz with constant 1/eps, zero wherever 0 in beta(r).
double beta_eps(const PotentialSpec& spec, double r);

/// d/dr beta_eps(r), in [0, 1/eps]; value at kinks is the interior one-sided limit.
double beta_eps_prime(const PotentialSpec& spec, double r);

/// Moreau envelope B_eps(r) = min_s ( (s-r)^2/(2 eps) + beta_hat(s) ),
/// evaluated through the resolvent: B_eps(r) = (eps/2) beta_eps(r)^2 + beta_hat(J_eps r).
double beta_eps_moreau(const PotentialSpec& spec, double r);

/// Regularized potential W_eps(r) = B_eps(r) + lambda(r); finite for all r.
double w_eps_value(const PotentialSpec& spec, double r);

/// W'(r) for the Quartic potential (r^3 - r); the other kinds are not C^1 on R.
double w_prime_smooth(const PotentialSpec& spec, double r);

/// Proliferation function p.
struct ProliferationSpec {
    enum class Kind {
        Constant, ///< p(r) = value >= 0
        SqrtW,    ///< p(r) = 2 p0 sqrt(W(r)) for |r| <= 1, 0 otherwise
    };
    Kind kind = Kind::Constant;
    double value = 0; ///< Constant
    double p0 = 1;    ///< SqrtW, > 0

    void validate() const;
};

/// p(r). SqrtW requires a potential that is finite with quadratic wells on [-1,1]
/// (Quartic or DoubleObstacle); Logarithmic throws IncompatiblePotential.
double p_value(const ProliferationSpec& pspec, const PotentialSpec& potential, double r);

/// A Lipschitz constant valid for p (exact for the built-ins).
double p_lipschitz_constant(const ProliferationSpec& pspec, const PotentialSpec& potential);

/// An upper bound for sup p (exact for the built-ins).
double p_sup_bound(const ProliferationSpec& pspec, const PotentialSpec& potential);

} // namespace pftg

#endif
