#pragma once

// Information functionals on densities: variance (trace convention),
// Fisher information J, differential entropy, relative entropy and relative
// Fisher information, and logarithmic Sobolev inequality checks. Infinite
// Fisher information is a first-class value, triggered deterministically by
// hard-boundary flags rather than numeric blow-up.

#include <cstdint>
#include <functional>
#include <string>

#include "bcrb/density.hpp"

namespace bcrb::measures {

Vec barycenter(const DensityOnRn& d, const QuadratureSpec& q);

// inf_c int |x-c|^2 dmu; the infimum is attained at the barycenter.
double variance(const DensityOnRn& d, const QuadratureSpec& q);

// int |grad rho|^2 / rho. Returns +inf when a hard face carries nonzero
// density (the density is then not weakly differentiable).
double fisher_information_j(const DensityOnRn& d, const QuadratureSpec& q);

// -int rho log rho, in nats.
double differential_entropy(const DensityOnRn& d, const QuadratureSpec& q);

// D_mu(nu) = int h log h dmu with h = dnu/dmu; requires nu << mu.
double relative_entropy(const DensityOnRn& nu, const DensityOnRn& mu, const QuadratureSpec& q);

// I_mu(nu) = int |grad h|^2 / h dmu; +inf when h is not weakly
// differentiable (a hard face of nu interior to the support of mu).
double relative_fisher_information(const DensityOnRn& nu, const DensityOnRn& mu,
                                   const QuadratureSpec& q);

// Log-concave probability density exp(-V) with certified Hess(V) >= K I_n
// and cached moments.
struct LogConcavePrior {
    DensityOnRn base;
    std::function<double(const Vec&)> potential;       // V; density = exp(-V)
    std::function<Vec(const Vec&)> grad_potential;     // may be empty
    double strong_convexity = 0.0;                     // K
    Vec barycenter;
    double variance = 0.0;
    double fisher_j = 0.0;                             // +inf allowed
    int dim() const { return base.dim; }
};

// Builds the prior and certifies its invariants: normalization, midpoint
// convexity of V - K|x|^2/2 on random segments, the Brascamp-Lieb product
// K Var / n <= 1, and attainment of the variance infimum at the barycenter.
LogConcavePrior make_log_concave_prior(DensityOnRn base,
                                       std::function<double(const Vec&)> potential,
                                       std::function<Vec(const Vec&)> grad_potential,
                                       double strong_convexity, const QuadratureSpec& q,
                                       std::uint64_t check_seed = 20240801u, bool validate = true);

LogConcavePrior gaussian_prior(Vec mean, double variance);
LogConcavePrior uniform_prior(const Vec& a, const Vec& b);
LogConcavePrior laplace_prior(double scale);
LogConcavePrior exponential_prior(double rate = 1.0);
LogConcavePrior quartic_prior();

enum class LsiProvenance { gaussian_standard, bakry_emery, user_asserted };

struct ReferenceMeasure {
    DensityOnRn density;
    double lsi_constant = 1.0;
    LsiProvenance provenance = LsiProvenance::user_asserted;
    std::string name;
    double bakry_emery_k = 0.0;  // certified K when provenance is bakry_emery
};

ReferenceMeasure standard_gaussian_reference(int dim);
ReferenceMeasure bakry_emery_reference(const LogConcavePrior& mu);
ReferenceMeasure user_reference(DensityOnRn density, double lsi_constant, std::string name);

struct LsiCheckResult {
    double lhs = 0.0;  // D_mu(nu)
    double rhs = 0.0;  // (C/2) I_mu(nu)
    bool satisfied = false;
};

LsiCheckResult lsi_check(const ReferenceMeasure& mu, const DensityOnRn& nu,
                         const QuadratureSpec& q);

}  // namespace bcrb::measures
