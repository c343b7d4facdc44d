#pragma once

// Dominated parametric families f(x; theta): evaluation, theta-gradients,
// Fisher information, a regularity check for the differentiation-under-the-
// integral condition, and the registry of built-in families.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>

#include "bcrb/measures.hpp"

namespace bcrb::models {

using measures::LogConcavePrior;
using measures::QuadratureSpec;

struct ContinuousObs {
    int dim = 1;
    // Integration box for observations at a fixed theta.
    std::function<Box(const Vec& theta)> box_for;
    // Interior kinks of x -> f(x; theta), per observation axis. May be empty.
    std::function<std::vector<std::vector<double>>(const Vec& theta)> breaks_for;
    // Hull of box_for over the corners of a theta box (monotone families).
    Box hull(const Box& theta_box) const;
};

struct DiscreteObs {
    std::vector<Vec> points;  // counting-measure support, enumerated
};

using ObsSpace = std::variant<ContinuousObs, DiscreteObs>;

struct ParametricModel {
    int theta_dim = 1;
    ObsSpace obs;
    std::function<double(const Vec& x, const Vec& theta)> density;
    std::function<Vec(const Vec& x, const Vec& theta)> theta_gradient;  // may be empty
    std::string label;
    std::optional<Box> theta_domain;  // parameter domain when not all of R^n
    int iid_repeats = 1;
    std::shared_ptr<const ParametricModel> replica_base;  // set when iid_repeats > 1
    std::function<Vec(std::mt19937_64&, const Vec& theta)> sample;  // may be empty

    int obs_dim() const;
    bool obs_discrete() const { return std::holds_alternative<DiscreteObs>(obs); }
    // Analytic gradient when present, otherwise central differences with
    // step 1e-6 * (1 + |theta_i|).
    Vec theta_grad(const Vec& x, const Vec& theta) const;
};

// Scalar Fisher information (trace convention) at theta. Conditionally
// independent replicas add, so models with iid_repeats and an observation
// dimension too large for tensor quadrature are evaluated per replica.
double model_fisher_information(const ParametricModel& m, const Vec& theta,
                                const QuadratureSpec& q);

struct AverageFisher {
    double total = 0.0;      // int I(theta) dpi
    double per_dim = 0.0;    // J = total / n
};

AverageFisher average_fisher_information(const ParametricModel& m, const LogConcavePrior& prior,
                                         const QuadratureSpec& q);

struct RegularityReport {
    double max_norm = 0.0;
    Vec worst_theta;
    bool pass = false;
    int grid_points = 0;
};

// Checks int grad_theta f(x; theta) dlambda(x) = 0 on a prior-weighted theta
// grid; passes iff the max norm stays below 1e-5. Grid-based, hence a sound
// but incomplete verification of the a.e. condition.
RegularityReport regularity_check(const ParametricModel& m, const LogConcavePrior& prior,
                                  const QuadratureSpec& q);

// X = theta + Z with Z ~ N(0, sigma2 I_n), observed m_repeats times.
ParametricModel make_gaussian_location(double sigma2, int n, int m_repeats = 1);
ParametricModel make_gaussian_sequence(double sigma2, int n);
ParametricModel make_bernoulli_mean(int m_repeats = 1);
ParametricModel make_laplace_location(double scale, int m_repeats = 1);
// Channel that ignores theta entirely; I(theta) = 0 and I(pi; P_theta) = 0.
ParametricModel make_constant_channel(int theta_dim);
// Gaussian location truncated to the theta-dependent window [theta-1, theta+2].
// The boundary flux breaks the regularity condition; negative control.
ParametricModel make_shifted_truncation_control();
// Reparameterize theta -> s * theta; divides Fisher information by s^2.
ParametricModel reparameterized(const ParametricModel& m, double s);

struct ModelSpec {
    std::map<std::string, double> params;
    int repeats = 1;
    int dim = 1;
};

// Registry used by the scenario CLI. Throws ConfigValidationError for
// unknown labels.
ParametricModel make_from_registry(const std::string& label, const ModelSpec& spec);
std::vector<std::string> registry_labels();

}  // namespace bcrb::models
