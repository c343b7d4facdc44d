#pragma once

// Brute-force ground truth at desk scale: mutual information, conditional
// entropy and posterior-mean MSE by double quadrature on joint grids, entropy
// of i.i.d. sums via FFT convolution, plus seeded Monte-Carlo cross-checks.

#include <cstdint>

#include "bcrb/models.hpp"

namespace bcrb::oracles {

using measures::DensityOnRn;
using measures::LogConcavePrior;
using measures::QuadratureSpec;
using models::ParametricModel;

// Joint grid of f(x; theta) pi(theta) values with the induced marginal f(x).
// theta_dim <= 2 and obs dim <= 2 (desk-scale guard). Rows are streamed when
// the full matrix would be too large to store.
struct JointDensityGrid {
    std::vector<Vec> theta_nodes;
    std::vector<double> theta_weights;  // quadrature weight times pi(theta)
    std::vector<Vec> x_nodes;
    std::vector<double> x_weights;      // unit weights for discrete observations
    bool x_discrete = false;
    std::vector<double> marginal;       // f(x_i)
    double total_mass = 0.0;

    std::size_t theta_count() const { return theta_nodes.size(); }
    std::size_t x_count() const { return x_nodes.size(); }
};

JointDensityGrid make_joint_grid(const LogConcavePrior& prior, const ParametricModel& m,
                                 const QuadratureSpec& q);

double mutual_information(const LogConcavePrior& prior, const ParametricModel& m,
                          const QuadratureSpec& q);

// h(theta | X) = h(theta) - I(theta; X).
double conditional_entropy(const LogConcavePrior& prior, const ParametricModel& m,
                           const QuadratureSpec& q);

// E || theta - E[theta | X] ||^2.
double posterior_mean_mse(const LogConcavePrior& prior, const ParametricModel& m,
                          const QuadratureSpec& q);

struct OracleSet {
    double mutual_information = 0.0;
    double prior_entropy = 0.0;
    double conditional_entropy = 0.0;
    double posterior_mse = 0.0;
};

OracleSet compute_oracles(const LogConcavePrior& prior, const ParametricModel& m,
                          const QuadratureSpec& q);

struct ConvolutionGrid {
    int base_nodes = 16384;
    int max_nodes = 1 << 22;
    double refine_tol = 1e-4;  // doubling the resolution must move h by less
    bool auto_refine = true;
};

// Entropy of S_k = X_1 + ... + X_k for i.i.d. X_i ~ d (1-D, k <= 16),
// computed by k-1 grid convolutions via FFT and trapezoid entropy quadrature.
double iid_sum_entropy(const DensityOnRn& d, int k, const ConvolutionGrid& grid = {});

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
    long samples = 0;
};

// Seeded sampling cross-checks (1-D prior, model must expose a sampler).
McEstimate mutual_information_mc(const LogConcavePrior& prior, const ParametricModel& m,
                                 long samples, std::uint64_t seed);
McEstimate posterior_mean_mse_mc(const LogConcavePrior& prior, const ParametricModel& m,
                                 long samples, std::uint64_t seed);

}  // namespace bcrb::oracles
