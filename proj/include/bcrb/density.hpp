#pragma once

// Probability densities on R^n with evaluable log-density, an optional
// analytic gradient of the density itself, and a support box whose faces are
// flagged hard (density discontinuous) or soft (tail truncation). Soft-face
// truncation boxes are chosen so the omitted mass stays below 1e-10.

#include <functional>
#include <string>
#include <vector>

#include "bcrb/quadrature.hpp"

namespace bcrb::measures {

struct DensityOnRn {
    int dim = 1;
    std::function<double(const Vec&)> log_density;
    std::function<Vec(const Vec&)> grad_density;  // gradient of the density; may be empty
    Box support;
    // Interior positions per axis where the density family is not smooth
    // (quadrature splits panels there).
    std::vector<std::vector<double>> axis_breaks;

    double density(const Vec& x) const { return std::exp(log_density(x)); }
    bool has_gradient() const { return static_cast<bool>(grad_density); }

    // Analytic gradient when present, otherwise central differences on the
    // density with step 1e-5 * (1 + |x_i|).
    Vec grad(const Vec& x) const;

    // grad(x) / density(x); zero where the density vanishes.
    Vec grad_log(const Vec& x) const;
};

DensityOnRn gaussian_density(Vec mean, double variance);
DensityOnRn gaussian_density(Vec mean, Vec variances);
DensityOnRn uniform_density(const Vec& a, const Vec& b);
DensityOnRn laplace_density(double scale);      // 1-D, exp(-|x|/b)/(2b)
DensityOnRn exponential_density(double rate);   // 1-D on [0, inf), hard face at 0
DensityOnRn quartic_density();                  // 1-D, exp(-x^4)/Z

DensityOnRn shifted_density(const DensityOnRn& d, const Vec& c);
// x -> s*x pushforward: density s^-n d(x/s).
DensityOnRn scaled_density(const DensityOnRn& d, double s);
DensityOnRn product_density(const DensityOnRn& a, const DensityOnRn& b);

// Mass of the density over its support (or q.box); used by normalization checks.
double normalization_mass(const DensityOnRn& d, const QuadratureSpec& q);

}  // namespace bcrb::measures
