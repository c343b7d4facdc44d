#include "bcrb/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace bcrb::measures {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-6;
constexpr double kDensityFloor = 1e-300;

const Box& region_of(const DensityOnRn& d, const QuadratureSpec& q) {
    return q.box ? *q.box : d.support;
}

void check_mass(double mass, const char* op) {
    if (std::abs(mass - 1.0) > kMassTol)
        throw IntegrationDomainError(std::string(op) +
                                     ": quadrature box misses mass (got " +
                                     std::to_string(mass) + ")");
}

// True when some hard face of d carries nonzero density.
bool hard_face_positive(const DensityOnRn& d) {
    const Box& b = d.support;
    Vec probe(d.dim);
    for (int axis = 0; axis < d.dim; ++axis) {
        for (int side = 0; side < 2; ++side) {
            const bool hard = side == 0 ? b.lo_hard[axis] : b.hi_hard[axis];
            if (!hard) continue;
            // Probe the face center and quarter points along the other axes.
            const int probes = d.dim == 1 ? 1 : 3;
            for (int p = 0; p < probes; ++p) {
                for (int j = 0; j < d.dim; ++j) {
                    const double frac = p == 0 ? 0.5 : (p == 1 ? 0.25 : 0.75);
                    probe[j] = b.lo[j] + frac * (b.hi[j] - b.lo[j]);
                }
                probe[axis] = side == 0 ? b.lo[axis] : b.hi[axis];
                if (d.density(probe) > 1e-12) return true;
            }
        }
    }
    return false;
}

// Position of mu's hard face on the given axis/side, if any.
bool matching_hard_face(const DensityOnRn& mu, int axis, int side, double pos) {
    const Box& b = mu.support;
    const bool hard = side == 0 ? b.lo_hard[axis] : b.hi_hard[axis];
    if (!hard) return false;
    const double mu_pos = side == 0 ? b.lo[axis] : b.hi[axis];
    return std::abs(mu_pos - pos) <= 1e-12 * (1.0 + std::abs(pos));
}

// h = dnu/dmu fails weak differentiability iff nu has a hard face that does
// not coincide with a hard face of mu (mu then has mass across the jump).
bool relative_density_not_differentiable(const DensityOnRn& nu, const DensityOnRn& mu) {
    const Box& b = nu.support;
    for (int axis = 0; axis < nu.dim; ++axis) {
        for (int side = 0; side < 2; ++side) {
            const bool hard = side == 0 ? b.lo_hard[axis] : b.hi_hard[axis];
            if (!hard) continue;
            const double pos = side == 0 ? b.lo[axis] : b.hi[axis];
            if (!matching_hard_face(mu, axis, side, pos)) return true;
        }
    }
    return false;
}

std::vector<std::vector<double>> merged_breaks(const DensityOnRn& a, const DensityOnRn& b) {
    std::vector<std::vector<double>> out = a.axis_breaks;
    out.resize(a.dim);
    for (int i = 0; i < b.dim && i < a.dim; ++i) {
        if (static_cast<int>(b.axis_breaks.size()) > i)
            out[i].insert(out[i].end(), b.axis_breaks[i].begin(), b.axis_breaks[i].end());
    }
    return out;
}

void require_absolute_continuity(const DensityOnRn& nu, const DensityOnRn& mu, const char* op) {
    if (nu.dim != mu.dim)
        throw IntegrationDomainError(std::string(op) + ": dimension mismatch");
    // nu may not place mass beyond a hard face of mu.
    for (int axis = 0; axis < nu.dim; ++axis) {
        if (mu.support.lo_hard[axis] &&
            nu.support.lo[axis] < mu.support.lo[axis] - 1e-12 * (1.0 + std::abs(mu.support.lo[axis])))
            throw IntegrationDomainError(std::string(op) + ": nu has mass where mu vanishes");
        if (mu.support.hi_hard[axis] &&
            nu.support.hi[axis] > mu.support.hi[axis] + 1e-12 * (1.0 + std::abs(mu.support.hi[axis])))
            throw IntegrationDomainError(std::string(op) + ": nu has mass where mu vanishes");
    }
}

}  // namespace

Vec barycenter(const DensityOnRn& d, const QuadratureSpec& q) {
    const Box& box = region_of(d, q);
    auto axes = tensor_rules(q, box, d.axis_breaks);
    const int n = d.dim;
    Vec acc = integrate_multi(axes, n + 1, [&](const Vec& x, std::span<double> out) {
        const double rho = d.density(x);
        out[0] = rho;
        for (int i = 0; i < n; ++i) out[i + 1] = rho * x[i];
    });
    check_mass(acc[0], "barycenter");
    Vec c(n);
    for (int i = 0; i < n; ++i) c[i] = acc[i + 1] / acc[0];
    return c;
}

double variance(const DensityOnRn& d, const QuadratureSpec& q) {
    const Box& box = region_of(d, q);
    auto axes = tensor_rules(q, box, d.axis_breaks);
    const int n = d.dim;
    Vec acc = integrate_multi(axes, n + 2, [&](const Vec& x, std::span<double> out) {
        const double rho = d.density(x);
        out[0] = rho;
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            out[i + 1] = rho * x[i];
            r2 += x[i] * x[i];
        }
        out[n + 1] = rho * r2;
    });
    check_mass(acc[0], "variance");
    double mean_sq = 0.0;
    for (int i = 0; i < n; ++i) mean_sq += (acc[i + 1] / acc[0]) * (acc[i + 1] / acc[0]);
    return acc[n + 1] / acc[0] - mean_sq;
}

double fisher_information_j(const DensityOnRn& d, const QuadratureSpec& q) {
    if (hard_face_positive(d)) return kInf;
    const Box& box = region_of(d, q);
    auto axes = tensor_rules(q, box, d.axis_breaks);
    Vec acc = integrate_multi(axes, 2, [&](const Vec& x, std::span<double> out) {
        const double rho = d.density(x);
        out[0] = rho;
        if (rho < kDensityFloor) {
            out[1] = 0.0;
            return;
        }
        const Vec g = d.grad(x);
        out[1] = dot(g, g) / rho;
    });
    check_mass(acc[0], "fisher_information_j");
    return acc[1];
}

double differential_entropy(const DensityOnRn& d, const QuadratureSpec& q) {
    const Box& box = region_of(d, q);
    auto axes = tensor_rules(q, box, d.axis_breaks);
    Vec acc = integrate_multi(axes, 2, [&](const Vec& x, std::span<double> out) {
        const double l = d.log_density(x);
        const double rho = std::exp(l);
        out[0] = rho;
        out[1] = rho < kDensityFloor ? 0.0 : -rho * l;
    });
    check_mass(acc[0], "differential_entropy");
    return acc[1];
}

double relative_entropy(const DensityOnRn& nu, const DensityOnRn& mu, const QuadratureSpec& q) {
    require_absolute_continuity(nu, mu, "relative_entropy");
    const Box& box = region_of(nu, q);
    auto axes = tensor_rules(q, box, merged_breaks(nu, mu));
    Vec acc = integrate_multi(axes, 2, [&](const Vec& x, std::span<double> out) {
        const double lnu = nu.log_density(x);
        const double rho = std::exp(lnu);
        out[0] = rho;
        if (rho < kDensityFloor) {
            out[1] = 0.0;
            return;
        }
        const double lmu = mu.log_density(x);
        if (lmu == -kInf)
            throw IntegrationDomainError("relative_entropy: nu has mass where mu vanishes");
        out[1] = rho * (lnu - lmu);
    });
    check_mass(acc[0], "relative_entropy");
    return acc[1];
}

double relative_fisher_information(const DensityOnRn& nu, const DensityOnRn& mu,
                                   const QuadratureSpec& q) {
    require_absolute_continuity(nu, mu, "relative_fisher_information");
    if (relative_density_not_differentiable(nu, mu)) return kInf;
    const Box& box = region_of(nu, q);
    auto axes = tensor_rules(q, box, merged_breaks(nu, mu));
    // |grad h|^2/h dmu = nu |grad log nu - grad log mu|^2.
    Vec acc = integrate_multi(axes, 2, [&](const Vec& x, std::span<double> out) {
        const double rho = nu.density(x);
        out[0] = rho;
        if (rho < kDensityFloor) {
            out[1] = 0.0;
            return;
        }
        Vec gn = nu.grad_log(x);
        Vec gm = mu.grad_log(x);
        double s = 0.0;
        for (std::size_t i = 0; i < gn.size(); ++i) {
            const double dgi = gn[i] - gm[i];
            s += dgi * dgi;
        }
        out[1] = rho * s;
    });
    check_mass(acc[0], "relative_fisher_information");
    return acc[1];
}

LogConcavePrior make_log_concave_prior(DensityOnRn base,
                                       std::function<double(const Vec&)> potential,
                                       std::function<Vec(const Vec&)> grad_potential,
                                       double strong_convexity, const QuadratureSpec& q,
                                       std::uint64_t check_seed, bool validate) {
    LogConcavePrior p;
    p.base = std::move(base);
    p.potential = std::move(potential);
    p.grad_potential = std::move(grad_potential);
    p.strong_convexity = strong_convexity;

    if (validate) {
        const double mass = normalization_mass(p.base, q);
        if (std::abs(mass - 1.0) > kMassTol)
            throw InvariantViolation("log-concave prior is not normalized (mass " +
                                     std::to_string(mass) + ")");

        // Midpoint convexity of V - K|x|^2/2 on random segments in the support.
        std::mt19937_64 rng(check_seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const Box& b = p.base.support;
        const int n = p.base.dim;
        auto w = [&](const Vec& x) {
            double v = p.potential(x);
            if (strong_convexity > 0.0) v -= 0.5 * strong_convexity * dot(x, x);
            return v;
        };
        for (int trial = 0; trial < 120; ++trial) {
            Vec a(n), c(n), m(n);
            for (int i = 0; i < n; ++i) {
                a[i] = b.lo[i] + unif(rng) * (b.hi[i] - b.lo[i]);
                c[i] = b.lo[i] + unif(rng) * (b.hi[i] - b.lo[i]);
                m[i] = 0.5 * (a[i] + c[i]);
            }
            const double va = w(a), vc = w(c), vm = w(m);
            if (!std::isfinite(va) || !std::isfinite(vc) || !std::isfinite(vm)) continue;
            const double scale = 1.0 + std::abs(va) + std::abs(vc);
            if (vm > 0.5 * (va + vc) + 1e-9 * scale)
                throw InvariantViolation("potential fails midpoint convexity test");
        }
    }

    p.barycenter = measures::barycenter(p.base, q);
    p.variance = measures::variance(p.base, q);
    p.fisher_j = fisher_information_j(p.base, q);

    if (validate) {
        const int n = p.base.dim;
        if (p.strong_convexity * p.variance / n > 1.0 + 1e-9)
            throw InvariantViolation("Brascamp-Lieb violated: K Var / n > 1");

        // The variance infimum is attained at the barycenter: perturbing the
        // center can only increase the second moment.
        const Box& box = p.base.support;
        auto axes = tensor_rules(q, box, p.base.axis_breaks);
        std::mt19937_64 rng(check_seed + 1);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int trial = 0; trial < 3; ++trial) {
            Vec c = p.barycenter;
            for (int i = 0; i < n; ++i) c[i] += unif(rng) * 0.5 * (box.hi[i] - box.lo[i]) * 0.1;
            const double m2 = integrate(axes, [&](const Vec& x) {
                double r2 = 0.0;
                for (int i = 0; i < n; ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
                return p.base.density(x) * r2;
            });
            if (m2 < p.variance - 1e-9 * (1.0 + p.variance))
                throw InvariantViolation("variance infimum not attained at barycenter");
        }
    }
    return p;
}

LogConcavePrior gaussian_prior(Vec mean, double variance) {
    const int n = static_cast<int>(mean.size());
    DensityOnRn d = gaussian_density(mean, variance);
    double log_norm = 0.5 * n * std::log(2.0 * M_PI * variance);
    Vec mu = mean;
    auto pot = [mu, variance, log_norm](const Vec& x) {
        double qd = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) qd += (x[i] - mu[i]) * (x[i] - mu[i]);
        return 0.5 * qd / variance + log_norm;
    };
    auto gpot = [mu, variance](const Vec& x) {
        Vec g(mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) g[i] = (x[i] - mu[i]) / variance;
        return g;
    };
    return make_log_concave_prior(std::move(d), pot, gpot, 1.0 / variance, QuadratureSpec{});
}

LogConcavePrior uniform_prior(const Vec& a, const Vec& b) {
    DensityOnRn d = uniform_density(a, b);
    double log_vol = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) log_vol += std::log(b[i] - a[i]);
    Box box = d.support;
    auto pot = [box, log_vol](const Vec& x) {
        return box.contains(x) ? log_vol : std::numeric_limits<double>::infinity();
    };
    auto gpot = [n = static_cast<int>(a.size())](const Vec&) { return Vec(n, 0.0); };
    return make_log_concave_prior(std::move(d), pot, gpot, 0.0, QuadratureSpec{});
}

LogConcavePrior laplace_prior(double scale) {
    DensityOnRn d = laplace_density(scale);
    auto pot = [scale](const Vec& x) { return std::abs(x[0]) / scale + std::log(2.0 * scale); };
    auto gpot = [scale](const Vec& x) {
        return Vec{(x[0] >= 0.0 ? 1.0 : -1.0) / scale};
    };
    return make_log_concave_prior(std::move(d), pot, gpot, 0.0, QuadratureSpec{});
}

LogConcavePrior exponential_prior(double rate) {
    DensityOnRn d = exponential_density(rate);
    auto pot = [rate](const Vec& x) {
        return x[0] >= 0.0 ? rate * x[0] - std::log(rate)
                           : std::numeric_limits<double>::infinity();
    };
    auto gpot = [rate](const Vec&) { return Vec{rate}; };
    return make_log_concave_prior(std::move(d), pot, gpot, 0.0, QuadratureSpec{});
}

LogConcavePrior quartic_prior() {
    DensityOnRn d = quartic_density();
    auto logd = d.log_density;
    auto pot = [logd](const Vec& x) { return -logd(x); };
    auto gpot = [](const Vec& x) { return Vec{4.0 * std::pow(x[0], 3)}; };
    return make_log_concave_prior(std::move(d), pot, gpot, 0.0, QuadratureSpec{});
}

ReferenceMeasure standard_gaussian_reference(int dim) {
    ReferenceMeasure m;
    m.density = gaussian_density(Vec(dim, 0.0), 1.0);
    m.lsi_constant = 1.0;
    m.provenance = LsiProvenance::gaussian_standard;
    m.name = "gaussian-standard";
    m.bakry_emery_k = 1.0;
    return m;
}

ReferenceMeasure bakry_emery_reference(const LogConcavePrior& mu) {
    if (!(mu.strong_convexity > 0.0))
        throw DomainError("bakry_emery_reference requires K > 0");
    ReferenceMeasure m;
    m.density = mu.base;
    m.lsi_constant = 1.0 / mu.strong_convexity;
    m.provenance = LsiProvenance::bakry_emery;
    m.name = "bakry-emery";
    m.bakry_emery_k = mu.strong_convexity;
    return m;
}

ReferenceMeasure user_reference(DensityOnRn density, double lsi_constant, std::string name) {
    if (!(lsi_constant > 0.0)) throw DomainError("LSI constant must be positive");
    ReferenceMeasure m;
    m.density = std::move(density);
    m.lsi_constant = lsi_constant;
    m.provenance = LsiProvenance::user_asserted;
    m.name = std::move(name);
    return m;
}

LsiCheckResult lsi_check(const ReferenceMeasure& mu, const DensityOnRn& nu,
                         const QuadratureSpec& q) {
    LsiCheckResult r;
    r.lhs = relative_entropy(nu, mu.density, q);
    const double fisher = relative_fisher_information(nu, mu.density, q);
    r.rhs = 0.5 * mu.lsi_constant * fisher;
    r.satisfied = r.lhs <= r.rhs + 1e-6;
    return r;
}

}  // namespace bcrb::measures
