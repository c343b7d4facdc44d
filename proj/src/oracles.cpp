#include "bcrb/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "fft.hpp"

namespace bcrb::oracles {

namespace {

using measures::AxisRule;
using measures::for_each_node;
using measures::tensor_rules;
using models::ContinuousObs;
using models::DiscreteObs;

constexpr double kDensityFloor = 1e-300;

int thread_count() {
    if (const char* env = std::getenv("BCRB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return std::min(v, 64);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

// Runs fn(block) for block in [0, nblocks). Results must be written to
// per-block slots; block partitioning is fixed so any thread count yields
// identical output.
template <class Fn>
void parallel_blocks(std::size_t nblocks, Fn&& fn) {
    const int threads = std::min<std::size_t>(thread_count(), nblocks);
    if (threads <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= nblocks) return;
                fn(b);
            }
        });
    }
    for (auto& th : pool) th.join();
}

constexpr std::size_t kBlock = 64;

void check_guards(const LogConcavePrior& prior, const ParametricModel& m) {
    if (prior.dim() != m.theta_dim)
        throw DomainError("oracle: prior dimension != theta dimension");
    if (m.theta_dim > 2) throw CapabilityError("oracle: theta dimension > 2");
    if (!m.obs_discrete() && m.obs_dim() > 2)
        throw CapabilityError("oracle: observation dimension > 2");
}

struct ThetaGrid {
    std::vector<Vec> nodes;
    std::vector<double> weights;  // quadrature weight times prior density
};

ThetaGrid theta_grid(const LogConcavePrior& prior, const QuadratureSpec& q) {
    auto axes = tensor_rules(q, prior.base.support, prior.base.axis_breaks);
    ThetaGrid g;
    for_each_node(axes, [&](const Vec& t, double w) {
        g.nodes.push_back(t);
        g.weights.push_back(w * prior.base.density(t));
    });
    return g;
}

}  // namespace

JointDensityGrid make_joint_grid(const LogConcavePrior& prior, const ParametricModel& m,
                                 const QuadratureSpec& q) {
    check_guards(prior, m);
    JointDensityGrid g;
    ThetaGrid tg = theta_grid(prior, q);
    g.theta_nodes = std::move(tg.nodes);
    g.theta_weights = std::move(tg.weights);

    if (m.obs_discrete()) {
        g.x_discrete = true;
        const auto& d = std::get<DiscreteObs>(m.obs);
        g.x_nodes = d.points;
        g.x_weights.assign(d.points.size(), 1.0);
    } else {
        const auto& c = std::get<ContinuousObs>(m.obs);
        Box hull = c.hull(prior.base.support);
        auto axes = tensor_rules(q, hull, {});
        for_each_node(axes, [&](const Vec& x, double w) {
            g.x_nodes.push_back(x);
            g.x_weights.push_back(w);
        });
    }

    g.marginal.assign(g.x_count(), 0.0);
    const std::size_t nblocks = (g.x_count() + kBlock - 1) / kBlock;
    std::vector<double> block_mass(nblocks, 0.0);
    parallel_blocks(nblocks, [&](std::size_t b) {
        Kahan mass;
        const std::size_t end = std::min(g.x_count(), (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) {
            Kahan row;
            for (std::size_t j = 0; j < g.theta_count(); ++j)
                row.add(g.theta_weights[j] * m.density(g.x_nodes[i], g.theta_nodes[j]));
            g.marginal[i] = row.value();
            mass.add(g.x_weights[i] * g.marginal[i]);
        }
        block_mass[b] = mass.value();
    });
    Kahan total;
    for (double v : block_mass) total.add(v);
    g.total_mass = total.value();
    if (std::abs(g.total_mass - 1.0) > 1e-5)
        throw IntegrationDomainError("joint grid mass deviates from 1: " +
                                     std::to_string(g.total_mass));
    return g;
}

namespace {

// Nested scheme for 1-D continuous channels: the inner x integral runs over
// the local observation box of each theta, which keeps narrow likelihood
// kernels resolved; the marginal is re-evaluated exactly at each x node.
double mutual_information_nested_1d(const LogConcavePrior& prior, const ParametricModel& m,
                                    const QuadratureSpec& q) {
    const auto& c = std::get<ContinuousObs>(m.obs);
    ThetaGrid tg = theta_grid(prior, q);
    const std::size_t nt = tg.nodes.size();

    const std::size_t nblocks = (nt + kBlock - 1) / kBlock;
    std::vector<double> block_mi(nblocks, 0.0);
    parallel_blocks(nblocks, [&](std::size_t b) {
        Kahan acc;
        const std::size_t end = std::min(nt, (b + 1) * kBlock);
        for (std::size_t j = b * kBlock; j < end; ++j) {
            if (tg.weights[j] == 0.0) continue;
            const Vec& theta = tg.nodes[j];
            Box box = c.box_for(theta);
            std::vector<std::vector<double>> breaks;
            if (c.breaks_for) breaks = c.breaks_for(theta);
            auto axes = tensor_rules(q, box, breaks);
            Kahan inner;
            for_each_node(axes, [&](const Vec& x, double w) {
                const double f = m.density(x, theta);
                if (f < kDensityFloor) return;
                Kahan marg;
                for (std::size_t jj = 0; jj < nt; ++jj)
                    marg.add(tg.weights[jj] * m.density(x, tg.nodes[jj]));
                const double fx = marg.value();
                if (fx < kDensityFloor) return;
                inner.add(w * f * (std::log(f) - std::log(fx)));
            });
            acc.add(tg.weights[j] * inner.value());
        }
        block_mi[b] = acc.value();
    });
    Kahan total;
    for (double v : block_mi) total.add(v);
    return total.value();
}

double mutual_information_grid(const JointDensityGrid& g, const ParametricModel& m) {
    const std::size_t nblocks = (g.x_count() + kBlock - 1) / kBlock;
    std::vector<double> block_mi(nblocks, 0.0);
    parallel_blocks(nblocks, [&](std::size_t b) {
        Kahan acc;
        const std::size_t end = std::min(g.x_count(), (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) {
            const double fx = g.marginal[i];
            if (fx < kDensityFloor) continue;
            const double lfx = std::log(fx);
            Kahan inner;
            for (std::size_t j = 0; j < g.theta_count(); ++j) {
                const double f = m.density(g.x_nodes[i], g.theta_nodes[j]);
                if (f < kDensityFloor) continue;
                inner.add(g.theta_weights[j] * f * (std::log(f) - lfx));
            }
            acc.add(g.x_weights[i] * inner.value());
        }
        block_mi[b] = acc.value();
    });
    Kahan total;
    for (double v : block_mi) total.add(v);
    return total.value();
}

}  // namespace

double mutual_information(const LogConcavePrior& prior, const ParametricModel& m,
                          const QuadratureSpec& q) {
    check_guards(prior, m);
    double mi;
    if (!m.obs_discrete() && m.theta_dim == 1 && m.obs_dim() == 1) {
        mi = mutual_information_nested_1d(prior, m, q);
    } else {
        JointDensityGrid g = make_joint_grid(prior, m, q);
        mi = mutual_information_grid(g, m);
    }
    if (mi < -1e-6) throw InvariantViolation("mutual information came out below -1e-6");
    return mi;
}

double conditional_entropy(const LogConcavePrior& prior, const ParametricModel& m,
                           const QuadratureSpec& q) {
    return measures::differential_entropy(prior.base, q) - mutual_information(prior, m, q);
}

double posterior_mean_mse(const LogConcavePrior& prior, const ParametricModel& m,
                          const QuadratureSpec& q) {
    JointDensityGrid g = make_joint_grid(prior, m, q);
    const int n = m.theta_dim;
    const std::size_t nblocks = (g.x_count() + kBlock - 1) / kBlock;
    std::vector<double> block_mse(nblocks, 0.0);
    parallel_blocks(nblocks, [&](std::size_t b) {
        Kahan acc;
        const std::size_t end = std::min(g.x_count(), (b + 1) * kBlock);
        std::vector<Kahan> first(n);
        for (std::size_t i = b * kBlock; i < end; ++i) {
            Kahan mass, second;
            for (int d = 0; d < n; ++d) first[d] = Kahan{};
            for (std::size_t j = 0; j < g.theta_count(); ++j) {
                const double fw = g.theta_weights[j] * m.density(g.x_nodes[i], g.theta_nodes[j]);
                if (fw == 0.0) continue;
                mass.add(fw);
                double r2 = 0.0;
                for (int d = 0; d < n; ++d) {
                    const double td = g.theta_nodes[j][d];
                    first[d].add(fw * td);
                    r2 += td * td;
                }
                second.add(fw * r2);
            }
            const double m0 = mass.value();
            if (m0 < kDensityFloor) continue;
            double mean_sq = 0.0;
            for (int d = 0; d < n; ++d) {
                const double m1 = first[d].value();
                mean_sq += m1 * m1 / m0;
            }
            acc.add(g.x_weights[i] * (second.value() - mean_sq));
        }
        block_mse[b] = acc.value();
    });
    Kahan total;
    for (double v : block_mse) total.add(v);
    return std::max(0.0, total.value());
}

OracleSet compute_oracles(const LogConcavePrior& prior, const ParametricModel& m,
                          const QuadratureSpec& q) {
    OracleSet o;
    o.mutual_information = mutual_information(prior, m, q);
    o.prior_entropy = measures::differential_entropy(prior.base, q);
    o.conditional_entropy = o.prior_entropy - o.mutual_information;
    o.posterior_mse = posterior_mean_mse(prior, m, q);
    return o;
}

namespace {

double sum_entropy_at(const DensityOnRn& d, int k, int nodes, int max_nodes) {
    double lo = d.support.lo[0];
    double hi = d.support.hi[0];
    double h = (hi - lo) / (nodes - 1);
    if (lo < 0.0 && hi > 0.0) {
        // Realign so the origin is a grid node (kinks at 0 stay on-grid).
        lo = -std::ceil(-lo / h) * h;
        nodes = static_cast<int>(std::ceil((hi - lo) / h)) + 1;
    }
    const long out_len = static_cast<long>(k) * (nodes - 1) + 1;
    if (out_len > max_nodes)
        throw IntegrationDomainError("iid_sum_entropy: convolution support exceeds configured grid");

    std::vector<double> samples(nodes);
    Vec x(1);
    for (int i = 0; i < nodes; ++i) {
        x[0] = lo + h * i;
        samples[i] = d.density(x);
    }

    std::vector<double> sum_density;
    if (k == 1) {
        sum_density = std::move(samples);
    } else {
        std::vector<std::complex<double>> spec(detail::next_pow2(out_len));
        for (int i = 0; i < nodes; ++i) spec[i] = samples[i];
        detail::fft_inplace(spec, false);
        for (auto& z : spec) {
            std::complex<double> p(1.0, 0.0);
            for (int rep = 0; rep < k; ++rep) p *= z;
            z = p;
        }
        detail::fft_inplace(spec, true);
        sum_density.resize(out_len);
        const double scale = std::pow(h, k - 1);
        for (long i = 0; i < out_len; ++i) sum_density[i] = std::max(0.0, spec[i].real() * scale);
    }

    Kahan acc;
    for (std::size_t i = 0; i < sum_density.size(); ++i) {
        const double rho = sum_density[i];
        if (rho < kDensityFloor) continue;
        const double w = (i == 0 || i + 1 == sum_density.size()) ? 0.5 * h : h;
        acc.add(-w * rho * std::log(rho));
    }
    return acc.value();
}

}  // namespace

double iid_sum_entropy(const DensityOnRn& d, int k, const ConvolutionGrid& grid) {
    if (d.dim != 1) throw CapabilityError("iid_sum_entropy: 1-D densities only");
    if (k < 1 || k > 16) throw CapabilityError("iid_sum_entropy: k must be in [1, 16]");
    int nodes = grid.base_nodes;
    double value = sum_entropy_at(d, k, nodes, grid.max_nodes);
    if (!grid.auto_refine) return value;
    for (;;) {
        const int finer = 2 * nodes - 1;
        if (static_cast<long>(k) * (finer - 1) + 1 > grid.max_nodes) return value;
        const double refined = sum_entropy_at(d, k, finer, grid.max_nodes);
        const bool settled = std::abs(refined - value) < grid.refine_tol;
        nodes = finer;
        value = refined;
        if (settled) return value;
    }
}

namespace {

// Piecewise-linear inverse CDF sampler for a 1-D density.
struct InverseCdf {
    std::vector<double> x, cdf;

    explicit InverseCdf(const DensityOnRn& d, int nodes = (1 << 17) + 1) {
        const double lo = d.support.lo[0], hi = d.support.hi[0];
        const double h = (hi - lo) / (nodes - 1);
        x.resize(nodes);
        cdf.resize(nodes);
        Vec p(1);
        double prev = 0.0;
        Kahan acc;
        for (int i = 0; i < nodes; ++i) {
            x[i] = lo + h * i;
            p[0] = x[i];
            const double rho = d.density(p);
            if (i > 0) acc.add(0.5 * h * (prev + rho));
            prev = rho;
            cdf[i] = acc.value();
        }
        const double total = cdf.back();
        for (double& c : cdf) c /= total;
    }

    double sample(double u) const {
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t i = std::min<std::size_t>(std::distance(cdf.begin(), it), cdf.size() - 1);
        if (i == 0) return x.front();
        const double c0 = cdf[i - 1], c1 = cdf[i];
        if (c1 <= c0) return x[i];
        const double t = (u - c0) / (c1 - c0);
        return x[i - 1] + t * (x[i] - x[i - 1]);
    }
};

// Uniform table of a smooth function over [lo, hi] with linear interpolation.
struct LinearTable {
    double lo = 0.0, hi = 0.0, h = 0.0;
    std::vector<double> vals;

    double operator()(double xq) const {
        const double clamped = std::min(std::max(xq, lo), hi);
        const double pos = (clamped - lo) / h;
        const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos), vals.size() - 2);
        const double t = pos - static_cast<double>(i);
        return vals[i] * (1.0 - t) + vals[i + 1] * t;
    }
};

void check_mc_supported(const LogConcavePrior& prior, const ParametricModel& m) {
    if (prior.dim() != 1 || m.theta_dim != 1)
        throw CapabilityError("Monte-Carlo oracle: 1-D parameters only");
    if (m.obs_discrete() || m.obs_dim() != 1)
        throw CapabilityError("Monte-Carlo oracle: 1-D continuous observations only");
    if (!m.sample) throw CapabilityError("Monte-Carlo oracle: model has no sampler");
}

}  // namespace

McEstimate mutual_information_mc(const LogConcavePrior& prior, const ParametricModel& m,
                                 long samples, std::uint64_t seed) {
    check_mc_supported(prior, m);
    const auto& c = std::get<ContinuousObs>(m.obs);
    InverseCdf icdf(prior.base);

    // Marginal f(x) tabulated once on the observation hull.
    Box hull = c.hull(prior.base.support);
    QuadratureSpec q;
    auto taxes = tensor_rules(q, prior.base.support, prior.base.axis_breaks);
    LinearTable marg;
    const int nm = (1 << 15) + 1;
    marg.lo = hull.lo[0];
    marg.hi = hull.hi[0];
    marg.h = (marg.hi - marg.lo) / (nm - 1);
    marg.vals.resize(nm);
    Vec xq(1);
    for (int i = 0; i < nm; ++i) {
        xq[0] = marg.lo + marg.h * i;
        Kahan acc;
        for_each_node(taxes, [&](const Vec& t, double w) {
            acc.add(w * prior.base.density(t) * m.density(xq, t));
        });
        marg.vals[i] = acc.value();
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Kahan sum, sum_sq;
    Vec theta(1);
    for (long s = 0; s < samples; ++s) {
        theta[0] = icdf.sample(unif(rng));
        Vec x = m.sample(rng, theta);
        const double f = m.density(x, theta);
        const double fx = std::max(marg(x[0]), kDensityFloor);
        const double v = std::log(std::max(f, kDensityFloor)) - std::log(fx);
        sum.add(v);
        sum_sq.add(v * v);
    }
    McEstimate out;
    out.samples = samples;
    out.seed = seed;
    out.value = sum.value() / samples;
    const double var = std::max(0.0, sum_sq.value() / samples - out.value * out.value);
    out.std_error = std::sqrt(var / samples);
    return out;
}

McEstimate posterior_mean_mse_mc(const LogConcavePrior& prior, const ParametricModel& m,
                                 long samples, std::uint64_t seed) {
    check_mc_supported(prior, m);
    const auto& c = std::get<ContinuousObs>(m.obs);
    InverseCdf icdf(prior.base);

    Box hull = c.hull(prior.base.support);
    QuadratureSpec q;
    auto taxes = tensor_rules(q, prior.base.support, prior.base.axis_breaks);
    LinearTable pm;
    const int nm = (1 << 15) + 1;
    pm.lo = hull.lo[0];
    pm.hi = hull.hi[0];
    pm.h = (pm.hi - pm.lo) / (nm - 1);
    pm.vals.resize(nm);
    Vec xq(1);
    for (int i = 0; i < nm; ++i) {
        xq[0] = pm.lo + pm.h * i;
        Kahan mass, first;
        for_each_node(taxes, [&](const Vec& t, double w) {
            const double fw = w * prior.base.density(t) * m.density(xq, t);
            mass.add(fw);
            first.add(fw * t[0]);
        });
        pm.vals[i] = mass.value() < kDensityFloor ? 0.0 : first.value() / mass.value();
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Kahan sum, sum_sq;
    Vec theta(1);
    for (long s = 0; s < samples; ++s) {
        theta[0] = icdf.sample(unif(rng));
        Vec x = m.sample(rng, theta);
        const double err = theta[0] - pm(x[0]);
        const double v = err * err;
        sum.add(v);
        sum_sq.add(v * v);
    }
    McEstimate out;
    out.samples = samples;
    out.seed = seed;
    out.value = sum.value() / samples;
    const double var = std::max(0.0, sum_sq.value() / samples - out.value * out.value);
    out.std_error = std::sqrt(var / samples);
    return out;
}

}  // namespace bcrb::oracles
