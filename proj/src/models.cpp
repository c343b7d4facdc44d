#include "bcrb/models.hpp"

#include <algorithm>
#include <cmath>

namespace bcrb::models {

namespace {
constexpr double kDensityFloor = 1e-300;

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
}  // namespace

Box ContinuousObs::hull(const Box& theta_box) const {
    const int td = theta_box.dim();
    const int corners = 1 << td;
    Box out;
    for (int c = 0; c < corners; ++c) {
        Vec theta(td);
        for (int i = 0; i < td; ++i)
            theta[i] = (c >> i) & 1 ? theta_box.hi[i] : theta_box.lo[i];
        Box local = box_for(theta);
        if (c == 0) {
            out = local;
        } else {
            for (int i = 0; i < local.dim(); ++i) {
                out.lo[i] = std::min(out.lo[i], local.lo[i]);
                out.hi[i] = std::max(out.hi[i], local.hi[i]);
            }
        }
    }
    out.lo_hard.assign(out.lo.size(), 0);
    out.hi_hard.assign(out.hi.size(), 0);
    return out;
}

int ParametricModel::obs_dim() const {
    if (const auto* c = std::get_if<ContinuousObs>(&obs)) return c->dim;
    const auto& d = std::get<DiscreteObs>(obs);
    return d.points.empty() ? 0 : static_cast<int>(d.points.front().size());
}

Vec ParametricModel::theta_grad(const Vec& x, const Vec& theta) const {
    if (theta_gradient) return theta_gradient(x, theta);
    Vec g(theta_dim);
    Vec tp = theta, tm = theta;
    for (int i = 0; i < theta_dim; ++i) {
        const double h = 1e-6 * (1.0 + std::abs(theta[i]));
        tp[i] = theta[i] + h;
        tm[i] = theta[i] - h;
        g[i] = (density(x, tp) - density(x, tm)) / (2.0 * h);
        tp[i] = theta[i];
        tm[i] = theta[i];
    }
    return g;
}

double model_fisher_information(const ParametricModel& m, const Vec& theta,
                                const QuadratureSpec& q) {
    if (m.theta_domain && !m.theta_domain->contains(theta))
        throw DomainError("model_fisher_information: theta outside parameter domain");

    if (m.obs_discrete()) {
        const auto& d = std::get<DiscreteObs>(m.obs);
        Kahan acc;
        for (const Vec& x : d.points) {
            const double f = m.density(x, theta);
            if (f < kDensityFloor) continue;
            const Vec g = m.theta_grad(x, theta);
            acc.add(dot(g, g) / f);
        }
        return acc.value();
    }

    const auto& c = std::get<ContinuousObs>(m.obs);
    if (c.dim > 3 && m.iid_repeats > 1 && m.replica_base) {
        // Conditionally independent replicas contribute additively.
        return m.iid_repeats * model_fisher_information(*m.replica_base, theta, q);
    }
    if (c.dim > 4) throw CapabilityError("model_fisher_information: observation dimension too large");

    Box box = c.box_for(theta);
    std::vector<std::vector<double>> breaks;
    if (c.breaks_for) breaks = c.breaks_for(theta);
    auto axes = tensor_rules(q, box, breaks);

    long low_density_nodes = 0, total_nodes = 0;
    Kahan acc;
    for_each_node(axes, [&](const Vec& x, double w) {
        ++total_nodes;
        const double f = m.density(x, theta);
        if (f < kDensityFloor) {
            ++low_density_nodes;
            return;
        }
        const Vec g = m.theta_grad(x, theta);
        acc.add(w * dot(g, g) / f);
    });
    if (!m.theta_gradient && low_density_nodes > total_nodes / 5)
        throw EvaluationError(
            "model_fisher_information: finite differences unstable, density vanishes on a "
            "positive-measure region");
    return acc.value();
}

namespace {

// Theta grid over the prior support; node weight already includes the prior.
struct ThetaGrid {
    std::vector<Vec> nodes;
    std::vector<double> weights;
};

ThetaGrid prior_theta_grid(const LogConcavePrior& prior, const QuadratureSpec& q) {
    auto axes = tensor_rules(q, prior.base.support, prior.base.axis_breaks);
    ThetaGrid g;
    for_each_node(axes, [&](const Vec& t, double w) {
        g.nodes.push_back(t);
        g.weights.push_back(w * prior.base.density(t));
    });
    return g;
}

}  // namespace

AverageFisher average_fisher_information(const ParametricModel& m, const LogConcavePrior& prior,
                                         const QuadratureSpec& q) {
    if (prior.dim() != m.theta_dim)
        throw DomainError("average_fisher_information: prior dimension != theta dimension");
    if (m.theta_domain) {
        // The prior must live in the interior of the parameter domain.
        if (!m.theta_domain->contains(prior.base.support))
            throw DomainError("average_fisher_information: prior support leaves parameter domain");
    }
    ThetaGrid grid = prior_theta_grid(prior, q);
    Kahan acc;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        if (grid.weights[i] == 0.0) continue;
        acc.add(grid.weights[i] * model_fisher_information(m, grid.nodes[i], q));
    }
    AverageFisher out;
    out.total = acc.value();
    out.per_dim = out.total / m.theta_dim;
    return out;
}

RegularityReport regularity_check(const ParametricModel& m, const LogConcavePrior& prior,
                                  const QuadratureSpec& q) {
    RegularityReport rep;
    // A coarse prior-weighted grid suffices; the integrand is smooth in theta.
    QuadratureSpec tq = q;
    tq.nodes_per_axis = std::min(q.resolve_nodes(prior.dim()), 33);
    ThetaGrid grid = prior_theta_grid(prior, tq);

    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        if (grid.weights[i] < 1e-15) continue;
        const Vec& theta = grid.nodes[i];
        Vec integral(m.theta_dim, 0.0);
        if (m.obs_discrete()) {
            const auto& d = std::get<DiscreteObs>(m.obs);
            std::vector<Kahan> acc(m.theta_dim);
            for (const Vec& x : d.points) {
                const Vec g = m.theta_grad(x, theta);
                for (int j = 0; j < m.theta_dim; ++j) acc[j].add(g[j]);
            }
            for (int j = 0; j < m.theta_dim; ++j) integral[j] = acc[j].value();
        } else {
            const auto& c = std::get<ContinuousObs>(m.obs);
            Box box = c.box_for(theta);
            std::vector<std::vector<double>> breaks;
            if (c.breaks_for) breaks = c.breaks_for(theta);
            auto axes = tensor_rules(q, box, breaks);
            integral = integrate_multi(axes, m.theta_dim, [&](const Vec& x, std::span<double> out) {
                const Vec g = m.theta_grad(x, theta);
                for (int j = 0; j < m.theta_dim; ++j) out[j] = g[j];
            });
        }
        const double nrm = norm2(integral);
        ++rep.grid_points;
        if (nrm > rep.max_norm) {
            rep.max_norm = nrm;
            rep.worst_theta = theta;
        }
    }
    rep.pass = rep.max_norm < 1e-5;
    return rep;
}

ParametricModel make_gaussian_location(double sigma2, int n, int m_repeats) {
    if (!(sigma2 > 0.0)) throw DomainError("make_gaussian_location: sigma2 must be positive");
    if (n < 1 || m_repeats < 1) throw DomainError("make_gaussian_location: bad dimensions");
    const double sigma = std::sqrt(sigma2);
    const int d = n * m_repeats;

    ParametricModel m;
    m.theta_dim = n;
    m.label = "gaussian-location";
    m.iid_repeats = m_repeats;

    ContinuousObs obs;
    obs.dim = d;
    obs.box_for = [n, d, sigma](const Vec& theta) {
        Vec lo(d), hi(d);
        for (int j = 0; j < d; ++j) {
            lo[j] = theta[j % n] - 7.0 * sigma;
            hi[j] = theta[j % n] + 7.0 * sigma;
        }
        return Box::soft(std::move(lo), std::move(hi));
    };
    m.obs = obs;

    const double log_norm = 0.5 * d * std::log(2.0 * M_PI * sigma2);
    m.density = [n, d, sigma2, log_norm](const Vec& x, const Vec& theta) {
        double qd = 0.0;
        for (int j = 0; j < d; ++j) {
            const double z = x[j] - theta[j % n];
            qd += z * z;
        }
        return std::exp(-0.5 * qd / sigma2 - log_norm);
    };
    m.theta_gradient = [n, d, sigma2, log_norm](const Vec& x, const Vec& theta) {
        double qd = 0.0;
        for (int j = 0; j < d; ++j) {
            const double z = x[j] - theta[j % n];
            qd += z * z;
        }
        const double f = std::exp(-0.5 * qd / sigma2 - log_norm);
        Vec g(n, 0.0);
        for (int j = 0; j < d; ++j) g[j % n] += f * (x[j] - theta[j % n]) / sigma2;
        return g;
    };
    m.sample = [n, d, sigma](std::mt19937_64& rng, const Vec& theta) {
        std::normal_distribution<double> normal(0.0, sigma);
        Vec x(d);
        for (int j = 0; j < d; ++j) x[j] = theta[j % n] + normal(rng);
        return x;
    };
    if (m_repeats > 1)
        m.replica_base = std::make_shared<ParametricModel>(make_gaussian_location(sigma2, n, 1));
    return m;
}

ParametricModel make_gaussian_sequence(double sigma2, int n) {
    ParametricModel m = make_gaussian_location(sigma2, n, 1);
    m.label = "gaussian-sequence";
    return m;
}

ParametricModel make_bernoulli_mean(int m_repeats) {
    if (m_repeats < 1 || m_repeats > 16)
        throw DomainError("make_bernoulli_mean: repeats must be in [1, 16]");
    ParametricModel m;
    m.theta_dim = 1;
    m.label = "bernoulli-mean";
    m.iid_repeats = m_repeats;
    m.theta_domain = Box::soft({0.0}, {1.0});

    DiscreteObs obs;
    const int count = 1 << m_repeats;
    for (int mask = 0; mask < count; ++mask) {
        Vec x(m_repeats);
        for (int j = 0; j < m_repeats; ++j) x[j] = (mask >> j) & 1 ? 1.0 : 0.0;
        obs.points.push_back(std::move(x));
    }
    m.obs = obs;

    m.density = [](const Vec& x, const Vec& theta) {
        double f = 1.0;
        for (double xi : x) f *= xi > 0.5 ? theta[0] : 1.0 - theta[0];
        return f;
    };
    m.theta_gradient = [](const Vec& x, const Vec& theta) {
        double f = 1.0;
        double score = 0.0;
        for (double xi : x) {
            if (xi > 0.5) {
                f *= theta[0];
                score += 1.0 / theta[0];
            } else {
                f *= 1.0 - theta[0];
                score -= 1.0 / (1.0 - theta[0]);
            }
        }
        return Vec{f * score};
    };
    m.sample = [m_repeats](std::mt19937_64& rng, const Vec& theta) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Vec x(m_repeats);
        for (int j = 0; j < m_repeats; ++j) x[j] = unif(rng) < theta[0] ? 1.0 : 0.0;
        return x;
    };
    if (m_repeats > 1)
        m.replica_base = std::make_shared<ParametricModel>(make_bernoulli_mean(1));
    return m;
}

ParametricModel make_laplace_location(double scale, int m_repeats) {
    if (!(scale > 0.0)) throw DomainError("make_laplace_location: scale must be positive");
    if (m_repeats < 1) throw DomainError("make_laplace_location: repeats must be >= 1");
    const double b = scale;
    const int d = m_repeats;

    ParametricModel m;
    m.theta_dim = 1;
    m.label = "laplace-location";
    m.iid_repeats = m_repeats;

    ContinuousObs obs;
    obs.dim = d;
    obs.box_for = [d, b](const Vec& theta) {
        Vec lo(d, theta[0] - 25.0 * b), hi(d, theta[0] + 25.0 * b);
        return Box::soft(std::move(lo), std::move(hi));
    };
    obs.breaks_for = [d](const Vec& theta) {
        return std::vector<std::vector<double>>(d, {theta[0]});
    };
    m.obs = obs;

    m.density = [d, b](const Vec& x, const Vec& theta) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += std::abs(x[j] - theta[0]);
        return std::exp(-s / b) / std::pow(2.0 * b, d);
    };
    m.theta_gradient = [d, b](const Vec& x, const Vec& theta) {
        double s = 0.0, score = 0.0;
        for (int j = 0; j < d; ++j) {
            s += std::abs(x[j] - theta[0]);
            score += (x[j] >= theta[0] ? 1.0 : -1.0) / b;
        }
        return Vec{std::exp(-s / b) / std::pow(2.0 * b, d) * score};
    };
    m.sample = [d, b](std::mt19937_64& rng, const Vec& theta) {
        std::uniform_real_distribution<double> unif(-0.5, 0.5);
        Vec x(d);
        for (int j = 0; j < d; ++j) {
            const double u = unif(rng);
            x[j] = theta[0] - b * (u >= 0 ? 1.0 : -1.0) * std::log(1.0 - 2.0 * std::abs(u));
        }
        return x;
    };
    if (m_repeats > 1)
        m.replica_base = std::make_shared<ParametricModel>(make_laplace_location(scale, 1));
    return m;
}

ParametricModel make_constant_channel(int theta_dim) {
    ParametricModel m;
    m.theta_dim = theta_dim;
    m.label = "constant-channel";
    DiscreteObs obs;
    obs.points.push_back(Vec{0.0});
    m.obs = obs;
    m.density = [](const Vec&, const Vec&) { return 1.0; };
    m.theta_gradient = [theta_dim](const Vec&, const Vec&) { return Vec(theta_dim, 0.0); };
    m.sample = [](std::mt19937_64&, const Vec&) { return Vec{0.0}; };
    return m;
}

ParametricModel make_shifted_truncation_control() {
    // Normal window [theta-1, theta+2]; the asymmetric truncation produces a
    // boundary flux phi(-1) - phi(2) != 0 in the regularity integral.
    const double z_norm = std_normal_cdf(2.0) - std_normal_cdf(-1.0);

    ParametricModel m;
    m.theta_dim = 1;
    m.label = "shifted-truncation-control";

    ContinuousObs obs;
    obs.dim = 1;
    obs.box_for = [](const Vec& theta) {
        Box b = Box::soft({theta[0] - 1.0}, {theta[0] + 2.0});
        b.lo_hard = {1};
        b.hi_hard = {1};
        return b;
    };
    m.obs = obs;

    m.density = [z_norm](const Vec& x, const Vec& theta) {
        const double u = x[0] - theta[0];
        if (u < -1.0 || u > 2.0) return 0.0;
        return std_normal_pdf(u) / z_norm;
    };
    m.theta_gradient = [z_norm](const Vec& x, const Vec& theta) {
        const double u = x[0] - theta[0];
        if (u < -1.0 || u > 2.0) return Vec{0.0};
        return Vec{u * std_normal_pdf(u) / z_norm};
    };
    return m;
}

ParametricModel reparameterized(const ParametricModel& m, double s) {
    if (!(s > 0.0)) throw DomainError("reparameterized: scale must be positive");
    ParametricModel out = m;
    out.label = m.label + "-rescaled";
    auto descale = [s](const Vec& theta) {
        Vec t(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) t[i] = theta[i] / s;
        return t;
    };
    auto base_density = m.density;
    out.density = [base_density, descale](const Vec& x, const Vec& theta) {
        return base_density(x, descale(theta));
    };
    if (m.theta_gradient) {
        auto base_grad = m.theta_gradient;
        out.theta_gradient = [base_grad, descale, s](const Vec& x, const Vec& theta) {
            Vec g = base_grad(x, descale(theta));
            for (double& v : g) v /= s;
            return g;
        };
    } else {
        out.theta_gradient = nullptr;
    }
    if (const auto* c = std::get_if<ContinuousObs>(&m.obs)) {
        ContinuousObs obs = *c;
        auto base_box = c->box_for;
        obs.box_for = [base_box, descale](const Vec& theta) { return base_box(descale(theta)); };
        if (c->breaks_for) {
            auto base_breaks = c->breaks_for;
            obs.breaks_for = [base_breaks, descale](const Vec& theta) {
                return base_breaks(descale(theta));
            };
        }
        out.obs = obs;
    }
    if (m.theta_domain) {
        Box dom = *m.theta_domain;
        for (int i = 0; i < dom.dim(); ++i) {
            dom.lo[i] *= s;
            dom.hi[i] *= s;
        }
        out.theta_domain = dom;
    }
    if (m.sample) {
        auto base_sample = m.sample;
        out.sample = [base_sample, descale](std::mt19937_64& rng, const Vec& theta) {
            return base_sample(rng, descale(theta));
        };
    }
    out.replica_base = nullptr;
    out.iid_repeats = 1;
    return out;
}

namespace {
double param_or(const ModelSpec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}
}  // namespace

ParametricModel make_from_registry(const std::string& label, const ModelSpec& spec) {
    if (label == "gaussian-location")
        return make_gaussian_location(param_or(spec, "noise_variance", 1.0), spec.dim,
                                      spec.repeats);
    if (label == "gaussian-sequence")
        return make_gaussian_sequence(param_or(spec, "noise_variance", 1.0), spec.dim);
    if (label == "bernoulli-mean") return make_bernoulli_mean(spec.repeats);
    if (label == "laplace-location")
        return make_laplace_location(param_or(spec, "scale", 1.0), spec.repeats);
    if (label == "constant-channel") return make_constant_channel(spec.dim);
    throw ConfigValidationError("unknown model label '" + label + "'");
}

std::vector<std::string> registry_labels() {
    return {"gaussian-location", "gaussian-sequence", "bernoulli-mean", "laplace-location",
            "constant-channel"};
}

}  // namespace bcrb::models
