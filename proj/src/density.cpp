#include "bcrb/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bcrb::measures {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kGaussianHalfWidthSigmas = 7.0;  // omitted mass 2*Phi(-7) ~ 2.6e-12
constexpr double kExpTailWidths = 25.0;           // exp(-25) ~ 1.4e-11
}  // namespace

Vec DensityOnRn::grad(const Vec& x) const {
    if (grad_density) return grad_density(x);
    Vec g(dim);
    Vec xp = x, xm = x;
    for (int i = 0; i < dim; ++i) {
        const double h = 1e-5 * (1.0 + std::abs(x[i]));
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        g[i] = (density(xp) - density(xm)) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return g;
}

Vec DensityOnRn::grad_log(const Vec& x) const {
    const double rho = density(x);
    Vec g = grad(x);
    if (rho <= 0.0) {
        std::fill(g.begin(), g.end(), 0.0);
        return g;
    }
    for (double& v : g) v /= rho;
    return g;
}

DensityOnRn gaussian_density(Vec mean, double variance) {
    Vec variances(mean.size(), variance);
    return gaussian_density(std::move(mean), std::move(variances));
}

DensityOnRn gaussian_density(Vec mean, Vec variances) {
    const int n = static_cast<int>(mean.size());
    if (n == 0 || static_cast<int>(variances.size()) != n)
        throw DomainError("gaussian_density: dimension mismatch");
    double log_norm = 0.0;
    for (double v : variances) {
        if (!(v > 0.0)) throw DomainError("gaussian_density: variance must be positive");
        log_norm += 0.5 * std::log(2.0 * M_PI * v);
    }

    DensityOnRn d;
    d.dim = n;
    Vec lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        const double s = std::sqrt(variances[i]);
        lo[i] = mean[i] - kGaussianHalfWidthSigmas * s;
        hi[i] = mean[i] + kGaussianHalfWidthSigmas * s;
    }
    d.support = Box::soft(std::move(lo), std::move(hi));
    d.log_density = [mean, variances, log_norm](const Vec& x) {
        double q = 0.0;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double z = x[i] - mean[i];
            q += z * z / variances[i];
        }
        return -0.5 * q - log_norm;
    };
    d.grad_density = [mean, variances, log_norm](const Vec& x) {
        double q = 0.0;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double z = x[i] - mean[i];
            q += z * z / variances[i];
        }
        const double rho = std::exp(-0.5 * q - log_norm);
        Vec g(mean.size());
        for (std::size_t i = 0; i < mean.size(); ++i)
            g[i] = -rho * (x[i] - mean[i]) / variances[i];
        return g;
    };
    return d;
}

DensityOnRn uniform_density(const Vec& a, const Vec& b) {
    const int n = static_cast<int>(a.size());
    if (n == 0 || static_cast<int>(b.size()) != n)
        throw DomainError("uniform_density: dimension mismatch");
    double log_vol = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!(b[i] > a[i])) throw DomainError("uniform_density: empty box");
        log_vol += std::log(b[i] - a[i]);
    }
    DensityOnRn d;
    d.dim = n;
    d.support.lo = a;
    d.support.hi = b;
    d.support.lo_hard.assign(n, 1);
    d.support.hi_hard.assign(n, 1);
    Box box = d.support;
    d.log_density = [box, log_vol](const Vec& x) {
        return box.contains(x) ? -log_vol : kNegInf;
    };
    // Constant inside the box; the boundary flags carry the discontinuity.
    d.grad_density = [n](const Vec&) { return Vec(n, 0.0); };
    return d;
}

DensityOnRn laplace_density(double scale) {
    if (!(scale > 0.0)) throw DomainError("laplace_density: scale must be positive");
    const double b = scale;
    DensityOnRn d;
    d.dim = 1;
    d.support = Box::soft({-kExpTailWidths * b}, {kExpTailWidths * b});
    d.axis_breaks = {{0.0}};
    d.log_density = [b](const Vec& x) { return -std::abs(x[0]) / b - std::log(2.0 * b); };
    // sign(0) taken as +1: the weak derivative is defined a.e. and this keeps
    // the Fisher integrand continuous across the median.
    d.grad_density = [b](const Vec& x) {
        const double rho = std::exp(-std::abs(x[0]) / b) / (2.0 * b);
        const double sgn = (x[0] >= 0.0) ? 1.0 : -1.0;
        return Vec{-sgn * rho / b};
    };
    return d;
}

DensityOnRn exponential_density(double rate) {
    if (!(rate > 0.0)) throw DomainError("exponential_density: rate must be positive");
    DensityOnRn d;
    d.dim = 1;
    d.support.lo = {0.0};
    d.support.hi = {kExpTailWidths / rate};
    d.support.lo_hard = {1};
    d.support.hi_hard = {0};
    d.log_density = [rate](const Vec& x) {
        return x[0] >= 0.0 ? std::log(rate) - rate * x[0] : kNegInf;
    };
    d.grad_density = [rate](const Vec& x) {
        return Vec{x[0] >= 0.0 ? -rate * rate * std::exp(-rate * x[0]) : 0.0};
    };
    return d;
}

DensityOnRn quartic_density() {
    // Z = Gamma(1/4)/2, computed once by quadrature for self-containment.
    static const double log_z = [] {
        const AxisRule rule = make_axis_rule(QuadScheme::gauss_legendre, 513, -3.5, 3.5);
        Kahan acc;
        for (std::size_t i = 0; i < rule.size(); ++i)
            acc.add(rule.w[i] * std::exp(-std::pow(rule.x[i], 4)));
        return std::log(acc.value());
    }();
    DensityOnRn d;
    d.dim = 1;
    d.support = Box::soft({-3.5}, {3.5});  // exp(-3.5^4) ~ 4e-66
    d.log_density = [](const Vec& x) { return -std::pow(x[0], 4) - log_z; };
    d.grad_density = [](const Vec& x) {
        return Vec{-4.0 * std::pow(x[0], 3) * std::exp(-std::pow(x[0], 4) - log_z)};
    };
    return d;
}

DensityOnRn shifted_density(const DensityOnRn& d, const Vec& c) {
    if (static_cast<int>(c.size()) != d.dim) throw DomainError("shifted_density: dimension mismatch");
    DensityOnRn out = d;
    for (int i = 0; i < d.dim; ++i) {
        out.support.lo[i] += c[i];
        out.support.hi[i] += c[i];
    }
    for (int i = 0; i < static_cast<int>(out.axis_breaks.size()); ++i)
        for (double& b : out.axis_breaks[i]) b += c[i];
    auto base_log = d.log_density;
    out.log_density = [base_log, c](const Vec& x) { return base_log(sub(x, c)); };
    if (d.grad_density) {
        auto base_grad = d.grad_density;
        out.grad_density = [base_grad, c](const Vec& x) { return base_grad(sub(x, c)); };
    }
    return out;
}

DensityOnRn scaled_density(const DensityOnRn& d, double s) {
    if (!(s > 0.0)) throw DomainError("scaled_density: scale must be positive");
    DensityOnRn out = d;
    for (int i = 0; i < d.dim; ++i) {
        out.support.lo[i] *= s;
        out.support.hi[i] *= s;
    }
    for (auto& axis : out.axis_breaks)
        for (double& b : axis) b *= s;
    const double log_jac = d.dim * std::log(s);
    auto base_log = d.log_density;
    out.log_density = [base_log, s, log_jac](const Vec& x) {
        Vec y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / s;
        return base_log(y) - log_jac;
    };
    if (d.grad_density) {
        auto base_grad = d.grad_density;
        out.grad_density = [base_grad, s, log_jac](const Vec& x) {
            Vec y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / s;
            Vec g = base_grad(y);
            const double jac = std::exp(log_jac) * s;  // s^(n+1)
            for (double& v : g) v /= jac;
            return g;
        };
    }
    return out;
}

DensityOnRn product_density(const DensityOnRn& a, const DensityOnRn& b) {
    DensityOnRn out;
    out.dim = a.dim + b.dim;
    out.support.lo = a.support.lo;
    out.support.lo.insert(out.support.lo.end(), b.support.lo.begin(), b.support.lo.end());
    out.support.hi = a.support.hi;
    out.support.hi.insert(out.support.hi.end(), b.support.hi.begin(), b.support.hi.end());
    out.support.lo_hard = a.support.lo_hard;
    out.support.lo_hard.insert(out.support.lo_hard.end(), b.support.lo_hard.begin(),
                               b.support.lo_hard.end());
    out.support.hi_hard = a.support.hi_hard;
    out.support.hi_hard.insert(out.support.hi_hard.end(), b.support.hi_hard.begin(),
                               b.support.hi_hard.end());
    out.axis_breaks = a.axis_breaks;
    out.axis_breaks.resize(a.dim);
    auto bb = b.axis_breaks;
    bb.resize(b.dim);
    out.axis_breaks.insert(out.axis_breaks.end(), bb.begin(), bb.end());

    const int na = a.dim;
    auto la = a.log_density, lb = b.log_density;
    out.log_density = [la, lb, na](const Vec& x) {
        Vec xa(x.begin(), x.begin() + na), xb(x.begin() + na, x.end());
        return la(xa) + lb(xb);
    };
    if (a.grad_density && b.grad_density) {
        auto ga = a.grad_density, gb = b.grad_density;
        out.grad_density = [la, lb, ga, gb, na](const Vec& x) {
            Vec xa(x.begin(), x.begin() + na), xb(x.begin() + na, x.end());
            const double da = std::exp(la(xa)), db = std::exp(lb(xb));
            Vec g(x.size());
            Vec gva = ga(xa), gvb = gb(xb);
            for (int i = 0; i < na; ++i) g[i] = gva[i] * db;
            for (std::size_t i = 0; i < gvb.size(); ++i) g[na + i] = gvb[i] * da;
            return g;
        };
    }
    return out;
}

double normalization_mass(const DensityOnRn& d, const QuadratureSpec& q) {
    const Box& box = q.box ? *q.box : d.support;
    auto axes = tensor_rules(q, box, d.axis_breaks);
    return integrate(axes, [&](const Vec& x) { return d.density(x); });
}

}  // namespace bcrb::measures
