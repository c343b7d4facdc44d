#pragma once

// Tensor-product quadrature over axis-aligned boxes. Rules are deterministic:
// Gauss-Legendre nodes are computed once per order and cached, summation is
// compensated, and tensor traversal order is fixed (last axis fastest).

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bcrb/errors.hpp"

namespace bcrb {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

// Neumaier compensated accumulator.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Axis-aligned box with per-face boundary flags. A hard face means the
// density is discontinuous there; a soft face truncates a negligible tail.
struct Box {
    Vec lo, hi;
    std::vector<char> lo_hard, hi_hard;

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains(const Vec& x) const {
        for (int i = 0; i < dim(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }

    bool contains(const Box& other) const {
        for (int i = 0; i < dim(); ++i)
            if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
        return true;
    }

    static Box soft(Vec lo, Vec hi) {
        Box b;
        b.lo_hard.assign(lo.size(), 0);
        b.hi_hard.assign(lo.size(), 0);
        b.lo = std::move(lo);
        b.hi = std::move(hi);
        return b;
    }
};

namespace measures {

enum class QuadScheme { gauss_legendre, trapezoid };

// Quadrature request. nodes_per_axis == 0 selects the dimension default
// (257 in 1-D, 129 in 2-D, fixed for reproducibility).
struct QuadratureSpec {
    int nodes_per_axis = 0;
    QuadScheme scheme = QuadScheme::gauss_legendre;
    std::optional<Box> box;

    int resolve_nodes(int dim) const;
};

struct AxisRule {
    std::vector<double> x, w;
    std::size_t size() const { return x.size(); }
};

// Gauss-Legendre rule on [-1, 1], cached per order.
const AxisRule& gauss_legendre_reference(int n);

// Rule on [a, b]; interior_breaks splits the interval into smooth panels
// (kinks of the integrand family, e.g. the Laplace density at its median).
AxisRule make_axis_rule(QuadScheme scheme, int n, double a, double b,
                        std::span<const double> interior_breaks = {});

// Per-axis rules for a box, distributing breaks that fall inside it.
std::vector<AxisRule> tensor_rules(const QuadratureSpec& q, const Box& box,
                                   const std::vector<std::vector<double>>& breaks = {});

// Iterate all tensor nodes in fixed order; f(x, w).
template <class F>
void for_each_node(const std::vector<AxisRule>& axes, F&& f) {
    const int d = static_cast<int>(axes.size());
    std::vector<std::size_t> idx(d, 0);
    Vec x(d);
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            x[i] = axes[i].x[idx[i]];
            w *= axes[i].w[idx[i]];
        }
        f(x, w);
        int ax = d - 1;
        while (ax >= 0) {
            if (++idx[ax] < axes[ax].size()) break;
            idx[ax] = 0;
            --ax;
        }
        if (ax < 0) break;
    }
}

// Integrate m components simultaneously; f(x, out) fills out[0..m).
template <class F>
Vec integrate_multi(const std::vector<AxisRule>& axes, int m, F&& f) {
    std::vector<Kahan> acc(m);
    Vec vals(m);
    for_each_node(axes, [&](const Vec& x, double w) {
        f(x, std::span<double>(vals));
        for (int j = 0; j < m; ++j) acc[j].add(w * vals[j]);
    });
    Vec out(m);
    for (int j = 0; j < m; ++j) out[j] = acc[j].value();
    return out;
}

template <class F>
double integrate(const std::vector<AxisRule>& axes, F&& f) {
    Kahan acc;
    for_each_node(axes, [&](const Vec& x, double w) { acc.add(w * f(x)); });
    return acc.value();
}

}  // namespace measures
}  // namespace bcrb
