#include "bcrb/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace bcrb::measures {

int QuadratureSpec::resolve_nodes(int dim) const {
    int n = nodes_per_axis;
    if (n == 0) {
        if (dim <= 1)
            n = 257;
        else if (dim == 2)
            n = 129;
        else if (dim == 3)
            n = 65;
        else
            n = 33;
    }
    if (n < 8) throw CapabilityError("quadrature requires at least 8 nodes per axis");
    double total = std::pow(static_cast<double>(n), dim);
    if (total > 1e7) throw CapabilityError("quadrature grid exceeds 1e7 nodes");
    return n;
}

namespace {

AxisRule gauss_legendre_base(int n) {
    AxisRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev estimate of the i-th root.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

AxisRule scaled_rule(const AxisRule& base, double a, double b) {
    AxisRule r;
    const std::size_t n = base.size();
    r.x.resize(n);
    r.w.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < n; ++i) {
        r.x[i] = mid + half * base.x[i];
        r.w[i] = half * base.w[i];
    }
    return r;
}

AxisRule trapezoid_panel(int n, double a, double b) {
    AxisRule r;
    n = std::max(n, 2);
    r.x.resize(n);
    r.w.resize(n);
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) {
        r.x[i] = a + h * i;
        r.w[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
    return r;
}

}  // namespace

const AxisRule& gauss_legendre_reference(int n) {
    static std::map<int, AxisRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre_base(n)).first;
    return it->second;
}

AxisRule make_axis_rule(QuadScheme scheme, int n, double a, double b,
                        std::span<const double> interior_breaks) {
    if (!(b > a)) throw DomainError("quadrature interval is empty");

    // Collect breaks strictly inside (a, b).
    std::vector<double> cuts;
    for (double c : interior_breaks)
        if (c > a + 1e-14 * (1.0 + std::abs(a)) && c < b - 1e-14 * (1.0 + std::abs(b)))
            cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> edges;
    edges.push_back(a);
    for (double c : cuts) edges.push_back(c);
    edges.push_back(b);

    const double total = b - a;
    AxisRule out;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double pa = edges[s], pb = edges[s + 1];
        int pn = std::max(8, static_cast<int>(std::lround(n * (pb - pa) / total)));
        AxisRule panel;
        if (scheme == QuadScheme::gauss_legendre)
            panel = scaled_rule(gauss_legendre_reference(pn), pa, pb);
        else
            panel = trapezoid_panel(pn, pa, pb);
        out.x.insert(out.x.end(), panel.x.begin(), panel.x.end());
        out.w.insert(out.w.end(), panel.w.begin(), panel.w.end());
    }
    return out;
}

std::vector<AxisRule> tensor_rules(const QuadratureSpec& q, const Box& box,
                                   const std::vector<std::vector<double>>& breaks) {
    const int d = box.dim();
    const int n = q.resolve_nodes(d);
    std::vector<AxisRule> axes(d);
    for (int i = 0; i < d; ++i) {
        std::span<const double> br;
        if (static_cast<int>(breaks.size()) > i) br = breaks[i];
        axes[i] = make_axis_rule(q.scheme, n, box.lo[i], box.hi[i], br);
    }
    return axes;
}

}  // namespace bcrb::measures
