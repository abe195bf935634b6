#pragma once

// Reference computations written directly from the definitions, sharing no
// code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double midpoint(double lo, double hi, std::size_t n, std::size_t i)
{
    return lo + (static_cast<double>(i) + 0.5) * (hi - lo) / static_cast<double>(n);
}

/// Luxemburg norm by bisection in log-space on [1e-8, 1e8].
inline double luxemburg(const std::function<double(double)>& f, const std::function<double(double)>& p,
                        double lo, double hi, std::size_t n, double tol = 1e-12)
{
    const double w = (hi - lo) / static_cast<double>(n);
    auto rho = [&](double eta) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = midpoint(lo, hi, n, i);
            s += std::pow(std::abs(f(x)) / eta, p(x));
        }
        return s * w;
    };
    double a = std::log(1e-8);
    double b = std::log(1e8);
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        (rho(std::exp(m)) > 1.0 ? a : b) = m;
    }
    return std::exp(0.5 * (a + b));
}

/// max_x |p(x) - q| * log(e + |x - x0|) minimized over q by a fine scan
/// followed by a local rescan.
struct LhInf {
    double q;
    double k;
};
inline LhInf lhinf_scan(const std::vector<double>& xs, const std::vector<double>& ps, double x0)
{
    auto objective = [&](double q) {
        double m = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            m = std::max(m, std::abs(ps[i] - q) * std::log(std::numbers::e + std::abs(xs[i] - x0)));
        return m;
    };
    double lo = *std::min_element(ps.begin(), ps.end());
    double hi = *std::max_element(ps.begin(), ps.end());
    LhInf best{lo, objective(lo)};
    for (int pass = 0; pass < 3; ++pass) {
        const int steps = 2000;
        const double h = (hi - lo) / steps;
        for (int k = 0; k <= steps; ++k) {
            const double q = lo + k * h;
            const double v = objective(q);
            if (v < best.k) best = {q, v};
        }
        lo = best.q - h;
        hi = best.q + h;
    }
    return best;
}

/// max over pairs with 0 < |x-y| < 1/2 of |p(x)-p(y)| * (-log|x-y|).
inline double lh0_pairs(const std::vector<double>& xs, const std::vector<double>& ps)
{
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const double d = std::abs(xs[i] - xs[j]);
            if (d > 0.0 && d < 0.5) m = std::max(m, std::abs(ps[i] - ps[j]) * -std::log(d));
        }
    return m;
}

/// Length of {x in [lo, hi] : a x + b in (c - r, c + r)}, a != 0.
inline double affine_preimage_length(double a, double b, double c, double r, double lo, double hi)
{
    double u = (c - r - b) / a;
    double v = (c + r - b) / a;
    if (u > v) std::swap(u, v);
    return std::max(0.0, std::min(v, hi) - std::max(u, lo));
}

/// R(n) = (1 / (n mu(B))) * integral over phi^{-1}(B) of n^{p(x)/p(phi(x))},
/// midpoint rule on cells whose centers map into the open ball.
inline double dichotomy_ratio(const std::function<double(double)>& phi, const std::function<double(double)>& p,
                              double c, double r, double n, double lo, double hi, std::size_t cells)
{
    const double w = (hi - lo) / static_cast<double>(cells);
    double mod = 0.0;
    std::size_t in_ball = 0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double x = midpoint(lo, hi, cells, i);
        if (std::abs(x - c) < r) ++in_ball;
        const double y = phi(x);
        if (std::abs(y - c) < r) mod += std::pow(n, p(x) / p(y));
    }
    return mod * w / (n * static_cast<double>(in_ball) * w);
}

/// Integral of n^{p(x)/p(phi(x))} / (n * 2r) over the exact preimage
/// interval [u, v], Simpson's rule.
inline double dichotomy_ratio_continuous(const std::function<double(double)>& phi,
                                         const std::function<double(double)>& p, double u, double v, double r,
                                         double n)
{
    const int m = 20000;
    const double h = (v - u) / m;
    double s = 0.0;
    for (int k = 0; k <= m; ++k) {
        const double x = u + k * h;
        const double wk = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += wk * std::pow(n, p(x) / p(phi(x)));
    }
    return s * h / 3.0 / (n * 2.0 * r);
}

} // namespace oracle
