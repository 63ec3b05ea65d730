#include "casdec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <array>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

namespace casdec::quad {

namespace {

constexpr double kMaxSpan = 16.0;

std::vector<double> segment_edges(double a, double b, std::span<const double> breakpoints) {
    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // Geometric refinement of wide segments on the positive axis; a segment
    // starting at 0 gets four geometric cuts, the rest is left to bisection.
    std::vector<double> out{edges.front()};
    for (std::size_t i = 1; i < edges.size(); ++i) {
        double lo = edges[i - 1], hi = edges[i];
        if (lo >= 0.0 && hi > 0.0) {
            std::vector<double> inner;
            double x = hi / kMaxSpan;
            double floor_ = lo > 0.0 ? lo : hi / 65536.0;
            while (x > floor_ * 1.0000001 && x > lo) {
                inner.push_back(x);
                x /= kMaxSpan;
            }
            std::reverse(inner.begin(), inner.end());
            for (double v : inner)
                if (v > lo && v < hi) out.push_back(v);
        }
        out.push_back(hi);
    }
    return out;
}

}  // namespace

namespace {

struct Piece {
    double lo, hi, value, error, l1;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk21(const std::function<double(double)>& f, double lo, double hi) {
    double err = 0.0, l1 = 0.0;
    // max_depth = 0: a single Kronrod pair, adaptivity is handled globally below
    double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, lo, hi, 0, 0.0, &err, &l1);
    // at depth 0 Boost reports |K - G| on the reference interval [-1, 1], unscaled
    return {lo, hi, v, err * 0.5 * (hi - lo), l1};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, const QuadOptions& opts) {
    Result r;
    if (a == b) return r;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    auto edges = segment_edges(a, b, breakpoints);
    std::priority_queue<Piece> heap;
    for (std::size_t i = 1; i < edges.size(); ++i) heap.push(gk21(f, edges[i - 1], edges[i]));

    // Global bisection of the worst piece until the summed error meets the target.
    auto totals = [&] {
        auto copy = heap;
        double v = 0.0, e = 0.0, l = 0.0;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            l += copy.top().l1;
            copy.pop();
        }
        return std::array<double, 3>{v, e, l};
    };
    double value = 0.0, error = 0.0;
    {
        auto t = totals();
        value = t[0];
        error = t[1];
    }
    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value)) &&
           heap.size() < opts.max_intervals) {
        Piece worst = heap.top();
        double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) break;
        heap.pop();
        Piece left = gk21(f, worst.lo, mid), right = gk21(f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if (!std::isfinite(value)) break;
    }
    auto t = totals();  // re-sum to shed accumulated rounding of the running totals
    r.value = sign * t[0];
    r.error = t[1];
    r.l1 = t[2];
    r.converged = std::isfinite(r.value) && r.error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(t[0]));
    return r;
}

Result integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> breakpoints, const QuadOptions& opts,
                          const char* what) {
    Result r = integrate(f, a, b, breakpoints, opts);
    if (!r.converged)
        throw ConvergenceError(std::string(what) + ": quadrature did not reach tolerance (error " +
                                   std::to_string(r.error) + ")",
                               r.error);
    return r;
}

const GaussLegendre& gauss_legendre(std::size_t n) {
    static std::mutex mtx;
    static std::map<std::size_t, GaussLegendre> cache;
    std::lock_guard lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussLegendre gl;
    // legendre_p_zeros returns the non-negative zeros in ascending order.
    auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
    auto weight = [n](double x) {
        double d = boost::math::legendre_p_prime<double>(static_cast<int>(n), x);
        return 2.0 / ((1.0 - x * x) * d * d);
    };
    for (auto z = zeros.rbegin(); z != zeros.rend(); ++z) {
        if (*z == 0.0) continue;
        gl.nodes.push_back(-*z);
        gl.weights.push_back(weight(*z));
    }
    if (n % 2 == 1) {
        gl.nodes.push_back(0.0);
        gl.weights.push_back(weight(0.0));
    }
    for (double z : zeros) {
        if (z == 0.0) continue;
        gl.nodes.push_back(z);
        gl.weights.push_back(weight(z));
    }
    return cache.emplace(n, std::move(gl)).first->second;
}

}  // namespace casdec::quad
