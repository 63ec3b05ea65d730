#include "casdec/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "casdec/quadrature.hpp"

namespace casdec::osc {

void spherical_bessel_j(double z, std::size_t n, double* out) {
    if (n == 0) return;
    if (z == 0.0) {
        out[0] = 1.0;
        for (std::size_t k = 1; k < n; ++k) out[k] = 0.0;
        return;
    }
    if (z > static_cast<double>(n)) {
        // Upward recurrence is stable while k < z.
        double s = std::sin(z), c = std::cos(z);
        out[0] = s / z;
        if (n > 1) out[1] = s / (z * z) - c / z;
        for (std::size_t k = 2; k < n; ++k)
            out[k] = (2.0 * k - 1.0) / z * out[k - 1] - out[k - 2];
        return;
    }
    for (std::size_t k = 0; k < n; ++k) out[k] = std::sph_bessel(static_cast<unsigned>(k), z);
}

namespace {

struct Fit {
    double lo, hi;
    std::vector<double> c;
    double tail;
    double l1;
};

class Fitter {
public:
    explicit Fitter(std::size_t order) : order_(order), gl_(quad::gauss_legendre(order)) {
        // P_k at the nodes, row-major [k][i]
        p_.assign(order * order, 0.0);
        for (std::size_t i = 0; i < order; ++i) {
            double x = gl_.nodes[i];
            double pm = 1.0, pc = x;
            p_[i] = 1.0;
            if (order > 1) p_[order + i] = x;
            for (std::size_t k = 2; k < order; ++k) {
                double pn = ((2.0 * k - 1.0) * x * pc - (k - 1.0) * pm) / k;
                p_[k * order + i] = pn;
                pm = pc;
                pc = pn;
            }
        }
    }

    Fit fit(const std::function<double(double)>& g, double lo, double hi) const {
        double c0 = 0.5 * (lo + hi), m = 0.5 * (hi - lo);
        std::vector<double> vals(order_);
        double l1 = 0.0;
        for (std::size_t i = 0; i < order_; ++i) {
            vals[i] = g(c0 + m * gl_.nodes[i]);
            if (!std::isfinite(vals[i]))
                throw std::domain_error("LegendrePanels: amplitude is not finite");
            l1 += gl_.weights[i] * std::abs(vals[i]);
        }
        Fit f{lo, hi, std::vector<double>(order_), 0.0, l1 * m};
        for (std::size_t k = 0; k < order_; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < order_; ++i) s += gl_.weights[i] * vals[i] * p_[k * order_ + i];
            f.c[k] = 0.5 * (2.0 * k + 1.0) * s;
        }
        f.tail = std::abs(f.c[order_ - 1]) + std::abs(f.c[order_ - 2]);
        return f;
    }

private:
    std::size_t order_;
    const quad::GaussLegendre& gl_;
    std::vector<double> p_;
};

}  // namespace

LegendrePanels::LegendrePanels(const std::function<double(double)>& g, double a, double b,
                               const std::vector<double>& edges, const PanelOptions& opts)
    : a_(a), b_(b), order_(opts.order) {
    if (!(b > a)) throw std::invalid_argument("LegendrePanels: empty interval");
    if (opts.order < 4) throw std::invalid_argument("LegendrePanels: order must be >= 4");
    Fitter fitter(order_);

    std::vector<double> cuts{a};
    for (double e : edges)
        if (e > a && e < b) cuts.push_back(e);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Fit> pending, done;
    double l1 = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        pending.push_back(fitter.fit(g, cuts[i - 1], cuts[i]));
        l1 += pending.back().l1;
    }
    const double floor_abs = 1e-3 * opts.rel_tol * l1;

    while (!pending.empty()) {
        Fit f = std::move(pending.back());
        pending.pop_back();
        double m = 0.5 * (f.hi - f.lo);
        bool ok = f.tail * 2.0 * m <= std::max(opts.rel_tol * f.l1, floor_abs);
        bool room = done.size() + pending.size() + 2 <= opts.max_panels;
        if (ok || !room || m < 1e-14 * std::max(std::abs(f.lo), std::abs(f.hi))) {
            done.push_back(std::move(f));
            continue;
        }
        double mid = (f.lo > 0.0 && f.hi / f.lo > 4.0) ? std::sqrt(f.lo * f.hi) : 0.5 * (f.lo + f.hi);
        pending.push_back(fitter.fit(g, f.lo, mid));
        pending.push_back(fitter.fit(g, mid, f.hi));
    }
    std::sort(done.begin(), done.end(), [](const Fit& x, const Fit& y) { return x.lo < y.lo; });

    for (const auto& f : done) {
        double m = 0.5 * (f.hi - f.lo);
        centers_.push_back(0.5 * (f.lo + f.hi));
        half_widths_.push_back(m);
        coeffs_.insert(coeffs_.end(), f.c.begin(), f.c.end());
        integral_ += 2.0 * m * f.c[0];
        error_ += 2.0 * m * f.tail;
    }
}

std::complex<double> LegendrePanels::fourier(double t, double shift) const {
    if (t == 0.0) return {integral_, 0.0};
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<double> j(order_);
    std::complex<double> total{0.0, 0.0};
    for (std::size_t p = 0; p < centers_.size(); ++p) {
        double m = half_widths_[p];
        spherical_bessel_j(std::abs(m * t), order_, j.data());
        const double* c = &coeffs_[p * order_];
        std::complex<double> s{0.0, 0.0};
        for (std::size_t k = 0; k < order_; ++k) s += c[k] * j[k] * ipow[k % 4];
        if (t < 0.0) s = std::conj(s);  // j_k is even/odd with parity of k
        double ph = (centers_[p] - shift) * t;
        total += 2.0 * m * s * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return total;
}

}  // namespace casdec::osc
