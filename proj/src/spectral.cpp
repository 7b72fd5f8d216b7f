#include "specount/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "format_util.hpp"

namespace specount {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void validate_instance(double lambda, std::int64_t L) {
    require(std::isfinite(lambda), "count: lambda must be finite");
    require(L >= 1, "count: L must be >= 1");
}

// Pivot recurrence of the LDL^T factorization of J - lambda I. Negative
// pivots count eigenvalues below lambda; a zero pivot is replaced by a
// negative number of smallest normal magnitude so that ties land inside
// the closed interval (-inf, lambda].
template <class VF>
std::int64_t sturm_kernel(VF&& v, double lambda, std::int64_t L) {
    std::int64_t negative = 0;
    double d = 1.0;
    for (std::int64_t n = 1; n <= L; ++n) {
        double diag = (2.0 + v(n)) - lambda;
        double dn = (n == 1) ? diag : diag - 1.0 / d;
        if (std::isinf(dn))
            dn = std::copysign(std::numeric_limits<double>::max(), dn);
        if (dn == 0.0)
            dn = -std::numeric_limits<double>::min();
        if (dn < 0.0) ++negative;
        d = dn;
    }
    return negative;
}

// Difference-form propagation of (-Delta + V) u = lambda u with u(0) = 0.
// Interleaves w(n) = w(n-1) + (V(n) - lambda) u(n) and u(n+1) = u(n) + w(n)
// so that V - lambda only ever meets quantities of its own magnitude.
// Power-of-two rescaling keeps the pair finite without touching signs.
template <class VF, class SignSink>
std::int64_t node_kernel(VF&& v, double lambda, std::int64_t L, double u1,
                         SignSink&& sink) {
    constexpr double kLimit = 0x1p512;
    constexpr double kShrink = 0x1p-512;
    double u = u1;  // u(1)
    double w = u1;  // w(0) = u(1) - u(0)
    std::int64_t nodes = 0;
    for (std::int64_t n = 1; n <= L; ++n) {
        w += (v(n) - lambda) * u;
        double unext = u + w;
        // Sign-based flip test; a product could over- or underflow.
        bool flip = (u > 0.0 && unext < 0.0) || (u < 0.0 && unext > 0.0);
        if (unext == 0.0 || flip) ++nodes;
        sink(unext);
        u = unext;
        double mag = std::max(std::fabs(u), std::fabs(w));
        if (mag > kLimit) {
            u *= kShrink;
            w *= kShrink;
        } else if (mag < kShrink && mag > 0.0) {
            u *= kLimit;
            w *= kLimit;
        }
    }
    return nodes;
}

struct NullSink {
    void operator()(double) const {}
};

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::sturm: return "sturm";
        case Method::nodes: return "nodes";
        case Method::dense: return "dense";
    }
    throw std::logic_error("method_name: bad enum");
}

Method method_from_name(std::string_view name) {
    if (name == "sturm") return Method::sturm;
    if (name == "nodes") return Method::nodes;
    if (name == "dense") return Method::dense;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::int64_t sturm_count(const Potential& pot, double lambda, std::int64_t L) {
    validate_instance(lambda, L);
    return sturm_kernel([&pot](std::int64_t n) { return pot.eval(n); }, lambda, L);
}

std::int64_t node_count(const Potential& pot, double lambda, std::int64_t L) {
    validate_instance(lambda, L);
    return node_kernel([&pot](std::int64_t n) { return pot.eval(n); }, lambda, L,
                       1.0, NullSink{});
}

std::vector<double> dense_spectrum(const Potential& pot, std::int64_t L) {
    require(L >= 1, "dense_spectrum: L must be >= 1");
    require(L <= 512, "dense_spectrum: L must be <= 512");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(L, L);
    for (std::int64_t i = 0; i < L; ++i) {
        m(i, i) = 2.0 + pot.eval(i + 1);
        if (i + 1 < L) {
            m(i, i + 1) = -1.0;
            m(i + 1, i) = -1.0;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense_spectrum: eigensolver failed");
    const auto& ev = solver.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

std::int64_t dense_count_oracle(const Potential& pot, double lambda, std::int64_t L) {
    validate_instance(lambda, L);
    std::vector<double> ev = dense_spectrum(pot, L);
    double slack = 1e-12 * std::max(1.0, std::fabs(lambda));
    double bound = lambda + slack;
    return static_cast<std::int64_t>(
        std::upper_bound(ev.begin(), ev.end(), bound) - ev.begin());
}

namespace detail {

std::int64_t node_count_scaled(const Potential& pot, double lambda,
                               std::int64_t L, double u1) {
    validate_instance(lambda, L);
    require(u1 > 0.0 && std::isfinite(u1), "node_count_scaled: u1 must be > 0");
    return node_kernel([&pot](std::int64_t n) { return pot.eval(n); }, lambda, L,
                       u1, NullSink{});
}

std::vector<signed char> node_sign_sequence(const Potential& pot, double lambda,
                                            std::int64_t L) {
    validate_instance(lambda, L);
    std::vector<signed char> signs;
    signs.reserve(static_cast<std::size_t>(L));
    node_kernel([&pot](std::int64_t n) { return pot.eval(n); }, lambda, L, 1.0,
                [&signs](double unext) {
                    signs.push_back(unext > 0.0 ? 1 : (unext < 0.0 ? -1 : 0));
                });
    return signs;
}

double effective_coupling(const Potential& pot) {
    constexpr std::int64_t kScanLimit = 10000;
    double ceff = 0.25;
    for (std::int64_t n = 1; n <= kScanLimit; ++n) {
        double nn = static_cast<double>(n);
        ceff = std::max(ceff, nn * nn * std::fabs(pot.eval(n)));
    }
    return ceff;
}

}  // namespace detail

CountResult count_bound_states(const Potential& pot, double E,
                               const CountOptions& opts) {
    require(std::isfinite(E) && E > 0.0, "count_bound_states: E must be > 0");
    require(opts.safety >= 1.0, "count_bound_states: safety must be >= 1");
    require(opts.l_min >= 1, "count_bound_states: l_min must be >= 1");
    require(opts.l_max >= opts.l_min, "count_bound_states: l_max < l_min");

    auto counter = [&pot, &opts](double lambda, std::int64_t L) {
        switch (opts.method) {
            case Method::sturm: return sturm_count(pot, lambda, L);
            case Method::nodes: return node_count(pot, lambda, L);
            case Method::dense: return dense_count_oracle(pot, lambda, L);
        }
        throw std::logic_error("count_bound_states: bad method");
    };

    double ceff = detail::effective_coupling(pot);
    double scale = opts.safety * std::sqrt(ceff / E);
    std::int64_t l0 = opts.l_min;
    if (scale > static_cast<double>(l0) && std::isfinite(scale))
        l0 = static_cast<std::int64_t>(std::ceil(scale));
    l0 = std::min(l0, opts.l_max);

    double lambda = -E;
    std::int64_t L = l0;
    std::int64_t count = counter(lambda, L);
    int stable = 0;
    while (stable < 2 && L < opts.l_max) {
        std::int64_t next = L > opts.l_max / 2 ? opts.l_max : L * 2;
        std::int64_t c = counter(lambda, next);
        stable = (c == count) ? stable + 1 : 0;
        count = c;
        L = next;
    }
    return CountResult{E, count, L, opts.method, stable >= 2};
}

IntervalCount whole_line_count(const Potential& left, const Potential& right,
                               double E, const CountOptions& opts) {
    std::int64_t s = count_bound_states(left, E, opts).count +
                     count_bound_states(right, E, opts).count;
    return IntervalCount{std::max<std::int64_t>(0, s - 1), s + 1};
}

CountResult top_band_count(const Potential& pot, double E,
                           const CountOptions& opts) {
    return count_bound_states(Potential::scaled(-1.0, pot), E, opts);
}

std::string to_json(const CountResult& r) {
    std::string out = "{\"E\":";
    out += fmt17(r.E);
    out += ",\"count\":";
    out += std::to_string(r.count);
    out += ",\"L\":";
    out += std::to_string(r.L);
    out += ",\"method\":\"";
    out += method_name(r.method);
    out += "\",\"converged\":";
    out += r.converged ? "true" : "false";
    out += "}";
    return out;
}

}  // namespace specount
