#include "specount/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "format_util.hpp"

namespace specount {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

std::vector<double> EnergyGrid::energies() const {
    require(std::isfinite(e_min) && e_min > 0.0, "grid: e_min must be > 0");
    require(std::isfinite(e_max) && e_max > e_min, "grid: e_max must be > e_min");
    require(points_per_decade >= 1, "grid: points_per_decade must be >= 1");
    double decades = std::log10(e_max) - std::log10(e_min);
    auto last = static_cast<std::int64_t>(
        std::floor(points_per_decade * decades + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(last) + 1);
    double x0 = std::log10(e_max);
    for (std::int64_t k = 0; k <= last; ++k) {
        double e = std::pow(10.0, x0 - static_cast<double>(k) / points_per_decade);
        out.push_back(e);
    }
    return out;
}

double theoretical_slope(double c) {
    require(std::isfinite(c), "theoretical_slope: c must be finite");
    if (c <= 0.25) return 0.0;
    return std::sqrt(c - 0.25) / (2.0 * std::numbers::pi);
}

CountingCurve counting_curve(const Potential& pot, const EnergyGrid& grid,
                             const CountOptions& opts) {
    std::vector<double> energies = grid.energies();
    CountingCurve curve;
    curve.entries.resize(energies.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= energies.size()) return;
            try {
                double e = energies[i];
                CountResult r = count_bound_states(pot, e, opts);
                curve.entries[i] = CurvePoint{e, -std::log(e), r};
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    unsigned n_threads = std::min<unsigned>(
        std::max(1u, std::thread::hardware_concurrency()),
        static_cast<unsigned>(energies.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return curve;
}

SlopeReport slope_estimate(const CountingCurve& curve, std::optional<double> c) {
    std::vector<const CurvePoint*> used;
    for (const auto& p : curve.entries)
        if (p.result.converged) used.push_back(&p);
    require(used.size() >= 3, "slope_estimate: need at least 3 converged entries");

    auto m = static_cast<double>(used.size());
    double sx = 0.0, sy = 0.0;
    for (const auto* p : used) {
        sx += p->neg_ln_e;
        sy += static_cast<double>(p->result.count);
    }
    double xbar = sx / m, ybar = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (const auto* p : used) {
        double dx = p->neg_ln_e - xbar;
        sxx += dx * dx;
        sxy += dx * (static_cast<double>(p->result.count) - ybar);
    }
    require(sxx > 0.0, "slope_estimate: degenerate abscissa");

    SlopeReport rep;
    rep.slope = sxy / sxx;
    rep.intercept = ybar - rep.slope * xbar;
    double ss_res = 0.0;
    for (const auto* p : used) {
        double r = static_cast<double>(p->result.count) -
                   (rep.slope * p->neg_ln_e + rep.intercept);
        ss_res += r * r;
    }
    rep.std_err = used.size() > 2
                      ? std::sqrt(ss_res / ((m - 2.0) * sxx))
                      : 0.0;
    rep.theoretical = c ? theoretical_slope(*c) : 0.0;
    rep.relative_error = rep.theoretical > 0.0
                             ? std::fabs(rep.slope - rep.theoretical) / rep.theoretical
                             : std::fabs(rep.slope);
    auto [emin_it, emax_it] = std::minmax_element(
        used.begin(), used.end(),
        [](const CurvePoint* a, const CurvePoint* b) { return a->E < b->E; });
    rep.window_e_min = (*emin_it)->E;
    rep.window_e_max = (*emax_it)->E;
    return rep;
}

std::vector<std::pair<double, std::int64_t>> node_growth_curve(
    double c, const std::vector<std::int64_t>& n_values) {
    require(std::isfinite(c) && c > 0.25, "node_growth_curve: c must be > 1/4");
    Potential pot = Potential::inverse_square(c);
    std::vector<std::pair<double, std::int64_t>> out;
    out.reserve(n_values.size());
    std::int64_t prev = 0;
    for (std::int64_t n : n_values) {
        require(n >= 1, "node_growth_curve: N values must be >= 1");
        require(n > prev, "node_growth_curve: N values must be ascending");
        prev = n;
        out.emplace_back(std::log(static_cast<double>(n)),
                         node_count(pot, 0.0, n));
    }
    return out;
}

Kneser classify_curve(const CountingCurve& curve, int saturation_window) {
    require(saturation_window >= 1, "kneser: saturation_window must be >= 1");
    auto w = static_cast<std::size_t>(saturation_window);
    if (curve.entries.size() < w) return Kneser::Undetermined;
    auto tail = curve.entries.end() - static_cast<std::ptrdiff_t>(w);
    bool all_equal = true;
    bool non_decreasing = true;
    for (auto it = tail; it != curve.entries.end(); ++it) {
        if (!it->result.converged) return Kneser::Undetermined;
        if (it != tail) {
            if (it->result.count != std::prev(it)->result.count) all_equal = false;
            if (it->result.count < std::prev(it)->result.count) non_decreasing = false;
        }
    }
    if (all_equal) return Kneser::Finite;
    // "Strictly increasing across the window": the counts grow over the
    // window without ever stepping back. A pointwise-strict reading can
    // never fire here: integer counts grow like slope * ln 10 / ppd per
    // grid point, which is < 1 for every admissible coupling and grid.
    if (non_decreasing &&
        curve.entries.back().result.count > tail->result.count)
        return Kneser::Infinite;
    return Kneser::Undetermined;
}

Kneser kneser_classify(const Potential& pot, const EnergyGrid& grid,
                       int saturation_window, const CountOptions& opts) {
    return classify_curve(counting_curve(pot, grid, opts), saturation_window);
}

LemmaReport verify_splitting_inequalities(const Potential& v, const Potential& w,
                                          double E, double epsilon,
                                          std::int64_t L) {
    require(std::isfinite(E) && E > 0.0, "lemma: E must be > 0");
    require(epsilon > 0.0 && epsilon < 1.0, "lemma: epsilon must be in (0,1)");
    require(L >= 1, "lemma: L must be >= 1");

    double lambda = -E;
    auto count = [lambda, L](const Potential& p) {
        return sturm_count(p, lambda, L);
    };

    LemmaReport rep;
    rep.E = E;
    rep.epsilon = epsilon;
    rep.L = L;
    rep.lhs = count(Potential::sum({v, w}));
    rep.upper_rhs_sum = count(Potential::scaled(1.0 / (1.0 - epsilon), v)) +
                        count(Potential::scaled(1.0 / epsilon, w));
    rep.lower_rhs_diff = count(Potential::scaled(1.0 - epsilon, v)) -
                         count(Potential::scaled(-(1.0 - epsilon) / epsilon, w));
    rep.upper_holds = rep.lhs <= rep.upper_rhs_sum;
    rep.lower_holds = rep.lhs >= rep.lower_rhs_diff;
    return rep;
}

BoxCount explicit_box_count(double E, double epsilon, double c,
                            const CountOptions& opts) {
    require(std::isfinite(E) && E > 0.0, "box: E must be > 0");
    require(epsilon > 0.0 && epsilon < 1.0, "box: epsilon must be in (0,1)");
    require(std::isfinite(c) && c > 0.25, "box: c must be > 1/4");

    auto box_l = static_cast<std::int64_t>(
        std::floor(std::sqrt(c * (1.0 - epsilon) / E)));
    BoxCount out;
    if (box_l < 1) return out;  // box empty, nothing to count

    Potential pot = Potential::scaled(
        -1.0 / epsilon, Potential::indicator(E / (1.0 - epsilon), c));
    CountOptions fixed = opts;
    fixed.l_min = box_l;
    fixed.l_max = box_l;
    out.engine = count_bound_states(pot, E, fixed).count;

    // Sine solution sin(kn) inside the box: depth exceeds E by
    // q = E (1/(eps(1-eps)) - 1), and 2 - 2cos k = q.
    double q = E * (1.0 / (epsilon * (1.0 - epsilon)) - 1.0);
    double k = q >= 4.0 ? std::numbers::pi : std::acos(1.0 - q / 2.0);
    out.closed_form = static_cast<std::int64_t>(
        std::floor(k * static_cast<double>(box_l) / std::numbers::pi));
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string_view kneser_name(Kneser k) {
    switch (k) {
        case Kneser::Finite: return "Finite";
        case Kneser::Infinite: return "Infinite";
        case Kneser::Undetermined: return "Undetermined";
    }
    throw std::logic_error("kneser_name: bad enum");
}

std::string to_csv(const CountingCurve& curve) {
    std::string out = "E,negLnE,count,L,method,converged\n";
    for (const auto& p : curve.entries) {
        out += fmt17(p.E);
        out += ',';
        out += fmt17(p.neg_ln_e);
        out += ',';
        out += std::to_string(p.result.count);
        out += ',';
        out += std::to_string(p.result.L);
        out += ',';
        out += method_name(p.result.method);
        out += ',';
        out += p.result.converged ? "true" : "false";
        out += '\n';
    }
    return out;
}

CountingCurve curve_from_csv(std::istream& in) {
    CountingCurve curve;
    std::string line;
    if (!std::getline(in, line) || line != "E,negLnE,count,L,method,converged")
        throw std::invalid_argument("curve CSV: missing or malformed header");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 6)
            throw std::invalid_argument("curve CSV: bad row at line " +
                                        std::to_string(lineno));
        CurvePoint p;
        try {
            p.E = std::stod(fields[0]);
            p.neg_ln_e = std::stod(fields[1]);
            p.result.count = std::stoll(fields[2]);
            p.result.L = std::stoll(fields[3]);
        } catch (const std::exception&) {
            throw std::invalid_argument("curve CSV: bad number at line " +
                                        std::to_string(lineno));
        }
        p.result.E = p.E;
        p.result.method = method_from_name(fields[4]);
        if (fields[5] == "true") {
            p.result.converged = true;
        } else if (fields[5] == "false") {
            p.result.converged = false;
        } else {
            throw std::invalid_argument("curve CSV: bad flag at line " +
                                        std::to_string(lineno));
        }
        curve.entries.push_back(p);
    }
    return curve;
}

std::string to_json(const SlopeReport& r) {
    std::string out = "{\"slope\":";
    out += fmt17(r.slope);
    out += ",\"intercept\":";
    out += fmt17(r.intercept);
    out += ",\"stderr\":";
    out += fmt17(r.std_err);
    out += ",\"theoretical\":";
    out += fmt17(r.theoretical);
    out += ",\"relative_error\":";
    out += fmt17(r.relative_error);
    out += ",\"window\":[";
    out += fmt17(r.window_e_min);
    out += ",";
    out += fmt17(r.window_e_max);
    out += "]}";
    return out;
}

std::string to_json(const LemmaReport& r) {
    std::string out = "{\"E\":";
    out += fmt17(r.E);
    out += ",\"epsilon\":";
    out += fmt17(r.epsilon);
    out += ",\"L\":";
    out += std::to_string(r.L);
    out += ",\"lhs\":";
    out += std::to_string(r.lhs);
    out += ",\"upper_rhs_sum\":";
    out += std::to_string(r.upper_rhs_sum);
    out += ",\"lower_rhs_diff\":";
    out += std::to_string(r.lower_rhs_diff);
    out += ",\"upper_holds\":";
    out += r.upper_holds ? "true" : "false";
    out += ",\"lower_holds\":";
    out += r.lower_holds ? "true" : "false";
    out += "}";
    return out;
}

std::string to_json(const BoxCount& b) {
    return "{\"engine\":" + std::to_string(b.engine) +
           ",\"closed_form\":" + std::to_string(b.closed_form) + "}";
}

}  // namespace specount
