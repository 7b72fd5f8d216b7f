// Acceptance suite: one pass/fail line per criterion, exit code = #failures.
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "specount/asymptotics.hpp"
#include "specount/potential.hpp"
#include "specount/spectral.hpp"

using namespace specount;

namespace {

int failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s | criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
                detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return std::string(buf);
}

double ols_slope(const std::vector<std::pair<double, double>>& xy) {
    double sx = 0, sy = 0;
    for (auto& [x, y] : xy) { sx += x; sy += y; }
    auto m = static_cast<double>(xy.size());
    double xb = sx / m, yb = sy / m;
    double sxx = 0, sxy = 0;
    for (auto& [x, y] : xy) {
        sxx += (x - xb) * (x - xb);
        sxy += (x - xb) * (y - yb);
    }
    return sxy / sxx;
}

// 1. sturm = nodes = dense on 500 randomized instances, exact integers.
void criterion_oracle_equivalence() {
    Timer timer;
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<std::int64_t> size(1, 60);
    std::uniform_real_distribution<double> lam(-2.0, 0.0);
    std::uniform_real_distribution<double> val(-3.0, 1.0);
    int agree = 0;
    const int total = 500;
    for (int inst = 0; inst < total; ++inst) {
        std::int64_t l = size(rng);
        std::vector<double> vals(static_cast<std::size_t>(l));
        for (double& v : vals) v = val(rng);
        Potential pot = Potential::compact_support(std::move(vals));
        double lambda = lam(rng);
        std::int64_t a = sturm_count(pot, lambda, l);
        std::int64_t b = node_count(pot, lambda, l);
        std::int64_t c = dense_count_oracle(pot, lambda, l);
        if (a == b && b == c) ++agree;
    }
    double t = timer.seconds();
    report(1, agree == total && t < 30.0,
           fmt("oracle equivalence: %d/%d exact matches in %.1fs (limit 30s)", agree,
               total, t));
}

// 2. Node-growth slope vs ln N near sqrt(c - 1/4)/pi.
void criterion_node_growth() {
    Timer timer;
    bool ok = true;
    std::string detail = "sign-flip growth:";
    struct Case { double c; double tol; } cases[] = {{5.0, 0.05}, {100.0, 0.02}};
    for (auto [c, tol] : cases) {
        std::vector<std::int64_t> ns;
        for (int j = 0; j < 10; ++j)
            ns.push_back(static_cast<std::int64_t>(
                std::llround(std::pow(10.0, 3.0 + 4.0 * j / 9.0))));
        auto growth = node_growth_curve(c, ns);
        std::vector<std::pair<double, double>> xy;
        for (auto& [x, y] : growth) xy.emplace_back(x, static_cast<double>(y));
        double slope = ols_slope(xy);
        double target = std::sqrt(c - 0.25) / std::numbers::pi;
        double rel = std::fabs(slope - target) / target;
        detail += fmt(" c=%g rel=%.3f (tol %.2f)", c, rel, tol);
        ok = ok && rel <= tol;
    }
    double t = timer.seconds();
    detail += fmt(", %.1fs (limit 20s)", t);
    report(2, ok && t < 20.0, detail);
}

// 3. Main limit: OLS slope of N_E vs -ln E within 10% of sqrt(c-1/4)/(2pi),
//    both for W = 0 and for a summable perturbation W.
void criterion_main_theorem() {
    Timer timer;
    EnergyGrid grid{1e-12, 1e-2, 3};
    auto rep0 = slope_estimate(
        counting_curve(Potential::inverse_square(100.0), grid), 100.0);
    auto repw = slope_estimate(
        counting_curve(Potential::sum({Potential::inverse_square(100.0),
                                       Potential::power_decay(10.0, 3.0)}),
                       grid),
        100.0);
    double t = timer.seconds();
    bool ok = rep0.relative_error <= 0.10 && repw.relative_error <= 0.10 && t < 300.0;
    report(3, ok,
           fmt("main limit: rel_err %.4f (W=0), %.4f (W=10/n^3), target %.5f, "
               "%.1fs (limit 300s)",
               rep0.relative_error, repw.relative_error, rep0.theoretical, t));
}

// 4. Kneser dichotomy across the critical coupling.
void criterion_kneser() {
    Timer timer;
    EnergyGrid grid{1e-10, 1e-2, 1};
    bool ok = true;
    std::string detail = "Kneser dichotomy:";
    struct Case { double c; Kneser expected; } cases[] = {
        {0.20, Kneser::Finite},
        {0.25, Kneser::Finite},
        {0.30, Kneser::Infinite},
        {1.00, Kneser::Infinite},
    };
    for (auto [c, expected] : cases) {
        Kneser got = kneser_classify(Potential::inverse_square(c), grid);
        detail += fmt(" c=%.2f=%s", c, std::string(kneser_name(got)).c_str());
        ok = ok && got == expected;
    }
    double t = timer.seconds();
    detail += fmt(", %.1fs (limit 120s)", t);
    report(4, ok && t < 120.0, detail);
}

// 5. Both splitting inequalities hold on 200 seeded instances.
void criterion_lemma_suite() {
    Timer timer;
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> support_len(1, 8);
    std::uniform_int_distribution<std::int64_t> trunc(20, 200);
    std::uniform_real_distribution<double> depth(-3.0, 0.0);
    std::uniform_real_distribution<double> log_e(std::log(1e-3), std::log(1.0));
    std::uniform_int_distribution<int> eps_step(1, 9);
    int holds = 0;
    const int total = 200;
    for (int inst = 0; inst < total; ++inst) {
        auto draw = [&]() {
            std::vector<double> vals(static_cast<std::size_t>(support_len(rng)));
            for (double& v : vals) v = depth(rng);
            return Potential::compact_support(std::move(vals));
        };
        Potential v = draw();
        Potential w = draw();
        LemmaReport rep = verify_splitting_inequalities(
            v, w, std::exp(log_e(rng)), 0.1 * eps_step(rng), trunc(rng));
        if (rep.upper_holds && rep.lower_holds) ++holds;
    }
    double t = timer.seconds();
    report(5, holds == total && t < 60.0,
           fmt("splitting inequalities: %d/%d hold in %.1fs (limit 60s)", holds,
               total, t));
}

// 6. Dense whole-line count lies in the decoupling bracket.
void criterion_decoupling() {
    Timer timer;
    std::mt19937_64 rng(2042);
    std::uniform_int_distribution<int> support_len(1, 6);
    std::uniform_real_distribution<double> depth(-3.0, 0.0);
    std::uniform_real_distribution<double> log_e(std::log(0.05), std::log(0.8));
    int bracketed = 0;
    const int total = 100;
    const std::int64_t l = 30;
    for (int inst = 0; inst < total; ++inst) {
        auto draw = [&]() {
            std::vector<double> vals(static_cast<std::size_t>(support_len(rng)));
            for (double& v : vals) v = depth(rng);
            return Potential::compact_support(std::move(vals));
        };
        Potential left = draw();
        Potential right = draw();
        double e = std::exp(log_e(rng));
        IntervalCount iv = whole_line_count(left, right, e);
        std::vector<double> vvals;
        for (std::int64_t n = -l; n <= l; ++n)
            vvals.push_back(n >= 1 ? right.eval(n) : left.eval(1 - n));
        std::int64_t dense =
            dense_count_oracle(Potential::compact_support(std::move(vvals)), -e, 2 * l + 1);
        if (dense >= iv.lower && dense <= iv.upper) ++bracketed;
    }
    double t = timer.seconds();
    report(6, bracketed == total,
           fmt("Dirichlet decoupling: %d/%d dense counts bracketed, %.1fs", bracketed,
               total, t));
}

// 7. Band-top reflection equals the dense count of eigenvalues >= 4+E.
void criterion_band_top() {
    Timer timer;
    std::mt19937_64 rng(3042);
    std::uniform_int_distribution<int> support_len(1, 8);
    std::uniform_int_distribution<std::int64_t> size(10, 60);
    std::uniform_real_distribution<double> value(-3.0, 3.0);
    std::uniform_real_distribution<double> log_e(std::log(1e-3), std::log(1.0));
    int matches = 0;
    const int total = 100;
    for (int inst = 0; inst < total; ++inst) {
        std::vector<double> vals(static_cast<std::size_t>(support_len(rng)));
        for (double& v : vals) v = value(rng);
        Potential pot = Potential::compact_support(std::move(vals));
        double e = std::exp(log_e(rng));
        std::int64_t l = size(rng);
        CountOptions fixed;
        fixed.method = Method::sturm;
        fixed.l_min = l;
        fixed.l_max = l;
        std::int64_t top = top_band_count(pot, e, fixed).count;
        std::vector<double> ev = dense_spectrum(pot, l);
        double bound = 4.0 + e - 1e-12 * std::max(1.0, 4.0 + e);
        std::int64_t above = 0;
        for (double x : ev)
            if (x >= bound) ++above;
        if (top == above) ++matches;
    }
    double t = timer.seconds();
    report(7, matches == total,
           fmt("band-top reflection: %d/%d exact matches, %.1fs", matches, total, t));
}

// 8. Reference potential: remainder decay slope and residual identity.
void criterion_reference_decay() {
    Timer timer;
    bool slopes_ok = true;
    std::string detail = "reference potential:";
    for (double c : {1.0, 5.0, 100.0}) {
        std::vector<std::pair<double, double>> xy;
        for (int j = 0; j <= 30; ++j) {
            auto n = static_cast<std::int64_t>(
                std::llround(std::pow(10.0, 2.0 + 3.0 * j / 30.0)));
            double nn = static_cast<double>(n);
            double gap = std::abs(reference_potential(c, n) + c / (nn * nn));
            if (gap > 0.0) xy.emplace_back(std::log(nn), std::log(gap));
        }
        double slope = ols_slope(xy);
        detail += fmt(" c=%g slope=%.2f", c, slope);
        slopes_ok = slopes_ok && std::fabs(slope - (-3.0)) <= 0.1;
    }
    detail += slopes_ok ? " (all in -3 +- 0.1)" : " (expected -3 +- 0.1)";

    double worst = 0.0;
    for (double c : {1.0, 5.0, 100.0}) {
        for (std::int64_t n = 2; n <= 10000; ++n) {
            auto um = reference_solution(c, n - 1);
            auto u0 = reference_solution(c, n);
            auto up = reference_solution(c, n + 1);
            auto lap = up - 2.0 * u0 + um;
            auto residual = -lap + reference_potential(c, n) * u0;
            double scale = std::abs(lap) + std::abs(reference_potential(c, n) * u0);
            if (scale > 0.0) worst = std::max(worst, std::abs(residual) / scale);
        }
    }
    bool residual_ok = worst <= 1e-12;
    detail += fmt(", residual %.1e (<= 1e-12)", worst);
    detail += fmt(", %.1fs", timer.seconds());
    report(8, slopes_ok && residual_ok, detail);
}

// 9. Box count bounded in E and consistent with the closed form.
void criterion_box() {
    Timer timer;
    std::int64_t lo = 1 << 30, hi = -(1 << 30);
    bool pairs_ok = true;
    for (double e : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
        BoxCount b = explicit_box_count(e, 0.5, 5.0);
        lo = std::min(lo, b.engine);
        hi = std::max(hi, b.engine);
        pairs_ok = pairs_ok && std::llabs(b.engine - b.closed_form) <= 1;
    }
    bool bounded = hi - lo <= 1;
    report(9, bounded && pairs_ok,
           fmt("box operator: engine range [%" PRId64 ",%" PRId64
               "], closed form within +-1 at every point, %.1fs",
               lo, hi, timer.seconds()));
}

}  // namespace

int main() {
    criterion_oracle_equivalence();
    criterion_node_growth();
    criterion_main_theorem();
    criterion_kneser();
    criterion_lemma_suite();
    criterion_decoupling();
    criterion_band_top();
    criterion_reference_decay();
    criterion_box();
    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria failed\n", failures);
    return failures;
}
