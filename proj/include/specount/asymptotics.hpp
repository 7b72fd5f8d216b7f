#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specount/spectral.hpp"

namespace specount {

/// Geometric energy grid E_k = E_max * 10^(-k/points_per_decade), descending,
/// covering [E_min, E_max].
struct EnergyGrid {
    double e_min = 0.0;
    double e_max = 0.0;
    int points_per_decade = 1;

    std::vector<double> energies() const;  // validates, throws on bad fields
};

struct CurvePoint {
    double E = 0.0;
    double neg_ln_e = 0.0;
    CountResult result;
};

/// N_E sampled over an energy grid, descending in E.
struct CountingCurve {
    std::vector<CurvePoint> entries;
};

/// CSV with header `E,negLnE,count,L,method,converged`.
std::string to_csv(const CountingCurve& curve);
CountingCurve curve_from_csv(std::istream& in);

/// Least-squares fit of count against -ln E.
struct SlopeReport {
    double slope = 0.0;
    double intercept = 0.0;
    double std_err = 0.0;      // standard error of the slope
    double theoretical = 0.0;
    double relative_error = 0.0;
    double window_e_min = 0.0;
    double window_e_max = 0.0;
};

std::string to_json(const SlopeReport& r);

/// One randomized check of the two counting-function splitting inequalities
/// at a common truncation.
struct LemmaReport {
    double E = 0.0;
    double epsilon = 0.0;
    std::int64_t L = 0;
    std::int64_t lhs = 0;
    std::int64_t upper_rhs_sum = 0;
    std::int64_t lower_rhs_diff = 0;
    bool upper_holds = false;
    bool lower_holds = false;
};

std::string to_json(const LemmaReport& r);

enum class Kneser { Finite, Infinite, Undetermined };

std::string_view kneser_name(Kneser k);

/// Engine count vs. sine-node closed form for the constant-depth box.
struct BoxCount {
    std::int64_t engine = 0;
    std::int64_t closed_form = 0;
};

std::string to_json(const BoxCount& b);

// ---------------------------------------------------------------------------

/// (1/2pi) sqrt(c - 1/4) for c > 1/4; 0 at or below the critical coupling.
double theoretical_slope(double c);

/// Evaluates count_bound_states at every grid energy. Points are independent
/// and run on a small thread pool; output order is canonical (E descending).
/// Per-point non-convergence is recorded in the flags, never thrown.
CountingCurve counting_curve(const Potential& pot, const EnergyGrid& grid,
                             const CountOptions& opts = {});

/// OLS over the converged entries (at least 3 required). `c` fills the
/// theoretical slope; without it the theoretical value is 0 and the error
/// field falls back to |slope|.
SlopeReport slope_estimate(const CountingCurve& curve,
                           std::optional<double> c = std::nullopt);

/// Sign flips of the zero-energy solution for V = -c/n^2 up to each N,
/// paired with ln N. The leading-order slope vs ln N is sqrt(c - 1/4)/pi.
std::vector<std::pair<double, std::int64_t>> node_growth_curve(
    double c, const std::vector<std::int64_t>& n_values);

/// Saturation heuristic over the tail of a counting curve: constant tail =>
/// Finite, growing tail => Infinite, anything else (including a
/// non-converged tail entry) => Undetermined.
Kneser kneser_classify(const Potential& pot, const EnergyGrid& grid,
                       int saturation_window = 5, const CountOptions& opts = {});

/// The classification rule alone, for synthetic curves.
Kneser classify_curve(const CountingCurve& curve, int saturation_window);

/// Checks both splitting inequalities
///   N(V+W) <= N(V/(1-eps)) + N(W/eps)
///   N(V+W) >= N((1-eps)V) - N(-((1-eps)/eps) W)
/// with all five counts taken at the same truncation L and lambda = -E.
LemmaReport verify_splitting_inequalities(const Potential& v, const Potential& w,
                                          double E, double epsilon,
                                          std::int64_t L);

/// Box operator -Delta - E/(eps(1-eps)) on the truncation
/// L = floor(sqrt(c(1-eps)/E)): engine count vs the explicit sine-solution
/// node count floor(kL/pi), 2 - 2cos k = E(1/(eps(1-eps)) - 1). Both stay
/// bounded as E tends to 0 at fixed eps.
BoxCount explicit_box_count(double E, double epsilon, double c,
                            const CountOptions& opts = {});

}  // namespace specount
