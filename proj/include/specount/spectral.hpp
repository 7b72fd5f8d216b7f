#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "specount/potential.hpp"

namespace specount {

enum class Method { sturm, nodes, dense };

std::string_view method_name(Method m);
Method method_from_name(std::string_view name);  // throws on unknown name

/// Options for the adaptive truncation engine.
struct CountOptions {
    Method method = Method::nodes;
    double safety = 4.0;                        // K, initial L = K sqrt(c_eff/E)
    std::int64_t l_min = 1024;
    std::int64_t l_max = std::int64_t{1} << 31;
};

/// An eigenvalue count at energy -E on a finite truncation.
struct CountResult {
    double E = 0.0;
    std::int64_t count = 0;
    std::int64_t L = 0;
    Method method = Method::nodes;
    bool converged = false;
};

/// Serializes with keys {"E","count","L","method","converged"}.
std::string to_json(const CountResult& r);

/// Two-sided bracket produced by Dirichlet decoupling.
struct IntervalCount {
    std::int64_t lower = 0;
    std::int64_t upper = 0;
};

// ---------------------------------------------------------------------------
// Fixed-truncation counters. All three count eigenvalues of the L x L
// Jacobi matrix (diagonal 2 + V(n), off-diagonal -1, Dirichlet at 0 and
// L+1) in the closed interval (-inf, lambda].
// ---------------------------------------------------------------------------

/// Inertia count via the pivot recurrence d_n = (2 + V(n)) - lambda - 1/d_{n-1}.
/// A zero pivot is treated as negative so that ties are counted inclusively;
/// overflowing pivots saturate at the largest finite value.
std::int64_t sturm_count(const Potential& pot, double lambda, std::int64_t L);

/// Oscillation count: propagates the solution of (-Delta + V) u = lambda u
/// with u(0) = 0, u(1) = 1 in the difference form
///     w(n) = w(n-1) + (V(n) - lambda) u(n),  u(n+1) = u(n) + w(n)
/// and counts nodes (u(n+1) = 0 or u(n) u(n+1) < 0 for n = 1..L). The pair
/// (u, w) is rescaled by powers of two, so no overflow can occur and tiny
/// V - lambda is never rounded away against the constant 2.
std::int64_t node_count(const Potential& pot, double lambda, std::int64_t L);

/// Independent test oracle: dense symmetric eigensolve, L <= 512 only.
/// Counts eigenvalues <= lambda + 1e-12 * max(1, |lambda|).
std::int64_t dense_count_oracle(const Potential& pot, double lambda, std::int64_t L);

/// All eigenvalues of the dense truncation, ascending. L <= 512 only.
std::vector<double> dense_spectrum(const Potential& pot, std::int64_t L);

// ---------------------------------------------------------------------------
// Infinite-volume estimates on adaptive truncations.
// ---------------------------------------------------------------------------

/// N_E(-Delta + V): eigenvalues <= -E, estimated by doubling the truncation
/// until the count is identical across two consecutive doublings.
CountResult count_bound_states(const Potential& pot, double E,
                               const CountOptions& opts = {});

/// Whole-line count bracket by Dirichlet decoupling at the 0-1 bond.
/// `left` is the reflected half-line potential (left(m) = V(1-m), m >= 1),
/// `right` covers sites n >= 1. Removing the coupling is a rank-two
/// perturbation with one eigenvalue of each sign, so the true count lies
/// within one of the decoupled sum S in each direction.
IntervalCount whole_line_count(const Potential& left, const Potential& right,
                               double E, const CountOptions& opts = {});

/// Eigenvalues in [4+E, inf): counted as bound states of the sign-flipped
/// potential, using the unitary (Uu)(n) = (-1)^n u(n) which maps
/// -Delta + V to 4 - (-Delta - V).
CountResult top_band_count(const Potential& pot, double E,
                           const CountOptions& opts = {});

namespace detail {

/// Node count with scaled initial data u(1) = u1 > 0 (w(0) = u1).
/// The count is invariant under positive rescaling; exposed for tests.
std::int64_t node_count_scaled(const Potential& pot, double lambda,
                               std::int64_t L, double u1);

/// Sign of u(n+1) for n = 1..L (-1, 0, +1), for comparison against the
/// plain three-term recurrence. Allocates; test-sized L only.
std::vector<signed char> node_sign_sequence(const Potential& pot, double lambda,
                                            std::int64_t L);

/// max(1/4, sup_{n <= 10^4} n^2 |V(n)|), the coupling scale that sets the
/// initial truncation.
double effective_coupling(const Potential& pot);

}  // namespace detail

}  // namespace specount
