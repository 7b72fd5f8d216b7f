#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace specount {

/// Immutable symbolic description of a decaying potential sequence V(n), n >= 1.
/// Copies are cheap (shared tree) and safe to evaluate from multiple threads.
class Potential {
public:
    // Closed-form families.
    static Potential inverse_square(double c);            // -c/n^2, c > 0
    static Potential indicator(double E, double c);       // E on {n : n^2 E <= c}, else 0
    static Potential energy_shifted(double E, double c);  // inverse_square(c) - indicator(E, c)
    static Potential power_decay(double a, double p);     // a * n^-p, p > 0
    static Potential compact_support(std::vector<double> values);  // values[n-1], 0 past the end
    static Potential scaled(double gamma, Potential inner);
    static Potential sum(std::vector<Potential> terms);
    static Potential zero() { return compact_support({}); }

    /// V(n). Throws std::invalid_argument for n < 1.
    double eval(std::int64_t n) const;

    /// Canonical textual form, e.g. "sum(inverse_square(c=5),power(a=10,p=3))".
    std::string to_string() const;

    /// Parses the textual grammar (whitespace-insensitive). Throws
    /// std::invalid_argument with a position hint on malformed input.
    static Potential parse(std::string_view text);

    struct Node;  // internal variant tree

private:
    explicit Potential(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Partial sum  sum_{n=1}^{cutoff} n |V(n)|,  a numeric proxy for the
/// summability hypothesis on the perturbation. Monotone in cutoff; the
/// caller judges convergence by comparing cutoffs.
double hypothesis_weight(const Potential& pot, std::int64_t cutoff);

/// u~_c(n) = sqrt(n) exp(i sqrt(c - 1/4) ln n).  Requires c > 1/4, n >= 1.
std::complex<double> reference_solution(double c, std::int64_t n);

/// V~_c(n) = (u~(n+1) - 2 u~(n) + u~(n-1)) / u~(n).  Requires n >= 2.
/// Satisfies (-Delta + V~_c) u~_c = 0 identically by construction.
std::complex<double> reference_potential(double c, std::int64_t n);

}  // namespace specount
