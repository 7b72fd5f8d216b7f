#include "specount/potential.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <variant>

namespace specount {

namespace {

struct InverseSquare { double c; };
struct Indicator { double E; double c; };
struct EnergyShifted { double E; double c; };
struct PowerDecay { double a; double p; };
struct CompactSupport { std::vector<double> values; };
struct Scaled { double gamma; Potential inner; };
struct SumNode { std::vector<Potential> terms; };

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void require_finite(double x, const char* msg) {
    require(std::isfinite(x), msg);
}

// Shortest round-trip decimal form; the parser reads it back exactly.
std::string format_number(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

bool indicator_contains(double E, double c, std::int64_t n) {
    // Inclusive cutoff set {n : n^2 E <= c}, compared without the square root.
    double nn = static_cast<double>(n);
    return nn * nn * E <= c;
}

}  // namespace

struct Potential::Node {
    std::variant<InverseSquare, Indicator, EnergyShifted, PowerDecay,
                 CompactSupport, Scaled, SumNode> v;
};

Potential Potential::inverse_square(double c) {
    require_finite(c, "inverse_square: c must be finite");
    require(c > 0.0, "inverse_square: c must be > 0");
    return Potential(std::make_shared<const Node>(Node{InverseSquare{c}}));
}

Potential Potential::indicator(double E, double c) {
    require_finite(E, "indicator: E must be finite");
    require_finite(c, "indicator: c must be finite");
    require(E > 0.0, "indicator: E must be > 0");
    require(c > 0.0, "indicator: c must be > 0");
    return Potential(std::make_shared<const Node>(Node{Indicator{E, c}}));
}

Potential Potential::energy_shifted(double E, double c) {
    require_finite(E, "energy_shifted: E must be finite");
    require_finite(c, "energy_shifted: c must be finite");
    require(E > 0.0, "energy_shifted: E must be > 0");
    require(c > 0.0, "energy_shifted: c must be > 0");
    return Potential(std::make_shared<const Node>(Node{EnergyShifted{E, c}}));
}

Potential Potential::power_decay(double a, double p) {
    require_finite(a, "power: a must be finite");
    require_finite(p, "power: p must be finite");
    require(p > 0.0, "power: p must be > 0");
    return Potential(std::make_shared<const Node>(Node{PowerDecay{a, p}}));
}

Potential Potential::compact_support(std::vector<double> values) {
    for (double v : values) require_finite(v, "compact: values must be finite");
    return Potential(std::make_shared<const Node>(Node{CompactSupport{std::move(values)}}));
}

Potential Potential::scaled(double gamma, Potential inner) {
    require_finite(gamma, "scaled: g must be finite");
    return Potential(std::make_shared<const Node>(Node{Scaled{gamma, std::move(inner)}}));
}

Potential Potential::sum(std::vector<Potential> terms) {
    return Potential(std::make_shared<const Node>(Node{SumNode{std::move(terms)}}));
}

double Potential::eval(std::int64_t n) const {
    require(n >= 1, "Potential::eval: n must be >= 1");
    const Node* nd = node_.get();
    return std::visit(
        [n](const auto& alt) -> double {
            using T = std::decay_t<decltype(alt)>;
            if constexpr (std::is_same_v<T, InverseSquare>) {
                double nn = static_cast<double>(n);
                return -alt.c / (nn * nn);
            } else if constexpr (std::is_same_v<T, Indicator>) {
                return indicator_contains(alt.E, alt.c, n) ? alt.E : 0.0;
            } else if constexpr (std::is_same_v<T, EnergyShifted>) {
                double nn = static_cast<double>(n);
                double vc = -alt.c / (nn * nn);
                return indicator_contains(alt.E, alt.c, n) ? vc - alt.E : vc;
            } else if constexpr (std::is_same_v<T, PowerDecay>) {
                return alt.a * std::pow(static_cast<double>(n), -alt.p);
            } else if constexpr (std::is_same_v<T, CompactSupport>) {
                auto idx = static_cast<std::size_t>(n - 1);
                return idx < alt.values.size() ? alt.values[idx] : 0.0;
            } else if constexpr (std::is_same_v<T, Scaled>) {
                return alt.gamma * alt.inner.eval(n);
            } else {
                double acc = 0.0;
                for (const Potential& t : alt.terms) acc += t.eval(n);
                return acc;
            }
        },
        nd->v);
}

std::string Potential::to_string() const {
    return std::visit(
        [](const auto& alt) -> std::string {
            using T = std::decay_t<decltype(alt)>;
            if constexpr (std::is_same_v<T, InverseSquare>) {
                return "inverse_square(c=" + format_number(alt.c) + ")";
            } else if constexpr (std::is_same_v<T, Indicator>) {
                return "indicator(E=" + format_number(alt.E) + ",c=" + format_number(alt.c) + ")";
            } else if constexpr (std::is_same_v<T, EnergyShifted>) {
                return "energy_shifted(E=" + format_number(alt.E) + ",c=" + format_number(alt.c) + ")";
            } else if constexpr (std::is_same_v<T, PowerDecay>) {
                return "power(a=" + format_number(alt.a) + ",p=" + format_number(alt.p) + ")";
            } else if constexpr (std::is_same_v<T, CompactSupport>) {
                std::string out = "compact(";
                for (std::size_t i = 0; i < alt.values.size(); ++i) {
                    if (i) out += ',';
                    out += format_number(alt.values[i]);
                }
                return out + ")";
            } else if constexpr (std::is_same_v<T, Scaled>) {
                return "scaled(g=" + format_number(alt.gamma) + "," + alt.inner.to_string() + ")";
            } else {
                std::string out = "sum(";
                for (std::size_t i = 0; i < alt.terms.size(); ++i) {
                    if (i) out += ',';
                    out += alt.terms[i].to_string();
                }
                return out + ")";
            }
        },
        node_->v);
}

// ---------------------------------------------------------------------------
// Parser for the canonical grammar. Recursive descent, whitespace-insensitive.
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Potential parse() {
        Potential p = parse_spec();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return p;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("potential parse error at offset " +
                                    std::to_string(pos_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string parse_name() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    double parse_number() {
        skip_ws();
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(end - begin);
        if (!std::isfinite(v)) fail("number out of range");
        return v;
    }

    double parse_keyed(const char* key) {
        std::string name = parse_name();
        if (name != key) fail(std::string("expected key '") + key + "'");
        expect('=');
        return parse_number();
    }

    Potential parse_spec() {
        std::string name = parse_name();
        expect('(');
        Potential result = dispatch(name);
        expect(')');
        return result;
    }

    Potential dispatch(const std::string& name) {
        if (name == "inverse_square") {
            return Potential::inverse_square(parse_keyed("c"));
        }
        if (name == "indicator" || name == "energy_shifted") {
            double E = parse_keyed("E");
            expect(',');
            double c = parse_keyed("c");
            return name == "indicator" ? Potential::indicator(E, c)
                                       : Potential::energy_shifted(E, c);
        }
        if (name == "power") {
            double a = parse_keyed("a");
            expect(',');
            double p = parse_keyed("p");
            return Potential::power_decay(a, p);
        }
        if (name == "compact") {
            std::vector<double> values;
            if (!peek_is(')')) {
                values.push_back(parse_number());
                while (peek_is(',')) {
                    expect(',');
                    values.push_back(parse_number());
                }
            }
            return Potential::compact_support(std::move(values));
        }
        if (name == "scaled") {
            double g = parse_keyed("g");
            expect(',');
            Potential inner = parse_spec();
            return Potential::scaled(g, std::move(inner));
        }
        if (name == "sum") {
            std::vector<Potential> terms;
            if (!peek_is(')')) {
                terms.push_back(parse_spec());
                while (peek_is(',')) {
                    expect(',');
                    terms.push_back(parse_spec());
                }
            }
            return Potential::sum(std::move(terms));
        }
        fail("unknown potential '" + name + "'");
    }
};

}  // namespace

Potential Potential::parse(std::string_view text) {
    return Parser(text).parse();
}

// ---------------------------------------------------------------------------

double hypothesis_weight(const Potential& pot, std::int64_t cutoff) {
    require(cutoff >= 1, "hypothesis_weight: cutoff must be >= 1");
    long double acc = 0.0L;
    for (std::int64_t n = 1; n <= cutoff; ++n)
        acc += static_cast<long double>(n) * std::fabs(pot.eval(n));
    return static_cast<double>(acc);
}

std::complex<double> reference_solution(double c, std::int64_t n) {
    require_finite(c, "reference_solution: c must be finite");
    require(c > 0.25, "reference_solution: c must be > 1/4");
    require(n >= 1, "reference_solution: n must be >= 1");
    double mu = std::sqrt(c - 0.25);
    double ln = std::log(static_cast<double>(n));
    return std::polar(std::sqrt(static_cast<double>(n)), mu * ln);
}

std::complex<double> reference_potential(double c, std::int64_t n) {
    require(n >= 2, "reference_potential: n must be >= 2");
    std::complex<double> um = reference_solution(c, n - 1);
    std::complex<double> u0 = reference_solution(c, n);
    std::complex<double> up = reference_solution(c, n + 1);
    return (up - 2.0 * u0 + um) / u0;
}

}  // namespace specount
