#include "inls/scaling.hpp"

#include "inls/errors.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace inls {

Rational ExtRational::reciprocal() const {
    if (infinite_) return Rational(0);
    if (value_ == 0) throw ValidationError("reciprocal of zero exponent");
    Rational out = 1 / value_;
    out.canonicalize();
    return out;
}

double ExtRational::to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_.get_d();
}

std::string ExtRational::str() const { return infinite_ ? "inf" : value_.get_str(); }

Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    if (s.empty()) throw ValidationError("empty rational");

    if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational out;
        if (out.set_str(s, 10) != 0 || out.get_den() == 0)
            throw ValidationError("malformed rational '" + s + "'");
        out.canonicalize();
        return out;
    }

    // Decimal with optional exponent, converted exactly.
    std::string mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mantissa = s.substr(0, e);
        try {
            std::size_t used = 0;
            exponent = std::stol(s.substr(e + 1), &used);
            if (used != s.size() - e - 1) throw ValidationError("");
        } catch (const std::exception&) {
            throw ValidationError("malformed exponent in '" + s + "'");
        }
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
        negative = mantissa[0] == '-';
        mantissa.erase(mantissa.begin());
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (seen_dot) throw ValidationError("malformed rational '" + s + "'");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_dot) ++frac_digits;
        } else {
            throw ValidationError("malformed rational '" + s + "'");
        }
    }
    if (digits.empty()) throw ValidationError("malformed rational '" + s + "'");

    mpz_class num(digits, 10);
    mpz_class ten_pow;
    long shift = exponent - frac_digits;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
    Rational out = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
    out.canonicalize();
    return negative ? Rational(-out) : out;
}

Power::Power(const Rational& p) : p_(p) {
    p_.canonicalize();
    if (p_ <= 0) throw ValidationError("nonlinearity power must be positive, got " + p_.get_str());
}

Power Power::parse(std::string_view text) { return Power(parse_rational(text)); }

namespace {

Rational canon(Rational x) {
    x.canonicalize();
    return x;
}

}  // namespace

ExponentProfile exponent_profile(const Power& power) {
    const Rational& p = power.value();
    const Rational two(2);
    if (p > two) {
        return ExponentProfile{
            power,
            ExtRational::infinity(),
            canon(1 - 2 / p),
            canon((p * p + 2 * p) / 2),
            canon(p + 2),
            canon((p * p + 2 * p) / (2 * p + 2)),
            canon((p + 2) / (p + 1)),
        };
    }
    return ExponentProfile{
        power,
        ExtRational(canon(4 / (4 - p))),
        Rational(1, 2),
        canon(2 * p + 4),
        canon((4 * p + 8) / p),
        canon((2 * p + 4) / (p + 1)),
        canon((4 * p + 8) / (3 * p + 8)),
    };
}

ExponentProfileReal exponent_profile_real(double p) {
    if (!(p > 0) || !std::isfinite(p)) throw ValidationError("nonlinearity power must be positive");
    if (p > 2) {
        return {p, std::numeric_limits<double>::infinity(), 1 - 2 / p, (p * p + 2 * p) / 2, p + 2,
                (p * p + 2 * p) / (2 * p + 2), (p + 2) / (p + 1)};
    }
    return {p, 4 / (4 - p), 0.5, 2 * p + 4, (4 * p + 8) / p, (2 * p + 4) / (p + 1),
            (4 * p + 8) / (3 * p + 8)};
}

bool is_admissible_pair(const StrichartzPair& pair) {
    if (pair.dimension < 1) return false;
    auto at_least_two = [](const ExtRational& e) { return e.is_infinite() || e.value() >= 2; };
    if (!at_least_two(pair.alpha) || !at_least_two(pair.beta)) return false;
    const Rational d(pair.dimension);
    if (2 * pair.alpha.reciprocal() + d * pair.beta.reciprocal() != d / 2) return false;
    const bool forbidden_endpoint =
        pair.dimension == 2 && !pair.alpha.is_infinite() && pair.alpha.value() == 2 && pair.beta.is_infinite();
    return !forbidden_endpoint;
}

bool IdentityReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !checks.empty();
}

IdentityReport verify_identities(const Power& power) {
    const ExponentProfile e = exponent_profile(power);
    const Rational& p = power.value();
    const Rational inv_rho = e.rho.reciprocal();
    IdentityReport rep;
    rep.p = power.str();
    auto add = [&](std::string name, bool pass, std::string detail) {
        rep.checks.push_back({std::move(name), pass, std::move(detail)});
    };

    const bool above = p > 2;
    add("rho_branch", above ? e.rho.is_infinite() : (!e.rho.is_infinite() && e.rho.value() == 4 / (4 - p)),
        "rho = " + e.rho.str());
    add("s_branch", above ? e.s == 1 - 2 / p : e.s == Rational(1, 2), "s = " + e.s.get_str());
    add("s_in_unit_interval", e.s > 0 && e.s < 1, "s = " + e.s.get_str());

    Rational lhs = 2 / e.q + 2 / e.r;
    add("critical_scaling", lhs == 1 - e.s, "2/q + 2/r = " + canon(lhs).get_str());

    Rational sum = 1 / e.q + 1 / e.r;
    add("below_sharp_admissible", sum < Rational(1, 2), "1/q + 1/r = " + canon(sum).get_str());
    add("q_r_above_four", e.q > 4 && e.r > 4, "q = " + e.q.get_str() + ", r = " + e.r.get_str());

    Rational inv_alpha = 1 / e.alpha;
    add("holder_time", inv_alpha == (p + 1) / e.q, "1/alpha = " + canon(inv_alpha).get_str());
    Rational inv_beta = 1 / e.beta;
    add("holder_space", inv_beta == inv_rho + (p + 1) / e.r, "1/beta = " + canon(inv_beta).get_str());

    // Heuristic scaling from the forbidden (2, inf) estimate: s = 1 - 2/r_h with
    // r_h = rho p / (rho - 1), i.e. s = 1 - 2/p + 2/(rho p).
    Rational heuristic = 1 - 2 / p + 2 * inv_rho / p;
    add("heuristic_scaling", heuristic == e.s, "1 - 2/p + 2/(rho p) = " + canon(heuristic).get_str());

    StrichartzPair forbidden{ExtRational(2), ExtRational::infinity(), 2};
    add("endpoint_not_admissible", !is_admissible_pair(forbidden),
        "(2, inf) in d = 2 is excluded");
    return rep;
}

IdentityReport verify_identities_real(double p, double tol) {
    const ExponentProfileReal e = exponent_profile_real(p);
    const double inv_rho = std::isinf(e.rho) ? 0.0 : 1.0 / e.rho;
    IdentityReport rep;
    {
        std::ostringstream os;
        os.precision(17);
        os << p;
        rep.p = os.str();
    }
    auto close = [tol](double a, double b) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); };
    auto add = [&](std::string name, bool pass, double value) {
        std::ostringstream os;
        os.precision(17);
        os << value;
        rep.checks.push_back({std::move(name), pass, os.str()});
    };
    add("s_in_unit_interval", e.s > 0 && e.s < 1, e.s);
    add("critical_scaling", close(2 / e.q + 2 / e.r, 1 - e.s), 2 / e.q + 2 / e.r);
    add("below_sharp_admissible", 1 / e.q + 1 / e.r < 0.5, 1 / e.q + 1 / e.r);
    add("q_r_above_four", e.q > 4 && e.r > 4, std::min(e.q, e.r));
    add("holder_time", close(1 / e.alpha, (p + 1) / e.q), 1 / e.alpha);
    add("holder_space", close(1 / e.beta, inv_rho + (p + 1) / e.r), 1 / e.beta);
    add("heuristic_scaling", close(1 - 2 / p + 2 * inv_rho / p, e.s), 1 - 2 / p + 2 * inv_rho / p);
    return rep;
}

}  // namespace inls
