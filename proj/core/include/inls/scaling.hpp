#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace inls {

using Rational = mpq_class;

/// A rational exponent or +infinity. Reciprocals map infinity to zero.
class ExtRational {
public:
    ExtRational() = default;
    ExtRational(const Rational& v) : value_(v) { value_.canonicalize(); }
    ExtRational(long v) : value_(v) {}

    static ExtRational infinity() {
        ExtRational r;
        r.infinite_ = true;
        return r;
    }

    bool is_infinite() const { return infinite_; }
    /// Only meaningful when finite.
    const Rational& value() const { return value_; }
    /// 1/x with 1/inf = 0. Throws on 1/0.
    Rational reciprocal() const;
    double to_double() const;
    std::string str() const;

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

private:
    Rational value_{0};
    bool infinite_ = false;
};

/// Nonlinearity power p > 0.
class Power {
public:
    explicit Power(const Rational& p);
    /// Accepts "3", "3/2", "0.25", "1e-1".
    static Power parse(std::string_view text);

    const Rational& value() const { return p_; }
    double to_double() const { return p_.get_d(); }
    std::string str() const { return p_.get_str(); }

private:
    Rational p_;
};

Rational parse_rational(std::string_view text);

/// Exact exponent scaffold for a fixed power p in two space dimensions.
struct ExponentProfile {
    Power p;
    ExtRational rho;  ///< integrability exponent of the weight
    Rational s;       ///< critical Sobolev regularity
    Rational q, r;    ///< X = L^q_t L^r_x
    Rational alpha, beta;  ///< Y = L^alpha_t L^beta_x
};

ExponentProfile exponent_profile(const Power& p);

/// Floating-point profile for irrational p.
struct ExponentProfileReal {
    double p, rho, s, q, r, alpha, beta;
};

ExponentProfileReal exponent_profile_real(double p);

struct StrichartzPair {
    ExtRational alpha;
    ExtRational beta;
    int dimension = 2;
};

/// 2 <= alpha, beta <= inf, 2/alpha + d/beta = d/2, and not the (2, inf, 2)
/// endpoint.
bool is_admissible_pair(const StrichartzPair& pair);

struct IdentityCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct IdentityReport {
    std::string p;
    std::vector<IdentityCheck> checks;
    bool all_pass() const;
};

IdentityReport verify_identities(const Power& p);
/// Same checks in double precision, to a tolerance of 1e-12.
IdentityReport verify_identities_real(double p, double tol = 1e-12);

}  // namespace inls
