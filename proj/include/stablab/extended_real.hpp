#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "stablab/errors.hpp"

namespace stablab {

/// Non-negative real extended with a distinguished infinity, the codomain of
/// the generalized distance. Arithmetic rules: inf <= inf is true, and
/// c * inf = inf for c > 0.
class ExtendedNonNegative {
public:
    ExtendedNonNegative() : value_(0.0) {}

    static ExtendedNonNegative finite(double v) {
        assert(std::isfinite(v) && v >= 0.0);
        ExtendedNonNegative e;
        e.value_ = v;
        return e;
    }

    static ExtendedNonNegative infinity() {
        ExtendedNonNegative e;
        e.value_ = std::numeric_limits<double>::infinity();
        return e;
    }

    bool is_infinite() const { return std::isinf(value_); }
    bool is_finite() const { return !is_infinite(); }

    /// Finite value; throws on the infinite sentinel.
    double finite_value() const {
        if (is_infinite()) throw Error("ExtendedNonNegative: value is infinite");
        return value_;
    }

    /// Underlying double, +inf for the sentinel.
    double raw() const { return value_; }

    ExtendedNonNegative scaled(double c) const {
        assert(c >= 0.0);
        if (is_infinite()) return c > 0.0 ? infinity() : finite(0.0);
        return finite(c * value_);
    }

    ExtendedNonNegative operator+(const ExtendedNonNegative& o) const {
        if (is_infinite() || o.is_infinite()) return infinity();
        return finite(value_ + o.value_);
    }

    friend bool operator<=(const ExtendedNonNegative& a, const ExtendedNonNegative& b) {
        return a.value_ <= b.value_;  // inf <= inf holds
    }
    friend bool operator<(const ExtendedNonNegative& a, const ExtendedNonNegative& b) {
        return a.value_ < b.value_;
    }
    friend bool operator==(const ExtendedNonNegative& a, const ExtendedNonNegative& b) {
        return a.value_ == b.value_;
    }

    static ExtendedNonNegative max(const ExtendedNonNegative& a, const ExtendedNonNegative& b) {
        return a < b ? b : a;
    }

    std::string str() const {
        return is_infinite() ? "inf" : std::to_string(value_);
    }

private:
    double value_;
};

/// Spec-wide comparison convention: err <= atol + rtol * scale.
inline constexpr double kDefaultAtol = 1e-12;
inline constexpr double kDefaultRtol = 1e-10;

inline bool within_tol(double err, double scale, double atol = kDefaultAtol,
                       double rtol = kDefaultRtol) {
    return err <= atol + rtol * scale;
}

}  // namespace stablab
