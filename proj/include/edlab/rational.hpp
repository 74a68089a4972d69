#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "edlab/error.hpp"

namespace edlab {

/// Positive rational in lowest terms.
class Rational {
  public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) {
        require(den != 0, "rational with zero denominator");
        require((num > 0) == (den > 0) && num != 0, "rational must be positive");
        if (num < 0) num = -num, den = -den;
        std::int64_t g = std::gcd(num, den);
        num_ = num / g;
        den_ = den / g;
    }

    static Rational parse(std::string_view text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string_view::npos) return Rational(std::stoll(std::string(text)));
            return Rational(std::stoll(std::string(text.substr(0, slash))),
                            std::stoll(std::string(text.substr(slash + 1))));
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const DomainError*>(&e)) throw;
            throw DomainError("cannot parse rational '" + std::string(text) + "'");
        }
    }

    constexpr std::int64_t num() const noexcept { return num_; }
    constexpr std::int64_t den() const noexcept { return den_; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    Rational inverse() const { return Rational(den_, num_); }

    friend Rational operator*(const Rational& a, const Rational& b) {
        std::int64_t g1 = std::gcd(a.num_, b.den_), g2 = std::gcd(b.num_, a.den_);
        return Rational((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1));
    }
    friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }
    friend constexpr bool operator==(const Rational&, const Rational&) = default;
    friend constexpr auto operator<=>(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  private:
    std::int64_t num_ = 1;
    std::int64_t den_ = 1;
};

} // namespace edlab
