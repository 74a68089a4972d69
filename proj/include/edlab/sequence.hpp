#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edlab/error.hpp"

namespace edlab {

using cplx = std::complex<double>;

inline constexpr double kDiscSlack = 1e-12;

/// Finite sequence of unit-disc values, indexed from 1.
class UnitDiscSequence {
  public:
    UnitDiscSequence() = default;
    UnitDiscSequence(std::vector<cplx> values, std::string label)
        : values_(std::move(values)), label_(std::move(label)) {
        for (std::size_t k = 0; k < values_.size(); ++k)
            if (std::abs(values_[k]) > 1.0 + kDiscSlack)
                throw DomainError("value at index " + std::to_string(k + 1) + " of '" + label_ +
                                  "' lies outside the unit disc");
    }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    /// 1-based access, unchecked.
    const cplx& operator[](std::size_t k) const noexcept { return values_[k - 1]; }
    /// 1-based access, checked.
    const cplx& at(std::size_t k) const {
        if (k == 0 || k > values_.size())
            throw DomainError("index " + std::to_string(k) + " outside [1, " +
                              std::to_string(values_.size()) + "] of '" + label_ + "'");
        return values_[k - 1];
    }

    std::span<const cplx> values() const noexcept { return values_; }
    const std::string& label() const noexcept { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    friend bool operator==(const UnitDiscSequence& a, const UnitDiscSequence& b) {
        return a.values_ == b.values_;
    }

  private:
    std::vector<cplx> values_;
    std::string label_;
};

/// Pointwise product, truncated to the shorter length.
inline UnitDiscSequence pointwise_product(const UnitDiscSequence& a, const UnitDiscSequence& b) {
    std::size_t n = std::min(a.size(), b.size());
    std::vector<cplx> v(n);
    for (std::size_t k = 1; k <= n; ++k) v[k - 1] = a[k] * b[k];
    return UnitDiscSequence(std::move(v), a.label() + "*" + b.label());
}

inline UnitDiscSequence conjugate(const UnitDiscSequence& a) {
    std::vector<cplx> v(a.values().begin(), a.values().end());
    for (auto& z : v) z = std::conj(z);
    return UnitDiscSequence(std::move(v), "conj(" + a.label() + ")");
}

} // namespace edlab
