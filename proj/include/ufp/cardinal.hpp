#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ufp {

/// A cardinal that is either a natural number or omega.
class SymbolicCardinal {
public:
    constexpr SymbolicCardinal() = default;
    constexpr explicit SymbolicCardinal(std::uint64_t n) : value_(n) {}

    static constexpr SymbolicCardinal finite(std::uint64_t n) { return SymbolicCardinal(n); }
    static constexpr SymbolicCardinal omega() {
        SymbolicCardinal c;
        c.omega_ = true;
        return c;
    }

    constexpr bool is_omega() const noexcept { return omega_; }
    constexpr bool is_finite() const noexcept { return !omega_; }
    constexpr bool is_zero() const noexcept { return !omega_ && value_ == 0; }
    /// Only meaningful for finite cardinals.
    constexpr std::uint64_t value() const noexcept { return value_; }

    friend constexpr SymbolicCardinal operator+(SymbolicCardinal a, SymbolicCardinal b) {
        if (a.omega_ || b.omega_) return omega();
        return SymbolicCardinal(a.value_ + b.value_);
    }
    /// 0 * omega = 0; otherwise omega absorbs.
    friend constexpr SymbolicCardinal operator*(SymbolicCardinal a, SymbolicCardinal b) {
        if (a.is_zero() || b.is_zero()) return SymbolicCardinal(0);
        if (a.omega_ || b.omega_) return omega();
        return SymbolicCardinal(a.value_ * b.value_);
    }
    SymbolicCardinal& operator+=(SymbolicCardinal other) { return *this = *this + other; }

    friend constexpr bool operator==(SymbolicCardinal a, SymbolicCardinal b) {
        return a.omega_ == b.omega_ && (a.omega_ || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(SymbolicCardinal a, SymbolicCardinal b) {
        if (a.omega_ || b.omega_) return a.omega_ <=> b.omega_;
        return a.value_ <=> b.value_;
    }

    std::string to_string() const { return omega_ ? "Omega" : std::to_string(value_); }

private:
    std::uint64_t value_ = 0;
    bool omega_ = false;
};

} // namespace ufp
