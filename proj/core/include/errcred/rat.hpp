#pragma once

// Exact rational numbers backed by GMP. Every probability, weight and
// credit amount in the library is a Rat; there is no floating point on any
// exact path.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace errcred {

class Rat {
public:
    Rat() = default;
    Rat(int v) : q_(static_cast<long>(v)) {}
    Rat(long v) : q_(v) {}
    Rat(long long v) : q_(static_cast<long>(v)) {}
    Rat(unsigned long v) : q_(v) {}
    Rat(unsigned v) : q_(static_cast<unsigned long>(v)) {}
    Rat(unsigned long long v) : q_(static_cast<unsigned long>(v)) {}
    Rat(long long num, long long den);
    explicit Rat(const mpz_class& num, const mpz_class& den = 1);
    explicit Rat(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// Parses "a", "-a" or "a/b" (decimal integers). Throws std::invalid_argument.
    static Rat parse(std::string_view text);

    const mpz_class& num() const { return q_.get_num(); }
    const mpz_class& den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return den() == 1; }

    std::optional<std::int64_t> num_i64() const;
    std::optional<std::int64_t> den_i64() const;

    double to_double() const { return q_.get_d(); }

    /// "3/4", "-1/2", or "5" for integers.
    std::string str() const;

    Rat pow(unsigned exponent) const;
    Rat abs() const { return Rat(mpq_class(::abs(q_))); }

    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.q_)); }

    friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

private:
    mpq_class q_{0};
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

inline Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

} // namespace errcred
