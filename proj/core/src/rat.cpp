#include "errcred/rat.hpp"

#include <ostream>
#include <stdexcept>

namespace errcred {

Rat::Rat(long long num, long long den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    q_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    q_.canonicalize();
}

Rat::Rat(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

namespace {

bool is_decimal_integer(std::string_view s) {
    std::size_t i = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

mpz_class parse_int(std::string_view s) {
    std::string t(s);
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return mpz_class(t, 10);
}

} // namespace

Rat Rat::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!is_decimal_integer(text))
            throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
        return Rat(parse_int(text));
    }
    auto n = text.substr(0, slash);
    auto d = text.substr(slash + 1);
    if (!is_decimal_integer(n) || !is_decimal_integer(d))
        throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    const mpz_class den = parse_int(d);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rat(parse_int(n), den);
}

std::optional<std::int64_t> Rat::num_i64() const {
    if (!num().fits_slong_p()) return std::nullopt;
    return static_cast<std::int64_t>(num().get_si());
}

std::optional<std::int64_t> Rat::den_i64() const {
    if (!den().fits_slong_p()) return std::nullopt;
    return static_cast<std::int64_t>(den().get_si());
}

std::string Rat::str() const {
    if (is_integer()) return num().get_str();
    return num().get_str() + "/" + den().get_str();
}

Rat Rat::pow(unsigned exponent) const {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), num().get_mpz_t(), exponent);
    mpz_pow_ui(d.get_mpz_t(), den().get_mpz_t(), exponent);
    return Rat(n, d);
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    q_ /= o.q_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

} // namespace errcred
