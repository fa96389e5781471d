#pragma once

// Finite-support discrete subdistributions with exact weights.
//
// A Distr stores only strictly positive weights; adding a zero weight is a
// no-op and the total mass never exceeds one. Keys need a strict weak order
// (Compare) so iteration is canonical.

#include "errcred/rat.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <utility>

namespace errcred {

template <class T, class Compare = std::less<T>>
class Distr {
public:
    using key_type = T;
    using map_type = std::map<T, Rat, Compare>;
    using const_iterator = typename map_type::const_iterator;

    Distr() = default;

    /// Adds `w` to the weight of `x`. Negative weights are rejected.
    void add(const T& x, const Rat& w) {
        if (w.sign() < 0) throw std::invalid_argument("Distr: negative weight");
        if (w.is_zero()) return;
        auto [it, inserted] = weights_.try_emplace(x, w);
        if (!inserted) it->second += w;
        if (Rat(1) < it->second) throw std::logic_error("Distr: weight exceeds 1");
    }

    Rat weight(const T& x) const {
        auto it = weights_.find(x);
        return it == weights_.end() ? Rat(0) : it->second;
    }

    bool empty() const { return weights_.empty(); }
    std::size_t size() const { return weights_.size(); }
    const_iterator begin() const { return weights_.begin(); }
    const_iterator end() const { return weights_.end(); }
    const map_type& weights() const { return weights_; }

    friend bool operator==(const Distr& a, const Distr& b) {
        if (a.size() != b.size()) return false;
        const auto less = a.weights_.key_comp();
        auto ia = a.begin();
        for (auto ib = b.begin(); ib != b.end(); ++ia, ++ib) {
            if (less(ia->first, ib->first) || less(ib->first, ia->first)) return false;
            if (ia->second != ib->second) return false;
        }
        return true;
    }

private:
    map_type weights_;
};

template <class T, class C = std::less<T>>
Distr<T, C> dret(const T& x) {
    Distr<T, C> d;
    d.add(x, Rat(1));
    return d;
}

/// Uniform distribution over {0, ..., n}.
inline Distr<long long> uniform_upto(long long n) {
    if (n < 0) throw std::invalid_argument("uniform_upto: negative bound");
    Distr<long long> d;
    const Rat w(1, n + 1);
    for (long long i = 0; i <= n; ++i) d.add(i, w);
    return d;
}

template <class T, class C>
Rat mass(const Distr<T, C>& mu) {
    Rat m;
    for (const auto& [x, w] : mu) m += w;
    return m;
}

/// Monadic bind: weight of y is the sum over x of mu(x) * f(x)(y).
template <class T, class C, class F>
auto dbind(const Distr<T, C>& mu, F&& f) -> decltype(f(std::declval<const T&>())) {
    using Out = decltype(f(std::declval<const T&>()));
    Out out;
    for (const auto& [x, w] : mu) {
        const Out fx = f(x);
        for (const auto& [y, v] : fx) out.add(y, w * v);
    }
    return out;
}

template <class T, class C, class P>
Distr<T, C> restrict(const Distr<T, C>& mu, P&& pred) {
    Distr<T, C> out;
    for (const auto& [x, w] : mu)
        if (pred(x)) out.add(x, w);
    return out;
}

template <class T, class C, class P>
Rat pr(const Distr<T, C>& mu, P&& pred) {
    return mass(restrict(mu, std::forward<P>(pred)));
}

template <class T, class C, class F>
Rat expectation(const Distr<T, C>& mu, F&& f) {
    Rat e;
    for (const auto& [x, w] : mu) e += w * f(x);
    return e;
}

/// Graded lifting: mu violates `pred` with probability at most eps.
template <class T, class C, class P>
bool pgl(const Distr<T, C>& mu, const Rat& eps, P&& pred) {
    if (eps.sign() < 0) throw std::invalid_argument("pgl: negative grade");
    return pr(mu, [&](const T& x) { return !pred(x); }) <= eps;
}

} // namespace errcred
