#include "errcred/random.hpp"

namespace errcred {

std::uint64_t splitmix64(std::uint64_t x) {
    std::uint64_t z = x + kSplitMixGamma;
    z = (z ^ (z >> 30)) * kSplitMixMul1;
    z = (z ^ (z >> 27)) * kSplitMixMul2;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
    const std::uint64_t out = splitmix64(state_);
    state_ += kSplitMixGamma;
    return out;
}

std::uint64_t SplitMix64::uniform(std::uint64_t bound) {
    const std::uint64_t range = bound + 1;
    if (range == 0) return next();
    const std::uint64_t threshold = (0 - range) % range;
    for (;;) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % range;
    }
}

namespace detail {

std::uint64_t ReplaySource::uniform(std::uint64_t bound) {
    if (pos_ < choices_.size()) {
        if (bounds_[pos_] != bound) throw std::logic_error("enumerate: computation is not deterministic");
        return choices_[pos_++];
    }
    choices_.push_back(0);
    bounds_.push_back(bound);
    ++pos_;
    return 0;
}

bool ReplaySource::next_path() {
    choices_.resize(pos_);
    bounds_.resize(pos_);
    while (!choices_.empty()) {
        if (choices_.back() < bounds_.back()) {
            ++choices_.back();
            return true;
        }
        choices_.pop_back();
        bounds_.pop_back();
    }
    return false;
}

Rat ReplaySource::weight() const {
    mpz_class den = 1;
    for (std::size_t i = 0; i < pos_; ++i) den *= mpz_class(std::to_string(bounds_[i])) + 1;
    return Rat(mpz_class(1), den);
}

} // namespace detail

} // namespace errcred
