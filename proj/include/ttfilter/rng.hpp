#pragma once

#include <cmath>
#include <cstdint>

namespace ttfilter {

namespace detail {

/// SplitMix64 finalizer. Used both as the output function of the
/// counter-based generator below and to derive stream keys.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based pseudo-random generator with cheap stream splitting.
///
/// Each (key, counter) pair maps to an output word through the SplitMix64
/// finalizer, so a stream is identified by its key alone and any number of
/// independent streams can be derived without shared state. Trials, steps,
/// and purposes get their own streams, which keeps parallel runs
/// reproducible.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    /// Derive an independent stream from this one.
    CounterRng split(std::uint64_t stream_id) const {
        return CounterRng(detail::splitmix64(key_ ^ (0xa0761d6478bd642fULL + stream_id)));
    }

    std::uint64_t next_u64() { return detail::splitmix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

    /// Uniform in (0, 1); never returns exactly 0, safe for log().
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller. Two draws are generated at a time.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stream key for one trial of an experiment.
inline CounterRng trial_rng(std::uint64_t base_seed, std::uint64_t trial) {
    return CounterRng(detail::splitmix64(base_seed)).split(0x7261696cULL + trial);
}

}  // namespace ttfilter
