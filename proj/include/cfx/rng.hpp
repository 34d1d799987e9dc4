#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace cfx {

/// SplitMix64 step; the standard state-mixer used to seed other generators.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ by Blackman & Vigna. Fast, high-quality, tiny state.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(const std::array<std::uint64_t, 4>& s) : s_(s) {
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is absorbing
    }

    std::uint64_t next() {
        const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = std::rotl(s_[3], 45);
        return result;
    }

  private:
    std::array<std::uint64_t, 4> s_;
};

/// Deterministic random bit source keyed by (seed, trial_index).
///
/// Each (seed, trial) pair owns an independent stream: the pair is mixed
/// through SplitMix64 to fill a xoshiro256++ state. Distinct trials never
/// share state, so trials can run on any worker in any order and still
/// produce identical bits. Words are the uniform bits of the sample's
/// inverse-CDF argument, most significant 64 bits first.
class TrialBitSource {
  public:
    TrialBitSource(std::uint64_t seed, std::uint64_t trial) : gen_(key_state(seed, trial)) {}

    std::uint64_t next_word() {
        ++words_drawn_;
        return gen_.next();
    }
    std::uint64_t words_drawn() const { return words_drawn_; }

  private:
    static std::array<std::uint64_t, 4> key_state(std::uint64_t seed, std::uint64_t trial) {
        std::uint64_t sm = seed;
        sm ^= 0xD1B54A32D192ED03ULL + splitmix64_next(sm);
        sm ^= trial * 0x9E3779B97F4A7C15ULL;
        std::array<std::uint64_t, 4> s;
        for (auto& w : s) w = splitmix64_next(sm);
        return s;
    }

    Xoshiro256pp gen_;
    std::uint64_t words_drawn_ = 0;
};

}  // namespace cfx
