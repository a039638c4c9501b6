#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace persuasion {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// mt19937_64 with a portable uint64->double mapping; std::mt19937_64 output
/// is fully pinned by the standard, so identical seeds give identical streams
/// on any platform (the std distributions are not pinned, hence the manual
/// mapping).
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Index drawn from a probability row (assumed to sum to ~1); the CDF walk
    /// falls back to the last positive entry against rounding drift.
    int categorical(std::span<const double> probs) {
        const double u = uniform();
        double cum = 0.0;
        int last_positive = 0;
        for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
            if (probs[i] > 0.0) last_positive = i;
            cum += probs[i];
            if (u < cum) return i;
        }
        return last_positive;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace persuasion
