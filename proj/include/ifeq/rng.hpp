#ifndef IFEQ_RNG_HPP
#define IFEQ_RNG_HPP

#include <cmath>
#include <cstdint>

namespace ifeq {

// SplitMix64-based generator with explicit (seed, stream, index) keying so
// parallel and serial runs draw identical values. All outputs are built from
// integer operations and ldexp; results are bit-exact across platforms.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0)
        : state_(mix(mix(mix(seed + 0x9E3779B97F4A7C15ull) ^ stream) ^ index)) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    double uniform() {  // [0, 1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform_centered(double width) {  // [-width/2, width/2)
        return (uniform() - 0.5) * width;
    }

    double gaussian() {  // unit variance, Box-Muller
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    long long below(long long m) {  // uniform on {0..m-1}
        const std::uint64_t um = static_cast<std::uint64_t>(m);
        const std::uint64_t limit = ~0ull - ~0ull % um;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return static_cast<long long>(v % um);
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ifeq

#endif
