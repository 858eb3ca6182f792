#ifndef NELSON_RNG_HPP
#define NELSON_RNG_HPP

#include <array>
#include <cstdint>

namespace nelson {

/// Philox 4x32-10 counter-based generator. A block is a pure function of
/// (counter, key), so any (path, step) draw can be produced independently
/// on any worker: results do not depend on thread count or schedule.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Inverse of the standard normal CDF (Wichura's PPND16 rational
/// approximations), accurate to near machine precision for u in (0,1).
double inverse_normal_cdf(double u);

/// Keyed stream view: every draw is addressed by (purpose, path, step).
class CounterRng {
public:
    enum class Purpose : std::uint32_t { InitPosition = 0, StepNoise = 1 };

    explicit CounterRng(std::uint64_t master_seed) : seed_(master_seed) {}

    std::uint64_t master_seed() const { return seed_; }

    /// Uniform in (0,1), 53-bit resolution, never exactly 0 or 1.
    double uniform(Purpose purpose, std::uint64_t path, std::uint64_t step) const {
        const auto w = philox4x32_10(
            {static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(step),
             static_cast<std::uint32_t>(step >> 32), static_cast<std::uint32_t>(purpose)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        const std::uint64_t bits =
            (static_cast<std::uint64_t>(w[1]) << 32) | static_cast<std::uint64_t>(w[0]);
        return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double normal(Purpose purpose, std::uint64_t path, std::uint64_t step) const {
        return inverse_normal_cdf(uniform(purpose, path, step));
    }

private:
    std::uint64_t seed_;
};

} // namespace nelson

#endif
