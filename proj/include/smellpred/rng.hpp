#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace smellpred {

/// One step of the splitmix64 generator; used to derive independent seeds.
std::uint64_t splitmix64(std::uint64_t state);

/// Derives a child seed from (base, salt). Distinct salts give decorrelated
/// streams, so parallel jobs seeded per-index match the sequential run.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

/// Seeded random source with hand-specified sampling algorithms on top of
/// std::mt19937_64. The standard distributions are implementation-defined,
/// which would break frozen expected values; everything here is pinned.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive. Unbiased via rejection.
    std::size_t uniform_int(std::size_t n);

    /// Standard normal deviate (Marsaglia polar method, caches the spare).
    double normal();

    /// Poisson deviate by Knuth's product method; intended for small lambda.
    long poisson(double lambda);

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = uniform_int(i);
            using std::swap;
            swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace smellpred
