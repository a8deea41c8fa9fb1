#pragma once

#include <cstdint>
#include <random>

namespace tenrank {

/// SplitMix64 finalizer; the basis for all stream derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// Independent substream seed for (master, index). Used to split a master seed
/// into per-replication and per-component streams so that parallel and serial
/// runs draw identical numbers.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic N(0,1) sampler: mt19937_64 uniforms mapped through the
/// inverse normal CDF (rng algorithm "mt19937_64+invcdf", version 1).
/// The uniform is (x >> 11) * 2^-53 + 2^-54, strictly inside (0,1).
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        const std::uint64_t x = gen_();
        return static_cast<double>(x >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double normal();

  private:
    std::mt19937_64 gen_;
};

}  // namespace tenrank
