#include "tenrank/rng.hpp"

#include <boost/math/distributions/normal.hpp>

namespace tenrank {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double NormalSampler::normal() {
    static const boost::math::normal_distribution<double> unit_normal;
    return boost::math::quantile(unit_normal, uniform());
}

}  // namespace tenrank
