#ifndef REKGS_SAMPLING_HPP
#define REKGS_SAMPLING_HPP

#include <cstdint>
#include <random>

#include "rekgs/dense_matrix.hpp"

namespace rekgs {

/// SplitMix64 output function; used to derive decorrelated engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Reproducible random stream addressed by (seed, stream_id).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard, seeded through SplitMix64 so that distinct stream ids give
/// independent streams. Floating-point conversions below are implemented
/// from raw 64-bit draws, so the full sequence is identical across
/// platforms. One stream per concurrent trial; never share a stream.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller (the spare value is cached).
    double standard_normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Discrete distribution over indices with probability weight[i] / total.
/// Draws by inverse-CDF binary search on the prefix sums; zero-weight
/// indices are never returned.
class WeightedSampler {
public:
    /// Throws std::invalid_argument if any weight is negative or the total
    /// is not strictly positive.
    explicit WeightedSampler(Vector weights);

    /// Row distribution ||a~_i||^2 / ||A||_F^2. Throws on an all-zero matrix.
    static WeightedSampler from_rows(const DenseMatrix& a);

    /// Column distribution ||a_j||^2 / ||A||_F^2. Throws on an all-zero matrix.
    static WeightedSampler from_cols(const DenseMatrix& a);

    std::size_t draw(RngStream& rng) const;

    std::size_t size() const noexcept { return weights_.size(); }
    const Vector& weights() const noexcept { return weights_; }
    const Vector& cumulative() const noexcept { return cumulative_; }
    double total() const noexcept { return total_; }
    double probability(std::size_t i) const { return weights_[i] / total_; }

private:
    Vector weights_;
    Vector cumulative_;
    double total_;
};

}  // namespace rekgs

#endif  // REKGS_SAMPLING_HPP
