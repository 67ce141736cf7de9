#include "rekgs/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rekgs {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    const std::uint64_t mixed =
        splitmix64(splitmix64(seed) ^ (stream_id * 0xD1B54A32D192ED03ull +
                                       0x9E3779B97F4A7C15ull));
    engine_.seed(mixed);
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + uniform01() * (hi - lo);
}

double RngStream::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

WeightedSampler::WeightedSampler(Vector weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw std::invalid_argument("WeightedSampler: empty weight vector");
    }
    cumulative_.resize(weights_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] < 0.0 || !std::isfinite(weights_[i])) {
            throw std::invalid_argument("WeightedSampler: weights must be finite and non-negative");
        }
        acc += weights_[i];
        cumulative_[i] = acc;
    }
    total_ = acc;
    if (!(total_ > 0.0)) {
        throw std::invalid_argument("WeightedSampler: total weight must be positive");
    }
}

WeightedSampler WeightedSampler::from_rows(const DenseMatrix& a) {
    if (!(a.frob_sq() > 0.0)) {
        throw std::invalid_argument("from_rows: all-zero matrix has no row distribution");
    }
    return WeightedSampler(a.row_norms_sq());
}

WeightedSampler WeightedSampler::from_cols(const DenseMatrix& a) {
    if (!(a.frob_sq() > 0.0)) {
        throw std::invalid_argument("from_cols: all-zero matrix has no column distribution");
    }
    return WeightedSampler(a.col_norms_sq());
}

std::size_t WeightedSampler::draw(RngStream& rng) const {
    const double u = rng.uniform01() * total_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
    if (idx >= weights_.size()) idx = weights_.size() - 1;
    // Ties in the prefix sums (zero-weight entries) are skipped by
    // upper_bound; guard against landing on one through the end clamp.
    while (idx > 0 && weights_[idx] == 0.0) --idx;
    return idx;
}

}  // namespace rekgs
