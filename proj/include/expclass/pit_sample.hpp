#pragma once

#include <cstddef>
#include <vector>

namespace expclass {

// A sorted sample of strictly positive inter-event times with its cached
// arithmetic mean. The sorted values are the order statistics consumed by
// every distance computation.
class PitSample {
  public:
    // Takes ownership, sorts, and validates. Throws EmptyDataError on an
    // empty vector and ConfigError on non-positive or non-finite values.
    static PitSample from_values(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    std::size_t n() const { return values_.size(); }
    double mean_hat() const { return mean_hat_; }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

    // Second raw sample moment, sum(x_i^2)/n.
    double second_moment() const;

  private:
    PitSample() = default;
    std::vector<double> values_;
    double mean_hat_ = 0.0;
};

}  // namespace expclass
