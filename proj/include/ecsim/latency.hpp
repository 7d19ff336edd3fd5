#ifndef ECSIM_LATENCY_HPP
#define ECSIM_LATENCY_HPP

#include <string_view>

namespace ecsim {

// Execution/communication time of one white-box function, in seconds.
class LatencySpec {
 public:
  enum class Kind { kConstant, kUniform };

  static LatencySpec constant(double value) { return {Kind::kConstant, value, value}; }
  static LatencySpec uniform(double min, double max) { return {Kind::kUniform, min, max}; }

  LatencySpec() = default;

  Kind kind() const { return kind_; }
  double min() const { return min_; }
  double max() const { return max_; }

  // Maps a uniform draw u in [0, 1) onto the distribution.
  double sample(double u) const {
    return kind_ == Kind::kConstant ? min_ : min_ + (max_ - min_) * u;
  }

  // Throws std::invalid_argument unless 0 <= min <= max (finite).
  void validate(std::string_view name) const;

  friend bool operator==(const LatencySpec&, const LatencySpec&) = default;

 private:
  LatencySpec(Kind kind, double min, double max) : kind_(kind), min_(min), max_(max) {}

  Kind kind_ = Kind::kConstant;
  double min_ = 0.0;
  double max_ = 0.0;
};

}  // namespace ecsim

#endif  // ECSIM_LATENCY_HPP
