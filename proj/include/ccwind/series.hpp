#pragma once

#include <cstddef>
#include <cmath>
#include <span>
#include <vector>

#include "ccwind/vec3.hpp"

namespace ccwind {

/// Multivariate time series stored row-major: length() points of dim() values.
class Series {
 public:
  Series() = default;
  /// Throws ParameterError if data.size() is not a multiple of dim or any
  /// value is non-finite.
  Series(std::size_t dim, std::vector<double> data);

  static Series scalar(std::vector<double> values) { return Series(1, std::move(values)); }
  static Series from_points(std::span<const Vec3> points);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t length() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> point(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<double> point(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  friend bool operator==(const Series&, const Series&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Euclidean distance between two points of equal dimension.
inline double point_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() == 3) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return std::sqrt(s);
}

}  // namespace ccwind
