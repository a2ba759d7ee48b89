#include "ccwind/series.hpp"

#include <cmath>

#include "ccwind/error.hpp"

namespace ccwind {

Series::Series(std::size_t dim, std::vector<double> data) : dim_(dim), data_(std::move(data)) {
  if (dim_ == 0) throw ParameterError("series: dimension must be >= 1");
  if (data_.size() % dim_ != 0) throw ParameterError("series: data size is not a multiple of dimension");
  for (double v : data_)
    if (!std::isfinite(v)) throw ParameterError("series: non-finite value");
}

Series Series::from_points(std::span<const Vec3> points) {
  std::vector<double> data;
  data.reserve(points.size() * 3);
  for (const Vec3& p : points) {
    data.push_back(p.x);
    data.push_back(p.y);
    data.push_back(p.z);
  }
  return Series(3, std::move(data));
}

}  // namespace ccwind
