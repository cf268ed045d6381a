#include "tprm/snap.hpp"

#include "tprm/spatial_hash.hpp"

#include <cmath>
#include <stdexcept>

namespace tprm {

namespace {

std::vector<double> cumulative_lengths(const PointSet& sigma) {
  std::vector<double> cum(static_cast<std::size_t>(sigma.cols()), 0.0);
  for (Eigen::Index j = 1; j < sigma.cols(); ++j)
    cum[static_cast<std::size_t>(j)] = cum[static_cast<std::size_t>(j - 1)] + (sigma.col(j) - sigma.col(j - 1)).norm();
  return cum;
}

void check_path(const PointSet& sigma) {
  if (sigma.cols() < 1 || sigma.rows() < 1) throw std::invalid_argument("path needs at least one waypoint");
  if (!sigma.allFinite()) throw std::invalid_argument("path has non-finite coordinates");
}

}  // namespace

double polyline_length(const PointSet& sigma) {
  check_path(sigma);
  return cumulative_lengths(sigma).back();
}

Point polyline_at(const PointSet& sigma, double tau) {
  check_path(sigma);
  const auto cum = cumulative_lengths(sigma);
  const double total = cum.back();
  if (total == 0 || tau <= 0) return sigma.col(0);
  if (tau >= 1) return sigma.col(sigma.cols() - 1);
  const double s = tau * total;
  std::size_t j = 1;
  while (j + 1 < cum.size() && cum[j] < s) ++j;
  const double seg = cum[j] - cum[j - 1];
  const double u = seg > 0 ? (s - cum[j - 1]) / seg : 0.0;
  const auto jj = static_cast<Eigen::Index>(j);
  return sigma.col(jj - 1) + u * (sigma.col(jj) - sigma.col(jj - 1));
}

namespace {

struct ChordWalk {
  std::vector<double> times;
  std::vector<Point> points;
};

ChordWalk chord_walk(const PointSet& sigma, double rho) {
  check_path(sigma);
  if (!(rho > 0) || !std::isfinite(rho)) throw std::invalid_argument("chord_times: rho must be positive");
  const Eigen::Index last = sigma.cols() - 1;
  if ((sigma.col(0) - sigma.col(last)).norm() < rho)
    throw std::invalid_argument("chord_times: endpoints are closer than rho");
  const auto cum = cumulative_lengths(sigma);
  const double total = cum.back();

  ChordWalk walk;
  walk.times.push_back(0.0);
  walk.points.push_back(sigma.col(0));
  Point anchor = sigma.col(0);
  Eigen::Index seg = 0;  // current segment is [seg, seg + 1]
  double u0 = 0;         // local start parameter on it
  while (seg < last) {
    const auto p = sigma.col(seg);
    const Point dir = sigma.col(seg + 1) - p;
    const double a = dir.squaredNorm();
    bool emitted = false;
    if (a > 0) {
      // |p + u dir - anchor|^2 = rho^2; the function is negative at u0, so
      // the crossing after u0 is the larger root.
      const Point off = p - anchor;
      const double b = 2 * off.dot(dir);
      const double c = off.squaredNorm() - rho * rho;
      const double disc = b * b - 4 * a * c;
      if (disc >= 0) {
        const double u = (-b + std::sqrt(disc)) / (2 * a);
        if (u >= u0 && u <= 1) {
          const double tau = std::min(1.0, (cum[static_cast<std::size_t>(seg)] + u * std::sqrt(a)) / total);
          if (tau >= 1.0) break;
          anchor = p + u * dir;
          walk.times.push_back(tau);
          walk.points.push_back(anchor);
          u0 = u;
          emitted = true;
        }
      }
    }
    if (!emitted) {
      ++seg;
      u0 = 0;
    }
  }
  walk.times.push_back(1.0);
  walk.points.push_back(sigma.col(last));
  return walk;
}

}  // namespace

std::vector<double> chord_times(const PointSet& sigma, double rho) { return chord_walk(sigma, rho).times; }

double SnappedPath::length() const {
  double s = 0;
  for (Eigen::Index i = 1; i < points.cols(); ++i) s += (points.col(i) - points.col(i - 1)).norm();
  return s;
}

SnappedPath snap_path(const PointSet& sigma, double rho, const SampleSet& grid) {
  if (grid.size() == 0) throw std::invalid_argument("snap_path: empty grid");
  if (grid.dim() != sigma.rows()) throw std::invalid_argument("snap_path: dimension mismatch");
  SnappedPath out;
  out.step = rho;
  ChordWalk walk = chord_walk(sigma, rho);
  out.times = walk.times;
  const auto l = static_cast<Eigen::Index>(out.times.size());
  out.sigma_points.resize(sigma.rows(), l);
  out.points.resize(sigma.rows(), l);
  out.sample_indices.assign(static_cast<std::size_t>(l), -1);
  SpatialHash index(grid.points, rho);
  for (Eigen::Index i = 0; i < l; ++i) {
    const Point& s = walk.points[static_cast<std::size_t>(i)];
    out.sigma_points.col(i) = s;
    if (i == 0 || i == l - 1) {
      out.points.col(i) = s;
    } else {
      const Eigen::Index j = *index.nearest(s);
      out.points.col(i) = grid.points.col(j);
      out.sample_indices[static_cast<std::size_t>(i)] = static_cast<long>(j);
    }
  }
  return out;
}

}  // namespace tprm
