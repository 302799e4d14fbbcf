#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "olr/classes.hpp"
#include "olr/complexity.hpp"
#include "olr/core.hpp"

namespace olr {

struct LdsStream {
  std::vector<Point> points;
  Eigen::MatrixXd transition;
  std::vector<std::size_t> support;  // sorted
};

struct LdsOptions {
  double spectral_radius = 0.95;
  double init_lo = 0.0;  // x_1 ~ U[init_lo, init_hi] on the support
  double init_hi = 1.0;
};

/// Sparse stable linear dynamical system x_{t+1} = A x_t: a uniformly random
/// support S of size c, A Gaussian on S x S rescaled to the target spectral
/// radius, x_1 uniform on S and zero elsewhere.
LdsStream gen_lds_sparse(std::size_t d, std::size_t c, std::size_t horizon, std::uint64_t seed,
                         const LdsOptions& options = {});

/// Iterates x_{t+1} = A x_t from x_1.
std::vector<Point> iterate_lds(const Eigen::MatrixXd& transition, const Point& x1,
                               std::size_t horizon);

double spectral_radius(const Eigen::MatrixXd& m);

/// Rotation about (0.5, 0.5) in the plane, lifted to a homogeneous linear
/// system on (u, v, 1). Coordinate 0 stays inside [0.5 - r, 0.5 + r].
LdsStream gen_lds_rotation(std::size_t horizon, double angle, double radius, double phase);

std::vector<Point> iid_uniform_points(std::size_t d, std::size_t horizon, double lo, double hi,
                                      std::uint64_t seed);

/// y_t = f*(x_t) + g_t with g_t ~ N(0, noise_std^2), optionally clipped.
ExampleSequence label_with_noise(std::span<const Point> points, const Hypothesis& target,
                                 double noise_std, std::uint64_t seed,
                                 std::optional<Interval> clip = std::nullopt);

struct HardInstance {
  ExampleSequence sequence;
  double alpha = 0.0;
  std::size_t copies = 0;  // k
  std::size_t points = 0;  // d
};

/// Lower-bound stream: each shattered point repeated k = floor(T / d) times in
/// blocks, labels i.i.d. uniform on {label_lo, label_hi} (a Rademacher sign
/// mapped affinely). The stream has k * d rounds.
HardInstance gen_rademacher_hard(const ShatteringCertificate& cert, std::size_t horizon,
                                 std::uint64_t seed, double label_lo = -1.0,
                                 double label_hi = 1.0);

/// CSV with header `t,x_1..x_d,y`.
void write_stream_csv(const std::filesystem::path& path, const ExampleSequence& seq);
ExampleSequence read_stream_csv(const std::filesystem::path& path);

/// Points from a CSV whose header names columns x_1..x_d (other columns
/// ignored); without such a header every column is a coordinate.
std::vector<Point> read_points_csv(const std::filesystem::path& path);

}  // namespace olr
