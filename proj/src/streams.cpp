#include "olr/streams.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "olr/rng.hpp"

namespace olr {

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidInput("spectral_radius: matrix is not square");
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<Point> iterate_lds(const Eigen::MatrixXd& transition, const Point& x1,
                               std::size_t horizon) {
  const auto d = static_cast<Eigen::Index>(x1.size());
  if (transition.rows() != d || transition.cols() != d) {
    throw InvalidInput("iterate_lds: transition and initial state disagree in dimension");
  }
  std::vector<Point> out;
  out.reserve(horizon);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x1.data(), d);
  for (std::size_t t = 0; t < horizon; ++t) {
    out.emplace_back(x.data(), x.data() + d);
    x = transition * x;
  }
  return out;
}

LdsStream gen_lds_sparse(std::size_t d, std::size_t c, std::size_t horizon, std::uint64_t seed,
                         const LdsOptions& options) {
  if (c == 0 || c > d) {
    throw InvalidInput("lds-sparse needs 1 <= c <= d (got c=" + std::to_string(c) +
                       ", d=" + std::to_string(d) + ")");
  }
  if (horizon == 0) throw InvalidInput("lds-sparse needs T >= 1");
  if (!(options.spectral_radius > 0.0)) {
    throw InvalidInput("lds-sparse spectral radius must be positive");
  }
  Rng rng(seed);
  std::vector<std::size_t> coords(d);
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  for (std::size_t i = 0; i < c; ++i) {
    std::swap(coords[i], coords[i + rng.below(d - i)]);
  }
  std::vector<std::size_t> support(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(c));
  std::sort(support.begin(), support.end());

  const auto cs = static_cast<Eigen::Index>(c);
  Eigen::MatrixXd block(cs, cs);
  double rho = 0.0;
  while (!(rho > 1e-12)) {
    for (Eigen::Index i = 0; i < cs; ++i) {
      for (Eigen::Index j = 0; j < cs; ++j) block(i, j) = rng.normal();
    }
    rho = spectral_radius(block);
  }
  block *= options.spectral_radius / rho;

  LdsStream out;
  out.support = support;
  out.transition = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < cs; ++i) {
    for (Eigen::Index j = 0; j < cs; ++j) {
      out.transition(static_cast<Eigen::Index>(support[static_cast<std::size_t>(i)]),
                     static_cast<Eigen::Index>(support[static_cast<std::size_t>(j)])) = block(i, j);
    }
  }
  Point x1(d, 0.0);
  for (std::size_t i : support) x1[i] = rng.uniform(options.init_lo, options.init_hi);
  out.points = iterate_lds(out.transition, x1, horizon);
  return out;
}

LdsStream gen_lds_rotation(std::size_t horizon, double angle, double radius, double phase) {
  if (horizon == 0) throw InvalidInput("lds-rotation needs T >= 1");
  if (!(radius >= 0.0 && radius <= 0.5)) throw InvalidInput("lds-rotation radius must be in [0, 0.5]");
  const double co = std::cos(angle), si = std::sin(angle);
  LdsStream out;
  out.transition = Eigen::MatrixXd::Zero(3, 3);
  out.transition << co, -si, 0.5 - 0.5 * co + 0.5 * si,  //
      si, co, 0.5 - 0.5 * si - 0.5 * co,                  //
      0.0, 0.0, 1.0;
  out.support = {0, 1, 2};
  const Point x1{0.5 + radius * std::cos(phase), 0.5 + radius * std::sin(phase), 1.0};
  out.points = iterate_lds(out.transition, x1, horizon);
  return out;
}

std::vector<Point> iid_uniform_points(std::size_t d, std::size_t horizon, double lo, double hi,
                                      std::uint64_t seed) {
  if (d == 0) throw InvalidInput("iid-uniform needs d >= 1");
  if (!(lo <= hi)) throw InvalidInput("iid-uniform needs lo <= hi");
  Rng rng(seed);
  std::vector<Point> out(horizon, Point(d));
  for (auto& p : out) {
    for (double& v : p) v = rng.uniform(lo, hi);
  }
  return out;
}

ExampleSequence label_with_noise(std::span<const Point> points, const Hypothesis& target,
                                 double noise_std, std::uint64_t seed,
                                 std::optional<Interval> clip) {
  if (!(noise_std >= 0.0)) throw InvalidInput("noise_std must be non-negative");
  Rng rng(seed);
  std::vector<LabeledExample> out;
  out.reserve(points.size());
  for (const Point& x : points) {
    double y = evaluate(target, x);
    if (noise_std > 0.0) y += noise_std * rng.normal();
    if (clip) y = std::clamp(y, clip->lo, clip->hi);
    out.push_back({x, y});
  }
  return ExampleSequence(std::move(out));
}

HardInstance gen_rademacher_hard(const ShatteringCertificate& cert, std::size_t horizon,
                                 std::uint64_t seed, double label_lo, double label_hi) {
  const std::size_t d = cert.size();
  if (d == 0) throw InvalidInput("rademacher-hard: empty certificate");
  if (d > horizon) throw InvalidInput("rademacher-hard: more shattered points than rounds");
  const std::size_t k = horizon / d;
  Rng rng(seed);
  std::vector<LabeledExample> out;
  out.reserve(k * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double y = rng.sign() > 0 ? label_hi : label_lo;
      out.push_back({cert.points[i], y});
    }
  }
  return {ExampleSequence(std::move(out)), cert.alpha, k, d};
}

// ---- CSV --------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_number(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || cell.empty()) {
    throw InvalidInput(path.string() + ":" + std::to_string(line) + ": not a number: '" + cell +
                       "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string() + " for reading");
  return in;
}

}  // namespace

void write_stream_csv(const std::filesystem::path& path, const ExampleSequence& seq) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << "t";
  for (std::size_t i = 1; i <= seq.dim(); ++i) out << ",x_" << i;
  out << ",y\n";
  for (std::size_t t = 0; t < seq.size(); ++t) {
    out << (t + 1);
    for (double v : seq[t].x) out << ',' << format_double(v);
    out << ',' << format_double(seq[t].y) << '\n';
  }
  if (!out) throw InvalidInput("write failed: " + path.string());
}

ExampleSequence read_stream_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput(path.string() + ": empty file");
  const auto header = split_csv(line);
  if (header.size() < 3 || header.front() != "t" || header.back() != "y") {
    throw InvalidInput(path.string() + ": header must be t,x_1..x_d,y");
  }
  for (std::size_t i = 1; i + 1 < header.size(); ++i) {
    if (header[i] != "x_" + std::to_string(i)) {
      throw InvalidInput(path.string() + ": header column " + std::to_string(i + 1) +
                         " should be x_" + std::to_string(i));
    }
  }
  const std::size_t d = header.size() - 2;
  std::vector<LabeledExample> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() != d + 2) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": expected " +
                         std::to_string(d + 2) + " columns");
    }
    LabeledExample e;
    for (std::size_t i = 0; i < d; ++i) e.x.push_back(parse_number(cells[i + 1], path, lineno));
    e.y = parse_number(cells.back(), path, lineno);
    rows.push_back(std::move(e));
  }
  if (rows.empty()) throw InvalidInput(path.string() + ": no data rows");
  return ExampleSequence(std::move(rows));
}

std::vector<Point> read_points_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::vector<Point> out;
  std::vector<std::size_t> cols;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (first) {
      first = false;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].rfind("x_", 0) == 0) cols.push_back(i);
      }
      if (!cols.empty()) continue;
      cols.resize(cells.size());
      std::iota(cols.begin(), cols.end(), std::size_t{0});
    }
    Point p;
    for (std::size_t c : cols) {
      if (c >= cells.size()) {
        throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": missing column");
      }
      p.push_back(parse_number(cells[c], path, lineno));
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) throw InvalidInput(path.string() + ": no points");
  return out;
}

}  // namespace olr
