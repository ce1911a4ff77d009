#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "imlab/effectance.hpp"
#include "imlab/errors.hpp"
#include "imlab/playroom.hpp"

namespace imlab {

class MetricSeries {
 public:
  struct Point {
    std::uint64_t step;
    double value;
    bool operator==(const Point&) const = default;
  };

  MetricSeries() = default;
  explicit MetricSeries(std::string name) : name_(std::move(name)) {}

  // Throws ConsistencyFault on a non-increasing step or non-finite value.
  void push(std::uint64_t step, double value);

  const std::string& name() const { return name_; }
  const std::vector<Point>& points() const { return points_; }
  bool empty() const { return points_.empty(); }
  bool operator==(const MetricSeries&) const = default;

 private:
  std::string name_;
  std::vector<Point> points_;
};

// Joint counts over (goal index, final state).
class OutcomeTable {
 public:
  void add(std::size_t goal, const State& final_state, std::uint64_t n = 1);
  std::uint64_t total() const { return total_; }
  // Rows are goals 0..max goal seen, columns the distinct states in first-seen
  // order.
  Eigen::MatrixXd joint() const;

 private:
  std::unordered_map<State, std::size_t, StateHash> column_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::size_t columns_ = 0;
  std::uint64_t total_ = 0;
};

double coverage(const VisitCounts& visits, const GridWorldConfig& config, std::uint64_t cap = kDefaultStateCap);

// Plug-in mutual information (nats) of a joint count or probability table.
template <typename Derived>
double mutual_information(const Eigen::MatrixBase<Derived>& counts) {
  const double total = counts.sum();
  if (!(total > 0.0)) throw NotReadyError("mutual information of an empty table");
  const Eigen::MatrixXd p = counts.template cast<double>() / total;
  const Eigen::VectorXd row = p.rowwise().sum();
  const Eigen::RowVectorXd col = p.colwise().sum();
  double mi = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double pij = p(i, j);
      if (pij > 0.0) mi += pij * std::log(pij / (row[i] * col[j]));
    }
  }
  return std::max(0.0, mi);
}

inline double mutual_information(const OutcomeTable& t) { return mutual_information(t.joint()); }

// Jensen-Shannon divergence (nats) between two distributions on the same
// support. Inputs are normalised first.
template <typename DerivedA, typename DerivedB>
double js_divergence(const Eigen::MatrixBase<DerivedA>& p_in, const Eigen::MatrixBase<DerivedB>& q_in) {
  if (p_in.size() != q_in.size()) throw ConfigError("js_divergence supports differ in size");
  const Eigen::VectorXd p = p_in / p_in.sum();
  const Eigen::VectorXd q = q_in / q_in.sum();
  if (!p.allFinite() || !q.allFinite() || (p.array() < 0.0).any() || (q.array() < 0.0).any()) {
    throw ConfigError("js_divergence needs non-negative distributions with positive mass");
  }
  const Eigen::VectorXd m = 0.5 * (p + q);
  auto kl = [&](const Eigen::VectorXd& a) {
    double d = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a[i] > 0.0) d += a[i] * std::log(a[i] / m[i]);
    }
    return d;
  };
  return std::clamp(0.5 * kl(p) + 0.5 * kl(q), 0.0, std::log(2.0));
}

// Competence per snapshot: each snapshot is a queue of outcomes at a step.
struct OutcomeSnapshot {
  std::uint64_t step;
  std::vector<std::uint8_t> outcomes;
};

MetricSeries competence_curve(const std::string& name, const std::vector<OutcomeSnapshot>& snapshots);

struct RepertoireSnapshot {
  std::uint64_t step;
  std::size_t size;
};

MetricSeries repertoire_curve(const std::vector<RepertoireSnapshot>& snapshots);

}  // namespace imlab
