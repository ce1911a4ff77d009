#include "imlab/metrics.hpp"

namespace imlab {

void MetricSeries::push(std::uint64_t step, double value) {
  if (!points_.empty() && step <= points_.back().step) {
    throw ConsistencyFault("metric '" + name_ + "' steps must strictly increase");
  }
  if (!std::isfinite(value)) throw ConsistencyFault("metric '" + name_ + "' received a non-finite value");
  points_.push_back({step, value});
}

void OutcomeTable::add(std::size_t goal, const State& final_state, std::uint64_t n) {
  auto [it, inserted] = column_.try_emplace(final_state, columns_);
  if (inserted) {
    ++columns_;
    for (auto& r : rows_) r.push_back(0);
  }
  while (rows_.size() <= goal) rows_.emplace_back(columns_, 0);
  rows_[goal][it->second] += n;
  total_ += n;
}

Eigen::MatrixXd OutcomeTable::joint() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_.size()), static_cast<Eigen::Index>(columns_));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (std::size_t j = 0; j < columns_; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(rows_[i][j]);
    }
  }
  return m;
}

double coverage(const VisitCounts& visits, const GridWorldConfig& config, std::uint64_t cap) {
  const std::uint64_t total = state_space_size(config);
  if (total > cap) throw StateSpaceTooLarge(total, cap);
  return static_cast<double>(visits.distinct()) / static_cast<double>(total);
}

MetricSeries competence_curve(const std::string& name, const std::vector<OutcomeSnapshot>& snapshots) {
  MetricSeries s(name);
  for (const auto& snap : snapshots) {
    if (snap.outcomes.empty()) continue;
    double sum = 0.0;
    for (auto o : snap.outcomes) sum += o;
    s.push(snap.step, sum / static_cast<double>(snap.outcomes.size()));
  }
  return s;
}

MetricSeries repertoire_curve(const std::vector<RepertoireSnapshot>& snapshots) {
  MetricSeries s("repertoire_size");
  for (const auto& snap : snapshots) {
    if (!s.empty() && static_cast<double>(snap.size) < s.points().back().value) {
      throw ConsistencyFault("repertoire shrank");
    }
    s.push(snap.step, static_cast<double>(snap.size));
  }
  return s;
}

}  // namespace imlab
