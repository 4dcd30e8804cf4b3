#include "potts/decision.hpp"

#include <fmt/format.h>

namespace potts {

OptionModel::OptionModel(std::vector<std::string> labels,
                         const std::vector<std::pair<StateIndex, StateIndex>>& transitions)
    : labels_(std::move(labels)) {
  const auto n = static_cast<int>(labels_.size());
  if (n < 2 || n > kMaxOptions) throw ConfigError(fmt::format("option count must be in [2, {}], got {}", kMaxOptions, n));
  mask_ = TransitionMask::Identity(n, n);
  for (const auto& [from, to] : transitions) {
    if (from >= n || to >= n) throw ConfigError("transition refers to an unknown state");
    mask_(from, to) = true;
  }
}

OptionModel OptionModel::three_option() {
  // A = 0, B = 1, non-adoption = 2
  return OptionModel({"A", "B", "0"}, {{2, 0}, {2, 1}});
}

OptionModel OptionModel::four_option() {
  // A = 0, B = 1, AB = 2, non-adoption = 3
  return OptionModel({"A", "B", "AB", "0"}, {{3, 0}, {3, 1}, {3, 2}, {0, 2}, {1, 2}});
}

StateIndex OptionModel::index_of(const std::string& name) const {
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] == name) return static_cast<StateIndex>(k);
  }
  throw ConfigError("unknown state label '" + name + "'");
}

bool OptionModel::absorbing(StateIndex state) const {
  for (int k = 0; k < size(); ++k) {
    if (k != state && mask_(state, k)) return false;
  }
  return true;
}

OptionModel OptionModel::without_target(StateIndex target) const {
  OptionModel copy = *this;
  for (int k = 0; k < size(); ++k) {
    if (k != target) copy.mask_(k, target) = false;
  }
  return copy;
}

Temperature::Temperature(double t) : t_(t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError(fmt::format("must be finite and >= 0, got {}", t), "decision.temperature");
}

}  // namespace potts
