#pragma once

// Multi-option Potts decision kernel.
//
// An agent facing M options sees the local field m = nu + u, where nu holds
// the fractions of its contacts in each state and u its own utilities. At
// inverse temperature beta the next state k is drawn with Boltzmann-Gibbs
// weight exp(beta * m_k), normalised over the targets reachable from the
// agent's current state. At T = 0 the mass splits evenly over the argmax set.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "potts/errors.hpp"
#include "potts/network.hpp"
#include "potts/random.hpp"

namespace potts {

/// Upper bound on M. Landscape files store one decimal digit per agent.
inline constexpr int kMaxOptions = 10;

using StateIndex = std::uint8_t;

template <typename Scalar>
using OptionVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxOptions, 1>;

using TransitionMask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxOptions, kMaxOptions>;

/// State labels plus the allowed-transition relation. The last state is non-adoption.
class OptionModel {
 public:
  /// Self-transitions are always added.
  OptionModel(std::vector<std::string> labels, const std::vector<std::pair<StateIndex, StateIndex>>& transitions);

  /// (A, B, 0): 0->A, 0->B. Adopters are absorbing.
  static OptionModel three_option();
  /// (A, B, AB, 0): 0->A, 0->B, 0->AB, A->AB, B->AB.
  static OptionModel four_option();

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(StateIndex k) const { return labels_.at(k); }
  StateIndex non_adoption() const noexcept { return static_cast<StateIndex>(labels_.size() - 1); }
  /// Index of the state labelled `name`; throws ConfigError when absent.
  StateIndex index_of(const std::string& name) const;

  bool allowed(StateIndex from, StateIndex to) const { return mask_(from, to); }
  /// True when the only allowed transition out of `state` is staying.
  bool absorbing(StateIndex state) const;

  /// Copy with every transition into `target` (other than target -> target) removed.
  OptionModel without_target(StateIndex target) const;

  friend bool operator==(const OptionModel& a, const OptionModel& b) {
    return a.labels_ == b.labels_ && a.mask_ == b.mask_;
  }

 private:
  std::vector<std::string> labels_;
  TransitionMask mask_;
};

/// Non-negative temperature; kappa = 1, so beta = 1 / T.
class Temperature {
 public:
  explicit Temperature(double t);
  double value() const noexcept { return t_; }
  bool is_zero() const noexcept { return t_ == 0.0; }
  /// Only meaningful when !is_zero().
  double beta() const noexcept { return 1.0 / t_; }

 private:
  double t_;
};

/// Number of contacts of `agent` in each state.
inline Eigen::Matrix<int, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxOptions, 1> neighbor_counts(
    const Network& net, std::span<const StateIndex> states, AgentId agent, int options) {
  Eigen::Matrix<int, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxOptions, 1> counts =
      Eigen::Matrix<int, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxOptions, 1>::Zero(options);
  for (AgentId other : net.contacts(agent)) ++counts[states[other]];
  return counts;
}

/// nu_k = (contacts in state k) / V.
template <typename Scalar = double>
OptionVector<Scalar> neighbor_fractions(const Network& net, std::span<const StateIndex> states, AgentId agent,
                                        int options) {
  if (states.size() != net.agents()) throw UsageError("state array length does not match network size");
  if (options < 2 || options > kMaxOptions) throw UsageError("option count out of range");
  const auto degree = net.degree(agent);
  if (degree == 0) throw UsageError("agent has no contacts");
  return neighbor_counts(net, states, agent, options).template cast<Scalar>() / static_cast<Scalar>(degree);
}

/// m = nu + u.
template <typename DerivedNu, typename DerivedU>
OptionVector<typename DerivedNu::Scalar> local_field(const Eigen::MatrixBase<DerivedNu>& nu,
                                                     const Eigen::MatrixBase<DerivedU>& u) {
  if (nu.size() != u.size()) throw UsageError("fractions and utilities differ in length");
  return nu + u;
}

/// Delta_kj = m_k - m_j.
template <typename Derived>
typename Derived::Scalar field_gap(const Eigen::MatrixBase<Derived>& m, StateIndex k, StateIndex j) {
  return m[k] - m[j];
}

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m) {
  if (!m.allFinite()) throw NumericalError("local field has non-finite components");
}

template <typename Derived>
void require_shape(const Eigen::MatrixBase<Derived>& m, StateIndex current, const OptionModel& opts) {
  if (m.size() != opts.size()) throw UsageError("field length does not match option count");
  if (current >= opts.size()) throw UsageError("current state out of range");
}

}  // namespace detail

/// Boltzmann-Gibbs probabilities over the targets allowed from `current`:
/// P(k) = exp(beta m_k) / sum_{j allowed} exp(beta m_j). Disallowed targets get exactly 0.
/// Exponentials are taken after subtracting the largest allowed component.
template <typename Derived>
OptionVector<typename Derived::Scalar> choice_probabilities(const Eigen::MatrixBase<Derived>& m,
                                                            typename Derived::Scalar beta, StateIndex current,
                                                            const OptionModel& opts) {
  using Scalar = typename Derived::Scalar;
  detail::require_shape(m, current, opts);
  detail::require_finite(m);
  if (!(beta >= Scalar(0)) || !std::isfinite(beta)) throw NumericalError("beta must be finite and non-negative");

  const int n = opts.size();
  Scalar top = -std::numeric_limits<Scalar>::infinity();
  for (int k = 0; k < n; ++k) {
    if (opts.allowed(current, static_cast<StateIndex>(k))) top = std::max(top, m[k]);
  }
  OptionVector<Scalar> p = OptionVector<Scalar>::Zero(n);
  Scalar total(0);
  for (int k = 0; k < n; ++k) {
    if (!opts.allowed(current, static_cast<StateIndex>(k))) continue;
    p[k] = std::exp(beta * (m[k] - top));
    total += p[k];
  }
  return p / total;
}

template <typename Derived>
OptionVector<typename Derived::Scalar> choice_probabilities(const Eigen::MatrixBase<Derived>& m, Temperature t,
                                                            StateIndex current, const OptionModel& opts) {
  if (t.is_zero()) throw UsageError("T = 0 has no finite beta; use zero_temperature_probabilities");
  return choice_probabilities(m, static_cast<typename Derived::Scalar>(t.beta()), current, opts);
}

/// Exact T = 0 limit: mass 1/(1 + l) on each of the 1 + l allowed targets attaining the maximum field
/// (exact comparison), 0 elsewhere.
template <typename Derived>
OptionVector<typename Derived::Scalar> zero_temperature_probabilities(const Eigen::MatrixBase<Derived>& m,
                                                                      StateIndex current, const OptionModel& opts) {
  using Scalar = typename Derived::Scalar;
  detail::require_shape(m, current, opts);
  detail::require_finite(m);

  const int n = opts.size();
  Scalar top = -std::numeric_limits<Scalar>::infinity();
  for (int k = 0; k < n; ++k) {
    if (opts.allowed(current, static_cast<StateIndex>(k))) top = std::max(top, m[k]);
  }
  OptionVector<Scalar> p = OptionVector<Scalar>::Zero(n);
  int ties = 0;
  for (int k = 0; k < n; ++k) {
    if (opts.allowed(current, static_cast<StateIndex>(k)) && m[k] == top) {
      p[k] = Scalar(1);
      ++ties;
    }
  }
  return p / static_cast<Scalar>(ties);
}

/// Routes to the exact T = 0 branch or the finite-temperature form.
template <typename Derived>
OptionVector<typename Derived::Scalar> transition_probabilities(const Eigen::MatrixBase<Derived>& m, Temperature t,
                                                                StateIndex current, const OptionModel& opts) {
  if (t.is_zero()) return zero_temperature_probabilities(m, current, opts);
  return choice_probabilities(m, t, current, opts);
}

/// Inverse-CDF draw: the first index whose cumulative probability exceeds `uniform`
/// (a value in [0, 1)). Trailing zero-probability states are never returned.
template <typename Derived>
StateIndex sample_state(const Eigen::MatrixBase<Derived>& p, double uniform) {
  using Scalar = typename Derived::Scalar;
  if (p.size() == 0) throw NumericalError("empty probability vector");
  if (!p.allFinite() || (p.array() < Scalar(0)).any()) throw NumericalError("probabilities must be finite and >= 0");
  const Scalar total = p.sum();
  if (std::abs(total - Scalar(1)) > Scalar(1e-9)) throw NumericalError("probabilities do not sum to 1");

  Scalar cumulative(0);
  Eigen::Index last = 0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p[k] == Scalar(0)) continue;
    last = k;
    cumulative += p[k];
    if (static_cast<Scalar>(uniform) < cumulative) return static_cast<StateIndex>(k);
  }
  return static_cast<StateIndex>(last);
}

template <typename Derived>
StateIndex sample_state(const Eigen::MatrixBase<Derived>& p, RandomStream& rng) {
  return sample_state(p, rng.uniform01());
}

}  // namespace potts
