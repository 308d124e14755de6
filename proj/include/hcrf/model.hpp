#pragma once
// Hidden conditional random field: parameters and exact inference.
//
// The score of a label y, hidden path h and observation sequence x is
//
//   psi(y, h, x) = sum_j <phi(x_j), obs(h_j)>
//                + sum_j label_state(y, h_j)
//                + sum_{j<L-1} transition(y, h_j, h_{j+1})
//
// and P(y | x) = sum_h exp(psi(y,h,x)) / sum_{y',h} exp(psi(y',h,x)).
// All sums over paths are computed in log space.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hcrf {

using Label = std::size_t;

/// Ordered, named label set. Index 0 is the tie-break winner.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> names);

  static LabelSet binary_polarity();  // {Negative, Positive}

  std::size_t size() const { return names_.size(); }
  const std::string& name(Label y) const { return names_.at(y); }
  Label index_of(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

/// One document as L per-segment feature vectors of dimension D, row-major.
class ObservationSequence {
 public:
  ObservationSequence() = default;
  /// Throws InvalidInput unless values.size() == L*dim with L >= 1, dim >= 1
  /// and every entry finite.
  ObservationSequence(std::string doc_id, std::size_t dim, std::vector<double> values);

  static ObservationSequence from_rows(std::string doc_id, const std::vector<std::vector<double>>& rows);

  const std::string& doc_id() const { return doc_id_; }
  std::size_t length() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t j) const { return {values_.data() + j * dim_, dim_}; }
  std::span<const double> values() const { return values_; }

 private:
  std::string doc_id_;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

/// theta = (obs, label_state, transition) stored contiguously in that order:
///   obs          num_states x dim
///   label_state  num_labels x num_states
///   transition   num_labels x num_states x num_states
class HcrfParameters {
 public:
  HcrfParameters() = default;
  HcrfParameters(std::size_t num_labels, std::size_t num_states, std::size_t dim);

  std::size_t num_labels() const { return num_labels_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> obs(std::size_t h) { return {values_.data() + h * dim_, dim_}; }
  std::span<const double> obs(std::size_t h) const { return {values_.data() + h * dim_, dim_}; }
  double& label_state(Label y, std::size_t h) { return values_[label_state_offset() + y * num_states_ + h]; }
  double label_state(Label y, std::size_t h) const { return values_[label_state_offset() + y * num_states_ + h]; }
  double& transition(Label y, std::size_t from, std::size_t to) {
    return values_[transition_offset() + (y * num_states_ + from) * num_states_ + to];
  }
  double transition(Label y, std::size_t from, std::size_t to) const {
    return values_[transition_offset() + (y * num_states_ + from) * num_states_ + to];
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::size_t label_state_offset() const { return num_states_ * dim_; }
  std::size_t transition_offset() const { return label_state_offset() + num_labels_ * num_states_; }

  /// Throws InvalidInput on a non-finite entry.
  void check_finite() const;

 private:
  std::size_t num_labels_ = 0;
  std::size_t num_states_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

using PosteriorDistribution = std::vector<double>;

/// Forward-backward marginals of the hidden chain given (y, x).
struct Marginals {
  std::size_t length = 0;
  std::size_t num_states = 0;
  std::vector<double> state;  // length x num_states
  std::vector<double> pair;   // (length-1) x num_states x num_states

  double state_at(std::size_t j, std::size_t h) const { return state[j * num_states + h]; }
  double pair_at(std::size_t j, std::size_t from, std::size_t to) const {
    return pair[(j * num_states + from) * num_states + to];
  }
};

/// log(sum(exp(v))), -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> v);

double potential(Label y, std::span<const std::size_t> hidden, const ObservationSequence& x,
                 const HcrfParameters& theta);

double log_partition(Label y, const ObservationSequence& x, const HcrfParameters& theta);

PosteriorDistribution posterior(const ObservationSequence& x, const HcrfParameters& theta);

/// Argmax of the posterior; ties go to the lowest label index.
Label predict(const ObservationSequence& x, const HcrfParameters& theta);
Label argmax_label(std::span<const double> probs);

Marginals marginals(Label y, const ObservationSequence& x, const HcrfParameters& theta);

inline constexpr double kBruteForceBudget = 1e6;

/// Explicit enumeration of all num_states^L hidden paths. Throws InvalidInput
/// when the path count exceeds kBruteForceBudget.
PosteriorDistribution brute_force_posterior(const ObservationSequence& x, const HcrfParameters& theta);

/// Throws InvalidInput if x's dimension differs from theta's.
void check_dims(const ObservationSequence& x, const HcrfParameters& theta);

namespace detail {

/// Label-independent observation scores, length x num_states.
std::vector<double> emissions(const ObservationSequence& x, const HcrfParameters& theta);

/// Log-space forward/backward tables for one label.
struct Lattice {
  std::vector<double> alpha;  // length x num_states
  std::vector<double> beta;   // length x num_states
  double log_z = 0.0;
};

/// Forward pass only (beta left empty) when `with_backward` is false.
void forward_backward(Label y, std::span<const double> emissions, std::size_t length,
                      const HcrfParameters& theta, Lattice& out, bool with_backward);

}  // namespace detail

}  // namespace hcrf
