#include "hcrf/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hcrf/errors.hpp"
#include "hcrf/kernels.hpp"

namespace hcrf {

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2) throw InvalidInput("a label set needs at least two labels");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw InvalidInput("label names must be unique");
}

LabelSet LabelSet::binary_polarity() { return LabelSet({"Negative", "Positive"}); }

Label LabelSet::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InvalidInput("unknown label: " + name);
  return static_cast<Label>(it - names_.begin());
}

ObservationSequence::ObservationSequence(std::string doc_id, std::size_t dim, std::vector<double> values)
    : doc_id_(std::move(doc_id)), dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) throw InvalidInput("observation dimension must be >= 1");
  if (values_.empty() || values_.size() % dim_ != 0) {
    throw InvalidInput("observation sequence '" + doc_id_ + "' must hold L >= 1 vectors of dimension " +
                       std::to_string(dim_));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite feature value in '" + doc_id_ + "'");
  }
}

ObservationSequence ObservationSequence::from_rows(std::string doc_id, const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidInput("observation sequence '" + doc_id + "' is empty");
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    if (r.size() != dim) throw InvalidInput("ragged observation rows in '" + doc_id + "'");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return ObservationSequence(std::move(doc_id), dim, std::move(flat));
}

HcrfParameters::HcrfParameters(std::size_t num_labels, std::size_t num_states, std::size_t dim)
    : num_labels_(num_labels), num_states_(num_states), dim_(dim) {
  if (num_labels < 2) throw InvalidInput("HCRF needs at least two labels");
  if (num_states < 1) throw InvalidInput("HCRF needs at least one hidden state");
  if (dim < 1) throw InvalidInput("HCRF feature dimension must be >= 1");
  values_.assign(num_states * dim + num_labels * num_states + num_labels * num_states * num_states, 0.0);
}

void HcrfParameters::check_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite HCRF parameter");
  }
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void check_dims(const ObservationSequence& x, const HcrfParameters& theta) {
  if (x.length() == 0) throw InvalidInput("empty observation sequence");
  if (x.dim() != theta.dim()) {
    throw InvalidInput("feature dimension " + std::to_string(x.dim()) + " does not match model dimension " +
                       std::to_string(theta.dim()));
  }
}

namespace {

void check_label(Label y, const HcrfParameters& theta) {
  if (y >= theta.num_labels()) throw InvalidInput("label index out of range");
}

}  // namespace

double potential(Label y, std::span<const std::size_t> hidden, const ObservationSequence& x,
                 const HcrfParameters& theta) {
  check_dims(x, theta);
  check_label(y, theta);
  if (hidden.size() != x.length()) throw InvalidInput("hidden path length differs from sequence length");
  for (std::size_t h : hidden) {
    if (h >= theta.num_states()) throw InvalidInput("hidden state index out of range");
  }
  double score = 0.0;
  for (std::size_t j = 0; j < hidden.size(); ++j) {
    score += kernels::dot(x.row(j), theta.obs(hidden[j]));
    score += theta.label_state(y, hidden[j]);
    if (j + 1 < hidden.size()) score += theta.transition(y, hidden[j], hidden[j + 1]);
  }
  return score;
}

namespace detail {

std::vector<double> emissions(const ObservationSequence& x, const HcrfParameters& theta) {
  std::vector<double> out(x.length() * theta.num_states());
  kernels::gemv_rows(theta.values().first(theta.num_states() * theta.dim()), theta.num_states(), x.values(),
                     x.length(), x.dim(), out);
  return out;
}

void forward_backward(Label y, std::span<const double> emissions, std::size_t length,
                      const HcrfParameters& theta, Lattice& out, bool with_backward) {
  const std::size_t H = theta.num_states();
  out.alpha.assign(length * H, 0.0);
  std::vector<double> terms(H);

  for (std::size_t h = 0; h < H; ++h) out.alpha[h] = emissions[h] + theta.label_state(y, h);
  for (std::size_t j = 1; j < length; ++j) {
    for (std::size_t to = 0; to < H; ++to) {
      for (std::size_t from = 0; from < H; ++from) {
        terms[from] = out.alpha[(j - 1) * H + from] + theta.transition(y, from, to);
      }
      out.alpha[j * H + to] = log_sum_exp(terms) + emissions[j * H + to] + theta.label_state(y, to);
    }
  }
  out.log_z = log_sum_exp(std::span<const double>(out.alpha).subspan((length - 1) * H, H));

  if (!with_backward) {
    out.beta.clear();
    return;
  }
  out.beta.assign(length * H, 0.0);
  for (std::size_t j = length - 1; j-- > 0;) {
    for (std::size_t from = 0; from < H; ++from) {
      for (std::size_t to = 0; to < H; ++to) {
        terms[to] = theta.transition(y, from, to) + emissions[(j + 1) * H + to] + theta.label_state(y, to) +
                    out.beta[(j + 1) * H + to];
      }
      out.beta[j * H + from] = log_sum_exp(terms);
    }
  }
}

}  // namespace detail

double log_partition(Label y, const ObservationSequence& x, const HcrfParameters& theta) {
  check_dims(x, theta);
  check_label(y, theta);
  const auto em = detail::emissions(x, theta);
  detail::Lattice lat;
  detail::forward_backward(y, em, x.length(), theta, lat, false);
  return lat.log_z;
}

PosteriorDistribution posterior(const ObservationSequence& x, const HcrfParameters& theta) {
  check_dims(x, theta);
  const auto em = detail::emissions(x, theta);
  detail::Lattice lat;
  std::vector<double> log_z(theta.num_labels());
  for (Label y = 0; y < theta.num_labels(); ++y) {
    detail::forward_backward(y, em, x.length(), theta, lat, false);
    log_z[y] = lat.log_z;
  }
  const double total = log_sum_exp(log_z);
  PosteriorDistribution probs(log_z.size());
  for (std::size_t y = 0; y < log_z.size(); ++y) probs[y] = std::exp(log_z[y] - total);
  return probs;
}

Label argmax_label(std::span<const double> probs) {
  Label best = 0;
  for (Label y = 1; y < probs.size(); ++y) {
    if (probs[y] > probs[best]) best = y;
  }
  return best;
}

Label predict(const ObservationSequence& x, const HcrfParameters& theta) {
  return argmax_label(posterior(x, theta));
}

Marginals marginals(Label y, const ObservationSequence& x, const HcrfParameters& theta) {
  check_dims(x, theta);
  check_label(y, theta);
  const std::size_t L = x.length();
  const std::size_t H = theta.num_states();
  const auto em = detail::emissions(x, theta);
  detail::Lattice lat;
  detail::forward_backward(y, em, L, theta, lat, true);

  Marginals m;
  m.length = L;
  m.num_states = H;
  m.state.resize(L * H);
  for (std::size_t i = 0; i < L * H; ++i) m.state[i] = std::exp(lat.alpha[i] + lat.beta[i] - lat.log_z);
  if (L > 1) {
    m.pair.resize((L - 1) * H * H);
    for (std::size_t j = 0; j + 1 < L; ++j) {
      for (std::size_t from = 0; from < H; ++from) {
        for (std::size_t to = 0; to < H; ++to) {
          const double lp = lat.alpha[j * H + from] + theta.transition(y, from, to) + em[(j + 1) * H + to] +
                            theta.label_state(y, to) + lat.beta[(j + 1) * H + to] - lat.log_z;
          m.pair[(j * H + from) * H + to] = std::exp(lp);
        }
      }
    }
  }
  return m;
}

PosteriorDistribution brute_force_posterior(const ObservationSequence& x, const HcrfParameters& theta) {
  check_dims(x, theta);
  const std::size_t L = x.length();
  const std::size_t H = theta.num_states();
  if (std::pow(static_cast<double>(H), static_cast<double>(L)) > kBruteForceBudget) {
    throw InvalidInput("brute-force enumeration refused: " + std::to_string(H) + "^" + std::to_string(L) +
                       " paths exceed the budget of 1e6");
  }
  std::vector<std::vector<double>> scores(theta.num_labels());
  std::vector<std::size_t> path(L, 0);
  while (true) {
    for (Label y = 0; y < theta.num_labels(); ++y) scores[y].push_back(potential(y, path, x, theta));
    std::size_t k = 0;
    while (k < L && ++path[k] == H) path[k++] = 0;
    if (k == L) break;
  }
  std::vector<double> log_z(theta.num_labels());
  for (Label y = 0; y < theta.num_labels(); ++y) log_z[y] = log_sum_exp(scores[y]);
  const double total = log_sum_exp(log_z);
  PosteriorDistribution probs(log_z.size());
  for (std::size_t y = 0; y < log_z.size(); ++y) probs[y] = std::exp(log_z[y] - total);
  return probs;
}

}  // namespace hcrf
