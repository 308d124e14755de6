#include "hcrf/training.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "hcrf/errors.hpp"
#include "hcrf/kernels.hpp"

namespace hcrf {
namespace {

constexpr std::size_t kChunkSize = 16;

void validate(const Dataset& data, const HcrfParameters& theta) {
  if (data.empty()) throw InvalidInput("training data is empty");
  for (const auto& ex : data) {
    check_dims(ex.x, theta);
    if (ex.y >= theta.num_labels()) throw InvalidInput("label index out of range in '" + ex.x.doc_id() + "'");
  }
}

// Adds the negative log-likelihood gradient of one sequence into grad and
// returns its negative log-likelihood.
double accumulate_sequence(const LabeledSequence& ex, const HcrfParameters& theta, std::span<double> grad,
                           std::vector<detail::Lattice>& lattices, std::vector<double>& coef) {
  const std::size_t L = ex.x.length();
  const std::size_t H = theta.num_states();
  const std::size_t Y = theta.num_labels();
  const std::size_t D = theta.dim();
  const auto em = detail::emissions(ex.x, theta);

  lattices.resize(Y);
  std::vector<double> log_z(Y);
  for (Label y = 0; y < Y; ++y) {
    detail::forward_backward(y, em, L, theta, lattices[y], true);
    log_z[y] = lattices[y].log_z;
  }
  const double total = log_sum_exp(log_z);
  const double nll = total - log_z[ex.y];

  // weight[y] = P(y|x) - [y == gold]; expected feature counts under each
  // label's chain enter the gradient with this weight.
  coef.assign(L * H, 0.0);
  const std::size_t ls_off = theta.label_state_offset();
  const std::size_t tr_off = theta.transition_offset();
  for (Label y = 0; y < Y; ++y) {
    const double weight = std::exp(log_z[y] - total) - (y == ex.y ? 1.0 : 0.0);
    if (weight == 0.0) continue;
    const auto& lat = lattices[y];
    for (std::size_t j = 0; j < L; ++j) {
      for (std::size_t h = 0; h < H; ++h) {
        const double mu = std::exp(lat.alpha[j * H + h] + lat.beta[j * H + h] - lat.log_z);
        coef[j * H + h] += weight * mu;
        grad[ls_off + y * H + h] += weight * mu;
      }
    }
    for (std::size_t j = 0; j + 1 < L; ++j) {
      for (std::size_t from = 0; from < H; ++from) {
        const double a = lat.alpha[j * H + from];
        for (std::size_t to = 0; to < H; ++to) {
          const double xi = std::exp(a + theta.transition(y, from, to) + em[(j + 1) * H + to] +
                                     theta.label_state(y, to) + lat.beta[(j + 1) * H + to] - lat.log_z);
          grad[tr_off + (y * H + from) * H + to] += weight * xi;
        }
      }
    }
  }
  for (std::size_t j = 0; j < L; ++j) {
    for (std::size_t h = 0; h < H; ++h) {
      const double c = coef[j * H + h];
      if (c != 0.0) kernels::axpy(c, ex.x.row(j), grad.subspan(h * D, D));
    }
  }
  return nll;
}

double chunk_terms(const Dataset& data, std::size_t begin, std::size_t end, const HcrfParameters& theta,
                   std::span<double> grad) {
  std::vector<detail::Lattice> lattices;
  std::vector<double> coef;
  double f = 0.0;
  for (std::size_t i = begin; i < end; ++i) f += accumulate_sequence(data[i], theta, grad, lattices, coef);
  return f;
}

}  // namespace

double objective_and_gradient(const Dataset& data, const HcrfParameters& theta, double lambda,
                              std::span<double> grad, unsigned num_threads) {
  validate(data, theta);
  if (grad.size() != theta.size()) throw InvalidInput("gradient buffer has the wrong size");
  std::fill(grad.begin(), grad.end(), 0.0);

  const std::size_t num_chunks = (data.size() + kChunkSize - 1) / kChunkSize;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(num_threads, num_chunks));
  std::vector<std::vector<double>> partial_grad(workers, std::vector<double>(theta.size()));
  std::vector<double> partial_f(workers);
  double f = 0.0;

  // Chunks are processed in waves of `workers`; each wave's partials are
  // folded into the total in chunk order.
  for (std::size_t wave = 0; wave < num_chunks; wave += workers) {
    const std::size_t in_wave = std::min(workers, num_chunks - wave);
    auto run = [&](std::size_t w) {
      std::fill(partial_grad[w].begin(), partial_grad[w].end(), 0.0);
      const std::size_t begin = (wave + w) * kChunkSize;
      const std::size_t end = std::min(data.size(), begin + kChunkSize);
      partial_f[w] = chunk_terms(data, begin, end, theta, partial_grad[w]);
    };
    if (in_wave == 1) {
      run(0);
    } else {
      std::vector<std::jthread> threads;
      for (std::size_t w = 0; w < in_wave; ++w) threads.emplace_back(run, w);
    }
    for (std::size_t w = 0; w < in_wave; ++w) {
      f += partial_f[w];
      kernels::axpy(1.0, partial_grad[w], grad);
    }
  }

  if (lambda != 0.0) {
    f += 0.5 * lambda * kernels::sum_squares(theta.values());
    kernels::axpy(lambda, theta.values(), grad);
  }
  return f;
}

double objective(const Dataset& data, const HcrfParameters& theta, double lambda) {
  validate(data, theta);
  double f = 0.0;
  std::vector<double> log_z(theta.num_labels());
  detail::Lattice lat;
  for (const auto& ex : data) {
    const auto em = detail::emissions(ex.x, theta);
    for (Label y = 0; y < theta.num_labels(); ++y) {
      detail::forward_backward(y, em, ex.x.length(), theta, lat, false);
      log_z[y] = lat.log_z;
    }
    f += log_sum_exp(log_z) - log_z[ex.y];
  }
  return f + 0.5 * lambda * kernels::sum_squares(theta.values());
}

HcrfParameters gradient(const Dataset& data, const HcrfParameters& theta, double lambda) {
  HcrfParameters g(theta.num_labels(), theta.num_states(), theta.dim());
  objective_and_gradient(data, theta, lambda, g.values());
  return g;
}

HcrfParameters random_parameters(std::size_t num_labels, std::size_t num_states, std::size_t dim,
                                 std::uint64_t seed, double scale) {
  HcrfParameters p(num_labels, num_states, dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (double& v : p.values()) v = u(rng);
  return p;
}

TrainResult train(const Dataset& data, std::size_t num_labels, const TrainingConfig& config) {
  if (data.empty()) throw InvalidInput("training data is empty");
  if (config.num_hidden_states < 1) throw InvalidInput("need at least one hidden state");
  if (!(config.l2_lambda >= 0.0)) throw InvalidInput("l2 lambda must be non-negative");
  std::vector<bool> seen(num_labels, false);
  for (const auto& ex : data) {
    if (ex.y >= num_labels) throw InvalidInput("label index out of range");
    seen[ex.y] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw InvalidInput("training data must contain at least one example of every label");
  }
  const std::size_t dim = data.front().x.dim();

  LbfgsOptions opts;
  opts.max_iterations = config.max_iterations;
  opts.grad_tolerance = config.grad_tolerance;

  TrainResult best;
  bool have_best = false;
  for (int r = 0; r < std::max(1, config.restarts); ++r) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
    HcrfParameters theta = random_parameters(num_labels, config.num_hidden_states, dim, seed, config.init_scale);
    validate(data, theta);
    HcrfParameters shape = theta;
    auto fn = [&](std::span<const double> x, std::span<double> g) {
      std::copy(x.begin(), x.end(), shape.values().begin());
      return objective_and_gradient(data, shape, config.l2_lambda, g, config.num_threads);
    };
    const std::vector<double> x0(theta.values().begin(), theta.values().end());
    LbfgsResult res = minimize_lbfgs(fn, x0, opts);
    if (!have_best || res.objective < best.trace.iterations.back().objective) {
      std::copy(res.x.begin(), res.x.end(), theta.values().begin());
      best.params = std::move(theta);
      best.trace.iterations = std::move(res.trace);
      best.trace.status = res.status;
      best.trace.seed = seed;
      have_best = true;
    }
  }
  return best;
}

ObservationSequence apply_context_window(const ObservationSequence& seq, std::size_t w) {
  if (w == 0) return seq;
  const std::size_t L = seq.length();
  const std::size_t D = seq.dim();
  const std::size_t width = (2 * w + 1) * D;
  std::vector<double> out(L * width, 0.0);
  for (std::size_t j = 0; j < L; ++j) {
    for (std::size_t k = 0; k < 2 * w + 1; ++k) {
      const auto src = static_cast<long long>(j) + static_cast<long long>(k) - static_cast<long long>(w);
      if (src < 0 || src >= static_cast<long long>(L)) continue;
      const auto row = seq.row(static_cast<std::size_t>(src));
      std::copy(row.begin(), row.end(), out.begin() + static_cast<long long>(j * width + k * D));
    }
  }
  return ObservationSequence(seq.doc_id(), width, std::move(out));
}

}  // namespace hcrf
