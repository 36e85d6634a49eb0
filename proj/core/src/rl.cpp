#include "ratsteer/rl.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "ratsteer/rng.hpp"

namespace ratsteer {

ReplayMemory::ReplayMemory(std::size_t capacity) : slots_(capacity) {
  assert(capacity > 0);
}

void ReplayMemory::push(Experience e) {
  slots_[head_] = std::move(e);
  head_ = (head_ + 1) % slots_.size();
  size_ = std::min(size_ + 1, slots_.size());
}

const Experience& ReplayMemory::at(std::size_t i) const {
  assert(i < size_);
  const std::size_t oldest = (head_ + slots_.size() - size_) % slots_.size();
  return slots_[(oldest + i) % slots_.size()];
}

std::optional<std::vector<const Experience*>> ReplayMemory::sample(
    std::size_t n, std::mt19937_64& rng) const {
  if (size_ < n || n == 0) return std::nullopt;
  std::vector<const Experience*> out;
  out.reserve(n);
  if (n * 4 >= size_) {
    // Dense request: partial Fisher-Yates over all live indices.
    std::vector<std::size_t> idx(size_);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + uniform_index(rng, size_ - i);
      std::swap(idx[i], idx[j]);
      out.push_back(&at(idx[i]));
    }
  } else {
    // Sparse request: rejection sampling beats re-touching the whole index
    // array on every train step (n << size, so repeats are rare).
    std::vector<std::size_t> chosen;
    chosen.reserve(n);
    while (chosen.size() < n) {
      const std::size_t j = uniform_index(rng, size_);
      if (std::find(chosen.begin(), chosen.end(), j) == chosen.end())
        chosen.push_back(j);
    }
    for (std::size_t j : chosen) out.push_back(&at(j));
  }
  return out;
}

QNetwork::QNetwork(std::vector<int> layer_sizes)
    : sizes_(std::move(layer_sizes)) {
  assert(sizes_.size() >= 2);
  weights_.resize(sizes_.size() - 1);
  biases_.resize(sizes_.size() - 1);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    weights_[l].assign(
        static_cast<std::size_t>(sizes_[l + 1]) * sizes_[l], 0.0);
    biases_[l].assign(static_cast<std::size_t>(sizes_[l + 1]), 0.0);
  }
}

void QNetwork::init_weights(std::mt19937_64& rng) {
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double limit = std::sqrt(6.0 / (sizes_[l] + sizes_[l + 1]));
    for (double& w : weights_[l]) w = (2.0 * uniform_unit(rng) - 1.0) * limit;
    std::fill(biases_[l].begin(), biases_[l].end(), 0.0);
  }
}

std::vector<double> QNetwork::forward(std::span<const double> input) const {
  assert(static_cast<int>(input.size()) == input_dim());
  std::vector<double> a(input.begin(), input.end());
  std::vector<double> z;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const int in_dim = sizes_[l];
    const int out_dim = sizes_[l + 1];
    z.assign(static_cast<std::size_t>(out_dim), 0.0);
    const double* w = weights_[l].data();
    for (int j = 0; j < out_dim; ++j) {
      double s = biases_[l][static_cast<std::size_t>(j)];
      const double* row = w + static_cast<std::size_t>(j) * in_dim;
      for (int i = 0; i < in_dim; ++i) s += row[i] * a[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(j)] = s;
    }
    const bool hidden = l + 1 < weights_.size();
    if (hidden)
      for (double& v : z) v = std::max(v, 0.0);
    a.swap(z);
  }
  return a;
}

std::size_t QNetwork::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l)
    n += weights_[l].size() + biases_[l].size();
  return n;
}

double td_target(double reward, std::span<const double> next_state,
                 bool terminal, const QNetwork& target, double gamma) {
  if (terminal) return reward;
  const std::vector<double> q = target.forward(next_state);
  return reward + gamma * *std::max_element(q.begin(), q.end());
}

double batch_loss(const QNetwork& net, const QNetwork& target,
                  std::span<const Experience* const> batch, double gamma) {
  assert(!batch.empty());
  double loss = 0.0;
  for (const Experience* e : batch) {
    const double y = td_target(e->reward, e->next_state, e->terminal, target,
                               gamma);
    const std::vector<double> q = net.forward(e->state);
    const double err = q[static_cast<std::size_t>(e->action)] - y;
    loss += err * err;
  }
  return loss / static_cast<double>(batch.size());
}

double train_step(QNetwork& net, const QNetwork& target,
                  std::span<const Experience* const> batch, double gamma,
                  double learning_rate) {
  assert(!batch.empty());
  const auto& sizes = net.layer_sizes();
  const int layers = net.layer_count();

  // Gradient accumulators, same layout as the parameters.
  std::vector<std::vector<double>> grad_w(static_cast<std::size_t>(layers));
  std::vector<std::vector<double>> grad_b(static_cast<std::size_t>(layers));
  for (int l = 0; l < layers; ++l) {
    grad_w[static_cast<std::size_t>(l)].assign(net.weights(l).size(), 0.0);
    grad_b[static_cast<std::size_t>(l)].assign(net.biases(l).size(), 0.0);
  }

  // Per-sample forward caches.
  std::vector<std::vector<double>> act(static_cast<std::size_t>(layers) + 1);
  std::vector<std::vector<double>> pre(static_cast<std::size_t>(layers));
  std::vector<double> delta, delta_prev;

  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;

  for (const Experience* e : batch) {
    const double y =
        td_target(e->reward, e->next_state, e->terminal, target, gamma);

    // Forward with caches.
    act[0].assign(e->state.begin(), e->state.end());
    for (int l = 0; l < layers; ++l) {
      const int in_dim = sizes[static_cast<std::size_t>(l)];
      const int out_dim = sizes[static_cast<std::size_t>(l) + 1];
      auto& z = pre[static_cast<std::size_t>(l)];
      z.assign(static_cast<std::size_t>(out_dim), 0.0);
      const double* w = net.weights(l).data();
      const auto& a_in = act[static_cast<std::size_t>(l)];
      for (int j = 0; j < out_dim; ++j) {
        double s = net.biases(l)[static_cast<std::size_t>(j)];
        const double* row = w + static_cast<std::size_t>(j) * in_dim;
        for (int i = 0; i < in_dim; ++i)
          s += row[i] * a_in[static_cast<std::size_t>(i)];
        z[static_cast<std::size_t>(j)] = s;
      }
      auto& a_out = act[static_cast<std::size_t>(l) + 1];
      a_out = z;
      if (l + 1 < layers)
        for (double& v : a_out) v = std::max(v, 0.0);
    }

    const auto& q = act[static_cast<std::size_t>(layers)];
    const double err = q[static_cast<std::size_t>(e->action)] - y;
    loss += err * err;

    // Backward. The loss touches only the taken action's output.
    delta.assign(q.size(), 0.0);
    delta[static_cast<std::size_t>(e->action)] = 2.0 * err * inv_batch;
    for (int l = layers - 1; l >= 0; --l) {
      const int in_dim = sizes[static_cast<std::size_t>(l)];
      const int out_dim = sizes[static_cast<std::size_t>(l) + 1];
      const auto& a_in = act[static_cast<std::size_t>(l)];
      auto& gw = grad_w[static_cast<std::size_t>(l)];
      auto& gb = grad_b[static_cast<std::size_t>(l)];
      for (int j = 0; j < out_dim; ++j) {
        const double d = delta[static_cast<std::size_t>(j)];
        if (d == 0.0) continue;
        gb[static_cast<std::size_t>(j)] += d;
        double* grow = gw.data() + static_cast<std::size_t>(j) * in_dim;
        for (int i = 0; i < in_dim; ++i)
          grow[i] += d * a_in[static_cast<std::size_t>(i)];
      }
      if (l == 0) break;
      delta_prev.assign(static_cast<std::size_t>(in_dim), 0.0);
      const double* w = net.weights(l).data();
      const auto& z_in = pre[static_cast<std::size_t>(l) - 1];
      for (int j = 0; j < out_dim; ++j) {
        const double d = delta[static_cast<std::size_t>(j)];
        if (d == 0.0) continue;
        const double* row = w + static_cast<std::size_t>(j) * in_dim;
        for (int i = 0; i < in_dim; ++i)
          delta_prev[static_cast<std::size_t>(i)] += d * row[i];
      }
      // ReLU gate of the upstream hidden layer.
      for (int i = 0; i < in_dim; ++i)
        if (z_in[static_cast<std::size_t>(i)] <= 0.0)
          delta_prev[static_cast<std::size_t>(i)] = 0.0;
      delta.swap(delta_prev);
    }
  }

  loss *= inv_batch;
  if (!std::isfinite(loss))
    throw DivergenceError("training loss is not finite");

  for (int l = 0; l < layers; ++l) {
    auto& w = net.weights(l);
    auto& b = net.biases(l);
    const auto& gw = grad_w[static_cast<std::size_t>(l)];
    const auto& gb = grad_b[static_cast<std::size_t>(l)];
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * gw[i];
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= learning_rate * gb[i];
  }
  return loss;
}

void sync_target(const QNetwork& net, QNetwork& target) { target = net; }

int greedy_action(const QNetwork& net, std::span<const double> state) {
  const std::vector<double> q = net.forward(state);
  int best = 0;
  for (int a = 1; a < static_cast<int>(q.size()); ++a)
    if (q[static_cast<std::size_t>(a)] > q[static_cast<std::size_t>(best)])
      best = a;
  return best;
}

int select_action(const QNetwork& net, std::span<const double> state,
                  double epsilon, std::mt19937_64& rng) {
  if (uniform_unit(rng) < epsilon)
    return static_cast<int>(
        uniform_index(rng, static_cast<std::uint64_t>(net.output_dim())));
  return greedy_action(net, state);
}

namespace {
constexpr char kCheckpointMagic[4] = {'R', 'S', 'Q', 'N'};
constexpr std::uint32_t kCheckpointVersion = 1;
}  // namespace

void save_network(const QNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " +
                                     path.string());
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  const std::uint32_t version = kCheckpointVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const std::uint32_t n_sizes =
      static_cast<std::uint32_t>(net.layer_sizes().size());
  out.write(reinterpret_cast<const char*>(&n_sizes), sizeof(n_sizes));
  for (int s : net.layer_sizes()) {
    const std::int32_t v = s;
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  }
  for (int l = 0; l < net.layer_count(); ++l) {
    const auto& w = net.weights(l);
    const auto& b = net.biases(l);
    out.write(reinterpret_cast<const char*>(w.data()),
              static_cast<std::streamsize>(w.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(b.data()),
              static_cast<std::streamsize>(b.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint write failed: " +
                                     path.string());
}

QNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " +
                                    path.string());
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a network checkpoint: " + path.string());
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || version != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint version");
  std::uint32_t n_sizes = 0;
  in.read(reinterpret_cast<char*>(&n_sizes), sizeof(n_sizes));
  if (!in || n_sizes < 2 || n_sizes > 64)
    throw std::runtime_error("corrupt checkpoint header");
  std::vector<int> sizes(n_sizes);
  for (auto& s : sizes) {
    std::int32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in || v <= 0) throw std::runtime_error("corrupt checkpoint sizes");
    s = v;
  }
  QNetwork net(sizes);
  for (int l = 0; l < net.layer_count(); ++l) {
    auto& w = net.weights(l);
    auto& b = net.biases(l);
    in.read(reinterpret_cast<char*>(w.data()),
            static_cast<std::streamsize>(w.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(b.data()),
            static_cast<std::streamsize>(b.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated checkpoint: " +
                                      path.string());
  }
  return net;
}

DqnAgent::DqnAgent(int input_dim, int action_count, AgentConfig cfg,
                   std::mt19937_64 init_rng, std::mt19937_64 explore_rng,
                   std::mt19937_64 sample_rng)
    : cfg_(std::move(cfg)),
      replay_(cfg_.replay_capacity),
      explore_rng_(explore_rng),
      sample_rng_(sample_rng) {
  std::vector<int> sizes;
  sizes.push_back(input_dim);
  for (int h : cfg_.hidden_layers) sizes.push_back(h);
  sizes.push_back(action_count);
  net_ = QNetwork(std::move(sizes));
  net_.init_weights(init_rng);
  target_ = net_;
}

int DqnAgent::act(std::span<const double> state) {
  if (frozen_) return greedy_action(net_, state);
  const double eps = cfg_.epsilon.at(decision_steps_);
  ++decision_steps_;
  return select_action(net_, state, eps, explore_rng_);
}

int DqnAgent::act_greedy(std::span<const double> state) const {
  return greedy_action(net_, state);
}

void DqnAgent::observe(Experience e) {
  if (frozen_) return;
  replay_.push(std::move(e));
}

std::optional<double> DqnAgent::train_tick() {
  if (frozen_) return std::nullopt;
  const std::size_t need = std::max(
      cfg_.warmup_experiences, static_cast<std::size_t>(cfg_.minibatch_size));
  if (replay_.size() < need) return std::nullopt;
  auto batch = replay_.sample(
      static_cast<std::size_t>(cfg_.minibatch_size), sample_rng_);
  const double loss =
      train_step(net_, target_, *batch, cfg_.gamma, cfg_.learning_rate);
  ++train_steps_;
  if (cfg_.target_sync_period > 0 &&
      train_steps_ % cfg_.target_sync_period == 0)
    sync_target(net_, target_);
  return loss;
}

}  // namespace ratsteer
