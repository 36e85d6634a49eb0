#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace ratsteer {

// Raised when training produces a non-finite loss; callers abort the run.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Experience {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

// Fixed-capacity ring buffer; push past capacity evicts the oldest entry.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void push(Experience e);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return slots_.size(); }

  // i = 0 is the oldest retained experience.
  const Experience& at(std::size_t i) const;

  // n distinct experiences, uniform without replacement; nullopt while the
  // buffer holds fewer than n (caller skips training during warmup).
  std::optional<std::vector<const Experience*>> sample(
      std::size_t n, std::mt19937_64& rng) const;

 private:
  std::vector<Experience> slots_;
  std::size_t head_ = 0;  // next write position
  std::size_t size_ = 0;
};

// Fully connected net, ReLU hidden layers, linear output. Layouts and the
// backward pass are hand-rolled so training is bit-reproducible and the
// gradient can be checked against finite differences.
class QNetwork {
 public:
  QNetwork() = default;
  // layer_sizes = {input, hidden..., output}; weights start at zero.
  explicit QNetwork(std::vector<int> layer_sizes);

  // Glorot uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  void init_weights(std::mt19937_64& rng);

  std::vector<double> forward(std::span<const double> input) const;

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int layer_count() const { return static_cast<int>(weights_.size()); }
  const std::vector<int>& layer_sizes() const { return sizes_; }
  std::size_t parameter_count() const;

  // Row-major [out][in] weight matrix and bias vector of one layer.
  std::vector<double>& weights(int layer) { return weights_[layer]; }
  const std::vector<double>& weights(int layer) const {
    return weights_[layer];
  }
  std::vector<double>& biases(int layer) { return biases_[layer]; }
  const std::vector<double>& biases(int layer) const { return biases_[layer]; }

  bool same_shape(const QNetwork& other) const {
    return sizes_ == other.sizes_;
  }

 private:
  std::vector<int> sizes_;
  std::vector<std::vector<double>> weights_;
  std::vector<std::vector<double>> biases_;
};

// Bellman backup target: r, plus the discounted best target-net value of the
// next state when the transition is not terminal.
double td_target(double reward, std::span<const double> next_state,
                 bool terminal, const QNetwork& target, double gamma);

// Mean squared TD error of a minibatch under the current weights. Shares the
// loss definition with train_step so gradients can be finite-difference
// checked against exactly what train_step minimizes.
double batch_loss(const QNetwork& net, const QNetwork& target,
                  std::span<const Experience* const> batch, double gamma);

// One SGD step on batch_loss. Returns the pre-update loss; throws
// DivergenceError when the loss is not finite.
double train_step(QNetwork& net, const QNetwork& target,
                  std::span<const Experience* const> batch, double gamma,
                  double learning_rate);

void sync_target(const QNetwork& net, QNetwork& target);

// Epsilon-greedy: explore uniformly with probability epsilon, otherwise the
// greedy action (ties to the lowest index).
int greedy_action(const QNetwork& net, std::span<const double> state);
int select_action(const QNetwork& net, std::span<const double> state,
                  double epsilon, std::mt19937_64& rng);

// Binary weight checkpoint; load reproduces the saved network bit-exactly.
void save_network(const QNetwork& net, const std::filesystem::path& path);
QNetwork load_network(const std::filesystem::path& path);

// Linear decay from `start` to `end` over `decay_steps` decisions.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  long decay_steps = 5000;

  double at(long step) const {
    if (step >= decay_steps) return end;
    const double t = static_cast<double>(step) / decay_steps;
    return start + (end - start) * t;
  }
};

struct AgentConfig {
  std::vector<int> hidden_layers = {32, 32};
  double gamma = 0.9;
  double learning_rate = 1e-3;
  int minibatch_size = 32;
  std::size_t replay_capacity = 10000;
  std::size_t warmup_experiences = 500;
  long target_sync_period = 200;
  EpsilonSchedule epsilon;
};

// Deep Q-learning agent: epsilon-greedy action selection, replay memory,
// one minibatch SGD step per tick, periodic target-network sync.
class DqnAgent {
 public:
  DqnAgent(int input_dim, int action_count, AgentConfig cfg,
           std::mt19937_64 init_rng, std::mt19937_64 explore_rng,
           std::mt19937_64 sample_rng);

  // Epsilon-greedy on the current schedule; advances the decision counter.
  int act(std::span<const double> state);
  int act_greedy(std::span<const double> state) const;

  void observe(Experience e);

  // One training step if warmup is done; returns the minibatch loss when a
  // step ran. Handles the periodic target sync.
  std::optional<double> train_tick();

  // Stops exploration and learning; the policy becomes pure greedy.
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  double current_epsilon() const {
    return frozen_ ? 0.0 : cfg_.epsilon.at(decision_steps_);
  }
  long decision_steps() const { return decision_steps_; }
  long train_steps() const { return train_steps_; }
  std::size_t replay_size() const { return replay_.size(); }

  const QNetwork& network() const { return net_; }
  QNetwork& network() { return net_; }
  const QNetwork& target_network() const { return target_; }
  const AgentConfig& config() const { return cfg_; }

 private:
  AgentConfig cfg_;
  QNetwork net_;
  QNetwork target_;
  ReplayMemory replay_;
  std::mt19937_64 explore_rng_;
  std::mt19937_64 sample_rng_;
  long decision_steps_ = 0;
  long train_steps_ = 0;
  bool frozen_ = false;
};

}  // namespace ratsteer
