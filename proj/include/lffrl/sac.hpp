#pragma once

#include "lffrl/checkpoint.hpp"
#include "lffrl/envs.hpp"
#include "lffrl/fourier.hpp"
#include "lffrl/matrix.hpp"
#include "lffrl/nn.hpp"
#include "lffrl/rng.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lffrl {

struct SacConfig {
    double actor_lr = 1e-4;
    double critic_lr = 1e-4;
    double temperature_lr = 1e-4;
    double discount = 0.99;
    int target_update_period = 2;
    double initial_temperature = 0.1;
    long batch_size = 256;
    long warmup_steps = 10000;
    // warmup actions are uniform draws held for this many steps; values > 1
    // give temporally-correlated exploration (mountain car needs it)
    long warmup_action_repeat = 1;
    double polyak_tau = 0.005;
    double weight_decay = 0.0;  // critic weight matrices only
    FourierSpec critic_spec;    // input_dim filled from the environment
    std::vector<int> actor_hidden = {1024, 1024};
    double target_entropy = 0.0;  // 0 = use -action_dim
    long buffer_capacity = 100000;
    long total_steps = 200000;
    long eval_interval = 10000;
    int eval_episodes = 10;
    std::uint64_t seed = 0;
};

struct Transition {
    std::vector<double> s;
    std::vector<double> a;
    double r = 0.0;
    std::vector<double> s_next;
    bool done = false;  // true terminal only; horizon cuts bootstrap normally
};

/// FIFO ring of transitions with uniform sampling over the filled region.
/// Only noiseless observations ever enter here; observation noise exists
/// purely on the evaluation path.
class ReplayBuffer {
public:
    ReplayBuffer(long capacity, int obs_dim, int action_dim);

    void add(const Transition& t);
    std::size_t size() const { return size_; }
    long capacity() const { return capacity_; }
    std::size_t cursor() const { return cursor_; }

    struct Batch {
        Matrix obs, act, next_obs;
        std::vector<double> reward;
        std::vector<char> done;
    };
    Batch sample(long n, Rng& rng) const;
    /// First n stored transitions in insertion-slot order (diagnostics batches).
    Batch head(long n) const;

    static Matrix critic_input(const Batch& b);

    const Matrix& observations() const { return obs_; }

private:
    long capacity_;
    int obs_dim_, action_dim_;
    std::size_t size_ = 0, cursor_ = 0;
    Matrix obs_, act_, next_obs_;
    std::vector<double> reward_;
    std::vector<char> done_;
};

/// Squashed-Gaussian policy head: the net emits (mean, raw log-std) per
/// action dimension; log-std is tanh-squashed into [-20, 2] and the action is
/// tanh(mean + std * xi).
struct GaussianActor {
    Mlp net;
    int action_dim = 0;
    static constexpr double kLogStdMin = -20.0;
    static constexpr double kLogStdMax = 2.0;
};

struct ActorSample {
    Matrix actions;                // tanh(u)
    std::vector<double> log_prob;  // per row
    // cached intermediates for the reparameterized gradient
    Matrix u, xi, stddev, tanh_raw;
    ForwardCache cache;
};

ActorSample actor_sample(const GaussianActor& actor, const Matrix& obs, Rng& rng);
Matrix actor_mean_action(const GaussianActor& actor, const Matrix& obs);

/// Critic input rows: observation columns then action columns.
Matrix batch_critic_input(const ReplayBuffer::Batch& batch);

struct SacAgent {
    SacConfig cfg;
    int obs_dim = 0, action_dim = 0;
    GaussianActor actor;
    Mlp critic1, critic2, target1, target2;
    double log_alpha = 0.0;
    AdamState opt_actor, opt_critic1, opt_critic2;
    AdamScalar opt_alpha;
    long train_steps = 0;

    double alpha() const;
    double target_entropy() const;
};

SacAgent make_agent(const SacConfig& cfg, int obs_dim, int action_dim, Rng& rng);

/// Bootstrapped regression target
/// y = r + gamma * (1-done) * (min_q_next - alpha * log_prob_next).
double critic_target(double r, bool done, double min_q_next, double log_prob_next,
                     double alpha, double gamma);

struct StepLosses {
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double alpha_loss = 0.0;
    double alpha = 0.0;
};

/// Reparameterized actor objective E[alpha*log pi - min(Q1,Q2)] and its
/// gradient w.r.t. the actor parameters, with the noise draws taken from rng
/// in a fixed order (so a copied rng replays the exact same objective).
struct ActorUpdate {
    double loss = 0.0;
    double mean_log_prob = 0.0;
    Gradients grads;
};
ActorUpdate actor_loss_and_grad(const SacAgent& agent, const Matrix& obs, Rng& rng);

/// target <- tau * online + (1 - tau) * target, every parameter.
void polyak_update(Mlp& target, const Mlp& online, double tau);

struct TrainingDiverged : std::runtime_error {
    TrainingDiverged(long step, const std::string& what);
    long step;
};

/// One SAC update: twin-critic regression to the entropy-adjusted target
/// (with weight decay on critic weights), reparameterized actor step against
/// min(Q1,Q2), temperature step toward the entropy target, periodic polyak
/// target sync. Requires buffer size >= warmup_steps.
StepLosses train_step(SacAgent& agent, ReplayBuffer& buffer, Rng& rng);

struct EvalResult {
    double mean_return = 0.0;
    double std_return = 0.0;
};

/// Deterministic-policy rollouts; sigma perturbs only the observations the
/// actor sees, never the environment state or the returns.
EvalResult evaluate(SacAgent& agent, Env& env, double sigma, int episodes, Rng& rng);

struct TrainProgress {
    long step = 0;
    double critic_loss = 0.0, actor_loss = 0.0, alpha_loss = 0.0, alpha = 0.0;
};

struct TrainHooks {
    /// Fired every eval_interval steps (and at the final step) with mean
    /// losses since the previous firing.
    std::function<void(const TrainProgress&)> on_eval;
};

/// Environment-interaction loop: uniform random actions for warmup_steps,
/// then stochastic policy actions with one train_step per environment step.
void run_training(Env& env, SacAgent& agent, ReplayBuffer& buffer, Rng& root,
                  const TrainHooks& hooks);

struct SweepBetaRow {
    double beta_init = 0.0;
    std::uint64_t seed = 0;
    double return_at_eval = 0.0;
    double beta_hat_final = 0.0;
    bool failed = false;
    std::string error;
};

/// Trains one agent per (beta, seed), recording the early-training return at
/// eval_step and the final first-layer bandwidth estimate. Individual run
/// failures are recorded and the sweep continues.
std::vector<SweepBetaRow> sweep_beta(const std::string& env_name,
                                     const std::vector<double>& betas,
                                     const std::vector<std::uint64_t>& seeds,
                                     const SacConfig& base, long eval_step);

/// Evaluates every agent across a log grid of sigmas and derives the three
/// disruption levels.
NoiseSpec tune_noise_levels(Env& env, std::span<SacAgent* const> agents,
                            const std::vector<double>& sigma_grid, int episodes, Rng& rng);

// --- checkpoint plumbing ---

std::vector<TensorRecord> mlp_to_tensors(const std::string& prefix, const Mlp& net);
Mlp mlp_from_tensors(const std::string& prefix, const std::vector<TensorRecord>& records);

void save_agent(const std::string& path, const SacAgent& agent);
void load_agent(const std::string& path, SacAgent& agent);

void save_replay(const std::string& path, const ReplayBuffer& buffer);
ReplayBuffer::Batch load_replay(const std::string& path);

}  // namespace lffrl
