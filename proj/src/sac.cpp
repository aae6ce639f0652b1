#include "lffrl/sac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lffrl {

namespace {

double softplus(double x) { return std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0); }

// log(1 - tanh(u)^2) without catastrophic cancellation
double log_one_minus_tanh_sq(double u) {
    return 2.0 * (std::log(2.0) - u - softplus(-2.0 * u));
}

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5*log(2*pi)

Matrix concat_cols(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows, a.cols + b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) out(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols; ++j) out(i, a.cols + j) = b(i, j);
    }
    return out;
}

}  // namespace

ReplayBuffer::ReplayBuffer(long capacity, int obs_dim, int action_dim)
    : capacity_(capacity), obs_dim_(obs_dim), action_dim_(action_dim),
      obs_(capacity, obs_dim), act_(capacity, action_dim), next_obs_(capacity, obs_dim),
      reward_(capacity, 0.0), done_(capacity, 0) {
    check(capacity >= 1, "ReplayBuffer: capacity must be >= 1");
}

void ReplayBuffer::add(const Transition& t) {
    check(t.s.size() == static_cast<std::size_t>(obs_dim_) &&
              t.s_next.size() == static_cast<std::size_t>(obs_dim_) &&
              t.a.size() == static_cast<std::size_t>(action_dim_),
          "ReplayBuffer: transition shape mismatch");
    for (int j = 0; j < obs_dim_; ++j) {
        obs_(cursor_, j) = t.s[j];
        next_obs_(cursor_, j) = t.s_next[j];
    }
    for (int j = 0; j < action_dim_; ++j) act_(cursor_, j) = t.a[j];
    reward_[cursor_] = t.r;
    done_[cursor_] = t.done ? 1 : 0;
    cursor_ = (cursor_ + 1) % static_cast<std::size_t>(capacity_);
    size_ = std::min(size_ + 1, static_cast<std::size_t>(capacity_));
}

ReplayBuffer::Batch ReplayBuffer::sample(long n, Rng& rng) const {
    check(size_ > 0, "ReplayBuffer: cannot sample from an empty buffer");
    Batch b{Matrix(n, obs_dim_), Matrix(n, action_dim_), Matrix(n, obs_dim_),
            std::vector<double>(n), std::vector<char>(n)};
    for (long r = 0; r < n; ++r) {
        std::size_t k = rng.uniform_index(size_);
        for (int j = 0; j < obs_dim_; ++j) {
            b.obs(r, j) = obs_(k, j);
            b.next_obs(r, j) = next_obs_(k, j);
        }
        for (int j = 0; j < action_dim_; ++j) b.act(r, j) = act_(k, j);
        b.reward[r] = reward_[k];
        b.done[r] = done_[k];
    }
    return b;
}

ReplayBuffer::Batch ReplayBuffer::head(long n) const {
    long m = std::min<long>(n, static_cast<long>(size_));
    Batch b{Matrix(m, obs_dim_), Matrix(m, action_dim_), Matrix(m, obs_dim_),
            std::vector<double>(m), std::vector<char>(m)};
    for (long r = 0; r < m; ++r) {
        for (int j = 0; j < obs_dim_; ++j) {
            b.obs(r, j) = obs_(r, j);
            b.next_obs(r, j) = next_obs_(r, j);
        }
        for (int j = 0; j < action_dim_; ++j) b.act(r, j) = act_(r, j);
        b.reward[r] = reward_[r];
        b.done[r] = done_[r];
    }
    return b;
}

Matrix batch_critic_input(const ReplayBuffer::Batch& batch) {
    return concat_cols(batch.obs, batch.act);
}

ActorSample actor_sample(const GaussianActor& actor, const Matrix& obs, Rng& rng) {
    const int A = actor.action_dim;
    ActorSample s;
    s.cache = forward(actor.net, obs);
    const Matrix& out = s.cache.output();
    check(out.cols == static_cast<std::size_t>(2 * A), "actor net must emit 2*action_dim");

    const std::size_t B = obs.rows;
    s.actions = Matrix(B, A);
    s.u = Matrix(B, A);
    s.xi = Matrix(B, A);
    s.stddev = Matrix(B, A);
    s.tanh_raw = Matrix(B, A);
    s.log_prob.assign(B, 0.0);

    for (std::size_t i = 0; i < B; ++i) {
        for (int j = 0; j < A; ++j) {
            double mean = out(i, j);
            double traw = std::tanh(out(i, A + j));
            double log_std = GaussianActor::kLogStdMin +
                             0.5 * (GaussianActor::kLogStdMax - GaussianActor::kLogStdMin) *
                                 (traw + 1.0);
            double std = std::exp(log_std);
            double xi = rng.normal();
            double u = mean + std * xi;
            s.tanh_raw(i, j) = traw;
            s.stddev(i, j) = std;
            s.xi(i, j) = xi;
            s.u(i, j) = u;
            s.actions(i, j) = std::tanh(u);
            s.log_prob[i] += -0.5 * xi * xi - log_std - kHalfLog2Pi - log_one_minus_tanh_sq(u);
        }
    }
    return s;
}

Matrix actor_mean_action(const GaussianActor& actor, const Matrix& obs) {
    ForwardCache cache = forward(actor.net, obs);
    const Matrix& out = cache.output();
    Matrix act(obs.rows, actor.action_dim);
    for (std::size_t i = 0; i < act.rows; ++i)
        for (int j = 0; j < actor.action_dim; ++j) act(i, j) = std::tanh(out(i, j));
    return act;
}

double SacAgent::alpha() const { return std::exp(log_alpha); }

double SacAgent::target_entropy() const {
    return cfg.target_entropy != 0.0 ? cfg.target_entropy : -static_cast<double>(action_dim);
}

SacAgent make_agent(const SacConfig& cfg, int obs_dim, int action_dim, Rng& rng) {
    check(cfg.discount > 0.0 && cfg.discount < 1.0, "SacConfig: discount must be in (0,1)");
    check(cfg.polyak_tau > 0.0 && cfg.polyak_tau <= 1.0, "SacConfig: tau must be in (0,1]");
    check(cfg.batch_size <= cfg.buffer_capacity,
          "SacConfig: batch_size must not exceed buffer capacity");
    check(cfg.initial_temperature > 0.0, "SacConfig: initial temperature must be > 0");

    SacAgent agent;
    agent.cfg = cfg;
    agent.obs_dim = obs_dim;
    agent.action_dim = action_dim;

    FourierSpec critic_spec = cfg.critic_spec;
    critic_spec.input_dim = obs_dim + action_dim;

    Rng c1 = rng.substream("init-critic1");
    Rng c2 = rng.substream("init-critic2");
    Rng ar = rng.substream("init-actor");
    agent.critic1 = build_critic(critic_spec, c1);
    agent.critic2 = build_critic(critic_spec, c2);
    agent.target1 = agent.critic1;
    agent.target2 = agent.critic2;
    agent.actor.net = build_relu_mlp(obs_dim, cfg.actor_hidden, 2 * action_dim, ar);
    agent.actor.action_dim = action_dim;
    agent.log_alpha = std::log(cfg.initial_temperature);

    agent.opt_actor = make_adam(agent.actor.net, cfg.actor_lr);
    agent.opt_critic1 = make_adam(agent.critic1, cfg.critic_lr);
    agent.opt_critic2 = make_adam(agent.critic2, cfg.critic_lr);
    agent.opt_alpha.lr = cfg.temperature_lr;
    return agent;
}

double critic_target(double r, bool done, double min_q_next, double log_prob_next,
                     double alpha, double gamma) {
    return r + gamma * (done ? 0.0 : 1.0) * (min_q_next - alpha * log_prob_next);
}

TrainingDiverged::TrainingDiverged(long step_, const std::string& what)
    : std::runtime_error("training diverged at step " + std::to_string(step_) + ": " + what),
      step(step_) {}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
    for (std::size_t l = 0; l < target.layers.size(); ++l) {
        auto& tw = target.layers[l].weights.data;
        const auto& ow = online.layers[l].weights.data;
        for (std::size_t i = 0; i < tw.size(); ++i)
            tw[i] = tau * ow[i] + (1.0 - tau) * tw[i];
        auto& tb = target.layers[l].biases;
        const auto& ob = online.layers[l].biases;
        for (std::size_t i = 0; i < tb.size(); ++i)
            tb[i] = tau * ob[i] + (1.0 - tau) * tb[i];
    }
}

namespace {

std::vector<double> critic_values(const Mlp& critic, const Matrix& input) {
    ForwardCache cache = forward(critic, input);
    const Matrix& out = cache.output();
    std::vector<double> q(out.rows);
    for (std::size_t i = 0; i < out.rows; ++i) q[i] = out(i, 0);
    return q;
}

}  // namespace

ActorUpdate actor_loss_and_grad(const SacAgent& agent, const Matrix& obs, Rng& rng) {
    const long B = static_cast<long>(obs.rows);
    const int A = agent.action_dim;
    const double alpha = agent.alpha();

    ActorSample fresh = actor_sample(agent.actor, obs, rng);
    Matrix actor_in = concat_cols(obs, fresh.actions);
    ForwardCache q1c = forward(agent.critic1, actor_in);
    ForwardCache q2c = forward(agent.critic2, actor_in);

    // min(Q1,Q2) routes each row's gradient through whichever twin is smaller
    Matrix pick1(B, 1), pick2(B, 1);
    double mean_min_q = 0.0;
    for (long i = 0; i < B; ++i) {
        double q1 = q1c.output()(i, 0), q2 = q2c.output()(i, 0);
        pick1(i, 0) = q1 <= q2 ? 1.0 : 0.0;
        pick2(i, 0) = 1.0 - pick1(i, 0);
        mean_min_q += std::min(q1, q2);
    }
    mean_min_q /= static_cast<double>(B);

    Matrix dq_da(B, A);
    {
        Gradients g1 = backward(agent.critic1, q1c, pick1);
        Gradients g2 = backward(agent.critic2, q2c, pick2);
        for (long i = 0; i < B; ++i)
            for (int j = 0; j < A; ++j)
                dq_da(i, j) = g1.d_input(i, agent.obs_dim + j) +
                              g2.d_input(i, agent.obs_dim + j);
    }

    // With u = mean + std*xi and a = tanh(u) held on fixed noise xi:
    //   dlogpi/dmean    =  2*tanh(u)
    //   dlogpi/dlogstd  = -1 + 2*tanh(u)*std*xi
    //   dQ/dmean        =  (dQ/da) * (1 - tanh(u)^2)
    //   dQ/dlogstd      =  (dQ/da) * (1 - tanh(u)^2) * std*xi
    // and logstd itself is a tanh-squash of the raw head output.
    const double half_span = 0.5 * (GaussianActor::kLogStdMax - GaussianActor::kLogStdMin);
    Matrix actor_grad(B, 2 * A);
    double mean_log_prob = 0.0;
    for (long i = 0; i < B; ++i) {
        mean_log_prob += fresh.log_prob[i];
        for (int j = 0; j < A; ++j) {
            double u = fresh.u(i, j);
            double th = std::tanh(u);
            double sech2 = 1.0 - th * th;
            double gq = dq_da(i, j);
            double sx = fresh.stddev(i, j) * fresh.xi(i, j);
            double dmean = alpha * 2.0 * th - gq * sech2;
            double dlogstd = alpha * (-1.0 + 2.0 * th * sx) - gq * sech2 * sx;
            double traw = fresh.tanh_raw(i, j);
            actor_grad(i, j) = dmean / static_cast<double>(B);
            actor_grad(i, A + j) =
                dlogstd * half_span * (1.0 - traw * traw) / static_cast<double>(B);
        }
    }
    mean_log_prob /= static_cast<double>(B);

    ActorUpdate out;
    out.mean_log_prob = mean_log_prob;
    out.loss = alpha * mean_log_prob - mean_min_q;
    out.grads = backward(agent.actor.net, fresh.cache, actor_grad);
    return out;
}

StepLosses train_step(SacAgent& agent, ReplayBuffer& buffer, Rng& rng) {
    const SacConfig& cfg = agent.cfg;
    check(buffer.size() >= static_cast<std::size_t>(cfg.warmup_steps),
          "train_step: buffer smaller than warmup_steps");
    const long B = cfg.batch_size;
    const double alpha = agent.alpha();
    if (!(alpha > 0.0)) throw TrainingDiverged(agent.train_steps, "temperature not positive");

    ReplayBuffer::Batch batch = buffer.sample(B, rng);

    // --- critic update ---
    ActorSample next = actor_sample(agent.actor, batch.next_obs, rng);
    Matrix next_in = concat_cols(batch.next_obs, next.actions);
    std::vector<double> q1n = critic_values(agent.target1, next_in);
    std::vector<double> q2n = critic_values(agent.target2, next_in);

    std::vector<double> y(B);
    for (long i = 0; i < B; ++i) {
        double mn = std::min(q1n[i], q2n[i]);
        if (!(mn <= q1n[i] && mn <= q2n[i]))
            throw std::logic_error("twin target must be the element-wise minimum");
        y[i] = critic_target(batch.reward[i], batch.done[i] != 0, mn, next.log_prob[i],
                             alpha, cfg.discount);
    }

    Matrix critic_in = concat_cols(batch.obs, batch.act);
    double critic_loss = 0.0;
    for (Mlp* critic : {&agent.critic1, &agent.critic2}) {
        ForwardCache cache = forward(*critic, critic_in);
        Matrix grad(B, 1);
        double mse = 0.0;
        for (long i = 0; i < B; ++i) {
            double diff = cache.output()(i, 0) - y[i];
            mse += diff * diff;
            grad(i, 0) = 2.0 * diff / static_cast<double>(B);
        }
        mse /= static_cast<double>(B);
        critic_loss += mse;
        Gradients grads = backward(*critic, cache, grad);
        adam_step(*critic, grads,
                  critic == &agent.critic1 ? agent.opt_critic1 : agent.opt_critic2,
                  cfg.weight_decay);
    }

    // --- actor update: minimize E[alpha*log pi - min Q] via reparameterization ---
    ActorUpdate actor_update = actor_loss_and_grad(agent, batch.obs, rng);
    double actor_loss = actor_update.loss;
    adam_step(agent.actor.net, actor_update.grads, agent.opt_actor);

    // --- temperature update ---
    double entropy = -actor_update.mean_log_prob;
    double alpha_loss = alpha * (entropy - agent.target_entropy());
    double dlog_alpha = alpha * (entropy - agent.target_entropy());
    agent.opt_alpha.update(agent.log_alpha, dlog_alpha);

    agent.train_steps += 1;
    if (agent.train_steps % cfg.target_update_period == 0) {
        polyak_update(agent.target1, agent.critic1, cfg.polyak_tau);
        polyak_update(agent.target2, agent.critic2, cfg.polyak_tau);
    }

    StepLosses losses{critic_loss, actor_loss, alpha_loss, agent.alpha()};
    if (!std::isfinite(losses.critic_loss) || !std::isfinite(losses.actor_loss) ||
        !std::isfinite(losses.alpha_loss))
        throw TrainingDiverged(agent.train_steps, "non-finite loss");
    return losses;
}

EvalResult evaluate(SacAgent& agent, Env& env, double sigma, int episodes, Rng& rng) {
    check(sigma >= 0.0, "evaluate: sigma must be >= 0");
    std::vector<double> returns(episodes, 0.0);
    for (int ep = 0; ep < episodes; ++ep) {
        std::vector<double> obs = env.reset(rng);
        bool done = false;
        while (!done) {
            std::vector<double> seen =
                sigma > 0.0 ? add_observation_noise(obs, sigma, rng) : obs;
            const std::size_t width = seen.size();
            Matrix in(1, width, std::move(seen));
            Matrix act = actor_mean_action(agent.actor, in);
            StepResult sr = env.step(act.row(0));
            returns[ep] += sr.reward;
            obs = std::move(sr.observation);
            done = sr.done;
        }
    }
    EvalResult res;
    for (double r : returns) res.mean_return += r;
    res.mean_return /= episodes;
    double var = 0.0;
    for (double r : returns) var += (r - res.mean_return) * (r - res.mean_return);
    res.std_return = std::sqrt(var / episodes);
    return res;
}

void run_training(Env& env, SacAgent& agent, ReplayBuffer& buffer, Rng& root,
                  const TrainHooks& hooks) {
    const SacConfig& cfg = agent.cfg;
    Rng env_rng = root.substream("env");
    Rng policy_rng = root.substream("policy");
    Rng sampler_rng = root.substream("sampler");

    std::vector<double> obs = env.reset(env_rng);
    double acc_critic = 0.0, acc_actor = 0.0, acc_alpha = 0.0;
    long acc_n = 0;
    std::vector<double> held_action(env.action_dim(), 0.0);
    long held_left = 0;

    for (long step = 1; step <= cfg.total_steps; ++step) {
        std::vector<double> action(env.action_dim());
        if (step <= cfg.warmup_steps) {
            if (held_left <= 0) {
                for (double& a : held_action) a = policy_rng.uniform(-1.0, 1.0);
                held_left = std::max<long>(cfg.warmup_action_repeat, 1);
            }
            action = held_action;
            held_left -= 1;
        } else {
            Matrix in(1, obs.size(), obs);
            ActorSample s = actor_sample(agent.actor, in, policy_rng);
            for (int j = 0; j < env.action_dim(); ++j) action[j] = s.actions(0, j);
        }

        StepResult sr = env.step(action);
        Transition t{obs, action, sr.reward, sr.observation, sr.done && !sr.truncated};
        buffer.add(t);
        obs = sr.done ? env.reset(env_rng) : std::move(sr.observation);

        if (step > cfg.warmup_steps) {
            StepLosses l = train_step(agent, buffer, sampler_rng);
            acc_critic += l.critic_loss;
            acc_actor += l.actor_loss;
            acc_alpha += l.alpha_loss;
            acc_n += 1;
        }

        if (hooks.on_eval && (step % cfg.eval_interval == 0 || step == cfg.total_steps)) {
            TrainProgress p;
            p.step = step;
            if (acc_n > 0) {
                p.critic_loss = acc_critic / acc_n;
                p.actor_loss = acc_actor / acc_n;
                p.alpha_loss = acc_alpha / acc_n;
            }
            p.alpha = agent.alpha();
            hooks.on_eval(p);
            acc_critic = acc_actor = acc_alpha = 0.0;
            acc_n = 0;
            if (step == cfg.total_steps) break;  // no double fire on aligned final step
        }
    }
}

std::vector<SweepBetaRow> sweep_beta(const std::string& env_name,
                                     const std::vector<double>& betas,
                                     const std::vector<std::uint64_t>& seeds,
                                     const SacConfig& base, long eval_step) {
    check(!betas.empty(), "sweep_beta: empty beta grid");
    check(!seeds.empty(), "sweep_beta: empty seed list");
    std::vector<SweepBetaRow> rows;
    for (double beta : betas) {
        for (std::uint64_t seed : seeds) {
            SweepBetaRow row;
            row.beta_init = beta;
            row.seed = seed;
            try {
                SacConfig cfg = base;
                cfg.critic_spec.beta = beta;
                cfg.seed = seed;
                auto env = make_env(env_name);
                Rng root(seed);
                SacAgent agent =
                    make_agent(cfg, env->observation_dim(), env->action_dim(), root);
                ReplayBuffer buffer(cfg.buffer_capacity, env->observation_dim(),
                                    env->action_dim());
                bool captured = false;
                TrainHooks hooks;
                hooks.on_eval = [&](const TrainProgress& p) {
                    if (!captured && p.step >= eval_step) {
                        auto eval_env = env->clone_fresh();
                        Rng eval_rng = root.substream("eval", p.step);
                        row.return_at_eval =
                            evaluate(agent, *eval_env, 0.0, cfg.eval_episodes, eval_rng)
                                .mean_return;
                        captured = true;
                    }
                };
                run_training(*env, agent, buffer, root, hooks);
                row.beta_hat_final =
                    estimate_beta(agent.critic1.layers.front(),
                                  static_cast<int>(agent.critic1.input_dim()))
                        .beta_hat;
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

NoiseSpec tune_noise_levels(Env& env, std::span<SacAgent* const> agents,
                            const std::vector<double>& sigma_grid, int episodes, Rng& rng) {
    check(!agents.empty(), "tune_noise_levels: need at least one trained policy");
    NoiseTuneInput input;
    input.sigma_grid = sigma_grid;
    for (std::size_t p = 0; p < agents.size(); ++p) {
        auto fresh = env.clone_fresh();
        Rng base_rng = rng.substream("tune-base", p);
        input.noiseless_returns.push_back(
            evaluate(*agents[p], *fresh, 0.0, episodes, base_rng).mean_return);
        std::vector<double> row;
        for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
            Rng eval_rng = rng.substream("tune", p * 1000 + i);
            auto e = env.clone_fresh();
            row.push_back(
                evaluate(*agents[p], *e, sigma_grid[i], episodes, eval_rng).mean_return);
        }
        input.returns.push_back(std::move(row));
    }
    return tune_noise_levels(input);
}

// --- checkpoint plumbing ---

std::vector<TensorRecord> mlp_to_tensors(const std::string& prefix, const Mlp& net) {
    std::vector<TensorRecord> out;
    TensorRecord meta;
    meta.name = prefix + ".meta";
    meta.dims = {2};
    meta.values = {net.clff_first ? 1.0 : 0.0, static_cast<double>(net.layers.size())};
    out.push_back(std::move(meta));
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const LinearLayer& layer = net.layers[l];
        std::string base = prefix + ".layer" + std::to_string(l);
        TensorRecord act{base + ".act",
                         {2},
                         {static_cast<double>(static_cast<int>(layer.activation)),
                          layer.use_bias ? 1.0 : 0.0}};
        out.push_back(std::move(act));
        TensorRecord w;
        w.name = base + ".weight";
        w.dims = {static_cast<std::uint32_t>(layer.weights.rows),
                  static_cast<std::uint32_t>(layer.weights.cols)};
        w.values = layer.weights.data;
        out.push_back(std::move(w));
        if (layer.use_bias) {
            TensorRecord b;
            b.name = base + ".bias";
            b.dims = {static_cast<std::uint32_t>(layer.biases.size())};
            b.values = layer.biases;
            out.push_back(std::move(b));
        }
    }
    return out;
}

namespace {

const TensorRecord& find_tensor(const std::vector<TensorRecord>& records,
                                const std::string& name) {
    for (const auto& r : records)
        if (r.name == name) return r;
    throw std::runtime_error("checkpoint tensor missing: " + name);
}

}  // namespace

Mlp mlp_from_tensors(const std::string& prefix, const std::vector<TensorRecord>& records) {
    const TensorRecord& meta = find_tensor(records, prefix + ".meta");
    Mlp net;
    net.clff_first = meta.values.at(0) != 0.0;
    std::size_t n_layers = static_cast<std::size_t>(meta.values.at(1));
    for (std::size_t l = 0; l < n_layers; ++l) {
        std::string base = prefix + ".layer" + std::to_string(l);
        const TensorRecord& act = find_tensor(records, base + ".act");
        const TensorRecord& w = find_tensor(records, base + ".weight");
        LinearLayer layer;
        layer.activation = static_cast<Activation>(static_cast<int>(act.values.at(0)));
        layer.use_bias = act.values.at(1) != 0.0;
        layer.weights = Matrix(w.dims.at(0), w.dims.at(1), w.values);
        if (layer.use_bias) layer.biases = find_tensor(records, base + ".bias").values;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

void save_agent(const std::string& path, const SacAgent& agent) {
    std::vector<TensorRecord> records;
    auto append = [&](std::vector<TensorRecord> r) {
        for (auto& t : r) records.push_back(std::move(t));
    };
    append(mlp_to_tensors("actor", agent.actor.net));
    append(mlp_to_tensors("critic1", agent.critic1));
    append(mlp_to_tensors("critic2", agent.critic2));
    append(mlp_to_tensors("target1", agent.target1));
    append(mlp_to_tensors("target2", agent.target2));
    records.push_back(TensorRecord{"log_alpha", {1}, {agent.log_alpha}});
    save_checkpoint(path, records);
}

void load_agent(const std::string& path, SacAgent& agent) {
    std::vector<TensorRecord> records = load_checkpoint(path);
    agent.actor.net = mlp_from_tensors("actor", records);
    agent.critic1 = mlp_from_tensors("critic1", records);
    agent.critic2 = mlp_from_tensors("critic2", records);
    agent.target1 = mlp_from_tensors("target1", records);
    agent.target2 = mlp_from_tensors("target2", records);
    agent.log_alpha = find_tensor(records, "log_alpha").values.at(0);
}

void save_replay(const std::string& path, const ReplayBuffer& buffer) {
    ReplayBuffer::Batch all = buffer.head(static_cast<long>(buffer.size()));
    auto mat = [](const std::string& name, const Matrix& m) {
        return TensorRecord{name,
                            {static_cast<std::uint32_t>(m.rows),
                             static_cast<std::uint32_t>(m.cols)},
                            m.data};
    };
    std::vector<TensorRecord> records;
    records.push_back(mat("replay.obs", all.obs));
    records.push_back(mat("replay.act", all.act));
    records.push_back(mat("replay.next_obs", all.next_obs));
    records.push_back(
        TensorRecord{"replay.reward", {static_cast<std::uint32_t>(all.reward.size())},
                     all.reward});
    std::vector<double> done(all.done.begin(), all.done.end());
    records.push_back(
        TensorRecord{"replay.done", {static_cast<std::uint32_t>(done.size())}, done});
    save_checkpoint(path, records);
}

ReplayBuffer::Batch load_replay(const std::string& path) {
    std::vector<TensorRecord> records = load_checkpoint(path);
    const TensorRecord& obs = find_tensor(records, "replay.obs");
    const TensorRecord& act = find_tensor(records, "replay.act");
    const TensorRecord& next_obs = find_tensor(records, "replay.next_obs");
    const TensorRecord& reward = find_tensor(records, "replay.reward");
    const TensorRecord& done = find_tensor(records, "replay.done");
    ReplayBuffer::Batch b{Matrix(obs.dims.at(0), obs.dims.at(1), obs.values),
                          Matrix(act.dims.at(0), act.dims.at(1), act.values),
                          Matrix(next_obs.dims.at(0), next_obs.dims.at(1), next_obs.values),
                          reward.values,
                          std::vector<char>(done.values.size())};
    for (std::size_t i = 0; i < done.values.size(); ++i)
        b.done[i] = done.values[i] != 0.0 ? 1 : 0;
    return b;
}

}  // namespace lffrl
