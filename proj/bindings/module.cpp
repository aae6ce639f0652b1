#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lffrl/config.hpp"
#include "lffrl/diagnostics.hpp"
#include "lffrl/dp.hpp"
#include "lffrl/envs.hpp"
#include "lffrl/fourier.hpp"
#include "lffrl/nn.hpp"
#include "lffrl/runner.hpp"
#include "lffrl/sac.hpp"

namespace py = pybind11;
using namespace lffrl;

namespace {

Matrix matrix_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-d array");
    Matrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
    std::copy(arr.data(), arr.data() + m.size(), m.data.begin());
    return m;
}

py::array_t<double> numpy_from_matrix(const Matrix& m) {
    py::array_t<double> arr({m.rows, m.cols});
    std::copy(m.data.begin(), m.data.end(), arr.mutable_data());
    return arr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "learned-Fourier-feature value networks: core operations";
    m.attr("__version__") = kVersion;

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>())
        .def("substream", &Rng::substream, py::arg("name"), py::arg("index") = 0)
        .def("uniform", &Rng::uniform, py::arg("lo") = 0.0, py::arg("hi") = 1.0)
        .def("normal", &Rng::normal, py::arg("mean") = 0.0, py::arg("stddev") = 1.0);

    py::enum_<Variant>(m, "Variant")
        .value("RELU", Variant::ReLU)
        .value("LFF", Variant::LFF)
        .value("CLFF", Variant::CLFF);

    py::class_<FourierSpec>(m, "FourierSpec")
        .def(py::init([](Variant variant, double beta, int input_dim, int width_multiplier,
                         std::vector<int> hidden_widths) {
                 return FourierSpec{variant, beta, input_dim, width_multiplier,
                                    std::move(hidden_widths)};
             }),
             py::arg("variant"), py::arg("beta"), py::arg("input_dim"),
             py::arg("width_multiplier") = 40,
             py::arg("hidden_widths") = std::vector<int>{1024, 1024})
        .def_readwrite("variant", &FourierSpec::variant)
        .def_readwrite("beta", &FourierSpec::beta)
        .def_readwrite("input_dim", &FourierSpec::input_dim)
        .def_readwrite("width_multiplier", &FourierSpec::width_multiplier)
        .def_readwrite("hidden_widths", &FourierSpec::hidden_widths);

    py::class_<Mlp>(m, "Mlp")
        .def_property_readonly("input_dim", &Mlp::input_dim)
        .def_property_readonly("output_dim", &Mlp::output_dim)
        .def_property_readonly("layer_count", [](const Mlp& n) { return n.layers.size(); })
        .def_property_readonly("clff_first", [](const Mlp& n) { return n.clff_first; })
        .def("first_layer_weights",
             [](const Mlp& n) { return numpy_from_matrix(n.layers.front().weights); })
        .def("first_layer_biases", [](const Mlp& n) { return n.layers.front().biases; })
        .def("forward", [](const Mlp& n, const py::array_t<double>& batch) {
            return numpy_from_matrix(forward(n, matrix_from_numpy(batch)).output());
        });

    m.def(
        "build_critic",
        [](const FourierSpec& spec, std::uint64_t seed) {
            Rng rng(seed);
            return build_critic(spec, rng);
        },
        py::arg("spec"), py::arg("seed"));
    m.def(
        "estimate_beta",
        [](const Mlp& net, int input_dim) {
            BetaEstimate est = estimate_beta(net.layers.front(), input_dim);
            return py::make_tuple(est.beta_hat, est.sigma_hat);
        },
        py::arg("net"), py::arg("input_dim"));
    m.def("li_sigma_to_beta", &li_sigma_to_beta, py::arg("sigma"), py::arg("input_dim"));

    m.def("representation_frequency",
          [](const py::array_t<double>& w, const py::array_t<double>& data) {
              return representation_frequency(matrix_from_numpy(w), matrix_from_numpy(data));
          });
    m.def(
        "effective_rank",
        [](const py::array_t<double>& features, double delta) {
            EffectiveRank er = effective_rank(matrix_from_numpy(features), delta);
            return py::make_tuple(er.rank, er.all_zero);
        },
        py::arg("features"), py::arg("delta") = 0.01);
    m.def("singular_values", [](const py::array_t<double>& a) {
        return singular_values(matrix_from_numpy(a));
    });

    py::class_<Env>(m, "Env")
        .def(
            "reset",
            [](Env& e, std::uint64_t seed) {
                Rng rng(seed);
                return e.reset(rng);
            },
            py::arg("seed"))
        .def("step",
             [](Env& e, std::vector<double> action) {
                 StepResult r = e.step(action);
                 return py::make_tuple(r.observation, r.reward, r.done, r.truncated);
             })
        .def_property_readonly("observation_dim", &Env::observation_dim)
        .def_property_readonly("action_dim", &Env::action_dim)
        .def_property_readonly("horizon", &Env::horizon)
        .def_property_readonly("name", &Env::name);
    m.def("make_env", &make_env);

    py::class_<Grid>(m, "Grid")
        .def(py::init([](std::size_t nx, std::size_t nv) {
                 Grid g;
                 g.nx = nx;
                 g.nv = nv;
                 return g;
             }),
             py::arg("nx") = 200, py::arg("nv") = 200)
        .def_readonly("nx", &Grid::nx)
        .def_readonly("nv", &Grid::nv);

    m.def(
        "value_iteration",
        [](const Grid& grid, double gamma, double tol) {
            ValueIterationResult res = value_iteration(grid, gamma, tol);
            return py::make_tuple(numpy_from_matrix(res.table.values), res.sweeps,
                                  res.residuals.back());
        },
        py::arg("grid"), py::arg("gamma") = 0.99, py::arg("tol") = 1e-6);

    py::class_<SacConfig>(m, "SacConfig")
        .def(py::init<>())
        .def_readwrite("actor_lr", &SacConfig::actor_lr)
        .def_readwrite("critic_lr", &SacConfig::critic_lr)
        .def_readwrite("temperature_lr", &SacConfig::temperature_lr)
        .def_readwrite("discount", &SacConfig::discount)
        .def_readwrite("target_update_period", &SacConfig::target_update_period)
        .def_readwrite("initial_temperature", &SacConfig::initial_temperature)
        .def_readwrite("batch_size", &SacConfig::batch_size)
        .def_readwrite("warmup_steps", &SacConfig::warmup_steps)
        .def_readwrite("polyak_tau", &SacConfig::polyak_tau)
        .def_readwrite("weight_decay", &SacConfig::weight_decay)
        .def_readwrite("critic_spec", &SacConfig::critic_spec)
        .def_readwrite("actor_hidden", &SacConfig::actor_hidden)
        .def_readwrite("buffer_capacity", &SacConfig::buffer_capacity)
        .def_readwrite("total_steps", &SacConfig::total_steps)
        .def_readwrite("eval_interval", &SacConfig::eval_interval)
        .def_readwrite("eval_episodes", &SacConfig::eval_episodes)
        .def_readwrite("seed", &SacConfig::seed);

    py::class_<SacAgent>(m, "SacAgent")
        .def_property_readonly("critic1", [](const SacAgent& a) { return a.critic1; })
        .def_property_readonly("alpha", &SacAgent::alpha)
        .def("act", [](SacAgent& a, std::vector<double> obs) {
            const std::size_t width = obs.size();
            Matrix in(1, width, std::move(obs));
            Matrix out = actor_mean_action(a.actor, in);
            return std::vector<double>(out.data.begin(), out.data.end());
        });

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("mean_return", &EvalResult::mean_return)
        .def_readonly("std_return", &EvalResult::std_return);

    m.def(
        "train_sac",
        [](const std::string& env_name, const SacConfig& cfg,
           const py::object& on_eval) {
            auto env = make_env(env_name);
            Rng root(cfg.seed);
            SacAgent agent = make_agent(cfg, env->observation_dim(), env->action_dim(), root);
            ReplayBuffer buffer(cfg.buffer_capacity, env->observation_dim(),
                                env->action_dim());
            TrainHooks hooks;
            if (!on_eval.is_none()) {
                hooks.on_eval = [&](const TrainProgress& p) {
                    auto eval_env = env->clone_fresh();
                    Rng er = root.substream("eval", p.step);
                    EvalResult r = evaluate(agent, *eval_env, 0.0, cfg.eval_episodes, er);
                    on_eval(p.step, r.mean_return, p.critic_loss, p.actor_loss, p.alpha);
                };
            }
            run_training(*env, agent, buffer, root, hooks);
            return agent;
        },
        py::arg("env_name"), py::arg("config"), py::arg("on_eval") = py::none(),
        "Train one agent; returns it. on_eval(step, mean_return, critic_loss, "
        "actor_loss, alpha) fires at the eval cadence.");

    m.def(
        "evaluate",
        [](SacAgent& agent, const std::string& env_name, double sigma, int episodes,
           std::uint64_t seed) {
            auto env = make_env(env_name);
            Rng rng(seed);
            return evaluate(agent, *env, sigma, episodes, rng);
        },
        py::arg("agent"), py::arg("env_name"), py::arg("sigma"), py::arg("episodes"),
        py::arg("seed"));

    m.def("save_agent", &save_agent);
    m.def("load_agent_critic", [](const std::string& path) {
        return mlp_from_tensors("critic1", load_checkpoint(path));
    });

    py::class_<DiagnosticsReport>(m, "DiagnosticsReport")
        .def_readonly("beta_hat", &DiagnosticsReport::beta_hat)
        .def_readonly("sigma_hat", &DiagnosticsReport::sigma_hat)
        .def_readonly("effective_rank", &DiagnosticsReport::effective_rank)
        .def_readonly("cos_pre_post", &DiagnosticsReport::cos_pre_post)
        .def_readonly("cos_noise", &DiagnosticsReport::cos_noise)
        .def_readonly("euclid_noise_sq", &DiagnosticsReport::euclid_noise_sq)
        .def_readonly("euclid_noise", &DiagnosticsReport::euclid_noise);

    m.def(
        "compute_diagnostics",
        [](const Mlp& critic, const py::array_t<double>& batch, double sigma, double delta,
           int bins, std::uint64_t seed) {
            Rng rng(seed);
            return compute_diagnostics(critic, critic.clff_first, matrix_from_numpy(batch),
                                       sigma, delta, bins, rng);
        },
        py::arg("critic"), py::arg("batch"), py::arg("sigma"), py::arg("delta") = 0.01,
        py::arg("bins") = 30, py::arg("seed") = 0);
}
