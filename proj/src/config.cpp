#include "lffrl/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace lffrl {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    cfg.text_ = text;
    std::stringstream ss(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(ss, line)) {
        line_no += 1;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty section");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        std::string path = section.empty() ? key : section + "." + key;
        if (cfg.entries_.count(path))
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": duplicate key " + path,
                              path);
        cfg.entries_[path] = Entry{value, line_no};
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::raw(const std::string& key) {
    auto it = entries_.find(key);
    it->second.consumed = true;
    return it->second.value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
    return has(key) ? raw(key) : fallback;
}

std::string Config::require_string(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required config key: " + key, key);
    return raw(key);
}

double Config::get_real(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    try {
        std::size_t pos = 0;
        double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return out;
    } catch (...) {
        throw ConfigError("config key " + key + ": expected a number, got '" + v + "'", key);
    }
}

long Config::get_int(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    try {
        std::size_t pos = 0;
        long out = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return out;
    } catch (...) {
        throw ConfigError("config key " + key + ": expected an integer, got '" + v + "'", key);
    }
}

bool Config::get_bool(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    std::string lower;
    for (char c : v) lower.push_back(static_cast<char>(std::tolower(c)));
    if (lower == "true" || lower == "1" || lower == "yes") return true;
    if (lower == "false" || lower == "0" || lower == "no") return false;
    throw ConfigError("config key " + key + ": expected a boolean, got '" + v + "'", key);
}

std::vector<double> Config::get_real_list(const std::string& key,
                                          std::vector<double> fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    std::vector<double> out;
    for (const std::string& tok : split_ws(v)) {
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigError("config key " + key + ": expected numbers, got '" + tok + "'",
                              key);
        }
    }
    return out;
}

std::vector<long> Config::get_int_list(const std::string& key, std::vector<long> fallback) {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    std::vector<long> out;
    for (const std::string& tok : split_ws(v)) {
        try {
            out.push_back(std::stol(tok));
        } catch (...) {
            throw ConfigError("config key " + key + ": expected integers, got '" + tok + "'",
                              key);
        }
    }
    return out;
}

void Config::finish() const {
    for (const auto& [key, entry] : entries_) {
        if (!entry.consumed)
            throw ConfigError("unknown config key: " + key + " (" + origin_ + ":" +
                                  std::to_string(entry.line) + ")",
                              key);
    }
}

ExperimentConfig experiment_from_config(Config cfg) {
    ExperimentConfig ec;
    ec.config_text = cfg.text();

    ec.out_dir = cfg.get_string("run.out_dir", ec.out_dir);
    {
        std::vector<long> seeds = cfg.get_int_list("run.seeds", {});
        if (!seeds.empty()) {
            ec.seeds.clear();
            for (long s : seeds) ec.seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }

    ec.env_name = cfg.get_string("env.name", ec.env_name);
    long env_seed = cfg.get_int("env.seed", -1);
    if (env_seed >= 0 && !cfg.has("run.seeds"))
        ec.seeds = {static_cast<std::uint64_t>(env_seed)};
    ec.noise.low = cfg.get_real("env.noise.low", 0.0);
    ec.noise.medium = cfg.get_real("env.noise.medium", 0.0);
    ec.noise.high = cfg.get_real("env.noise.high", 0.0);
    if (!(ec.noise.low <= ec.noise.medium && ec.noise.medium <= ec.noise.high) ||
        ec.noise.low < 0.0)
        throw ConfigError("env.noise levels must satisfy 0 <= low <= medium <= high",
                          "env.noise.low");

    SacConfig& sac = ec.sac;
    sac.actor_lr = cfg.get_real("sac.actor_lr", sac.actor_lr);
    sac.critic_lr = cfg.get_real("sac.critic_lr", sac.critic_lr);
    sac.temperature_lr = cfg.get_real("sac.temperature_lr", sac.temperature_lr);
    sac.discount = cfg.get_real("sac.discount", sac.discount);
    sac.target_update_period =
        static_cast<int>(cfg.get_int("sac.target_update_period", sac.target_update_period));
    sac.initial_temperature = cfg.get_real("sac.initial_temperature", sac.initial_temperature);
    sac.batch_size = cfg.get_int("sac.batch_size", sac.batch_size);
    sac.warmup_steps = cfg.get_int("sac.warmup_steps", sac.warmup_steps);
    sac.warmup_action_repeat =
        cfg.get_int("sac.warmup_action_repeat", sac.warmup_action_repeat);
    sac.polyak_tau = cfg.get_real("sac.polyak_tau", sac.polyak_tau);
    sac.weight_decay = cfg.get_real("sac.weight_decay", sac.weight_decay);
    sac.target_entropy = cfg.get_real("sac.target_entropy", sac.target_entropy);
    sac.buffer_capacity = cfg.get_int("sac.buffer_capacity", sac.buffer_capacity);
    sac.total_steps = cfg.get_int("sac.total_steps", sac.total_steps);
    sac.eval_interval = cfg.get_int("sac.eval_interval", sac.eval_interval);
    sac.eval_episodes = static_cast<int>(cfg.get_int("sac.eval_episodes", sac.eval_episodes));
    {
        std::vector<long> h = cfg.get_int_list("sac.actor_hidden", {});
        if (!h.empty()) {
            sac.actor_hidden.clear();
            for (long w : h) sac.actor_hidden.push_back(static_cast<int>(w));
        }
    }
    if (sac.discount <= 0.0 || sac.discount >= 1.0)
        throw ConfigError("sac.discount must be in (0,1)", "sac.discount");
    if (sac.batch_size > sac.buffer_capacity)
        throw ConfigError("sac.batch_size must not exceed sac.buffer_capacity",
                          "sac.batch_size");

    FourierSpec& fs = sac.critic_spec;
    fs.variant = variant_from_string(cfg.get_string("fourier.variant", "lff"));
    fs.beta = cfg.get_real("fourier.beta", fs.beta);
    fs.width_multiplier =
        static_cast<int>(cfg.get_int("fourier.width_multiplier", fs.width_multiplier));
    {
        std::vector<long> h = cfg.get_int_list("fourier.hidden_widths", {});
        if (!h.empty()) {
            fs.hidden_widths.clear();
            for (long w : h) fs.hidden_widths.push_back(static_cast<int>(w));
        }
    }
    if (fs.variant != Variant::ReLU && fs.beta <= 0.0)
        throw ConfigError("fourier.beta must be > 0", "fourier.beta");
    if (fs.width_multiplier < 1)
        throw ConfigError("fourier.width_multiplier must be >= 1", "fourier.width_multiplier");
    ec.beta_grid = cfg.get_real_list("fourier.beta_grid", {});
    ec.sweep_eval_step = cfg.get_int("fourier.sweep_eval_step", ec.sweep_eval_step);

    ec.dp_grid.nx = static_cast<std::size_t>(cfg.get_int("dp.nx", 200));
    ec.dp_grid.nv = static_cast<std::size_t>(cfg.get_int("dp.nv", 200));
    ec.dp_gamma = cfg.get_real("dp.gamma", ec.dp_gamma);
    ec.dp_block = static_cast<std::size_t>(cfg.get_int("dp.block", 25));
    ec.dp_fit.lr = cfg.get_real("dp.fit_lr", ec.dp_fit.lr);
    ec.dp_fit.steps = cfg.get_int("dp.fit_steps", ec.dp_fit.steps);
    ec.dp_fit.batch = cfg.get_int("dp.fit_batch", ec.dp_fit.batch);
    ec.dp_fit.report_every = cfg.get_int("dp.fit_report_every", ec.dp_fit.report_every);
    ec.dp_fit.beta = cfg.get_real("dp.fit_beta", ec.dp_fit.beta);
    {
        std::vector<long> h = cfg.get_int_list("dp.fit_hidden", {});
        if (!h.empty()) {
            ec.dp_fit.hidden.clear();
            for (long w : h) ec.dp_fit.hidden.push_back(static_cast<int>(w));
        }
    }

    ec.diag_batch = cfg.get_int("diagnostics.batch", ec.diag_batch);
    ec.diag_delta = cfg.get_real("diagnostics.delta", ec.diag_delta);
    ec.diag_bins = static_cast<int>(cfg.get_int("diagnostics.bins", ec.diag_bins));
    ec.diag_sigma = cfg.get_real("diagnostics.sigma", ec.diag_sigma);
    if (ec.diag_delta <= 0.0 || ec.diag_delta >= 1.0)
        throw ConfigError("diagnostics.delta must be in (0,1)", "diagnostics.delta");

    cfg.finish();
    return ec;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return experiment_from_config(Config::parse_file(path));
}

}  // namespace lffrl
