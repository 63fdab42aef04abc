#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "csvio.hpp"
#include "error.hpp"

namespace snn {

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    return out;
}

static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

static bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("config: bad boolean for " + key + ": '" + v + "'");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.raw_text = text;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) +
                             ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "dataset") {
                if (val != "synthetic" && val != "folder")
                    throw UsageError("config: dataset must be 'synthetic' or 'folder'");
                cfg.dataset = val;
            } else if (key == "data_dir") cfg.data_dir = val;
            else if (key == "image_size") cfg.image_size = std::stoi(val);
            else if (key == "synth_classes") cfg.synth_classes = std::stoi(val);
            else if (key == "synth_per_class") cfg.synth_per_class = std::stoi(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "arch") cfg.arch = val;
            else if (key == "out_dir") cfg.out_dir = val;
            else if (key == "t_b") cfg.t_b = std::stoi(val);
            else if (key == "t_b_list") cfg.t_b_list = parse_int_list(val);
            else if (key == "t_c_list") cfg.t_c_list = parse_int_list(val);
            else if (key == "stage1.epochs") cfg.stage1.epochs = std::stoi(val);
            else if (key == "stage1.batch_size") cfg.stage1.batch_size = std::stoi(val);
            else if (key == "stage1.learning_rate") cfg.stage1.learning_rate = std::stof(val);
            else if (key == "stage1.t_max") cfg.stage1.t_max = std::stoi(val);
            else if (key == "stage1.levels") cfg.stage1.levels = std::stoi(val);
            else if (key == "stage1.lambda0") cfg.stage1.lambda0 = std::stof(val);
            else if (key == "stage1.shift") cfg.stage1.shift = std::stof(val);
            else if (key == "stage1.head_hidden") cfg.stage1.head_hidden = std::stoi(val);
            else if (key == "stage1.augment") cfg.stage1.augment = parse_bool(val, key);
            else if (key == "stage2.n_neurons") cfg.stage2.n_neurons = std::stoi(val);
            else if (key == "stage2.exc") cfg.stage2.exc = std::stof(val);
            else if (key == "stage2.inh") cfg.stage2.inh = std::stof(val);
            else if (key == "stage2.theta_plus") cfg.stage2.theta_plus = std::stof(val);
            else if (key == "stage2.batch_size") cfg.stage2.batch_size = std::stoi(val);
            else if (key == "stage2.epochs") cfg.stage2.epochs = std::stoi(val);
            else if (key == "stage2.patience") cfg.stage2.patience = std::stoi(val);
            else if (key == "stage2.eta_pre") cfg.stage2.eta_pre = std::stof(val);
            else if (key == "stage2.eta_post") cfg.stage2.eta_post = std::stof(val);
            else if (key == "stage2.t_c") cfg.stage2.t_c = std::stoi(val);
            else if (key == "stage2.w_max") cfg.stage2.w_max = std::stof(val);
            else if (key == "stage2.w_init_max") cfg.stage2.w_init_max = std::stof(val);
            else if (key == "stage2.tau_pre") cfg.stage2.tau_pre = std::stof(val);
            else if (key == "stage2.tau_post") cfg.stage2.tau_post = std::stof(val);
            else if (key == "stage2.tau_theta") cfg.stage2.tau_theta = std::stof(val);
            else if (key == "stage2.theta_exc_base") cfg.stage2.theta_exc_base = std::stof(val);
            else if (key == "stage2.theta_inh") cfg.stage2.theta_inh = std::stof(val);
            else if (key == "stage2.leak_enabled") cfg.stage2.leak_enabled = parse_bool(val, key);
            else if (key == "stage2.leak_tau") cfg.stage2.leak_tau = std::stof(val);
            else if (key == "stage2.rate_scale") cfg.stage2.rate_scale = std::stof(val);
            else if (key == "energy.joules_per_flop") cfg.energy.joules_per_flop = std::stod(val);
            else if (key == "energy.joules_per_sop") cfg.energy.joules_per_sop = std::stod(val);
            else if (key == "energy.include_input_spikes")
                cfg.energy_include_input_spikes = parse_bool(val, key);
            else if (key == "search.trials") cfg.search_trials = std::stoi(val);
            else if (key == "search.seed") cfg.search_seed = std::stoull(val);
            else if (key == "search.exc_min") cfg.search_exc_min = std::stof(val);
            else if (key == "search.exc_max") cfg.search_exc_max = std::stof(val);
            else if (key == "search.inh_min") cfg.search_inh_min = std::stof(val);
            else if (key == "search.inh_max") cfg.search_inh_max = std::stof(val);
            else if (key == "search.theta_plus_min")
                cfg.search_theta_plus_min = std::stof(val);
            else if (key == "search.theta_plus_max")
                cfg.search_theta_plus_max = std::stof(val);
            else
                throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" +
                                 key + "'");
        } catch (const std::invalid_argument&) {
            throw UsageError("config line " + std::to_string(lineno) + ": bad value '" + val +
                             "' for " + key);
        } catch (const std::out_of_range&) {
            throw UsageError("config line " + std::to_string(lineno) + ": value out of range '" +
                             val + "' for " + key);
        }
    }
    // stage-1 and stage-2 seeds follow the experiment seed
    cfg.stage1.seed = cfg.seed;
    cfg.stage2.seed = cfg.seed;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

static std::string int_list_str(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "dataset = " << c.dataset << "\n";
    if (!c.data_dir.empty()) o << "data_dir = " << c.data_dir << "\n";
    o << "image_size = " << c.image_size << "\n";
    o << "synth_classes = " << c.synth_classes << "\n";
    o << "synth_per_class = " << c.synth_per_class << "\n";
    o << "seed = " << c.seed << "\n";
    o << "arch = " << c.arch << "\n";
    o << "out_dir = " << c.out_dir << "\n";
    o << "t_b = " << c.t_b << "\n";
    o << "t_b_list = " << int_list_str(c.t_b_list) << "\n";
    o << "t_c_list = " << int_list_str(c.t_c_list) << "\n";
    o << "stage1.epochs = " << c.stage1.epochs << "\n";
    o << "stage1.batch_size = " << c.stage1.batch_size << "\n";
    o << "stage1.learning_rate = " << csv_float(c.stage1.learning_rate) << "\n";
    o << "stage1.t_max = " << c.stage1.t_max << "\n";
    o << "stage1.levels = " << c.stage1.levels << "\n";
    o << "stage1.lambda0 = " << csv_float(c.stage1.lambda0) << "\n";
    o << "stage1.shift = " << csv_float(c.stage1.shift) << "\n";
    o << "stage1.head_hidden = " << c.stage1.head_hidden << "\n";
    o << "stage1.augment = " << (c.stage1.augment ? "true" : "false") << "\n";
    o << "stage2.n_neurons = " << c.stage2.n_neurons << "\n";
    o << "stage2.exc = " << csv_float(c.stage2.exc) << "\n";
    o << "stage2.inh = " << csv_float(c.stage2.inh) << "\n";
    o << "stage2.theta_plus = " << csv_float(c.stage2.theta_plus) << "\n";
    o << "stage2.batch_size = " << c.stage2.batch_size << "\n";
    o << "stage2.epochs = " << c.stage2.epochs << "\n";
    o << "stage2.patience = " << c.stage2.patience << "\n";
    o << "stage2.eta_pre = " << csv_float(c.stage2.eta_pre) << "\n";
    o << "stage2.eta_post = " << csv_float(c.stage2.eta_post) << "\n";
    o << "stage2.t_c = " << c.stage2.t_c << "\n";
    o << "stage2.w_max = " << csv_float(c.stage2.w_max) << "\n";
    o << "stage2.w_init_max = " << csv_float(c.stage2.w_init_max) << "\n";
    o << "stage2.tau_pre = " << csv_float(c.stage2.tau_pre) << "\n";
    o << "stage2.tau_post = " << csv_float(c.stage2.tau_post) << "\n";
    o << "stage2.tau_theta = " << csv_float(c.stage2.tau_theta) << "\n";
    o << "stage2.theta_exc_base = " << csv_float(c.stage2.theta_exc_base) << "\n";
    o << "stage2.theta_inh = " << csv_float(c.stage2.theta_inh) << "\n";
    o << "stage2.leak_enabled = " << (c.stage2.leak_enabled ? "true" : "false") << "\n";
    o << "stage2.leak_tau = " << csv_float(c.stage2.leak_tau) << "\n";
    o << "stage2.rate_scale = " << csv_float(c.stage2.rate_scale) << "\n";
    o << "energy.joules_per_flop = " << csv_double(c.energy.joules_per_flop) << "\n";
    o << "energy.joules_per_sop = " << csv_double(c.energy.joules_per_sop) << "\n";
    o << "energy.include_input_spikes = "
      << (c.energy_include_input_spikes ? "true" : "false") << "\n";
    o << "search.trials = " << c.search_trials << "\n";
    o << "search.seed = " << c.search_seed << "\n";
    o << "search.exc_min = " << csv_float(c.search_exc_min) << "\n";
    o << "search.exc_max = " << csv_float(c.search_exc_max) << "\n";
    o << "search.inh_min = " << csv_float(c.search_inh_min) << "\n";
    o << "search.inh_max = " << csv_float(c.search_inh_max) << "\n";
    o << "search.theta_plus_min = " << csv_float(c.search_theta_plus_min) << "\n";
    o << "search.theta_plus_max = " << csv_float(c.search_theta_plus_max) << "\n";
    return o.str();
}

void archive_config(const ExperimentConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / "config.txt";
    std::ofstream out(path);
    if (!out) throw DataError("cannot archive config to " + path.string());
    out << (cfg.raw_text.empty() ? serialize_config(cfg) : cfg.raw_text);
}

}  // namespace snn
