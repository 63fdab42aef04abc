// Command-line front end for the two-stage spiking pipeline: supervised QCFS
// training, conversion, IF simulation, STDP classifier training, energy
// accounting, hyperparameter search and report emission.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "csvio.hpp"
#include "dataset.hpp"
#include "energy.hpp"
#include "error.hpp"
#include "model_io.hpp"
#include "rng.hpp"
#include "snn.hpp"
#include "stage1.hpp"
#include "stdp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct DataBundle {
    snn::LabeledDataset full;
    snn::SplitResult splits;
};

DataBundle load_data(const snn::ExperimentConfig& cfg) {
    DataBundle b;
    if (cfg.dataset == "synthetic") {
        b.full = snn::synth_generate(cfg.synth_classes, cfg.synth_per_class, cfg.image_size,
                                     cfg.seed);
    } else {
        if (cfg.data_dir.empty()) throw snn::UsageError("config: data_dir required for dataset = folder");
        b.full = snn::load_image_folder(cfg.data_dir, cfg.image_size);
    }
    b.splits = snn::stratified_split(b.full, cfg.seed);
    return b;
}

void write_classes(const std::vector<std::string>& names, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw snn::DataError("cannot open " + path + " for writing");
    for (const auto& n : names) out << n << "\n";
}

std::vector<std::string> read_classes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw snn::DataError("cannot open " + path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) names.push_back(line);
    return names;
}

snn::NetworkGraph build_stage1_graph(const snn::ExperimentConfig& cfg, int n_classes) {
    snn::NetworkGraph ann = snn::parse_backbone_arch(
        cfg.arch, {3, cfg.image_size, cfg.image_size});
    snn::NetworkGraph g =
        snn::surgery(ann, cfg.stage1.lambda0, cfg.stage1.levels, cfg.stage1.shift);
    const auto trace = snn::graph_shape_trace(g);
    const auto& feat = trace.back();
    if (feat.size() != 2)
        throw snn::DataError("arch must end in flatten (got feature shape " +
                             snn::shape_str(feat) + ")");
    int hidden = cfg.stage1.head_hidden > 0 ? cfg.stage1.head_hidden : cfg.stage2.n_neurons;
    snn::attach_head(g, feat[1], hidden, n_classes, cfg.stage1.lambda0, cfg.stage1.levels,
                     cfg.stage1.shift);
    snn::init_parameters(g, cfg.seed);
    return g;
}

void write_stage2_log(const std::vector<snn::Stage2EpochMetrics>& log,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw snn::DataError("cannot open " + path + " for writing");
    out << "epoch,val_acc,val_abstain,train_exc_spikes\n";
    for (const auto& m : log)
        out << m.epoch << "," << snn::csv_float(m.val_acc) << "," << m.val_abstain << ","
            << m.train_exc_spikes << "\n";
}

int cmd_synth(const snn::ExperimentConfig& cfg, const std::string& dir) {
    snn::LabeledDataset ds =
        snn::synth_generate(cfg.synth_classes, cfg.synth_per_class, cfg.image_size, cfg.seed);
    snn::materialize_dataset(ds, dir);
    snn::SplitResult splits = snn::stratified_split(ds, cfg.seed);
    snn::write_manifest(splits, (fs::path(dir) / "manifest.csv").string(), dir);
    std::cout << "wrote " << ds.size() << " images (" << ds.n_classes() << " classes) to "
              << dir << "\n";
    return 0;
}

int cmd_train_ann(const snn::ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    snn::archive_config(cfg, cfg.out_dir);
    DataBundle data = load_data(cfg);
    snn::write_manifest(data.splits, (fs::path(cfg.out_dir) / "manifest.csv").string(),
                        cfg.dataset == "synthetic" ? "synth" : cfg.data_dir);
    write_classes(data.full.class_names, (fs::path(cfg.out_dir) / "classes.txt").string());

    snn::NetworkGraph g = build_stage1_graph(cfg, data.full.n_classes());
    snn::Stage1Result res = snn::train_stage1(g, data.splits.train, data.splits.val, cfg.stage1);
    snn::save_graph(res.best, (fs::path(cfg.out_dir) / "ann.spkf").string());
    snn::write_metrics_csv(res.log, (fs::path(cfg.out_dir) / "metrics.csv").string());
    const float test_acc = snn::evaluate_ann(res.best, data.splits.test);
    std::cout << "stage 1 done: best val acc " << res.best_val_acc << " (epoch "
              << res.best_epoch << "), test acc " << test_acc << "\n";
    return 0;
}

int cmd_convert(const std::string& in_path, const std::string& out_path) {
    snn::NetworkGraph ann = snn::load_graph(in_path);
    if (ann.snn_mode) throw snn::DataError(in_path + " is already an SNN checkpoint");
    snn::NetworkGraph folded = snn::fold_batchnorm(ann);
    snn::NetworkGraph converted = snn::convert(folded);
    snn::save_graph(converted, out_path);
    std::cout << "converted " << converted.layers.size() << " layers -> " << out_path << "\n";
    return 0;
}

int cmd_eval_snn(const snn::ExperimentConfig& cfg, const std::string& model,
                 const std::string& timesteps) {
    DataBundle data = load_data(cfg);
    snn::NetworkGraph g = snn::load_graph(model);
    if (!g.snn_mode) throw snn::DataError(model + " is not an SNN checkpoint (run convert)");
    std::vector<int> t_list = timesteps.empty() ? cfg.t_b_list : snn::parse_int_list(timesteps);
    auto rows = snn::accuracy_vs_timesteps(g, data.splits.test, t_list);
    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / "timesteps.csv").string();
    snn::write_timestep_csv(rows, path);
    for (const auto& r : rows)
        std::cout << "t_b=" << r.t_b << " accuracy=" << r.accuracy << " sops=" << r.total_sops
                  << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_train_stdp(const snn::ExperimentConfig& cfg, const std::string& backbone_path) {
    fs::create_directories(cfg.out_dir);
    snn::archive_config(cfg, cfg.out_dir);
    DataBundle data = load_data(cfg);
    snn::NetworkGraph full = snn::load_graph(backbone_path);
    if (!full.snn_mode)
        throw snn::DataError(backbone_path + " is not an SNN checkpoint (run convert)");
    snn::NetworkGraph backbone = snn::strip_head(full);  // freeze + discard head

    snn::RateDataset train_rates = snn::extract_features(backbone, data.splits.train, cfg.t_b);
    snn::RateDataset val_rates = snn::extract_features(backbone, data.splits.val, cfg.t_b);
    snn::ClassifierState cls =
        snn::make_classifier(train_rates.dim(), train_rates.n_classes, cfg.stage2);
    snn::Stage2Result res = snn::train_stage2(std::move(cls), train_rates, val_rates, cfg.stage2);
    snn::assign_labels(res.best, train_rates);  // final calibration pass
    snn::save_classifier(res.best, (fs::path(cfg.out_dir) / "classifier.spkf").string());
    write_stage2_log(res.log, (fs::path(cfg.out_dir) / "stage2_log.csv").string());
    std::cout << "stage 2 done: best val acc " << res.best_val_acc << " (epoch "
              << res.best_epoch << ", ran " << res.epochs_run << " epochs)\n";
    return 0;
}

int cmd_infer(const snn::ExperimentConfig& cfg, const std::string& backbone_path,
              const std::string& classifier_path, const std::string& image_path,
              const std::string& classes_path) {
    snn::NetworkGraph backbone = snn::strip_head(snn::load_graph(backbone_path));
    if (!backbone.snn_mode) throw snn::DataError(backbone_path + " is not an SNN checkpoint");
    snn::ClassifierState cls = snn::load_classifier(classifier_path);
    snn::Tensor img = snn::read_ppm(image_path);
    img = snn::resize_bilinear(img, cfg.image_size, cfg.image_size);
    snn::SnnRunRecord rec = snn::forward_snn(backbone, img, cfg.t_b);
    snn::ClassifyResult r = snn::classify(cls, rec.r_f, snn::derive_seed(cfg.seed, 0x1f3ull));
    std::vector<std::string> names;
    if (!classes_path.empty()) names = read_classes(classes_path);
    if (r.predicted < 0) {
        std::cout << "predicted: abstain (no labeled neuron fired)\n";
    } else {
        std::cout << "predicted: "
                  << (r.predicted < static_cast<int>(names.size())
                          ? names[static_cast<size_t>(r.predicted)]
                          : "class_" + std::to_string(r.predicted))
                  << "\n";
    }
    for (size_t i = 0; i < r.scores.size(); ++i)
        std::cout << (i < names.size() ? names[i] : "class_" + std::to_string(i)) << " "
                  << r.scores[i] << "\n";
    return 0;
}

int cmd_energy(const snn::ExperimentConfig& cfg, const std::string& backbone_path,
               const std::string& classifier_path, const std::string& name) {
    DataBundle data = load_data(cfg);
    snn::NetworkGraph full = snn::load_graph(backbone_path);
    if (!full.snn_mode) throw snn::DataError(backbone_path + " is not an SNN checkpoint");
    snn::ClassifierState cls = snn::load_classifier(classifier_path);
    snn::NetworkGraph backbone = snn::strip_head(full);

    const uint64_t flops_per_sample = snn::count_flops(full);
    const float ann_acc = snn::evaluate_ann(full, data.splits.test);
    snn::RateDataset test_rates = snn::extract_features(backbone, data.splits.test, cfg.t_b);
    snn::Stage2EvalResult ev = snn::evaluate_stage2(cls, test_rates);

    const uint64_t n = static_cast<uint64_t>(data.splits.test.size());
    snn::EnergyReport rep = snn::energy_report_pipeline(
        flops_per_sample * n, test_rates.backbone_sops, ev.input_spikes,
        ev.exc_spikes + ev.inh_spikes, cfg.energy_include_input_spikes, cfg.energy);

    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / "energy.csv").string();
    snn::write_energy_csv({{name, ann_acc, ev.accuracy, rep}}, path);
    std::cout << "ann acc " << ann_acc << ", snn acc " << ev.accuracy << ", e_ann "
              << rep.e_ann << " J, e_snn " << rep.e_snn << " J, improvement "
              << rep.improvement << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_search(const snn::ExperimentConfig& cfg, const std::string& backbone_path) {
    if (cfg.search_trials < 1) throw snn::UsageError("search: trials must be >= 1");
    fs::create_directories(cfg.out_dir);
    snn::archive_config(cfg, cfg.out_dir);
    DataBundle data = load_data(cfg);
    snn::NetworkGraph backbone = snn::strip_head(snn::load_graph(backbone_path));
    if (!backbone.snn_mode) throw snn::DataError(backbone_path + " is not an SNN checkpoint");

    snn::RateDataset train_rates = snn::extract_features(backbone, data.splits.train, cfg.t_b);
    snn::RateDataset val_rates = snn::extract_features(backbone, data.splits.val, cfg.t_b);

    const std::string trials_path = (fs::path(cfg.out_dir) / "trials.csv").string();
    std::ofstream trials(trials_path);
    if (!trials) throw snn::DataError("cannot open " + trials_path + " for writing");
    trials << "trial,exc,inh,theta_plus,val_acc,epochs_run\n";

    snn::Rng rng = snn::make_rng(snn::derive_seed(cfg.search_seed, 0x5ea2c4ull));
    std::uniform_real_distribution<float> u01(0.0f, 1.0f);
    float best_acc = -1.0f;
    int best_trial = -1;
    snn::Stage2Config best_cfg = cfg.stage2;
    int best_epochs = 0;

    for (int trial = 0; trial < cfg.search_trials; ++trial) {
        snn::Stage2Config sc = cfg.stage2;
        sc.exc = cfg.search_exc_min + u01(rng) * (cfg.search_exc_max - cfg.search_exc_min);
        sc.inh = cfg.search_inh_min + u01(rng) * (cfg.search_inh_max - cfg.search_inh_min);
        sc.theta_plus = cfg.search_theta_plus_min +
                        u01(rng) * (cfg.search_theta_plus_max - cfg.search_theta_plus_min);
        sc.seed = snn::derive_seed(cfg.search_seed, 0x791a1ull, static_cast<uint64_t>(trial));
        float acc = 0.0f;
        int epochs_run = 0;
        try {
            snn::ClassifierState c =
                snn::make_classifier(train_rates.dim(), train_rates.n_classes, sc);
            snn::Stage2Result r = snn::train_stage2(std::move(c), train_rates, val_rates, sc);
            acc = r.best_val_acc;
            epochs_run = r.epochs_run;
        } catch (const snn::NumericalError& e) {
            std::cerr << "trial " << trial << " degenerate: " << e.what() << "\n";
            acc = -1.0f;  // logged; never selected
        }
        trials << trial << "," << snn::csv_float(sc.exc) << "," << snn::csv_float(sc.inh) << ","
               << snn::csv_float(sc.theta_plus) << "," << snn::csv_float(acc) << ","
               << epochs_run << "\n";
        trials.flush();
        if (acc > best_acc) {
            best_acc = acc;
            best_trial = trial;
            best_cfg = sc;
            best_epochs = epochs_run;
        }
    }
    if (best_acc < 0.0f)
        throw snn::NumericalError("all search trials were degenerate; see " + trials_path);

    // final model: retrain on train+val with the winning parameters for the
    // winning trial's epoch budget (no validation left to early-stop on)
    snn::RateDataset combined = train_rates;
    combined.rates.insert(combined.rates.end(), val_rates.rates.begin(), val_rates.rates.end());
    combined.labels.insert(combined.labels.end(), val_rates.labels.begin(),
                           val_rates.labels.end());
    snn::Stage2Config fc = best_cfg;
    fc.epochs = best_epochs;
    fc.patience = best_epochs + 1;
    snn::ClassifierState final_cls =
        snn::make_classifier(combined.dim(), combined.n_classes, fc);
    snn::Stage2Result final_res = snn::train_stage2(std::move(final_cls), combined, combined, fc);
    snn::ClassifierState best = final_res.best;
    snn::assign_labels(best, combined);
    snn::save_classifier(best, (fs::path(cfg.out_dir) / "classifier.spkf").string());

    snn::RateDataset test_rates = snn::extract_features(backbone, data.splits.test, cfg.t_b);
    snn::Stage2EvalResult test_ev = snn::evaluate_stage2(best, test_rates);

    std::ofstream bestcfg((fs::path(cfg.out_dir) / "best_config.txt").string());
    bestcfg << "trial = " << best_trial << "\n"
            << "stage2.exc = " << snn::csv_float(best_cfg.exc) << "\n"
            << "stage2.inh = " << snn::csv_float(best_cfg.inh) << "\n"
            << "stage2.theta_plus = " << snn::csv_float(best_cfg.theta_plus) << "\n"
            << "val_acc = " << snn::csv_float(best_acc) << "\n"
            << "test_acc = " << snn::csv_float(test_ev.accuracy) << "\n";
    std::cout << "best trial " << best_trial << ": val acc " << best_acc << ", test acc "
              << test_ev.accuracy << "\n";
    return 0;
}

int cmd_report(const std::string& run_dir) {
    // the run directory must contain the archived config and both checkpoints
    std::vector<std::string> missing;
    for (const char* f : {"config.txt", "snn.spkf", "classifier.spkf"})
        if (!fs::exists(fs::path(run_dir) / f)) missing.push_back(f);
    if (!missing.empty()) {
        std::string msg = "incomplete run directory " + run_dir + "; missing:";
        for (const auto& m : missing) msg += " " + m;
        throw snn::DataError(msg);
    }
    snn::ExperimentConfig cfg = snn::load_config((fs::path(run_dir) / "config.txt").string());
    DataBundle data = load_data(cfg);
    snn::NetworkGraph full = snn::load_graph((fs::path(run_dir) / "snn.spkf").string());
    snn::ClassifierState cls =
        snn::load_classifier((fs::path(run_dir) / "classifier.spkf").string());
    snn::NetworkGraph backbone = snn::strip_head(full);
    snn::RateDataset test_rates = snn::extract_features(backbone, data.splits.test, cfg.t_b);

    const fs::path rep_dir = fs::path(run_dir) / "report";
    fs::create_directories(rep_dir);

    // (a) per-neuron spike-count histogram data, (b) activity map,
    // (c) confusion matrix at the trained t_c
    snn::Stage2EvalResult ev = snn::evaluate_stage2(cls, test_rates);
    {
        std::ofstream out(rep_dir / "spike_histogram.csv");
        out << "neuron,test_spike_count\n";
        for (size_t i = 0; i < ev.per_neuron_counts.size(); ++i)
            out << i << "," << ev.per_neuron_counts[i] << "\n";
    }
    {
        std::ofstream out(rep_dir / "activity_map.csv");
        out << "neuron";
        for (const auto& n : data.full.class_names) out << "," << n;
        out << "\n";
        for (int64_t nrn = 0; nrn < cls.n_neurons; ++nrn) {
            out << nrn;
            for (int c = 0; c < cls.n_classes; ++c)
                out << ","
                    << snn::csv_double(
                           ev.activity_map[static_cast<size_t>(nrn) *
                                               static_cast<size_t>(cls.n_classes) +
                                           static_cast<size_t>(c)]);
            out << "\n";
        }
    }
    {
        std::ofstream out(rep_dir / "confusion.csv");
        out << "true_class";
        for (const auto& n : data.full.class_names) out << ",pred_" << n;
        out << ",abstain\n";
        for (size_t t = 0; t < ev.confusion.size(); ++t) {
            out << data.full.class_names[t];
            for (int64_t v : ev.confusion[t]) out << "," << v;
            out << "\n";
        }
    }

    // (d) accuracy-vs-T_b and accuracy-vs-T_c curves
    auto tb_rows = snn::accuracy_vs_timesteps(full, data.splits.test, cfg.t_b_list);
    snn::write_timestep_csv(tb_rows, (rep_dir / "accuracy_vs_tb.csv").string());
    {
        std::ofstream out(rep_dir / "accuracy_vs_tc.csv");
        out << "t_c,accuracy,abstained\n";
        for (int tc : cfg.t_c_list) {
            snn::ClassifierState c2 = cls;
            c2.cfg.t_c = tc;
            snn::Stage2EvalResult e2 = snn::evaluate_stage2(c2, test_rates,
                                                            4000 + static_cast<uint64_t>(tc));
            out << tc << "," << snn::csv_float(e2.accuracy) << "," << e2.abstained << "\n";
        }
    }

    json plots = json::array();
    plots.push_back({{"file", "spike_histogram.csv"},
                     {"kind", "histogram"},
                     {"x", "test_spike_count"},
                     {"title", "Per-neuron spike counts on the test set"}});
    plots.push_back({{"file", "activity_map.csv"},
                     {"kind", "heatmap"},
                     {"x", "class"},
                     {"y", "neuron"},
                     {"title", "Neuron-to-class mean firing rate"}});
    plots.push_back({{"file", "confusion.csv"},
                     {"kind", "heatmap"},
                     {"x", "predicted"},
                     {"y", "true"},
                     {"title", "Confusion matrix"}});
    plots.push_back({{"file", "accuracy_vs_tb.csv"},
                     {"kind", "line"},
                     {"x", "t_b"},
                     {"y", "accuracy"},
                     {"title", "Backbone accuracy vs simulation timesteps"}});
    plots.push_back({{"file", "accuracy_vs_tc.csv"},
                     {"kind", "line"},
                     {"x", "t_c"},
                     {"y", "accuracy"},
                     {"title", "Classifier accuracy vs presentation time"}});
    std::ofstream pj(rep_dir / "plots.json");
    pj << plots.dump(2) << "\n";

    std::cout << "report written to " << rep_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-stage spiking neural network pipeline"};
    app.require_subcommand(1);

    std::string config_path, model_path, out_path, timesteps, image_path, classes_path;
    std::string classifier_path, run_dir, name = "toy_cnn", synth_dir = "synth_data";
    std::string out_dir_override;
    uint64_t seed_override = 0;
    bool has_seed = false;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_path, "experiment config file");
        if (need_config) opt->required();
        sub->add_option("--out", out_dir_override, "override out_dir");
        sub->add_option("--seed", seed_override, "override seed")->each([&](const std::string&) {
            has_seed = true;
        });
    };

    auto* synth = app.add_subcommand("synth", "materialize the synthetic dataset");
    add_common(synth, false);
    synth->add_option("--dir", synth_dir, "output directory");

    auto* train_ann = app.add_subcommand("train-ann", "stage-1 supervised QCFS training");
    add_common(train_ann, true);

    auto* convert = app.add_subcommand("convert", "ANN -> SNN conversion");
    convert->add_option("--in", model_path, "ANN checkpoint")->required();
    convert->add_option("--out", out_path, "SNN checkpoint")->required();

    auto* eval_snn = app.add_subcommand("eval-snn", "accuracy vs simulation timesteps");
    add_common(eval_snn, true);
    eval_snn->add_option("--model", model_path, "SNN checkpoint")->required();
    eval_snn->add_option("--timesteps", timesteps, "comma list, e.g. 4,8,16");

    auto* train_stdp = app.add_subcommand("train-stdp", "stage-2 unsupervised STDP training");
    add_common(train_stdp, true);
    train_stdp->add_option("--backbone", model_path, "SNN backbone checkpoint")->required();

    auto* infer = app.add_subcommand("infer", "classify one image");
    add_common(infer, true);
    infer->add_option("--backbone", model_path, "SNN backbone checkpoint")->required();
    infer->add_option("--classifier", classifier_path, "classifier checkpoint")->required();
    infer->add_option("--image", image_path, "PPM image")->required();
    infer->add_option("--classes", classes_path, "classes.txt from training");

    auto* energy = app.add_subcommand("energy", "energy accounting on the test split");
    add_common(energy, true);
    energy->add_option("--backbone", model_path, "SNN checkpoint (with head)")->required();
    energy->add_option("--classifier", classifier_path, "classifier checkpoint")->required();
    energy->add_option("--name", name, "backbone name for the report");

    auto* search = app.add_subcommand("search", "seeded random hyperparameter search");
    add_common(search, true);
    search->add_option("--backbone", model_path, "SNN backbone checkpoint")->required();

    auto* report = app.add_subcommand("report", "emit report bundle for a finished run");
    report->add_option("--run-dir", run_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        snn::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = snn::load_config(config_path);
        if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
        if (has_seed) {
            cfg.seed = seed_override;
            cfg.stage1.seed = seed_override;
            cfg.stage2.seed = seed_override;
        }

        if (synth->parsed()) return cmd_synth(cfg, synth_dir);
        if (train_ann->parsed()) return cmd_train_ann(cfg);
        if (convert->parsed()) return cmd_convert(model_path, out_path);
        if (eval_snn->parsed()) return cmd_eval_snn(cfg, model_path, timesteps);
        if (train_stdp->parsed()) return cmd_train_stdp(cfg, model_path);
        if (infer->parsed())
            return cmd_infer(cfg, model_path, classifier_path, image_path, classes_path);
        if (energy->parsed()) return cmd_energy(cfg, model_path, classifier_path, name);
        if (search->parsed()) return cmd_search(cfg, model_path);
        if (report->parsed()) return cmd_report(run_dir);
    } catch (const snn::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const snn::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const snn::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
