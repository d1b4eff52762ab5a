#include "cli.hpp"

#include "domepilot/atomic_file.hpp"
#include "domepilot/condition_table.hpp"
#include "domepilot/dome_controller.hpp"
#include "domepilot/errors.hpp"
#include "domepilot/eval.hpp"
#include "domepilot/model_io.hpp"
#include "domepilot/simd/distance.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace domepilot::cli {

namespace {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 computation failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// key = value lines; '#' starts a comment, optional quotes around the value.
// Keys name long flags without the leading dashes. Flags given on the
// command line take precedence.
void apply_config_file(CLI::App& sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#' || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
            value = value.substr(1, value.size() - 2);
        }
        std::replace(key.begin(), key.end(), '_', '-');
        CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") {
            throw Error(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "' for " + sub.get_name());
        }
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw Error(std::string("missing required option ") + flag);
}

const ConditionTable& condition_table(const RunConfig& cfg, std::unique_ptr<ConditionTable>& storage) {
    if (cfg.table_path.empty()) return ConditionTable::builtin();
    storage = std::make_unique<ConditionTable>(ConditionTable::from_file(cfg.table_path));
    return *storage;
}

std::vector<LabeledSample> load_labeled(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_labeled_csv(in);
}

SplitSpec resolve_split(const RunConfig& cfg, const std::optional<SplitSpec>& stored, const std::string& kind) {
    SplitSpec spec = stored.value_or(default_split(kind));
    if (cfg.test_fraction) spec.test_fraction = *cfg.test_fraction;
    if (cfg.seed) spec.seed = *cfg.seed;
    return spec;
}

int cmd_prepare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require(cfg.data_path, "--data");
    require(cfg.out_path, "--out");
    const std::string raw = read_file(cfg.data_path);

    std::string expected = lower(cfg.sha256);
    if (expected.empty() && std::filesystem::exists(cfg.data_path + ".sha256")) {
        std::istringstream side(read_file(cfg.data_path + ".sha256"));
        side >> expected;
        expected = lower(expected);
    }
    if (expected.empty()) {
        err << "warning: no content hash to verify for " << cfg.data_path << " (sha256 " << sha256_hex(raw) << ")\n";
    } else if (const auto actual = sha256_hex(raw); actual != expected) {
        throw Error("content hash mismatch for " + cfg.data_path + ": expected " + expected + ", got " + actual);
    }

    std::unique_ptr<ConditionTable> table_storage;
    const auto& table = condition_table(cfg, table_storage);

    std::istringstream in(raw);
    const auto parsed = parse_dataset(in);
    const auto city = filter_city(parsed.observations, cfg.city);
    if (city.empty()) err << "warning: no observations for city \"" << cfg.city << "\"\n";
    const auto labeled = to_samples(city, table);

    CleaningReport report;
    report.rows_read = parsed.rows_read;
    report.parsed = parsed.observations.size();
    report.rejected = parsed.rejected;
    report.city_matched = city.size();
    report.unmapped = labeled.unmapped;
    report.labeled = labeled.samples.size();
    report.unmapped_conditions = labeled.unmapped_conditions;

    std::ostringstream csv;
    write_labeled_csv(csv, labeled.samples);

    nlohmann::ordered_json j;
    j["city"] = cfg.city;
    j["rows_read"] = report.rows_read;
    j["parsed"] = report.parsed;
    j["rejected"] = report.rejected;
    j["city_matched"] = report.city_matched;
    j["unmapped"] = report.unmapped;
    j["labeled"] = report.labeled;
    j["open"] = std::count_if(labeled.samples.begin(), labeled.samples.end(),
                              [](const LabeledSample& s) { return s.label == 1; });
    j["unmapped_conditions"] = report.unmapped_conditions;

    write_file_atomic(cfg.out_path, csv.str());
    if (!cfg.report_path.empty()) write_file_atomic(cfg.report_path, j.dump(2) + "\n");

    out << "rows read:        " << report.rows_read << '\n'
        << "rejected (cells): " << report.rejected << '\n'
        << "city matched:     " << report.city_matched << '\n'
        << "unmapped weather: " << report.unmapped << '\n'
        << "labeled samples:  " << report.labeled << '\n';
    return 0;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
    require(cfg.data_path, "--data");
    require(cfg.out_path, "--out");
    if (cfg.model_kind != "dt" && cfg.model_kind != "knn") {
        throw Error("--model must be dt or knn, got '" + cfg.model_kind + "'");
    }
    const auto samples = load_labeled(cfg.data_path);
    const SplitSpec spec = resolve_split(cfg, std::nullopt, cfg.model_kind);
    const auto parts = split(samples, spec);
    if (parts.train.empty()) throw Error("training split is empty");

    StoredModel stored{dtree::TreeModel{}, spec};
    if (cfg.model_kind == "dt") {
        dtree::TreeConfig tc = cfg.tree;
        tc.criterion = dtree::criterion_from_string(cfg.criterion);
        auto model = dtree::train_tree(parts.train, tc);
        out << "model: dt (" << dtree::to_string(tc.criterion) << ", max leaves " << tc.max_leaf_nodes << ")\n"
            << "leaves: " << model.leaf_count() << "  nodes: " << model.nodes().size() << '\n';
        stored.model = std::move(model);
    } else {
        std::size_t k = 0;
        if (cfg.k == "auto") {
            k = knn::default_k(samples.size());
        } else {
            const auto v = std::stoll(cfg.k);
            if (v < 1) throw Error("--k must be a positive integer or 'auto'");
            k = static_cast<std::size_t>(v);
        }
        auto model = knn::train_knn(parts.train, k, knn::scaling_from_string(cfg.scaling));
        out << "model: knn (k " << model.k() << ", scaling " << knn::to_string(model.scaling()) << ", "
            << simd::to_string(simd::active_level()) << " distance kernel)\n";
        stored.model = std::move(model);
    }
    const auto train_report = eval::evaluate(
        [&](const Features& f) { return predict(stored.model, f); }, parts.train, std::string(model_kind(stored.model)));
    out << "split: test fraction " << spec.test_fraction << ", seed " << spec.seed << " -> " << parts.train.size()
        << " train / " << parts.test.size() << " test\n"
        << "training accuracy: " << std::setprecision(4) << train_report.accuracy << '\n';
    save_model(cfg.out_path, stored);
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
    require(cfg.model_path, "--model");
    require(cfg.data_path, "--data");
    require(cfg.report_path, "--report");
    const auto stored = load_model(cfg.model_path);
    const std::string kind(model_kind(stored.model));
    const auto samples = load_labeled(cfg.data_path);
    const auto parts = split(samples, resolve_split(cfg, stored.split, kind));
    if (parts.test.empty()) throw Error("test split is empty");
    const auto report =
        eval::evaluate([&](const Features& f) { return predict(stored.model, f); }, parts.test, kind);
    write_file_atomic(cfg.report_path, eval::to_json(report));
    if (!cfg.confusion_csv.empty()) {
        std::ostringstream csv;
        eval::write_confusion_csv(csv, report.matrix);
        write_file_atomic(cfg.confusion_csv, csv.str());
    }
    eval::write_table(out, std::span(&report, 1));
    return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require(cfg.model_path, "--model");
    require(cfg.frames_path, "--frames");
    require(cfg.log_path, "--log");
    const auto stored = load_model(cfg.model_path);
    std::unique_ptr<ConditionTable> table_storage;
    const auto& table = condition_table(cfg, table_storage);

    std::ifstream in(cfg.frames_path);
    if (!in) throw Error("cannot open " + cfg.frames_path);
    const auto frames = control::read_frames(in);
    if (frames.rejected > 0) err << "warning: " << frames.rejected << " malformed frame rows skipped\n";
    if (frames.frames.empty()) throw Error("no usable frames in " + cfg.frames_path);

    std::unique_ptr<control::ActuatorSink> sink;
    if (!cfg.sink.empty()) sink = control::open_sink(cfg.sink);
    control::DomeController controller([&](const Features& f) { return predict(stored.model, f); }, table,
                                       sink.get());
    control::DecisionLog log;
    std::size_t failed = 0;
    for (const auto& frame : frames.frames) {
        auto step = controller.step(frame);
        if (sink && !step.delivered) {
            ++failed;
            err << "warning: tick " << frame.tick << ": " << step.error << '\n';
        }
        log.push_back(std::move(step.record));
    }
    std::ostringstream jsonl;
    control::write_decision_log(jsonl, log);
    write_file_atomic(cfg.log_path, jsonl.str());

    const auto opened = std::count_if(log.begin(), log.end(),
                                      [](const auto& r) { return r.command.dome() == control::Dome::open; });
    out << "frames: " << log.size() << "  open: " << opened << "  closed: " << log.size() - opened;
    if (sink) out << "  undelivered: " << failed;
    out << '\n';
    return failed == 0 ? 0 : 1;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
    require(cfg.model_path, "--model");
    if (cfg.rain != 0 && cfg.rain != 1) throw Error("--rain must be 0 or 1");
    const auto stored = load_model(cfg.model_path);
    control::SensorFrame frame;
    frame.observation.temp = cfg.temp;
    frame.observation.wind = cfg.wind;
    frame.observation.humidity = cfg.humidity;
    frame.observation.hour = static_cast<int>(cfg.hour);
    frame.observation.visibility = cfg.visibility;
    frame.observation.barometer = cfg.barometer;
    frame.rain_detected = cfg.rain == 1;
    const Features features{cfg.temp, cfg.wind, cfg.humidity, cfg.hour, cfg.visibility, cfg.barometer};
    const auto command = control::decide(predict(stored.model, features), frame);
    out << control::signal_line(command);
    return 0;
}

} // namespace

SplitSpec default_split(const std::string& model_kind) {
    return model_kind == "knn" ? SplitSpec{0.30, 101} : SplitSpec{0.33, 324};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Weather-driven dome controller: data preparation, training, evaluation and replay", "domepilot"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string config_path;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value file mirroring the flags (flags win)");
    };
    auto add_split = [&](CLI::App* sub) {
        sub->add_option("--test-frac", cfg.test_fraction, "Held-out fraction in (0,1)")
            ->check(CLI::Range(0.0, 1.0));
        sub->add_option("--seed", cfg.seed, "Split shuffle seed");
    };

    auto* prepare = app.add_subcommand("prepare", "Label raw weather records for one city");
    prepare->add_option("--data", cfg.data_path, "Raw weather CSV");
    prepare->add_option("--city", cfg.city, "City to keep")->capture_default_str();
    prepare->add_option("--table", cfg.table_path, "condition,flag override table");
    prepare->add_option("--out", cfg.out_path, "Labeled CSV to write");
    prepare->add_option("--report", cfg.report_path, "Cleaning report JSON to write");
    prepare->add_option("--sha256", cfg.sha256, "Expected SHA-256 of the raw CSV (else <data>.sha256 if present)");
    add_config(prepare);

    auto* train = app.add_subcommand("train", "Train a decision tree or k-NN model");
    train->add_option("--data", cfg.data_path, "Labeled CSV");
    train->add_option("--model", cfg.model_kind, "dt or knn")->capture_default_str();
    train->add_option("--max-leaves", cfg.tree.max_leaf_nodes, "Tree leaf budget")->capture_default_str();
    train->add_option("--min-samples-leaf", cfg.tree.min_samples_leaf, "Minimum samples per leaf")
        ->capture_default_str();
    train->add_option("--criterion", cfg.criterion, "gini or entropy")->capture_default_str();
    train->add_option("--k", cfg.k, "Neighbors, or 'auto' for the square-root rule")->capture_default_str();
    train->add_option("--scaling", cfg.scaling, "none or standardize")->capture_default_str();
    train->add_option("--out", cfg.out_path, "Model JSON to write");
    add_split(train);
    add_config(train);

    auto* evaluate = app.add_subcommand("evaluate", "Score a model on its held-out split");
    evaluate->add_option("--model", cfg.model_path, "Model JSON");
    evaluate->add_option("--data", cfg.data_path, "Labeled CSV");
    evaluate->add_option("--report", cfg.report_path, "Report JSON to write");
    evaluate->add_option("--confusion-csv", cfg.confusion_csv, "Confusion matrix CSV to write");
    add_split(evaluate);
    add_config(evaluate);

    auto* simulate = app.add_subcommand("simulate", "Replay sensor frames through the controller");
    simulate->add_option("--model", cfg.model_path, "Model JSON");
    simulate->add_option("--frames", cfg.frames_path, "Frame CSV (weather schema + rain column)");
    simulate->add_option("--log", cfg.log_path, "Decision log (JSON lines) to write");
    simulate->add_option("--sink", cfg.sink, "Actuator sink: file path or tcp:host:port");
    simulate->add_option("--table", cfg.table_path, "condition,flag override table");
    add_config(simulate);

    auto* predict_cmd = app.add_subcommand("predict", "Decide one instance and print the actuator line");
    predict_cmd->add_option("--model", cfg.model_path, "Model JSON");
    predict_cmd->add_option("--temp", cfg.temp, "Temperature (C)");
    predict_cmd->add_option("--wind", cfg.wind, "Wind speed");
    predict_cmd->add_option("--humidity", cfg.humidity, "Relative humidity as a fraction");
    predict_cmd->add_option("--hour", cfg.hour, "Hour of day 0-23")->check(CLI::Range(0.0, 23.0));
    predict_cmd->add_option("--visibility", cfg.visibility, "Visibility (km)");
    predict_cmd->add_option("--barometer", cfg.barometer, "Pressure (hPa)");
    predict_cmd->add_option("--rain", cfg.rain, "Rain sensor 0 or 1");
    add_config(predict_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        cfg.command = active->get_name();
        if (!config_path.empty()) apply_config_file(*active, config_path);
        if (cfg.command == "prepare") return cmd_prepare(cfg, out, err);
        if (cfg.command == "train") return cmd_train(cfg, out);
        if (cfg.command == "evaluate") return cmd_evaluate(cfg, out);
        if (cfg.command == "simulate") return cmd_simulate(cfg, out, err);
        return cmd_predict(cfg, out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace domepilot::cli
