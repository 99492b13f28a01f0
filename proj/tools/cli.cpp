#include "cli.hpp"

#include <tvaraug/augment.hpp>
#include <tvaraug/errors.hpp>
#include <tvaraug/stats.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace tvaraug::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::InvalidConfig, where + ": " + what);
}

void check_object(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) bad(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            bad(where, "unknown key '" + it.key() + "'");
        }
    }
}

std::string get_string(const json& j, const std::string& where) {
    if (!j.is_string()) bad(where, "expected a string");
    return j.get<std::string>();
}

double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) bad(where, "expected a number");
    return j.get<double>();
}

std::uint64_t get_unsigned(const json& j, const std::string& where) {
    if (!j.is_number_unsigned()) bad(where, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

constexpr std::string_view kParamKeys[] = {"r1_mean", "r1_cov", "r2_cov", "lambda2", "x_tilde0", "noise_std"};

double& param_field(ChannelTvarParams& p, std::string_view key) {
    if (key == "r1_mean") return p.r1_mean;
    if (key == "r1_cov") return p.r1_cov;
    if (key == "r2_cov") return p.r2_cov;
    if (key == "lambda2") return p.lambda2;
    if (key == "x_tilde0") return p.x_tilde0;
    return p.noise_std;
}

std::map<std::string, double> parse_params(const json& j, const std::string& where) {
    if (!j.is_object()) bad(where, "expected an object");
    std::map<std::string, double> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(std::begin(kParamKeys), std::end(kParamKeys), it.key()) == std::end(kParamKeys)) {
            bad(where, "unknown key '" + it.key() + "'");
        }
        out[it.key()] = get_number(it.value(), where + "." + it.key());
    }
    return out;
}

Alignment parse_alignment(const std::string& s, const std::string& where) {
    if (s == "time") return Alignment::ByTime;
    if (s == "rul") return Alignment::ByRul;
    bad(where, "expected \"time\" or \"rul\", got \"" + s + "\"");
}

FitMode parse_fit_mode(const std::string& s, const std::string& where) {
    if (s == "moment_matching") return FitMode::MomentMatching;
    if (s == "paper_literal") return FitMode::PaperLiteral;
    bad(where, "expected \"moment_matching\" or \"paper_literal\", got \"" + s + "\"");
}

InterpMode parse_interp_mode(const std::string& s, const std::string& where) {
    if (s == "direct") return InterpMode::Direct;
    if (s == "sinusoid") return InterpMode::Sinusoid;
    bad(where, "expected \"direct\" or \"sinusoid\", got \"" + s + "\"");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

// Values given on the command line; unset ones fall back to the config file.
struct Flags {
    std::string config;
    std::string input;
    std::string output;
    std::optional<std::string> alignment;
    std::optional<std::string> unit_column;
    std::optional<std::string> time_column;
    std::optional<std::string> rul_column;
    std::optional<std::string> channels;
    std::optional<std::string> fit_mode;
    std::optional<std::string> interp;
    std::optional<std::size_t> order;
    std::map<std::string, std::optional<double>> params;
    std::optional<std::size_t> count;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> realizations;
    std::optional<std::string> against;
    std::optional<std::string> report;
    std::optional<unsigned> threads;
    bool append = false;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file; flags override its values");
    sub->add_option("--threads", f.threads, "worker threads (0 = all cores); output does not depend on it");
}

void add_schema(CLI::App* sub, Flags& f) {
    sub->add_option("--alignment", f.alignment, "align units by elapsed time or remaining life")
        ->check(CLI::IsMember({"time", "rul"}));
    sub->add_option("--unit-column", f.unit_column, "unit id column (default: unit)");
    sub->add_option("--time-column", f.time_column, "time column (default: time)");
    sub->add_option("--rul-column", f.rul_column, "remaining-useful-life column");
    sub->add_option("--channels", f.channels, "comma-separated channel columns (default: all others)");
}

void add_model_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--fit-mode", f.fit_mode, "moment_matching or paper_literal")
        ->check(CLI::IsMember({"moment_matching", "paper_literal"}));
    sub->add_option("--interp", f.interp, "direct or sinusoid")->check(CLI::IsMember({"direct", "sinusoid"}));
    sub->add_option("--order", f.order, "sinusoid order P (0 = series length)");
    for (std::string_view key : kParamKeys) {
        std::string flag = "--" + std::string(key);
        std::replace(flag.begin(), flag.end(), '_', '-');
        sub->add_option(flag, f.params[std::string(key)], "default " + std::string(key) + " for every channel");
    }
}

CliConfig resolve(const Flags& f) {
    CliConfig cfg = f.config.empty() ? CliConfig{} : load_config(f.config);
    if (f.alignment) cfg.alignment = parse_alignment(*f.alignment, "--alignment");
    if (f.unit_column) cfg.schema.unit_column = *f.unit_column;
    if (f.time_column) cfg.schema.time_column = *f.time_column;
    if (f.rul_column) cfg.schema.rul_column = *f.rul_column;
    if (f.channels) cfg.schema.channels = split_list(*f.channels);
    if (f.fit_mode) cfg.fit_mode = parse_fit_mode(*f.fit_mode, "--fit-mode");
    if (f.interp) cfg.interp_mode = parse_interp_mode(*f.interp, "--interp");
    if (f.order) cfg.order = *f.order;
    for (const auto& [key, value] : f.params) {
        if (value) param_field(cfg.defaults, key) = *value;
    }
    if (f.count) cfg.count = *f.count;
    if (f.seed) cfg.seed = *f.seed;
    if (f.realizations) cfg.realizations = *f.realizations;
    if (f.report) cfg.report_path = *f.report;
    if (f.threads) cfg.threads = *f.threads;
    (void)cfg.model_config();
    return cfg;
}

std::string csv_header(const CsvSchema& schema, const std::vector<std::string>& names) {
    std::string h = schema.unit_column + "," + schema.time_column;
    for (const auto& n : names) h += "," + n;
    return h;
}

int cmd_stats(const Flags& f, std::ostream& out, std::ostream& err) {
    const CliConfig cfg = resolve(f);
    const Dataset ds = load_dataset(std::filesystem::path(f.input), cfg.schema, cfg.alignment);
    const EnsembleStats st = ensemble_stats(ds);
    std::ostringstream csv;
    csv << "time,channel,mean,var\n";
    for (std::size_t n = 0; n < ds.length(); ++n) {
        const std::int64_t t = ds.time_origin + static_cast<std::int64_t>(n) * ds.time_step;
        for (std::size_t m = 0; m < ds.channel_count(); ++m) {
            csv << t << ',' << ds.channel_names[m] << ',' << format_double(st.mean(n, m)) << ','
                << format_double(st.var(n, m)) << '\n';
        }
    }
    const std::string path = f.output.empty() ? cfg.stats_path : f.output;
    if (path.empty()) {
        out << csv.str();
    } else {
        write_text(path, csv.str());
        err << "wrote statistics for " << ds.unit_count() << " units, N=" << ds.length()
            << ", M=" << ds.channel_count() << " to " << path << '\n';
    }
    return 0;
}

int cmd_fit(const Flags& f, std::ostream& out, std::ostream& err) {
    const CliConfig cfg = resolve(f);
    const std::string path = f.output.empty() ? cfg.model_path : f.output;
    if (path.empty()) throw UsageError("fit needs an output path (-o or outputs.model)");
    const Dataset ds = load_dataset(std::filesystem::path(f.input), cfg.schema, cfg.alignment);
    const TvarModel model = fit(ds, cfg.model_config());
    save_model(model, path);
    for (const auto& w : model.warnings()) err << "warning: " << w << '\n';
    out << "fitted " << model.channel_count() << " channels over N=" << model.length() << " from "
        << ds.unit_count() << " units; model " << model.fingerprint() << " written to " << path << '\n';
    return 0;
}

// Smallest k such that no existing unit id is aug_<k'> for k' >= k.
std::size_t next_aug_index(const std::string& text, std::size_t unit_col) {
    std::size_t next = 1;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::size_t start = 0;
        for (std::size_t c = 0; c < unit_col && start != std::string::npos; ++c) {
            start = line.find(',', start);
            if (start != std::string::npos) ++start;
        }
        if (start == std::string::npos) continue;
        const std::string id = line.substr(start, line.find(',', start) - start);
        if (id.rfind("aug_", 0) != 0) continue;
        std::size_t k = 0;
        const auto [ptr, ec] = std::from_chars(id.data() + 4, id.data() + id.size(), k);
        if (ec == std::errc{} && ptr == id.data() + id.size() && k >= next) next = k + 1;
    }
    return next;
}

int cmd_generate(const Flags& f, std::ostream& out, std::ostream& /*err*/) {
    const CliConfig cfg = resolve(f);
    const std::string path = f.output.empty() ? cfg.synthetic_path : f.output;
    if (path.empty()) throw UsageError("generate needs an output path (-o or outputs.synthetic)");
    if (!cfg.count) throw UsageError("generate needs the number of series (-L or generate.count)");
    if (!cfg.seed) throw UsageError("generate needs a seed (--seed or generate.seed)");

    const TvarModel model = load_model(f.input);
    const SyntheticBatch batch = augment(model, *cfg.count, *cfg.seed, cfg.threads);
    Dataset ds = batch_to_dataset(batch, model);
    const std::string header = csv_header(cfg.schema, model.channel_names());

    std::string existing;
    if (f.append && std::filesystem::exists(path)) existing = read_text(path);
    std::size_t first_index = 1;
    if (!existing.empty()) {
        const std::string first_line = existing.substr(0, existing.find('\n'));
        const std::string trimmed = !first_line.empty() && first_line.back() == '\r'
                                        ? first_line.substr(0, first_line.size() - 1)
                                        : first_line;
        if (trimmed != header) {
            throw Error(ErrorCode::ShapeMismatch, "cannot append to '" + path + "': header is '" + trimmed +
                                                      "', expected '" + header + "'");
        }
        first_index = next_aug_index(existing, 0);
    }
    for (std::size_t i = 0; i < ds.unit_ids.size(); ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "aug_%04zu", first_index + i);
        ds.unit_ids[i] = id;
    }
    std::ostringstream body;
    write_dataset_csv(ds, body);
    std::string rows = body.str();
    rows.erase(0, rows.find('\n') + 1);

    if (existing.empty()) {
        write_text(path, header + "\n" + rows);
    } else {
        std::ofstream app(path, std::ios::binary | std::ios::app);
        if (!app) throw Error(ErrorCode::Io, "cannot append to '" + path + "'");
        if (existing.back() != '\n') app << '\n';
        app << rows;
        if (!app) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
    }
    out << (existing.empty() ? "wrote " : "appended ") << *cfg.count << " synthetic series (N=" << model.length()
        << ", M=" << model.channel_count() << ", seed " << *cfg.seed << ") to " << path << '\n';
    return 0;
}

int cmd_validate(const Flags& f, std::ostream& out, std::ostream& /*err*/) {
    const CliConfig cfg = resolve(f);
    if (!cfg.realizations) throw UsageError("validate needs the number of realizations (-K or validate.realizations)");
    const std::uint64_t seed = f.seed ? *f.seed : cfg.validate_seed.value_or(0);
    const LoadedModel loaded = load_model_unverified(f.input);
    const TvarModel& model = loaded.model;

    std::optional<EnsembleStats> source;
    std::size_t source_units = 0;
    if (f.against) {
        const Dataset ds = load_dataset(std::filesystem::path(*f.against), cfg.schema, cfg.alignment);
        if (ds.length() != model.length() || ds.channel_names != model.channel_names()) {
            throw Error(ErrorCode::ShapeMismatch, "dataset '" + *f.against + "' (N=" + std::to_string(ds.length()) +
                                                      ") does not match the model's length and channels");
        }
        source = ensemble_stats(ds);
        source_units = ds.unit_count();
    }

    const SimulatedMoments sim = simulate_moments(model, *cfg.realizations, seed, cfg.threads);
    const ValidationReport mc = moments_report(sim, model, cfg.tolerances);
    std::optional<ValidationReport> vs_source;
    if (source) vs_source = compare_to_source(sim.stats, sim.realizations, *source, cfg.tolerances);

    const bool passed = loaded.fingerprint_ok && mc.passed && (!vs_source || vs_source->passed);

    out << "model: " << f.input << '\n';
    out << "fingerprint: " << loaded.stored_fingerprint
        << (loaded.fingerprint_ok ? " (ok)" : " (MISMATCH: content hashes to " + model.fingerprint() + ")") << '\n';
    print_report(mc, out);
    if (vs_source) {
        out << "against: " << *f.against << " (" << source_units << " units)\n";
        print_report(*vs_source, out);
    }
    out << "result: " << (passed ? "PASS" : "FAIL") << '\n';

    const std::string report_path = cfg.report_path;
    if (!report_path.empty()) {
        json doc{{"model",
                  {{"stored_fingerprint", loaded.stored_fingerprint},
                   {"content_fingerprint", model.fingerprint()},
                   {"fingerprint_ok", loaded.fingerprint_ok}}},
                 {"seed", seed},
                 {"realizations", sim.realizations},
                 {"monte_carlo", json::parse(report_to_json(mc))},
                 {"source", vs_source ? json::parse(report_to_json(*vs_source)) : json(nullptr)},
                 {"passed", passed}};
        write_text(report_path, doc.dump(2) + "\n");
    }
    return passed ? 0 : 1;
}

}  // namespace

ModelConfig CliConfig::model_config() const {
    ModelConfig mc;
    mc.fit_mode = fit_mode;
    mc.interp_mode = interp_mode;
    mc.order = order;
    mc.defaults = defaults;
    try {
        defaults.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("defaults: ") + e.what());
    }
    for (const auto& [name, fields] : channel_overrides) {
        ChannelTvarParams p = defaults;
        for (const auto& [key, value] : fields) param_field(p, key) = value;
        try {
            p.validate();
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidConfig, "channels." + name + ": " + e.what());
        }
        mc.channel_params[name] = p;
    }
    return mc;
}

CliConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
    }
    CliConfig cfg;
    check_object(doc, "config",
                 {"dataset", "alignment", "fit_mode", "interp", "defaults", "channels", "generate", "validate",
                  "outputs", "threads"});
    if (doc.contains("dataset")) {
        const auto& d = doc["dataset"];
        check_object(d, "dataset", {"unit_column", "time_column", "rul_column", "channels"});
        if (d.contains("unit_column")) cfg.schema.unit_column = get_string(d["unit_column"], "dataset.unit_column");
        if (d.contains("time_column")) cfg.schema.time_column = get_string(d["time_column"], "dataset.time_column");
        if (d.contains("rul_column") && !d["rul_column"].is_null()) {
            cfg.schema.rul_column = get_string(d["rul_column"], "dataset.rul_column");
        }
        if (d.contains("channels")) {
            if (!d["channels"].is_array()) bad("dataset.channels", "expected an array of column names");
            for (const auto& c : d["channels"]) cfg.schema.channels.push_back(get_string(c, "dataset.channels"));
        }
    }
    if (doc.contains("alignment")) cfg.alignment = parse_alignment(get_string(doc["alignment"], "alignment"), "alignment");
    if (doc.contains("fit_mode")) cfg.fit_mode = parse_fit_mode(get_string(doc["fit_mode"], "fit_mode"), "fit_mode");
    if (doc.contains("interp")) {
        const auto& i = doc["interp"];
        check_object(i, "interp", {"mode", "order"});
        if (i.contains("mode")) cfg.interp_mode = parse_interp_mode(get_string(i["mode"], "interp.mode"), "interp.mode");
        if (i.contains("order")) cfg.order = get_unsigned(i["order"], "interp.order");
    }
    if (doc.contains("defaults")) {
        for (const auto& [key, value] : parse_params(doc["defaults"], "defaults")) param_field(cfg.defaults, key) = value;
    }
    if (doc.contains("channels")) {
        const auto& c = doc["channels"];
        if (!c.is_object()) bad("channels", "expected an object keyed by channel name");
        for (auto it = c.begin(); it != c.end(); ++it) {
            cfg.channel_overrides[it.key()] = parse_params(it.value(), "channels." + it.key());
        }
    }
    if (doc.contains("generate")) {
        const auto& g = doc["generate"];
        check_object(g, "generate", {"count", "seed"});
        if (g.contains("count")) cfg.count = get_unsigned(g["count"], "generate.count");
        if (g.contains("seed")) cfg.seed = get_unsigned(g["seed"], "generate.seed");
    }
    if (doc.contains("validate")) {
        const auto& v = doc["validate"];
        check_object(v, "validate", {"realizations", "seed", "tolerances"});
        if (v.contains("realizations")) cfg.realizations = get_unsigned(v["realizations"], "validate.realizations");
        if (v.contains("seed")) cfg.validate_seed = get_unsigned(v["seed"], "validate.seed");
        if (v.contains("tolerances")) {
            const auto& t = v["tolerances"];
            auto& tol = cfg.tolerances;
            check_object(t, "validate.tolerances",
                         {"mean_z", "mean_fraction", "var_rel", "var_min_n", "max_corr", "low_confidence_below"});
            if (t.contains("mean_z")) tol.mean_z = get_number(t["mean_z"], "validate.tolerances.mean_z");
            if (t.contains("mean_fraction")) {
                tol.mean_fraction = get_number(t["mean_fraction"], "validate.tolerances.mean_fraction");
            }
            if (t.contains("var_rel")) tol.var_rel = get_number(t["var_rel"], "validate.tolerances.var_rel");
            if (t.contains("var_min_n")) tol.var_min_n = get_unsigned(t["var_min_n"], "validate.tolerances.var_min_n");
            if (t.contains("max_corr")) tol.max_corr = get_number(t["max_corr"], "validate.tolerances.max_corr");
            if (t.contains("low_confidence_below")) {
                tol.low_confidence_below =
                    get_unsigned(t["low_confidence_below"], "validate.tolerances.low_confidence_below");
            }
        }
    }
    if (doc.contains("outputs")) {
        const auto& o = doc["outputs"];
        check_object(o, "outputs", {"model", "synthetic", "stats", "report"});
        if (o.contains("model")) cfg.model_path = get_string(o["model"], "outputs.model");
        if (o.contains("synthetic")) cfg.synthetic_path = get_string(o["synthetic"], "outputs.synthetic");
        if (o.contains("stats")) cfg.stats_path = get_string(o["stats"], "outputs.stats");
        if (o.contains("report")) cfg.report_path = get_string(o["report"], "outputs.report");
    }
    if (doc.contains("threads")) cfg.threads = static_cast<unsigned>(get_unsigned(doc["threads"], "threads"));
    (void)cfg.model_config();
    return cfg;
}

CliConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string config_help() {
    return R"(Config file (JSON, every key optional, unknown keys rejected):
  dataset:   {unit_column: "unit", time_column: "time", rul_column: null, channels: []}
  alignment: "rul" (default) | "time"
  fit_mode:  "moment_matching" | "paper_literal"
  interp:    {mode: "direct" | "sinusoid", order: 0}
  defaults:  {r1_mean: 0.01, r1_cov: 0.01, r2_cov: 0.01, lambda2: 1, x_tilde0: 1, noise_std: 0.1}
  channels:  {"<name>": {<any subset of the defaults keys>}}
  generate:  {count: L, seed: s}
  validate:  {realizations: K, seed: s, tolerances: {mean_z: 4, mean_fraction: 0.99, var_rel: 0.05,
              var_min_n: 5, max_corr: 0.05, low_confidence_below: 30}}
  outputs:   {model: "", synthetic: "", stats: "", report: ""}
  threads:   0
Rates must lie in (0, 1), lambda2 != 0 and noise_std > 0.
)";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fit a decoupled TVAR model to a small set of multivariate series and generate synthetic ones."};
    app.name("tvaraug");
    app.require_subcommand(1);
    Flags f;

    auto* stats = app.add_subcommand("stats", "write per-step ensemble mean and variance as time,channel,mean,var");
    stats->add_option("data", f.input, "long-format CSV")->required();
    stats->add_option("-o,--output", f.output, "output CSV (default: stdout)");
    add_common(stats, f);
    add_schema(stats, f);

    auto* fit_cmd = app.add_subcommand("fit", "fit a model to a dataset");
    fit_cmd->add_option("data", f.input, "long-format CSV")->required();
    fit_cmd->add_option("-o,--output", f.output, "model JSON to write");
    add_common(fit_cmd, f);
    add_schema(fit_cmd, f);
    add_model_flags(fit_cmd, f);

    auto* gen = app.add_subcommand("generate", "draw synthetic series from a fitted model");
    gen->add_option("model", f.input, "model JSON")->required();
    gen->add_option("-L,--count", f.count, "number of synthetic series");
    gen->add_option("--seed", f.seed, "base seed");
    gen->add_option("-o,--output", f.output, "output CSV");
    gen->add_flag("--append", f.append, "append rows to an existing CSV with the same header");
    add_common(gen, f);
    gen->add_option("--unit-column", f.unit_column, "unit id column name in the output header");
    gen->add_option("--time-column", f.time_column, "time column name in the output header");

    auto* val = app.add_subcommand("validate", "check a model by Monte-Carlo simulation");
    val->add_option("model", f.input, "model JSON")->required();
    val->add_option("-K,--realizations", f.realizations, "number of simulated realizations (>= 100)");
    val->add_option("--seed", f.seed, "base seed (default 0)");
    val->add_option("--against", f.against, "also compare with the statistics of this dataset");
    val->add_option("--report", f.report, "write the JSON report here");
    add_common(val, f);
    add_schema(val, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help() << '\n' << config_help();
        return 2;
    }

    try {
        if (stats->parsed()) return cmd_stats(f, out, err);
        if (fit_cmd->parsed()) return cmd_fit(f, out, err);
        if (gen->parsed()) return cmd_generate(f, out, err);
        return cmd_validate(f, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n\n" << config_help();
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        if (e.code() == ErrorCode::InvalidConfig) err << '\n' << config_help();
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (...) {
        err << "error: unexpected failure\n";
        return 2;
    }
}

}  // namespace tvaraug::cli
