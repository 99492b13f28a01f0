#include "tvaraug/augment.hpp"

#include "parallel.hpp"
#include "tvaraug/errors.hpp"
#include "tvaraug/rng.hpp"
#include "tvaraug/stats.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tvaraug {

using nlohmann::json;

TvarModel fit(const Dataset& ds, const ModelConfig& config) {
    ds.validate();
    const EnsembleStats stats = ensemble_stats(ds);
    return build_model(stats, ds.channel_names, config, ds.time_origin, ds.time_step);
}

SyntheticBatch augment(const TvarModel& model, std::size_t count, std::uint64_t seed, unsigned threads) {
    if (count == 0) throw Error(ErrorCode::InvalidParameter, "number of synthetic series must be at least 1");
    const ClosedFormGenerator generator(model);
    SyntheticBatch batch;
    batch.seed = seed;
    batch.model_fingerprint = model.fingerprint();
    batch.created_at = std::chrono::system_clock::now();
    batch.series.resize(count);
    detail::parallel_chunks(count, threads, [&](std::size_t i) {
        generator.generate_into(derive_stream_seed(seed, i), batch.series[i]);
    });
    return batch;
}

Dataset batch_to_dataset(const SyntheticBatch& batch, const TvarModel& model) {
    if (batch.model_fingerprint != model.fingerprint()) {
        throw Error(ErrorCode::ShapeMismatch, "batch was produced by a different model");
    }
    Dataset ds;
    ds.channel_names = model.channel_names();
    ds.time_origin = model.time_origin();
    ds.time_step = model.time_step();
    ds.units = batch.series;
    for (std::size_t i = 0; i < batch.series.size(); ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "aug_%04zu", i + 1);
        ds.unit_ids.emplace_back(id);
    }
    ds.validate();
    return ds;
}

void write_batch_csv(const SyntheticBatch& batch, const TvarModel& model, std::ostream& out, bool header) {
    const Dataset ds = batch_to_dataset(batch, model);
    if (header) {
        write_dataset_csv(ds, out);
        return;
    }
    std::ostringstream body;
    write_dataset_csv(ds, body);
    const std::string text = body.str();
    out << text.substr(text.find('\n') + 1);
}

namespace {

constexpr const char* kFormatName = "tvaraug-model";

json interp_to_json(const InterpFn& fn) {
    if (fn.is_table()) return json{{"kind", "table"}, {"values", fn.table().values}};
    const auto& s = fn.sinusoid();
    json terms = json::array();
    for (const auto& t : s.terms) terms.push_back(json{{"k", t.freq_index}, {"magnitude", t.magnitude}, {"phase", t.phase}});
    return json{{"kind", "sinusoid"}, {"length", s.length}, {"terms", std::move(terms)}};
}

InterpFn interp_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "table") return InterpFn(TableInterp{j.at("values").get<std::vector<double>>()});
    if (kind == "sinusoid") {
        SinusoidInterp s;
        s.length = j.at("length").get<std::size_t>();
        for (const auto& t : j.at("terms")) {
            s.terms.push_back({t.at("k").get<std::size_t>(), t.at("magnitude").get<double>(), t.at("phase").get<double>()});
        }
        return InterpFn(std::move(s));
    }
    throw Error(ErrorCode::CorruptModel, "unknown interpolation kind '" + kind + "'");
}

json params_to_json(const ChannelTvarParams& p) {
    return json{{"r1_mean", p.r1_mean},   {"r1_cov", p.r1_cov},     {"r2_cov", p.r2_cov},
                {"lambda2", p.lambda2},   {"x_tilde0", p.x_tilde0}, {"noise_std", p.noise_std}};
}

ChannelTvarParams params_from_json(const json& j) {
    ChannelTvarParams p;
    p.r1_mean = j.at("r1_mean").get<double>();
    p.r1_cov = j.at("r1_cov").get<double>();
    p.r2_cov = j.at("r2_cov").get<double>();
    p.lambda2 = j.at("lambda2").get<double>();
    p.x_tilde0 = j.at("x_tilde0").get<double>();
    p.noise_std = j.at("noise_std").get<double>();
    return p;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string serialize_model(const TvarModel& model) {
    json channels = json::array();
    for (std::size_t m = 0; m < model.channel_count(); ++m) {
        const auto& ch = model.channel(m);
        channels.push_back(json{{"name", model.channel_names()[m]},
                                {"p1", interp_to_json(ch.p1)},
                                {"p2", interp_to_json(ch.p2)},
                                {"params", params_to_json(ch.params)}});
    }
    json doc{{"format", kFormatName},
             {"version", kModelFormatVersion},
             {"length", model.length()},
             {"channel_count", model.channel_count()},
             {"fit_mode", model.fit_mode() == FitMode::PaperLiteral ? "paper_literal" : "moment_matching"},
             {"time_origin", model.time_origin()},
             {"time_step", model.time_step()},
             {"channel_names", model.channel_names()},
             {"fingerprint", model.fingerprint()},
             {"warnings", model.warnings()},
             {"channels", std::move(channels)}};
    return doc.dump(2) + "\n";
}

void save_model(const TvarModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << serialize_model(model);
    if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

LoadedModel parse_model_unverified(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::CorruptModel, std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object() || doc.value("format", std::string{}) != kFormatName) {
            throw Error(ErrorCode::CorruptModel, "not a tvaraug model document");
        }
        const int version = doc.at("version").get<int>();
        if (version != kModelFormatVersion) {
            throw Error(ErrorCode::SchemaVersionMismatch, "model format version " + std::to_string(version) +
                                                              ", this reader understands version " +
                                                              std::to_string(kModelFormatVersion));
        }
        const auto length = doc.at("length").get<std::size_t>();
        const auto channel_count = doc.at("channel_count").get<std::size_t>();
        const auto names = doc.at("channel_names").get<std::vector<std::string>>();
        const auto& blocks = doc.at("channels");
        if (!blocks.is_array() || blocks.size() != channel_count || names.size() != channel_count) {
            throw Error(ErrorCode::CorruptModel, "expected " + std::to_string(channel_count) + " channel blocks, found " +
                                                     std::to_string(blocks.is_array() ? blocks.size() : 0));
        }
        std::vector<ChannelModel> channels;
        for (std::size_t m = 0; m < channel_count; ++m) {
            const auto& b = blocks[m];
            if (b.at("name").get<std::string>() != names[m]) {
                throw Error(ErrorCode::CorruptModel, "channel block " + std::to_string(m) + " does not match channel_names");
            }
            channels.push_back({interp_from_json(b.at("p1")), interp_from_json(b.at("p2")), params_from_json(b.at("params"))});
        }
        const auto mode_name = doc.at("fit_mode").get<std::string>();
        if (mode_name != "moment_matching" && mode_name != "paper_literal") {
            throw Error(ErrorCode::CorruptModel, "unknown fit_mode '" + mode_name + "'");
        }
        const FitMode mode = mode_name == "paper_literal" ? FitMode::PaperLiteral : FitMode::MomentMatching;
        auto warnings = doc.value("warnings", std::vector<std::string>{});
        LoadedModel loaded{TvarModel(length, names, std::move(channels), mode, doc.at("time_origin").get<std::int64_t>(),
                                     doc.at("time_step").get<std::int64_t>(), std::move(warnings)),
                           doc.at("fingerprint").get<std::string>(), false};
        loaded.fingerprint_ok = loaded.stored_fingerprint == loaded.model.fingerprint();
        return loaded;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::CorruptModel, std::string("malformed model document: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SchemaVersionMismatch || e.code() == ErrorCode::CorruptModel) throw;
        throw Error(ErrorCode::CorruptModel, std::string("invalid model content: ") + e.what());
    }
}

TvarModel parse_model(const std::string& text) {
    auto loaded = parse_model_unverified(text);
    if (!loaded.fingerprint_ok) {
        throw Error(ErrorCode::CorruptModel, "stored fingerprint " + loaded.stored_fingerprint +
                                                 " does not match content " + loaded.model.fingerprint());
    }
    return std::move(loaded.model);
}

TvarModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

LoadedModel load_model_unverified(const std::filesystem::path& path) { return parse_model_unverified(read_file(path)); }

}  // namespace tvaraug
