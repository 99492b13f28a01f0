#pragma once

#include "tvaraug/dataset.hpp"
#include "tvaraug/matrix.hpp"
#include "tvaraug/tvar.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tvaraug {

struct SyntheticBatch {
    std::vector<Matrix> series;
    std::uint64_t seed = 0;
    std::string model_fingerprint;
    std::chrono::system_clock::time_point created_at;
};

/// Ensemble statistics of the dataset, then build_model with its channel names.
TvarModel fit(const Dataset& ds, const ModelConfig& config);

/**
 * L independent closed-form realizations. Sample i is generated from
 * derive_stream_seed(seed, i), so the result does not depend on `threads`
 * (0 = hardware concurrency).
 */
SyntheticBatch augment(const TvarModel& model, std::size_t count, std::uint64_t seed, unsigned threads = 0);

/// Synthetic units named aug_0001, aug_0002, ... on the model's time axis.
Dataset batch_to_dataset(const SyntheticBatch& batch, const TvarModel& model);

void write_batch_csv(const SyntheticBatch& batch, const TvarModel& model, std::ostream& out, bool header = true);

// Model persistence: versioned JSON document.
inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const TvarModel& model);
void save_model(const TvarModel& model, const std::filesystem::path& path);

struct LoadedModel {
    TvarModel model;
    std::string stored_fingerprint;
    bool fingerprint_ok = false;
};

/// Parses without requiring the stored fingerprint to match the content.
LoadedModel parse_model_unverified(const std::string& text);
/// Throws CorruptModel if the stored fingerprint does not match.
TvarModel parse_model(const std::string& text);

TvarModel load_model(const std::filesystem::path& path);
LoadedModel load_model_unverified(const std::filesystem::path& path);

}  // namespace tvaraug
