#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "blm/benford.hpp"
#include "blm/digits.hpp"
#include "blm/npy.hpp"

namespace blm {

enum class TensorFormat { Npy, RawF32, RawF64, Csv };

std::string_view to_string(TensorFormat f) noexcept;
/// Throws Error(Schema) for an unknown name.
TensorFormat parse_tensor_format(std::string_view name);

struct TensorSource {
    std::string name;
    std::filesystem::path path;
    TensorFormat format = TensorFormat::Npy;
    std::optional<std::vector<std::size_t>> shape;  // checked against the data when present
    std::optional<bool> exclude;                     // overrides the name patterns when set
};

std::vector<std::string> default_exclude_patterns();

struct ModelManifest {
    std::string model_name;
    std::vector<std::string> exclude_patterns = default_exclude_patterns();
    std::vector<TensorSource> tensors;
    std::filesystem::path base_dir;  // relative tensor paths resolve against this

    /// Explicit flag if present, else case-insensitive substring match of the
    /// tensor name against exclude_patterns.
    bool is_excluded(const TensorSource& t) const;
    std::filesystem::path resolve(const TensorSource& t) const;
};

/// Parses and validates manifest JSON. No tensor file is opened.
///
/// Throws Error(Parse) for invalid JSON and Error(Schema) for schema
/// violations, including duplicate tensor names and unknown keys.
ModelManifest load_manifest(std::string_view json_text, std::filesystem::path base_dir = {});
/// As load_manifest; base_dir is the manifest's directory.
ModelManifest load_manifest_file(const std::filesystem::path& path);

using ValueChunk = std::variant<std::span<const float>, std::span<const double>>;

/// Streams a tensor's values in chunks of at most chunk_values elements.
/// Raw and NPY files are read incrementally; CSV is tokenized whole.
/// Throws Error(Io/Parse/Schema) with the tensor name in the message.
void for_each_chunk(const TensorSource& source, const std::filesystem::path& file, std::size_t chunk_values,
                    const std::function<void(ValueChunk)>& fn);

/// All values of one tensor, loaded at once.
Tensor load_tensor(const TensorSource& source, const std::filesystem::path& file);

DigitHistogram tensor_histogram(const TensorSource& source, const std::filesystem::path& file, int base = 10,
                                std::size_t chunk_values = 1 << 20);

struct ModelAnalysis {
    MlhScore mlh;
    DigitHistogram histogram;
};

/// Joint histogram over every included tensor, and its MLH. Tensors are
/// processed in parallel (threads == 0 means default_thread_count()).
///
/// Throws Error(EmptyInput) when no tensor is included or nothing is countable.
ModelAnalysis model_mlh(const ModelManifest& manifest, unsigned threads = 0);

/// Histogram part of model_mlh without the MLH step.
DigitHistogram model_histogram(const ModelManifest& manifest, unsigned threads = 0);

struct LayerReport {
    std::string name;
    std::uint64_t n_values = 0;  // elements in the tensor, excluded ones included
    DigitHistogram histogram;
    std::optional<double> mlh;  // empty when undefined for this layer
    std::optional<double> jsd;
};

LayerReport make_layer_report(std::string name, std::uint64_t n_values, DigitHistogram histogram);

/// One report per included tensor, in manifest order.
std::vector<LayerReport> layerwise_report(const ModelManifest& manifest, unsigned threads = 0);

}  // namespace blm
