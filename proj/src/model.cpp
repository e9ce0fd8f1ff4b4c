#include "blm/model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "blm/error.hpp"
#include "blm/parallel.hpp"

namespace blm {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorKind::Schema, "manifest: " + what); }

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            schema_error("unknown key '" + key + "' in " + where);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error("missing '" + std::string(key) + "' in " + where);
    return *it;
}

std::vector<std::size_t> parse_shape(const json& j, const std::string& where) {
    if (!j.is_array()) schema_error("'shape' must be an array in " + where);
    std::vector<std::size_t> shape;
    for (const auto& d : j) {
        if (!d.is_number_unsigned()) schema_error("'shape' entries must be non-negative integers in " + where);
        shape.push_back(d.get<std::size_t>());
    }
    return shape;
}

TensorSource parse_tensor(const json& j, std::size_t index) {
    const std::string where = "tensors[" + std::to_string(index) + "]";
    if (!j.is_object()) schema_error(where + " must be an object");
    reject_unknown_keys(j, {"name", "path", "format", "shape", "exclude"}, where);
    TensorSource t;
    const auto& name = require(j, "name", where);
    const auto& path = require(j, "path", where);
    const auto& format = require(j, "format", where);
    if (!name.is_string() || name.get<std::string>().empty()) schema_error("'name' must be a non-empty string in " + where);
    if (!path.is_string() || path.get<std::string>().empty()) schema_error("'path' must be a non-empty string in " + where);
    if (!format.is_string()) schema_error("'format' must be a string in " + where);
    t.name = name.get<std::string>();
    t.path = path.get<std::string>();
    t.format = parse_tensor_format(format.get<std::string>());
    if (auto it = j.find("shape"); it != j.end() && !it->is_null()) t.shape = parse_shape(*it, where);
    if (auto it = j.find("exclude"); it != j.end() && !it->is_null()) {
        if (!it->is_boolean()) schema_error("'exclude' must be a boolean in " + where);
        t.exclude = it->get<bool>();
    }
    return t;
}

[[noreturn]] void rethrow_for(const TensorSource& t, const Error& e) {
    throw Error(e.kind(), "tensor '" + t.name + "': " + e.what());
}

template <typename T>
void stream_binary(std::ifstream& in, std::size_t n, std::size_t chunk, const std::function<void(ValueChunk)>& fn) {
    std::vector<T> buf(std::min(n, chunk));
    std::size_t left = n;
    while (left > 0) {
        const std::size_t take = std::min(left, buf.size());
        if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(take * sizeof(T))))
            throw Error(ErrorKind::Io, "short read");
        if constexpr (std::endian::native == std::endian::big) {
            for (std::size_t i = 0; i < take; ++i) {
                auto* p = reinterpret_cast<unsigned char*>(&buf[i]);
                std::reverse(p, p + sizeof(T));
            }
        }
        fn(std::span<const T>(buf.data(), take));
        left -= take;
    }
}

void stream_values(std::ifstream& in, DType dtype, std::size_t n, std::size_t chunk,
                   const std::function<void(ValueChunk)>& fn) {
    if (dtype == DType::F32)
        stream_binary<float>(in, n, chunk, fn);
    else
        stream_binary<double>(in, n, chunk, fn);
}

void check_declared_shape(const TensorSource& t, std::span<const std::size_t> actual, std::size_t elements) {
    if (!t.shape) return;
    if (shape_elements(*t.shape) != elements)
        throw Error(ErrorKind::Schema, "declared shape holds " + std::to_string(shape_elements(*t.shape)) +
                                           " elements, data has " + std::to_string(elements));
    if (!actual.empty() && !std::equal(actual.begin(), actual.end(), t.shape->begin(), t.shape->end()))
        throw Error(ErrorKind::Schema, "declared shape differs from the file's shape");
}

std::vector<double> parse_csv_values(const std::filesystem::path& file) {
    const auto bytes = read_file_bytes(file);
    const char* p = reinterpret_cast<const char*>(bytes.data());
    const char* end = p + bytes.size();
    std::vector<double> values;
    auto is_sep = [](char c) { return c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c)); };
    std::size_t line = 1;
    while (p < end) {
        if (is_sep(*p)) {
            if (*p == '\n') ++line;
            ++p;
            continue;
        }
        const char* tok = p;
        while (p < end && !is_sep(*p)) ++p;
        const char* first = (*tok == '+' && p - tok > 1) ? tok + 1 : tok;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, p, v);
        if (ec != std::errc() || ptr != p)
            throw Error(ErrorKind::Parse, "csv line " + std::to_string(line) + ": bad number '" + std::string(tok, p) + "'");
        values.push_back(v);
    }
    return values;
}

std::uintmax_t file_size_of(const std::filesystem::path& file) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(file, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot stat '" + file.string() + "': " + ec.message());
    return size;
}

std::ifstream open_binary(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + file.string() + "'");
    return in;
}

std::vector<std::size_t> included_indices(const ModelManifest& m) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m.tensors.size(); ++i)
        if (!m.is_excluded(m.tensors[i])) idx.push_back(i);
    if (idx.empty()) throw Error(ErrorKind::EmptyInput, "manifest '" + m.model_name + "': every tensor is excluded");
    return idx;
}

}  // namespace

std::string_view to_string(TensorFormat f) noexcept {
    switch (f) {
        case TensorFormat::Npy: return "npy";
        case TensorFormat::RawF32: return "raw-f32";
        case TensorFormat::RawF64: return "raw-f64";
        case TensorFormat::Csv: return "csv";
    }
    return "unknown";
}

TensorFormat parse_tensor_format(std::string_view name) {
    if (name == "npy") return TensorFormat::Npy;
    if (name == "raw-f32") return TensorFormat::RawF32;
    if (name == "raw-f64") return TensorFormat::RawF64;
    if (name == "csv") return TensorFormat::Csv;
    throw Error(ErrorKind::Schema, "unknown tensor format '" + std::string(name) + "'");
}

std::vector<std::string> default_exclude_patterns() { return {"bias", "bn", "norm"}; }

bool ModelManifest::is_excluded(const TensorSource& t) const {
    if (t.exclude) return *t.exclude;
    const std::string name = lower(t.name);
    return std::any_of(exclude_patterns.begin(), exclude_patterns.end(),
                       [&](const std::string& p) { return !p.empty() && name.find(lower(p)) != std::string::npos; });
}

std::filesystem::path ModelManifest::resolve(const TensorSource& t) const {
    return t.path.is_absolute() || base_dir.empty() ? t.path : base_dir / t.path;
}

ModelManifest load_manifest(std::string_view json_text, std::filesystem::path base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("manifest: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) schema_error("top level must be an object");
    reject_unknown_keys(j, {"model_name", "exclude_patterns", "tensors"}, "manifest");
    ModelManifest m;
    m.base_dir = std::move(base_dir);
    const auto& name = require(j, "model_name", "manifest");
    if (!name.is_string()) schema_error("'model_name' must be a string");
    m.model_name = name.get<std::string>();
    if (auto it = j.find("exclude_patterns"); it != j.end()) {
        if (!it->is_array()) schema_error("'exclude_patterns' must be an array of strings");
        m.exclude_patterns.clear();
        for (const auto& p : *it) {
            if (!p.is_string()) schema_error("'exclude_patterns' must be an array of strings");
            m.exclude_patterns.push_back(p.get<std::string>());
        }
    }
    const auto& tensors = require(j, "tensors", "manifest");
    if (!tensors.is_array()) schema_error("'tensors' must be an array");
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        auto t = parse_tensor(tensors[i], i);
        if (!seen.insert(t.name).second) schema_error("duplicate tensor name '" + t.name + "'");
        m.tensors.push_back(std::move(t));
    }
    return m;
}

ModelManifest load_manifest_file(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return load_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                         path.parent_path());
}

void for_each_chunk(const TensorSource& source, const std::filesystem::path& file, std::size_t chunk_values,
                    const std::function<void(ValueChunk)>& fn) {
    chunk_values = std::max<std::size_t>(chunk_values, 1);
    try {
        switch (source.format) {
            case TensorFormat::Npy: {
                auto in = open_binary(file);
                std::array<std::byte, 10> pre{};
                if (!in.read(reinterpret_cast<char*>(pre.data()), pre.size()))
                    throw Error(ErrorKind::Parse, "npy: file too short for a header");
                const std::size_t header_len = std::to_integer<std::size_t>(pre[8]) |
                                               (std::to_integer<std::size_t>(pre[9]) << 8);
                std::vector<std::byte> head(pre.size() + header_len);
                std::copy(pre.begin(), pre.end(), head.begin());
                if (header_len && !in.read(reinterpret_cast<char*>(head.data() + pre.size()),
                                           static_cast<std::streamsize>(header_len)))
                    throw Error(ErrorKind::Parse, "npy: truncated header");
                const NpyHeader h = parse_npy_header(head);
                const std::size_t n = shape_elements(h.shape);
                const auto payload = file_size_of(file) - h.data_offset;
                if (payload != n * item_size(h.dtype))
                    throw Error(ErrorKind::Parse, "npy: payload is " + std::to_string(payload) + " bytes, header describes " +
                                                      std::to_string(n * item_size(h.dtype)));
                check_declared_shape(source, h.shape, n);
                stream_values(in, h.dtype, n, chunk_values, fn);
                return;
            }
            case TensorFormat::RawF32:
            case TensorFormat::RawF64: {
                const DType dtype = source.format == TensorFormat::RawF32 ? DType::F32 : DType::F64;
                const auto size = file_size_of(file);
                if (size % item_size(dtype) != 0)
                    throw Error(ErrorKind::Parse, "raw file size " + std::to_string(size) + " is not a multiple of " +
                                                      std::to_string(item_size(dtype)));
                const auto n = static_cast<std::size_t>(size / item_size(dtype));
                check_declared_shape(source, {}, n);
                auto in = open_binary(file);
                stream_values(in, dtype, n, chunk_values, fn);
                return;
            }
            case TensorFormat::Csv: {
                const auto values = parse_csv_values(file);
                check_declared_shape(source, {}, values.size());
                for (std::size_t i = 0; i < values.size(); i += chunk_values)
                    fn(std::span<const double>(values).subspan(i, std::min(chunk_values, values.size() - i)));
                return;
            }
        }
    } catch (const Error& e) {
        rethrow_for(source, e);
    }
}

Tensor load_tensor(const TensorSource& source, const std::filesystem::path& file) {
    if (source.format == TensorFormat::Npy) {
        try {
            Tensor t = read_npy_file(file);
            check_declared_shape(source, t.shape, t.size());
            return t;
        } catch (const Error& e) {
            rethrow_for(source, e);
        }
    }
    std::vector<float> f32;
    std::vector<double> f64;
    for_each_chunk(source, file, std::size_t{1} << 20, [&](ValueChunk chunk) {
        if (auto* s = std::get_if<std::span<const float>>(&chunk))
            f32.insert(f32.end(), s->begin(), s->end());
        else
            std::visit([&](auto d) { f64.insert(f64.end(), d.begin(), d.end()); }, chunk);
    });
    Tensor t;
    if (source.format == TensorFormat::RawF32) {
        t.shape = source.shape.value_or(std::vector<std::size_t>{f32.size()});
        t.data = std::move(f32);
    } else {
        t.shape = source.shape.value_or(std::vector<std::size_t>{f64.size()});
        t.data = std::move(f64);
    }
    return t;
}

DigitHistogram tensor_histogram(const TensorSource& source, const std::filesystem::path& file, int base,
                                std::size_t chunk_values) {
    DigitHistogram h(base);
    for_each_chunk(source, file, chunk_values, [&](ValueChunk chunk) {
        std::visit([&](auto s) { h.add(s); }, chunk);
    });
    return h;
}

DigitHistogram model_histogram(const ModelManifest& manifest, unsigned threads) {
    const auto idx = included_indices(manifest);
    std::vector<DigitHistogram> partial(idx.size(), DigitHistogram(10));
    parallel_chunks(idx.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& t = manifest.tensors[idx[i]];
            partial[i] = tensor_histogram(t, manifest.resolve(t));
        }
    });
    DigitHistogram total(10);
    for (const auto& h : partial) total += h;
    return total;
}

ModelAnalysis model_mlh(const ModelManifest& manifest, unsigned threads) {
    auto hist = model_histogram(manifest, threads);
    if (hist.total() == 0)
        throw Error(ErrorKind::EmptyInput, "manifest '" + manifest.model_name + "': no nonzero finite values");
    return {mlh(hist), std::move(hist)};
}

LayerReport make_layer_report(std::string name, std::uint64_t n_values, DigitHistogram histogram) {
    LayerReport r{std::move(name), n_values, std::move(histogram), std::nullopt, std::nullopt};
    if (r.histogram.total() == 0) return r;
    r.jsd = jsd_benford(r.histogram);
    try {
        r.mlh = mlh(r.histogram).value;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::UndefinedCorrelation && e.kind() != ErrorKind::EmptyInput) throw;
    }
    return r;
}

std::vector<LayerReport> layerwise_report(const ModelManifest& manifest, unsigned threads) {
    const auto idx = included_indices(manifest);
    std::vector<std::optional<LayerReport>> reports(idx.size());
    parallel_chunks(idx.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& t = manifest.tensors[idx[i]];
            auto h = tensor_histogram(t, manifest.resolve(t));
            const auto n = h.total() + h.excluded();
            reports[i] = make_layer_report(t.name, n, std::move(h));
        }
    });
    std::vector<LayerReport> out;
    out.reserve(reports.size());
    for (auto& r : reports) out.push_back(std::move(*r));
    return out;
}

}  // namespace blm
