#include "blm/npy.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <optional>

#include "blm/error.hpp"

namespace blm {
namespace {

constexpr std::array<unsigned char, 6> kMagic = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kPreamble = 10;  // magic + version + u16 header length
constexpr std::size_t kAlign = 64;

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, "npy: " + what); }

// Just enough of a Python literal parser for the NPY header dict:
// strings, True/False, integers and tuples of integers.
class HeaderParser {
public:
    explicit HeaderParser(std::string_view text) : s_(text) {}

    NpyHeader parse() {
        std::optional<std::string> descr;
        std::optional<bool> fortran;
        std::optional<std::vector<std::size_t>> shape;
        expect('{');
        while (true) {
            skip_ws();
            if (peek() == '}') {
                ++pos_;
                break;
            }
            const std::string key = parse_string();
            expect(':');
            if (key == "descr")
                descr = parse_string();
            else if (key == "fortran_order")
                fortran = parse_bool();
            else if (key == "shape")
                shape = parse_shape();
            else
                parse_error("unexpected header key '" + key + "'");
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect('}');
            break;
        }
        if (!descr || !fortran || !shape) parse_error("header is missing descr, fortran_order or shape");
        if (*fortran) parse_error("fortran_order arrays are not supported");
        NpyHeader h;
        if (*descr == "<f4")
            h.dtype = DType::F32;
        else if (*descr == "<f8")
            h.dtype = DType::F64;
        else
            parse_error("unsupported dtype '" + *descr + "' (only <f4 and <f8)");
        h.shape = std::move(*shape);
        return h;
    }

private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) parse_error(std::string("malformed header, expected '") + c + "'");
        ++pos_;
    }

    std::string parse_string() {
        skip_ws();
        const char quote = peek();
        if (quote != '\'' && quote != '"') parse_error("malformed header, expected a string");
        const auto end = s_.find(quote, pos_ + 1);
        if (end == std::string_view::npos) parse_error("unterminated string in header");
        std::string out(s_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
        return out;
    }

    bool parse_bool() {
        skip_ws();
        if (s_.substr(pos_, 4) == "True") {
            pos_ += 4;
            return true;
        }
        if (s_.substr(pos_, 5) == "False") {
            pos_ += 5;
            return false;
        }
        parse_error("malformed header, expected True or False");
    }

    std::size_t parse_uint() {
        skip_ws();
        const auto start = pos_;
        std::size_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            const auto digit = static_cast<std::size_t>(s_[pos_] - '0');
            if (v > (SIZE_MAX - digit) / 10) parse_error("shape dimension overflows");
            v = v * 10 + digit;
            ++pos_;
        }
        if (pos_ == start) parse_error("malformed shape");
        return v;
    }

    std::vector<std::size_t> parse_shape() {
        std::vector<std::size_t> dims;
        expect('(');
        while (true) {
            skip_ws();
            if (peek() == ')') {
                ++pos_;
                return dims;
            }
            dims.push_back(parse_uint());
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect(')');
            return dims;
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

template <typename T>
void decode_le(std::span<const std::byte> src, std::vector<T>& out) {
    out.resize(src.size() / sizeof(T));
    if (!out.empty()) std::memcpy(out.data(), src.data(), out.size() * sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        for (auto& v : out) {
            auto* p = reinterpret_cast<unsigned char*>(&v);
            std::reverse(p, p + sizeof(T));
        }
    }
}

template <typename T>
void encode_le(const std::vector<T>& values, std::vector<std::byte>& out) {
    const auto offset = out.size();
    out.resize(offset + values.size() * sizeof(T));
    if (!values.empty()) std::memcpy(out.data() + offset, values.data(), values.size() * sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            auto* p = reinterpret_cast<unsigned char*>(out.data() + offset + i * sizeof(T));
            std::reverse(p, p + sizeof(T));
        }
    }
}

}  // namespace

std::size_t item_size(DType dtype) noexcept { return dtype == DType::F32 ? 4 : 8; }

std::size_t Tensor::size() const noexcept {
    return std::visit([](const auto& v) { return v.size(); }, data);
}

std::size_t shape_elements(std::span<const std::size_t> shape) {
    std::size_t n = 1;
    for (auto d : shape) {
        if (d != 0 && n > SIZE_MAX / d) throw Error(ErrorKind::Parse, "shape element count overflows");
        n *= d;
    }
    return n;
}

NpyHeader parse_npy_header(std::span<const std::byte> bytes) {
    if (bytes.size() < kPreamble) parse_error("file too short for a header");
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin(),
                    [](unsigned char m, std::byte b) { return std::to_integer<unsigned char>(b) == m; }))
        parse_error("bad magic");
    const auto major = std::to_integer<unsigned>(bytes[6]);
    const auto minor = std::to_integer<unsigned>(bytes[7]);
    if (major != 1 || minor != 0)
        parse_error("unsupported version " + std::to_string(major) + "." + std::to_string(minor));
    const std::size_t header_len =
        std::to_integer<std::size_t>(bytes[8]) | (std::to_integer<std::size_t>(bytes[9]) << 8);
    if (bytes.size() < kPreamble + header_len) parse_error("truncated header");
    const std::string_view text(reinterpret_cast<const char*>(bytes.data() + kPreamble), header_len);
    NpyHeader h = HeaderParser(text).parse();
    h.data_offset = kPreamble + header_len;
    return h;
}

Tensor parse_npy(std::span<const std::byte> bytes) {
    const NpyHeader h = parse_npy_header(bytes);
    const std::size_t n = shape_elements(h.shape);
    const std::size_t payload = bytes.size() - h.data_offset;
    if (n > SIZE_MAX / item_size(h.dtype) || payload != n * item_size(h.dtype))
        parse_error("payload is " + std::to_string(payload) + " bytes, header describes " + std::to_string(n) +
                    " elements of " + std::to_string(item_size(h.dtype)) + " bytes");
    Tensor t;
    t.shape = h.shape;
    const auto body = bytes.subspan(h.data_offset);
    if (h.dtype == DType::F32) {
        std::vector<float> v;
        decode_le(body, v);
        t.data = std::move(v);
    } else {
        std::vector<double> v;
        decode_le(body, v);
        t.data = std::move(v);
    }
    return t;
}

std::vector<std::byte> write_npy(const Tensor& tensor) {
    if (shape_elements(tensor.shape) != tensor.size())
        throw Error(ErrorKind::DimensionMismatch, "npy: shape does not match element count");
    std::string dict = "{'descr': '";
    dict += tensor.dtype() == DType::F32 ? "<f4" : "<f8";
    dict += "', 'fortran_order': False, 'shape': (";
    for (std::size_t i = 0; i < tensor.shape.size(); ++i) {
        if (i) dict += ", ";
        dict += std::to_string(tensor.shape[i]);
    }
    if (tensor.shape.size() == 1) dict += ",";
    dict += "), }";
    // pad with spaces, terminate with '\n', total preamble + header % 64 == 0
    const std::size_t unpadded = kPreamble + dict.size() + 1;
    dict.append((kAlign - unpadded % kAlign) % kAlign, ' ');
    dict += '\n';
    if (dict.size() > 0xffff) throw Error(ErrorKind::InvalidArgument, "npy: header too long for v1.0");

    std::vector<std::byte> out;
    out.reserve(kPreamble + dict.size() + tensor.size() * item_size(tensor.dtype()));
    for (auto m : kMagic) out.push_back(std::byte{m});
    out.push_back(std::byte{1});
    out.push_back(std::byte{0});
    out.push_back(static_cast<std::byte>(dict.size() & 0xff));
    out.push_back(static_cast<std::byte>(dict.size() >> 8));
    for (char c : dict) out.push_back(static_cast<std::byte>(c));
    std::visit([&](const auto& v) { encode_le(v, out); }, tensor.data);
    return out;
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0);
    std::vector<std::byte> bytes(size);
    if (size && !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size)))
        throw Error(ErrorKind::Io, "cannot read '" + path.string() + "'");
    return bytes;
}

Tensor read_npy_file(const std::filesystem::path& path) { return parse_npy(read_file_bytes(path)); }

void write_npy_file(const std::filesystem::path& path, const Tensor& tensor) {
    const auto bytes = write_npy(tensor);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot create '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
}

}  // namespace blm
