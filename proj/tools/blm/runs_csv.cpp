#include "runs_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include "blm/error.hpp"
#include "blm/npy.hpp"

namespace blm::cli {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) return out;
        start = comma + 1;
    }
}

}  // namespace

std::optional<std::size_t> RunsTable::column_index(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<RunRecord> RunsTable::run_records(std::size_t target_col) const {
    const auto a = column_index("train_acc");
    const auto m = column_index("mlh");
    const auto s = column_index("step");
    std::vector<RunRecord> out;
    if (!a || !m) return out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!r[*a] || !r[*m] || !r[target_col]) continue;
        RunRecord rec;
        rec.step = s && r[*s] ? static_cast<std::int64_t>(*r[*s]) : static_cast<std::int64_t>(i);
        rec.train_accuracy = *r[*a];
        rec.mlh = *r[*m];
        rec.val_accuracy = *r[target_col];
        out.push_back(rec);
    }
    return out;
}

RunsTable parse_runs_csv(std::string_view text) {
    RunsTable t;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool have_header = false;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (!have_header) {
            std::unordered_set<std::string_view> seen;
            for (auto f : fields) {
                if (f.empty()) throw Error(ErrorKind::Schema, "runs csv: empty column name in header");
                if (!seen.insert(f).second)
                    throw Error(ErrorKind::Schema, "runs csv: duplicate column '" + std::string(f) + "'");
                t.header.emplace_back(f);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size())
            throw Error(ErrorKind::Parse, "runs csv line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(t.header.size()) + " fields, got " +
                                              std::to_string(fields.size()));
        std::vector<std::optional<double>> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            if (f.empty()) {
                row.emplace_back();
                continue;
            }
            double v = 0.0;
            const char* first = f.front() == '+' && f.size() > 1 ? f.data() + 1 : f.data();
            auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v))
                throw Error(ErrorKind::Parse, "runs csv line " + std::to_string(line_no) + ": bad number '" +
                                                  std::string(f) + "'");
            row.emplace_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw Error(ErrorKind::Schema, "runs csv: missing header");
    return t;
}

RunsTable read_runs_csv(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return parse_runs_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace blm::cli
