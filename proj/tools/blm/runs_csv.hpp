#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blm/criteria.hpp"

namespace blm::cli {

/// Numeric CSV with a header row; empty cells are missing values.
/// The expected layout is `step,train_acc,mlh,val_acc` plus any extra
/// metric columns.
struct RunsTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;

    std::optional<std::size_t> column_index(std::string_view name) const;

    /// Rows with train_acc, mlh and the target all present, the target
    /// stored as val_accuracy. Empty when train_acc or mlh is absent.
    std::vector<RunRecord> run_records(std::size_t target_col) const;
};

/// Throws Error(Io) / Error(Parse) / Error(Schema).
RunsTable parse_runs_csv(std::string_view text);
RunsTable read_runs_csv(const std::filesystem::path& path);

}  // namespace blm::cli
