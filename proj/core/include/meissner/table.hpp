#pragma once

#include <string>
#include <vector>

#include "meissner/errors.hpp"

namespace meissner {

// Column-typed results table with a provenance comment block.  Every CSV the
// driver emits goes through this type so the format stays uniform: comma
// separated, '.' decimal, LF endings, provenance lines prefixed '#'.
class ResultsTable {
  public:
    ResultsTable() = default;
    explicit ResultsTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }

    void add_row(std::vector<double> row);
    int column_index(const std::string& name) const;  // -1 when absent
    std::vector<double> column(const std::string& name) const;

    void set_provenance(const std::string& config_hash, const std::string& wall_time);

    // Full CSV including the provenance comments.
    std::string to_csv() const;
    // Body only (header + data rows), the determinism-comparable part.
    std::string body_csv() const;

    static ResultsTable from_csv(const std::string& text);

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
    std::string config_hash_;
    std::string wall_time_;
};

// FNV-1a of the canonical config text; stable across runs.
std::string stable_hash(const std::string& text);

}  // namespace meissner
