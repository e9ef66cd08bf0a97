#include "meissner/table.hpp"

#include <cstdint>
#include <sstream>

#include "meissner/io.hpp"

namespace meissner {

void ResultsTable::add_row(std::vector<double> row) {
    require(row.size() == columns_.size(), ErrorKind::InvalidSpec, "row width mismatch");
    rows_.push_back(std::move(row));
}

int ResultsTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<double> ResultsTable::column(const std::string& name) const {
    int idx = column_index(name);
    require(idx >= 0, ErrorKind::MissingColumn, "no column named " + name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r[idx]);
    return out;
}

void ResultsTable::set_provenance(const std::string& config_hash, const std::string& wall_time) {
    config_hash_ = config_hash;
    wall_time_ = wall_time;
}

std::string ResultsTable::body_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        os << columns_[i] << (i + 1 < columns_.size() ? "," : "");
    os << '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i)
            os << format_double(r[i]) << (i + 1 < r.size() ? "," : "");
        os << '\n';
    }
    return os.str();
}

std::string ResultsTable::to_csv() const {
    std::ostringstream os;
    os << "# meissner-lab " << kVersion << '\n';
    if (!config_hash_.empty()) os << "# config " << config_hash_ << '\n';
    if (!wall_time_.empty()) os << "# wall_time " << wall_time_ << '\n';
    os << body_csv();
    return os.str();
}

ResultsTable ResultsTable::from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    ResultsTable out;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string tok;
        if (!have_header) {
            std::vector<std::string> cols;
            while (std::getline(ss, tok, ',')) cols.push_back(tok);
            out.columns_ = cols;
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        require(row.size() == out.columns_.size(), ErrorKind::IoFailure, "ragged CSV row");
        out.rows_.push_back(std::move(row));
    }
    require(have_header, ErrorKind::IoFailure, "CSV has no header");
    return out;
}

std::string stable_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace meissner
