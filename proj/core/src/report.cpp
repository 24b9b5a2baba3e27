#include "kfgm/harness/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "kfgm/errors.hpp"

namespace kfgm {

std::string fmt_num(double v) {
    if (v == 0.0) return "0";
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::comment(const std::string& line) { comments_.push_back(line); }

void CsvWriter::row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) body_ += ',';
        body_ += fmt_num(values[i]);
    }
    body_ += '\n';
}

std::string CsvWriter::str() const {
    std::string out;
    for (const auto& c : comments_) out += "# " + c + "\n";
    for (size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    return out + body_;
}

void CsvWriter::save(const std::string& path) const { write_text(path, str()); }

void write_text(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorCode::ConfigError, "write failed for '" + path + "'");
}

}  // namespace kfgm
