#pragma once
#include <string>
#include <vector>

namespace kfgm {

/// shortest round-trip decimal form; "0" for both zeros, "nan"/"inf" spelled out
std::string fmt_num(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);
    void comment(const std::string& line);  // written as "# line"
    void row(const std::vector<double>& values);
    std::string str() const;
    /// throws Error(ConfigError) if the file cannot be written
    void save(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::string> comments_;
    std::string body_;
};

void write_text(const std::string& path, const std::string& text);

}  // namespace kfgm
