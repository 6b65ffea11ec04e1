#ifndef LAMPLAB_CSV_HPP
#define LAMPLAB_CSV_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace lamplab {

// Locale-independent shortest round-trip formatting.
std::string format_number(double v);
std::string format_number(std::int64_t v);

// FNV-1a over the canonical "key=value\n" serialization, keys sorted.
// Execution-only keys (workers) are excluded so outputs hash identically
// across schedulers.
std::uint64_t config_hash(const std::map<std::string, std::string>& config);
std::string hash_hex(std::uint64_t h);

// CSV writer: one manifest comment line carrying the config hash, then a
// header row, then data rows. Comma-separated, no quoting (fields never
// contain commas here).
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::map<std::string, std::string>& config,
              const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& fields);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t n_columns_;
};

// key = value experiment config files; '#' comments and blank lines are
// ignored. Parse errors carry the line number.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text,
                                                     const std::string& origin);

std::vector<std::int64_t> parse_int_list(const std::string& text);

} // namespace lamplab

#endif
