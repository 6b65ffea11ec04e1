#include "lamplab/csv.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace lamplab {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_number(std::int64_t v) { return std::to_string(v); }

std::uint64_t config_hash(const std::map<std::string, std::string>& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& [k, v] : config) {
        if (k == "workers") continue;
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

CsvWriter::CsvWriter(const std::string& path, const std::map<std::string, std::string>& config,
                     const std::vector<std::string>& columns)
    : path_(path), out_(path), n_columns_(columns.size()) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path);
    out_ << "# manifest config_hash=" << hash_hex(config_hash(config)) << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != n_columns_)
        throw std::logic_error("csv: row width does not match the header");
    for (std::size_t i = 0; i < fields.size(); ++i)
        out_ << fields[i] << (i + 1 < fields.size() ? "," : "");
    out_ << "\n";
    if (!out_) throw std::runtime_error("csv: write failed for " + path_);
}

std::map<std::string, std::string> parse_config_text(const std::string& text,
                                                     const std::string& origin) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ": expected 'key = value' at line " +
                                        std::to_string(line_no));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(origin + ": empty key at line " +
                                        std::to_string(line_no));
        out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ',' || text[i] == ' ')) ++i;
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && text[j] != ',' && text[j] != ' ') ++j;
        std::int64_t v = 0;
        auto res = std::from_chars(text.data() + i, text.data() + j, v);
        if (res.ec != std::errc{} || res.ptr != text.data() + j)
            throw std::invalid_argument("bad integer list entry '" + text.substr(i, j - i) + "'");
        out.push_back(v);
        i = j;
    }
    return out;
}

} // namespace lamplab
