#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "version.hpp"

namespace sqfield {

// Shortest decimal form that round-trips the double exactly.
inline std::string format_double(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw ConfigError("cannot open output file '" + path + "'");
        write_row_strings(header);
    }

    void write_row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    void write_row(const std::vector<double>& cells,
                   const std::string& trailing = {}) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_double(cells[i]);
        }
        if (!trailing.empty()) out_ << ',' << trailing;
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

// Metadata sidecar: enough to replay the producing command exactly.
inline void write_metadata(const std::string& path, nlohmann::json extra) {
    extra["code_version"] = kVersion;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open metadata file '" + path + "'");
    out << extra.dump(2) << '\n';
}

} // namespace sqfield
