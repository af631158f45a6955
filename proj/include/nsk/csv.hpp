#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "nsk/types.hpp"

namespace nsk {

/// Shortest round-trip decimal with 17 significant digits.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw ConfigError("cannot open " + path + " for writing");
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    void write_numeric(const std::vector<double>& cells) {
        std::vector<std::string> s;
        s.reserve(cells.size());
        for (double c : cells) s.push_back(fmt17(c));
        write_row(s);
    }

  private:
    std::ofstream out_;
};

/// Flat key = value manifest.
class ManifestWriter {
  public:
    explicit ManifestWriter(const std::string& path) : out_(path) {
        if (!out_) throw ConfigError("cannot open " + path + " for writing");
    }
    void put(const std::string& key, const std::string& value) {
        out_ << key << " = " << value << '\n';
    }
    void put(const std::string& key, double value) { put(key, fmt17(value)); }
    void put(const std::string& key, long value) { put(key, std::to_string(value)); }

  private:
    std::ofstream out_;
};

}  // namespace nsk
