#pragma once

#include <map>
#include <string>
#include <vector>

#include "glab/config.hpp"

namespace glab {

// Column-named numeric table exported as CSV, %.17g throughout so replays are
// byte-identical.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::initializer_list<double> values) { rows.emplace_back(values); }
    std::string to_csv() const;
};

// Persisted experiment unit: one directory holding a JSON manifest and the
// output tables. The content hash is SHA-256 over the canonicalized config
// plus all table bytes, so a replay is checkable bit-for-bit.
struct RunRecord {
    std::string experiment;
    Config config;
    uint64_t master_seed = 0;
    std::vector<uint64_t> replica_seeds;
    std::map<std::string, Table> tables;
    std::map<std::string, std::string> notes;  // flags, e.g. substituted vN
    std::vector<std::pair<std::string, bool>> assertions;
    double wall_seconds = 0.0;

    bool passed() const;
    std::string content_hash() const;
    // Writes <dir>/manifest.json and <dir>/tables/<name>.csv.
    void save(const std::string& dir) const;
    static RunRecord load(const std::string& dir);
};

std::string sha256_hex(const std::string& bytes);

}  // namespace glab
