#include "glab/run_record.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace glab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Table::to_csv() const {
    std::stringstream out;
    for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    char buf[64];
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

bool RunRecord::passed() const {
    for (const auto& [name, ok] : assertions)
        if (!ok) return false;
    return true;
}

std::string RunRecord::content_hash() const {
    // out_dir is where the record lands, not what it is; keep it out of the
    // identity so a replay from a stored manifest hashes identically.
    Config semantic;
    for (const auto& [k, v] : config.entries())
        if (k != "out_dir") semantic.set(k, v);
    std::stringstream acc;
    acc << experiment << '\n' << master_seed << '\n' << semantic.canonical_text();
    for (uint64_t s : replica_seeds) acc << s << ',';
    acc << '\n';
    for (const auto& [name, table] : tables) acc << name << '\n' << table.to_csv();
    return sha256_hex(acc.str());
}

namespace {
json config_to_json(const Config& config) {
    json j = json::object();
    for (const auto& [key, value] : config.entries()) {
        if (const double* d = std::get_if<double>(&value))
            j[key] = *d;
        else if (const bool* b = std::get_if<bool>(&value))
            j[key] = *b;
        else if (const std::string* s = std::get_if<std::string>(&value))
            j[key] = *s;
        else if (const auto* a = std::get_if<std::vector<double>>(&value))
            j[key] = *a;
    }
    return j;
}

Config config_from_json(const json& j) {
    Config c;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const json& v = it.value();
        if (v.is_boolean())
            c.set(it.key(), v.get<bool>());
        else if (v.is_number())
            c.set(it.key(), v.get<double>());
        else if (v.is_string())
            c.set(it.key(), v.get<std::string>());
        else if (v.is_array())
            c.set(it.key(), v.get<std::vector<double>>());
    }
    return c;
}
}  // namespace

void RunRecord::save(const std::string& dir) const {
    fs::create_directories(fs::path(dir) / "tables");
    json manifest;
    manifest["experiment"] = experiment;
    manifest["master_seed"] = master_seed;
    manifest["replica_seeds"] = replica_seeds;
    manifest["config"] = config_to_json(config);
    manifest["content_hash"] = content_hash();
    manifest["wall_seconds"] = wall_seconds;
    json checks = json::object();
    for (const auto& [name, ok] : assertions) checks[name] = ok;
    manifest["assertions"] = checks;
    manifest["notes"] = notes;
    json table_names = json::array();
    for (const auto& [name, table] : tables) {
        table_names.push_back(name);
        std::ofstream out(fs::path(dir) / "tables" / (name + ".csv"));
        out << table.to_csv();
    }
    manifest["tables"] = table_names;
    std::ofstream out(fs::path(dir) / "manifest.json");
    out << manifest.dump(2) << '\n';
}

RunRecord RunRecord::load(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in) throw std::runtime_error("cannot open manifest in " + dir);
    json manifest = json::parse(in);
    RunRecord r;
    r.experiment = manifest.at("experiment").get<std::string>();
    r.master_seed = manifest.at("master_seed").get<uint64_t>();
    r.replica_seeds = manifest.at("replica_seeds").get<std::vector<uint64_t>>();
    r.config = config_from_json(manifest.at("config"));
    r.wall_seconds = manifest.value("wall_seconds", 0.0);
    if (manifest.contains("assertions"))
        for (auto it = manifest["assertions"].begin(); it != manifest["assertions"].end(); ++it)
            r.assertions.emplace_back(it.key(), it.value().get<bool>());
    if (manifest.contains("notes"))
        for (auto it = manifest["notes"].begin(); it != manifest["notes"].end(); ++it)
            r.notes[it.key()] = it.value().get<std::string>();
    for (const auto& name : manifest.at("tables")) {
        std::ifstream csv(fs::path(dir) / "tables" / (name.get<std::string>() + ".csv"));
        if (!csv) throw std::runtime_error("missing table " + name.get<std::string>());
        Table t;
        std::string line;
        if (std::getline(csv, line)) {
            std::stringstream header(line);
            std::string col;
            while (std::getline(header, col, ',')) t.columns.push_back(col);
        }
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            std::stringstream row(line);
            std::string cell;
            std::vector<double> vals;
            while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
            t.rows.push_back(std::move(vals));
        }
        r.tables[name.get<std::string>()] = std::move(t);
    }
    return r;
}

}  // namespace glab
