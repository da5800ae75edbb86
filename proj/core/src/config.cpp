#include "glab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace glab {

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

Config::Value parse_value(const std::string& raw, int line_no) {
    const std::string v = trim(raw);
    if (v.empty()) throw std::runtime_error("config line " + std::to_string(line_no) + ": empty value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw std::runtime_error("config line " + std::to_string(line_no) + ": unterminated string");
        return v.substr(1, v.size() - 2);
    }
    if (v.front() == '[') {
        if (v.back() != ']')
            throw std::runtime_error("config line " + std::to_string(line_no) + ": unterminated array");
        std::vector<double> arr;
        std::stringstream ss(v.substr(1, v.size() - 2));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string it = trim(item);
            if (it.empty()) continue;
            size_t used = 0;
            arr.push_back(std::stod(it, &used));
            if (used != it.size())
                throw std::runtime_error("config line " + std::to_string(line_no) + ": bad array entry");
        }
        return arr;
    }
    if (v == "true") return true;
    if (v == "false") return false;
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (...) {
    }
    return v;  // bare word
}
}  // namespace

Config Config::parse_text(const std::string& text) {
    Config c;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
        c.values_[key] = parse_value(t.substr(eq + 1), line_no);
    }
    return c;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

double Config::number(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    if (const double* d = std::get_if<double>(&it->second)) return *d;
    throw std::runtime_error("config: key '" + key + "' is not a number");
}

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long Config::integer(const std::string& key) const {
    const double d = number(key);
    const long v = std::lround(d);
    if (std::abs(d - v) > 1e-9) throw std::runtime_error("config: key '" + key + "' is not integral");
    return v;
}

long Config::integer_or(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
}

bool Config::flag_or(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (const bool* b = std::get_if<bool>(&it->second)) return *b;
    throw std::runtime_error("config: key '" + key + "' is not a boolean");
}

std::string Config::text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    if (const std::string* s = std::get_if<std::string>(&it->second)) return *s;
    throw std::runtime_error("config: key '" + key + "' is not a string");
}

std::string Config::text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

std::vector<double> Config::array(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    if (const auto* a = std::get_if<std::vector<double>>(&it->second)) return *a;
    if (const double* d = std::get_if<double>(&it->second)) return {*d};
    throw std::runtime_error("config: key '" + key + "' is not an array");
}

std::string Config::canonical_text() const {
    std::stringstream out;
    char buf[64];
    for (const auto& [key, value] : values_) {
        out << key << " = ";
        if (const double* d = std::get_if<double>(&value)) {
            std::snprintf(buf, sizeof buf, "%.17g", *d);
            out << buf;
        } else if (const bool* b = std::get_if<bool>(&value)) {
            out << (*b ? "true" : "false");
        } else if (const std::string* s = std::get_if<std::string>(&value)) {
            out << '"' << *s << '"';
        } else if (const auto* a = std::get_if<std::vector<double>>(&value)) {
            out << '[';
            for (size_t i = 0; i < a->size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", (*a)[i]);
                out << (i ? ", " : "") << buf;
            }
            out << ']';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace glab
