#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace glab {

// Flat key = value configuration with numbers, booleans, quoted strings and
// bracketed numeric arrays; '#' starts a comment.
class Config {
  public:
    using Value = std::variant<double, bool, std::string, std::vector<double>>;

    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long integer(const std::string& key) const;
    long integer_or(const std::string& key, long fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    std::vector<double> array(const std::string& key) const;

    void set(const std::string& key, Value v) { values_[key] = std::move(v); }
    const std::map<std::string, Value>& entries() const { return values_; }
    // Canonical "key = value" rendering, keys sorted.
    std::string canonical_text() const;

  private:
    std::map<std::string, Value> values_;
};

}  // namespace glab
