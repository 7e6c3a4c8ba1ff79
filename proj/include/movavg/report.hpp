#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "movavg/exact_scalar.hpp"
#include "movavg/torus_set.hpp"

namespace movavg {

inline constexpr const char* kVersion = "movavg 0.1.0";

// Flat key-value configuration: dotted keys, "key = value" lines, '#'
// comments. Exact scalars stay strings so exactness survives the round trip.
class Config {
public:
    Config() = default;
    static Config from_file(const std::string& path);     // throws ConfigError with line numbers
    static Config from_text(const std::string& text, const std::string& origin = "<config>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const; // ConfigError when missing
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// JSON helpers: exact values appear as canonical strings next to a double
// approximation for plotting.
nlohmann::json exact_json(const ExactScalar& v);
nlohmann::json rational_json(const Rational& v);
nlohmann::json torus_set_json(const TorusSet& set);
nlohmann::json config_json(const Config& cfg);

// CSV with a mandatory header row, comma-separated, UTF-8.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    ~CsvWriter();

private:
    struct Impl;
    Impl* impl_;
};

std::string format_double(double v); // shortest round-trip, locale-free

void write_text_file(const std::string& path, const std::string& text);

} // namespace movavg
