#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wstark {

/// Flat sectioned key=value text configuration.
///
///     # comment
///     [lattice]
///     v0 = 4.5
///     f  = 0.5
///
/// Keys are addressed as "section.key". Keys before the first section
/// header live in the empty section and are addressed by their bare name.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
    void erase(const std::string& key);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    std::optional<std::string> find(const std::string& key) const;

    /// Keys of one section, without the section prefix.
    std::vector<std::string> keys(const std::string& section) const;
    std::vector<std::string> sections() const;

    /// Serialize back to the sectioned text format (sorted, deterministic).
    std::string to_string() const;

    void merge(const KeyValueConfig& other);

private:
    std::map<std::string, std::string> values_;
    std::string origin_ = "<empty>";
};

/// Shortest text that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace wstark
