#ifndef FSDSTACK_CONFIG_HPP
#define FSDSTACK_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace fsd {

/// Flat key-value configuration (`key = value` lines, '#' comments).
/// Dotted keys group module settings, e.g. `planner.sample_ds = 0.5`.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_string(const std::string& text);

    bool has(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    /// Comma-separated list value.
    std::vector<std::string> get_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

}  // namespace fsd

#endif  // FSDSTACK_CONFIG_HPP
