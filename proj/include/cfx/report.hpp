#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cfx {

inline constexpr const char* kProjectVersion = "0.1.0";

/// FNV-1a hash of the canonical config serialization; embedded in every
/// output row so results can be traced to their exact configuration.
std::uint64_t fnv1a64(const std::string& s);

/// One tabular report: named columns, rows of preformatted cells, plus the
/// resolved configuration echoed for reproducibility. Serializes to CSV
/// (stable column order) or schema-versioned JSON. No timestamps anywhere:
/// identical configs must produce byte-identical artifacts.
struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;  // resolved key/values
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::uint64_t config_hash() const;
    std::string to_csv() const;
    std::string to_json() const;
};

/// Canonical number formatting for report cells (shortest round-trip).
std::string format_double(double v);
std::string format_u64(std::uint64_t v);

/// Grid syntax "lo:hi:count". n-grids are geometric, u-grids linear.
std::vector<std::uint64_t> parse_n_grid(const std::string& spec);
std::vector<double> parse_u_grid(const std::string& spec);

}  // namespace cfx
