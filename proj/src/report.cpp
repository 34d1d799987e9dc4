#include "cfx/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cfx {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer the shorter representation when it round-trips
    char shorter[64];
    std::snprintf(shorter, sizeof(shorter), "%.12g", v);
    double back = std::strtod(shorter, nullptr);
    return back == v ? std::string(shorter) : std::string(buf);
}

std::string format_u64(std::uint64_t v) { return std::to_string(v); }

std::uint64_t Report::config_hash() const {
    std::string canon = command;
    for (const auto& [k, v] : config) {
        canon += '\x1f';
        canon += k;
        canon += '=';
        canon += v;
    }
    return fnv1a64(canon);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string Report::to_csv() const {
    std::ostringstream os;
    os << "# command=" << command << " version=" << kProjectVersion << " config_hash="
       << config_hash() << "\n";
    for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(columns[i]);
    }
    os << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::logic_error("Report: row width does not match columns");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << csv_escape(row[i]);
        }
        os << '\n';
    }
    return os.str();
}

std::string Report::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["command"] = command;
    j["version"] = kProjectVersion;
    j["config_hash"] = config_hash();
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = cfg;
    j["columns"] = columns;
    nlohmann::json rws = nlohmann::json::array();
    for (const auto& row : rows) rws.push_back(row);
    j["rows"] = rws;
    return j.dump(2) + "\n";
}

namespace {

void parse_three(const std::string& spec, std::string& a, std::string& b, std::string& c) {
    auto p1 = spec.find(':');
    auto p2 = spec.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw std::invalid_argument("grid: expected lo:hi:count, got '" + spec + "'");
    a = spec.substr(0, p1);
    b = spec.substr(p1 + 1, p2 - p1 - 1);
    c = spec.substr(p2 + 1);
}

}  // namespace

std::vector<std::uint64_t> parse_n_grid(const std::string& spec) {
    std::string a, b, c;
    parse_three(spec, a, b, c);
    double lo = std::stod(a), hi = std::stod(b);
    long count = std::stol(c);
    if (!(lo >= 1.0) || !(hi >= lo) || count < 1)
        throw std::invalid_argument("n-grid: need 1 <= lo <= hi and count >= 1");
    std::vector<std::uint64_t> out;
    if (count == 1) {
        out.push_back(static_cast<std::uint64_t>(std::llround(lo)));
        return out;
    }
    // geometric spacing, deduplicated after rounding
    double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(count - 1));
    double v = lo;
    for (long i = 0; i < count; ++i) {
        auto n = static_cast<std::uint64_t>(std::llround(v));
        if (out.empty() || out.back() != n) out.push_back(n);
        v *= ratio;
    }
    return out;
}

std::vector<double> parse_u_grid(const std::string& spec) {
    std::string a, b, c;
    parse_three(spec, a, b, c);
    double lo = std::stod(a), hi = std::stod(b);
    long count = std::stol(c);
    if (!(lo > 0.0) || !(hi >= lo) || count < 1)
        throw std::invalid_argument("u-grid: need 0 < lo <= hi and count >= 1");
    std::vector<double> out;
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    double step = (hi - lo) / static_cast<double>(count - 1);
    for (long i = 0; i < count; ++i) out.push_back(lo + step * static_cast<double>(i));
    return out;
}

}  // namespace cfx
