#pragma once

// Minimal "key = value" text blocks used by regime specs and experiment configs.
// Blank lines and '#' comments are ignored; later keys override earlier ones.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rsfix {

using KeyValues = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto body = trim(line);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'key = value'");
        auto key = trim(std::string_view(body).substr(0, eq));
        if (key.empty()) throw std::invalid_argument("line " + std::to_string(lineno) + ": empty key");
        kv[key] = trim(std::string_view(body).substr(eq + 1));
    }
    return kv;
}

inline KeyValues read_key_value_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_key_values(ss.str());
}

inline double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size())
        throw std::invalid_argument(key + ": expected a number, got '" + value + "'");
    return v;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!value.empty() && value[0] != '-') v = std::stoull(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size())
        throw std::invalid_argument(key + ": expected a non-negative integer, got '" + value + "'");
    return v;
}

/// Comma- or whitespace-separated list of non-negative integers.
inline std::vector<std::uint64_t> parse_uint_list(const std::string& key, const std::string& value) {
    std::vector<std::uint64_t> out;
    std::string tok;
    auto flush = [&] {
        if (!tok.empty()) out.push_back(parse_uint(key, tok));
        tok.clear();
    };
    for (char ch : value) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch)))
            flush();
        else
            tok += ch;
    }
    flush();
    return out;
}

}  // namespace rsfix
