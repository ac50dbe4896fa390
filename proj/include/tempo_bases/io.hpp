#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "basis.hpp"

namespace tempo_bases {

/** Shortest decimal string that parses back to exactly the same double. */
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ArgumentError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

inline void write_csv(std::ostream& os, const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) os << ',';
            os << format_double(m(r, c));
        }
        os << '\n';
    }
}

inline void write_csv(const std::string& path, const Matrix& m) {
    std::ofstream os(path);
    if (!os) throw ArgumentError("cannot open '" + path + "' for writing");
    write_csv(os, m);
}

/** Numeric CSV; blank lines and lines starting with '#' are skipped. */
inline Matrix read_csv(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        std::vector<double> row;
        std::string_view sv(line);
        std::size_t start = 0;
        while (true) {
            const auto comma = sv.find(',', start);
            row.push_back(parse_double(sv.substr(start, comma == std::string_view::npos ? sv.npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ArgumentError("ragged CSV: row " + std::to_string(rows.size() + 1) + " has " +
                                std::to_string(row.size()) + " fields, expected " +
                                std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

inline Matrix read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ArgumentError("cannot open '" + path + "'");
    return read_csv(is);
}

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw ArgumentError("truncated binary basis header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace detail

/**
 * Binary layout: "TBAS", u32 q, u32 N, u32 kind code, then q*N
 * little-endian f64 values in row-major order.
 */
inline void write_binary(std::ostream& os, const BasisMatrix& b) {
    os.write("TBAS", 4);
    detail::put_u32(os, static_cast<std::uint32_t>(b.q()));
    detail::put_u32(os, static_cast<std::uint32_t>(b.N()));
    detail::put_u32(os, static_cast<std::uint32_t>(b.kind));
    for (Eigen::Index r = 0; r < b.data.rows(); ++r) {
        for (Eigen::Index c = 0; c < b.data.cols(); ++c) {
            std::uint64_t bits;
            const double v = b.data(r, c);
            std::memcpy(&bits, &v, sizeof bits);
            unsigned char out[8];
            for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(bits >> (8 * i));
            os.write(reinterpret_cast<const char*>(out), 8);
        }
    }
}

inline BasisMatrix read_binary(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::string_view(magic, 4) != "TBAS") throw ArgumentError("not a TBAS file");
    const auto q = detail::get_u32(is);
    const auto N = detail::get_u32(is);
    const auto kind = detail::get_u32(is);
    if (kind > static_cast<std::uint32_t>(BasisKind::Custom)) throw ArgumentError("unknown basis kind code");
    BasisMatrix b;
    b.kind = static_cast<BasisKind>(kind);
    b.data.resize(q, N);
    for (std::uint32_t r = 0; r < q; ++r) {
        for (std::uint32_t c = 0; c < N; ++c) {
            unsigned char in[8];
            if (!is.read(reinterpret_cast<char*>(in), 8)) throw ArgumentError("truncated binary basis data");
            std::uint64_t bits = 0;
            for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[i]) << (8 * i);
            double v;
            std::memcpy(&v, &bits, sizeof v);
            b.data(r, c) = v;
        }
    }
    return b;
}

inline void write_binary(const std::string& path, const BasisMatrix& b) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ArgumentError("cannot open '" + path + "' for writing");
    write_binary(os, b);
}

inline BasisMatrix read_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ArgumentError("cannot open '" + path + "'");
    return read_binary(is);
}

/** One value of a flat config file. */
using ConfigValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

/**
 * Flat `key = value` config: strings in double quotes, integers, floats,
 * true/false, and arrays of numbers. `#` starts a comment; tables are rejected.
 */
inline std::map<std::string, ConfigValue> parse_flat_config(std::istream& is) {
    std::map<std::string, ConfigValue> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto fail = [&](const std::string& why) {
        throw ArgumentError("config line " + std::to_string(lineno) + ": " + why);
    };
    auto scalar = [&](std::string_view v) -> ConfigValue {
        if (v == "true") return true;
        if (v == "false") return false;
        std::string clean;
        for (char ch : v)
            if (ch != '_') clean.push_back(ch);
        std::int64_t i = 0;
        auto r = std::from_chars(clean.data(), clean.data() + clean.size(), i);
        if (r.ec == std::errc() && r.ptr == clean.data() + clean.size()) return i;
        try {
            return parse_double(clean);
        } catch (const ArgumentError&) {
            fail("cannot parse value '" + std::string(v) + "'");
        }
        return 0.0;
    };
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view sv(line);
        bool in_str = false;
        for (std::size_t i = 0; i < sv.size(); ++i) {
            if (sv[i] == '"') in_str = !in_str;
            if (sv[i] == '#' && !in_str) {
                sv = sv.substr(0, i);
                break;
            }
        }
        sv = trim(sv);
        if (sv.empty()) continue;
        if (sv.front() == '[') fail("tables are not supported");
        const auto eq = sv.find('=');
        if (eq == sv.npos) fail("expected key = value");
        const std::string key(trim(sv.substr(0, eq)));
        const auto val = trim(sv.substr(eq + 1));
        if (key.empty() || val.empty()) fail("empty key or value");
        if (out.count(key)) fail("duplicate key '" + key + "'");
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"') fail("unterminated string");
            out[key] = std::string(val.substr(1, val.size() - 2));
        } else if (val.front() == '[') {
            if (val.back() != ']') fail("unterminated array");
            std::vector<double> arr;
            auto body = trim(val.substr(1, val.size() - 2));
            while (!body.empty()) {
                const auto comma = body.find(',');
                const auto item = trim(body.substr(0, comma));
                if (!item.empty()) {
                    auto v = scalar(item);
                    if (auto* pi = std::get_if<std::int64_t>(&v)) arr.push_back(static_cast<double>(*pi));
                    else if (auto* pd = std::get_if<double>(&v)) arr.push_back(*pd);
                    else fail("arrays hold numbers only");
                }
                if (comma == body.npos) break;
                body = body.substr(comma + 1);
            }
            out[key] = std::move(arr);
        } else {
            out[key] = scalar(val);
        }
    }
    return out;
}

}  // namespace tempo_bases
