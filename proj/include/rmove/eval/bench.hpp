#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "rmove/error.hpp"

namespace rmove {

struct BenchRow {
    std::string combo;
    std::string classifier;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    double infer_ms_per_method = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

inline constexpr char kBenchHeader[] = "combo,classifier,precision,recall,f1,infer_ms_per_method,seed";

namespace detail {

inline std::string exact(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v); // shortest round-trip form
    return std::string(buf, end);
}

inline double parse_double(const std::string& s, std::size_t line) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        fail(ErrorKind::MalformedRecord, "bench CSV line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

} // namespace detail

inline std::string format_csv(const std::vector<BenchRow>& rows) {
    std::string out = std::string(kBenchHeader) + "\n";
    for (const auto& r : rows)
        out += r.combo + "," + r.classifier + "," + detail::exact(r.precision) + "," + detail::exact(r.recall) + "," +
               detail::exact(r.f1) + "," + detail::exact(r.infer_ms_per_method) + "," + std::to_string(r.seed) + "\n";
    return out;
}

inline std::vector<BenchRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kBenchHeader) fail(ErrorKind::BadFormat, "bench CSV header missing");
    std::vector<BenchRow> rows;
    std::size_t no = 1;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 7) fail(ErrorKind::MalformedRecord, "bench CSV line " + std::to_string(no) + ": expected 7 fields");
        BenchRow r{f[0], f[1], detail::parse_double(f[2], no), detail::parse_double(f[3], no),
                   detail::parse_double(f[4], no), detail::parse_double(f[5], no), 0};
        r.seed = static_cast<std::uint64_t>(detail::parse_double(f[6], no));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string format_bench_table(const std::vector<BenchRow>& rows) {
    std::size_t wc = 5, wk = 10;
    for (const auto& r : rows) {
        wc = std::max(wc, r.combo.size());
        wk = std::max(wk, r.classifier.size());
    }
    std::ostringstream o;
    o << std::left << std::setw(static_cast<int>(wc)) << "combo" << "  " << std::setw(static_cast<int>(wk))
      << "classifier" << std::right << std::setw(10) << "precision" << std::setw(8) << "recall" << std::setw(8)
      << "f1" << std::setw(12) << "ms/method" << std::setw(8) << "seed" << '\n';
    o << std::fixed;
    for (const auto& r : rows)
        o << std::left << std::setw(static_cast<int>(wc)) << r.combo << "  " << std::setw(static_cast<int>(wk))
          << r.classifier << std::right << std::setprecision(3) << std::setw(10) << r.precision << std::setw(8)
          << r.recall << std::setw(8) << r.f1 << std::setprecision(4) << std::setw(12) << r.infer_ms_per_method
          << std::setw(8) << r.seed << '\n';
    return o.str();
}

} // namespace rmove
