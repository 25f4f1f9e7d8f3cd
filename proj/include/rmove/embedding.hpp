#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rmove/error.hpp"

namespace rmove {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr char kEmbeddingMagic[] = "RMEMB1";

/// Row-per-id vectors with a technique tag. Ids are kept sorted so lookups are
/// binary searches and the on-disk order is canonical.
struct EmbeddingTable {
    std::string tag;
    std::vector<std::string> ids;
    Matrix values;
    nlohmann::json meta = nlohmann::json::object();

    std::size_t rows() const noexcept { return ids.size(); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(values.cols()); }

    std::optional<std::size_t> find(const std::string& id) const {
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        if (it == ids.end() || *it != id) return std::nullopt;
        return static_cast<std::size_t>(it - ids.begin());
    }

    Vector row(const std::string& id) const {
        auto r = find(id);
        if (!r) fail(ErrorKind::MissingEmbedding, tag + " has no vector for " + id);
        return values.row(static_cast<Eigen::Index>(*r)).transpose();
    }

    friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
        return a.tag == b.tag && a.ids == b.ids && a.values.rows() == b.values.rows() &&
               a.values.cols() == b.values.cols() && a.values == b.values && a.meta == b.meta;
    }
};

/// Builds a table from rows in arbitrary id order.
inline EmbeddingTable make_table(std::string tag, std::vector<std::string> ids, const Matrix& values) {
    if (static_cast<std::size_t>(values.rows()) != ids.size())
        fail(ErrorKind::DimensionMismatch, "row count differs from id count");
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    EmbeddingTable t;
    t.tag = std::move(tag);
    t.values.resize(values.rows(), values.cols());
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && ids[order[i]] == ids[order[i - 1]]) fail(ErrorKind::MalformedRecord, "duplicate id " + ids[order[i]]);
        t.ids.push_back(ids[order[i]]);
        t.values.row(static_cast<Eigen::Index>(i)) = values.row(static_cast<Eigen::Index>(order[i]));
    }
    return t;
}

/// Stored precision is f32; rounding in memory keeps in-process and reloaded runs identical.
inline void round_to_float(Matrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint32_t get_u32(const std::string& in, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
    return v;
}

} // namespace detail

/// Binary layout: "RMEMB1", 8-byte NUL-padded tag, u32 dim, u32 rows, f32 row-major values, all little-endian.
inline std::string encode_embedding(const EmbeddingTable& t) {
    if (t.tag.size() > 8) fail(ErrorKind::BadFormat, "embedding tag longer than 8 bytes: " + t.tag);
    std::string out(kEmbeddingMagic, 6);
    std::string tag = t.tag;
    tag.resize(8, '\0');
    out += tag;
    detail::put_u32(out, static_cast<std::uint32_t>(t.dim()));
    detail::put_u32(out, static_cast<std::uint32_t>(t.rows()));
    for (Eigen::Index i = 0; i < t.values.size(); ++i) {
        const float f = static_cast<float>(t.values.data()[i]);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        detail::put_u32(out, bits);
    }
    return out;
}

inline nlohmann::json embedding_index(const EmbeddingTable& t) {
    nlohmann::json rows = nlohmann::json::object();
    for (std::size_t i = 0; i < t.ids.size(); ++i) rows[t.ids[i]] = i;
    return {{"tag", t.tag}, {"dim", t.dim()}, {"rows", rows}, {"meta", t.meta}};
}

inline EmbeddingTable decode_embedding(const std::string& bin, const nlohmann::json& index) {
    if (bin.size() < 22 || bin.compare(0, 6, kEmbeddingMagic) != 0) fail(ErrorKind::BadFormat, "not an RMEMB1 file");
    EmbeddingTable t;
    t.tag = bin.substr(6, 8);
    t.tag.erase(t.tag.find_last_not_of('\0') + 1);
    const std::uint32_t dim = detail::get_u32(bin, 14), rows = detail::get_u32(bin, 18);
    if (bin.size() != 22 + 4ull * dim * rows) fail(ErrorKind::BadFormat, "RMEMB1 payload size mismatch");
    if (!index.contains("rows") || index["rows"].size() != rows) fail(ErrorKind::BadFormat, "sidecar row count mismatch");
    t.ids.assign(rows, {});
    for (const auto& [id, r] : index["rows"].items()) {
        const auto at = r.get<std::size_t>();
        if (at >= rows || !t.ids[at].empty()) fail(ErrorKind::BadFormat, "sidecar row index invalid for " + id);
        t.ids[at] = id;
    }
    if (!std::is_sorted(t.ids.begin(), t.ids.end())) fail(ErrorKind::BadFormat, "sidecar ids not in sorted order");
    t.values.resize(rows, dim);
    for (std::size_t i = 0; i < std::size_t{dim} * rows; ++i) {
        const std::uint32_t bits = detail::get_u32(bin, 22 + 4 * i);
        float f;
        std::memcpy(&f, &bits, 4);
        t.values.data()[i] = f;
    }
    if (index.contains("meta")) t.meta = index["meta"];
    return t;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << data;
}

/// Writes `path` and the sidecar `path + ".json"`.
inline void save_embedding(const EmbeddingTable& t, const std::string& path) {
    write_file(path, encode_embedding(t));
    write_file(path + ".json", embedding_index(t).dump(1) + "\n");
}

inline EmbeddingTable load_embedding(const std::string& path) {
    nlohmann::json index;
    try {
        index = nlohmann::json::parse(read_file(path + ".json"));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::BadFormat, path + ".json: " + e.what());
    }
    return decode_embedding(read_file(path), index);
}

inline double cosine(const Vector& a, const Vector& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

} // namespace rmove
