#pragma once

#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "parcohom/analysis.hpp"
#include "parcohom/convolution.hpp"
#include "parcohom/version.hpp"

namespace parcohom {

using json = nlohmann::json;

// Matrices serialize as arrays-of-arrays of decimal strings so that
// arbitrary-precision entries survive any JSON reader.

inline json to_json(const IntMat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Int int_from_json(const json& v) {
    if (v.is_number_integer()) return Int(v.get<long long>());
    if (v.is_string()) return Int(v.get<std::string>());
    throw std::invalid_argument("expected integer or decimal string");
}

inline IntMat intmat_from_json(const json& j, std::size_t expect_cols = 0) {
    if (!j.is_array()) throw std::invalid_argument("matrix: expected array of rows");
    std::size_t rows = j.size();
    std::size_t cols = expect_cols;
    if (rows > 0) {
        if (!j[0].is_array()) throw std::invalid_argument("matrix: row is not an array");
        cols = j[0].size();
    }
    IntMat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw std::invalid_argument("matrix: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = int_from_json(j[i][c]);
    }
    return m;
}

inline json to_json(const Sublattice& L) {
    return json{{"ambient_dim", L.ambient_dim}, {"basis", to_json(L.basis)}};
}

inline Sublattice sublattice_from_json(const json& j) {
    std::size_t ambient = j.at("ambient_dim").get<std::size_t>();
    IntMat basis = intmat_from_json(j.at("basis"), ambient);
    return make_lattice(ambient, basis);
}

inline json to_json(const GramForm& q) {
    return json{{"matrix", to_json(q.mat)},
                {"symmetry", q.sym == Symmetry::symmetric ? "symmetric" : "antisymmetric"}};
}

inline GramForm gram_from_json(const json& j) {
    std::string s = j.at("symmetry").get<std::string>();
    if (s != "symmetric" && s != "antisymmetric")
        throw std::invalid_argument("gram: bad symmetry flag");
    return make_gram(intmat_from_json(j.at("matrix")),
                     s == "symmetric" ? Symmetry::symmetric : Symmetry::antisymmetric);
}

inline json to_json(const MonodromyTuple& t) {
    json mats = json::array();
    for (const IntMat& g : t.mats) mats.push_back(to_json(g));
    json out{{"rank_p", t.rank_p}, {"points", t.points}, {"mats", std::move(mats)}};
    if (t.pairing) out["pairing"] = to_json(*t.pairing);
    return out;
}

inline MonodromyTuple tuple_from_json(const json& j) {
    std::size_t p = j.at("rank_p").get<std::size_t>();
    std::vector<std::string> points = j.at("points").get<std::vector<std::string>>();
    std::vector<IntMat> mats;
    for (const json& m : j.at("mats")) mats.push_back(intmat_from_json(m, p));
    std::optional<GramForm> pairing;
    if (j.contains("pairing")) pairing = gram_from_json(j.at("pairing"));
    MonodromyTuple t = make_monodromy_tuple(std::move(mats), std::move(points), std::move(pairing));
    if (t.rank_p != p) throw std::invalid_argument("tuple: rank_p mismatch");
    return t;
}

inline json to_json(const DiscriminantGroup& d) {
    json out = json::array();
    for (const Int& f : d.factors) out.push_back(f.str());
    return out;
}

inline json to_json(const MatrixOrder& o) { return o.str(); }

inline json to_json(const InvariantReport& r) {
    json out{{"rank", r.rank}};
    out["det"] = r.det_value.str();
    out["disc"] = to_json(r.disc);
    if (r.sig) out["signature"] = json::array({r.sig->first, r.sig->second});
    json orders = json::array(), traces = json::array(), cps = json::array();
    for (const auto& o : r.orders) orders.push_back(to_json(o));
    for (const auto& t : r.traces) traces.push_back(t.str());
    for (const auto& cp : r.charpolys) {
        json c = json::array();
        for (const Int& x : cp) c.push_back(x.str());
        cps.push_back(std::move(c));
    }
    out["orders"] = std::move(orders);
    out["traces"] = std::move(traces);
    out["charpolys"] = std::move(cps);
    return out;
}

/// Canonical text: nlohmann keeps object keys sorted, so dump() is already
/// deterministic; fixed indentation for readability.
inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

/// FNV-1a over the canonical dump; stable across runs and platforms.
inline std::string job_hash(const json& j) {
    std::string s = canonical_dump(j);
    unsigned long long h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return std::string(buf);
}

}  // namespace parcohom
