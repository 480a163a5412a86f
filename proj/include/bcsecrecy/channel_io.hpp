#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "bcsecrecy/channels.hpp"
#include "bcsecrecy/gaussian.hpp"

// Channel files:
//   {"type": "bcc", "x": nX, "y1": nY1, "y2": nY2, "z": nZ, "joint": [...]}
//       joint is flat row-major over (x, y1, y2, z)
//   {"type": "bcc-marginals", "py1x": [[...]], "py2x": [[...]], "pzx": [[...]]}
//   {"type": "awgn-bcc", "power": P, "n1": N1, "n2": N2, "n3": N3}

namespace bcsecrecy {

using ChannelSpec = std::variant<BroadcastChannel, BroadcastMarginals, GaussianParams>;

namespace detail {

using nlohmann::json;

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(Errc::ParseError, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline double number(const json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number()) throw Error(Errc::ParseError, std::string("field \"") + key + "\" must be a number");
    return v.get<double>();
}

inline std::size_t count(const json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw Error(Errc::ParseError, std::string("field \"") + key + "\" must be a positive integer");
    return v.get<std::size_t>();
}

inline std::vector<double> number_array(const json& v, const std::string& what) {
    if (!v.is_array()) throw Error(Errc::ParseError, what + " must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) throw Error(Errc::ParseError, what + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    clamp_grace(out);
    return out;
}

inline DiscreteChannel matrix(const json& v, const std::string& what) {
    if (!v.is_array() || v.empty()) throw Error(Errc::ParseError, what + " must be a non-empty array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < v.size(); ++i) rows.push_back(number_array(v[i], what + "[" + std::to_string(i) + "]"));
    try {
        return DiscreteChannel::from_rows(rows);
    } catch (const Error& e) {
        throw Error(Errc::InvalidChannel, what + ": " + e.what());
    }
}

inline void require_channel(const DiscreteChannel& ch, const std::string& what) {
    if (auto v = validate_channel(ch); !v) throw Error(Errc::InvalidChannel, what + ": " + v.message);
}

}  // namespace detail

inline DiscreteChannel parse_matrix(const nlohmann::json& j, const std::string& what) {
    auto ch = detail::matrix(j, what);
    detail::require_channel(ch, what);
    return ch;
}

inline Pmf parse_pmf(const nlohmann::json& j, const std::string& what) {
    Pmf p(detail::number_array(j, what));
    if (auto v = validate_pmf(p); !v) throw Error(Errc::InvalidPmf, what + ": " + v.message);
    return p;
}

/// Parses and validates a channel document. Every failure names the field and
/// the violated invariant.
inline ChannelSpec parse_channel(const nlohmann::json& j) {
    const auto& type_field = detail::field(j, "type");
    if (!type_field.is_string()) throw Error(Errc::ParseError, "field \"type\" must be a string");
    const auto type = type_field.get<std::string>();
    if (type == "bcc") {
        const auto nx = detail::count(j, "x"), n1 = detail::count(j, "y1"), n2 = detail::count(j, "y2"),
                   nz = detail::count(j, "z");
        auto flat = detail::number_array(detail::field(j, "joint"), "joint");
        if (flat.size() != nx * n1 * n2 * nz)
            throw Error(Errc::InvalidChannel, "joint has " + std::to_string(flat.size()) + " entries, expected " +
                                                  std::to_string(nx * n1 * n2 * nz));
        BroadcastChannel bcc(nx, n1, n2, nz, std::move(flat));
        if (auto v = validate_broadcast(bcc); !v) throw Error(Errc::InvalidChannel, v.message);
        return bcc;
    }
    if (type == "bcc-marginals") {
        BroadcastMarginals m{parse_matrix(detail::field(j, "py1x"), "py1x"),
                             parse_matrix(detail::field(j, "py2x"), "py2x"),
                             parse_matrix(detail::field(j, "pzx"), "pzx")};
        if (m.py2x.input_size() != m.x_size() || m.pzx.input_size() != m.x_size())
            throw Error(Errc::InvalidChannel, "py1x, py2x and pzx must have the same number of rows");
        return m;
    }
    if (type == "awgn-bcc") {
        GaussianParams g{detail::number(j, "power"), detail::number(j, "n1"), detail::number(j, "n2"),
                         detail::number(j, "n3")};
        if (auto v = validate_gaussian(g); !v) throw Error(Errc::InvalidParams, v.message);
        return g;
    }
    throw Error(Errc::ParseError, "unknown channel type \"" + type + "\"");
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::ParseError, path + ": " + e.what());
    }
}

inline ChannelSpec load_channel_file(const std::string& path) { return parse_channel(read_json_file(path)); }

/// Discrete marginals of a channel spec; Gaussian specs are rejected.
inline BroadcastMarginals discrete_marginals(const ChannelSpec& spec) {
    if (const auto* bcc = std::get_if<BroadcastChannel>(&spec)) return marginals(*bcc);
    if (const auto* m = std::get_if<BroadcastMarginals>(&spec)) return *m;
    throw Error(Errc::InvalidChannel, "a discrete channel is required, got awgn-bcc");
}

inline nlohmann::json to_json(const DiscreteChannel& ch) { return ch.rows(); }

inline nlohmann::json to_json(const BroadcastMarginals& m) {
    return {{"type", "bcc-marginals"}, {"py1x", to_json(m.py1x)}, {"py2x", to_json(m.py2x)}, {"pzx", to_json(m.pzx)}};
}

}  // namespace bcsecrecy
