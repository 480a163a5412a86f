#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "bcsecrecy/distributions.hpp"

// Entropy and mutual information in bits, with 0 log 0 = 0.

namespace bcsecrecy {

namespace detail {

inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

inline double entropy_bits(std::span<const double> p) {
    double h = 0.0;
    for (double v : p) h -= plogp(v);
    return std::max(h, 0.0);
}

/// I(A;B) of a row-major joint p(a,b) with `rows` values of A.
inline double mi_from_joint(std::span<const double> joint, std::size_t rows, std::size_t cols) {
    std::vector<double> pa(rows, 0.0), pb(cols, 0.0);
    for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t b = 0; b < cols; ++b) {
            pa[a] += joint[a * cols + b];
            pb[b] += joint[a * cols + b];
        }
    double mi = 0.0;
    for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t b = 0; b < cols; ++b) {
            const double p = joint[a * cols + b];
            if (p > 0.0) mi += p * std::log2(p / (pa[a] * pb[b]));
        }
    return std::max(mi, 0.0);
}

/// Output distribution of `ch` driven by `input`.
inline std::vector<double> output_distribution(std::span<const double> input, const DiscreteChannel& ch) {
    std::vector<double> out(ch.output_size(), 0.0);
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        if (input[x] == 0.0) continue;
        for (std::size_t y = 0; y < ch.output_size(); ++y) out[y] += input[x] * ch(x, y);
    }
    return out;
}

/// I(X;Y) without validation, via H(Y) - H(Y|X).
inline double mutual_information(std::span<const double> input, const DiscreteChannel& ch) {
    double h_y_given_x = 0.0;
    for (std::size_t x = 0; x < ch.input_size(); ++x)
        if (input[x] > 0.0) h_y_given_x += input[x] * entropy_bits(ch.row(x));
    const double h_y = entropy_bits(output_distribution(input, ch));
    return std::max(h_y - h_y_given_x, 0.0);
}

}  // namespace detail

inline double entropy(const Pmf& p) {
    require_valid(p);
    return detail::entropy_bits(p.probs());
}

inline double mutual_information(const Pmf& input, const DiscreteChannel& ch) {
    require_valid(input);
    require_valid(ch);
    if (input.size() != ch.input_size())
        throw Error(Errc::DimensionMismatch, "input pmf has " + std::to_string(input.size()) +
                                                 " symbols, channel expects " + std::to_string(ch.input_size()));
    return detail::mutual_information(input.probs(), ch);
}

/// p(x, y) = p(x) P(y|x) with axes labelled X and Y.
inline JointPmf joint_from_input(const Pmf& input, const DiscreteChannel& ch) {
    if (input.size() != ch.input_size())
        throw Error(Errc::DimensionMismatch, "input pmf and channel input alphabet differ");
    std::vector<double> j(ch.input_size() * ch.output_size());
    for (std::size_t x = 0; x < ch.input_size(); ++x)
        for (std::size_t y = 0; y < ch.output_size(); ++y) j[x * ch.output_size() + y] = input[x] * ch(x, y);
    return JointPmf({ch.input_size(), ch.output_size()}, std::move(j), {"X", "Y"});
}

/// I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C), over axis sets of `joint`.
inline double conditional_mutual_information(const JointPmf& joint, const std::vector<std::size_t>& a,
                                              const std::vector<std::size_t>& b,
                                              const std::vector<std::size_t>& c) {
    require_valid(joint);
    if (a.empty() || b.empty()) throw Error(Errc::InvalidJoint, "A and B must name at least one axis");
    std::vector<bool> used(joint.rank(), false);
    for (const auto* set : {&a, &b, &c}) {
        for (auto ax : *set) {
            if (ax >= joint.rank()) throw Error(Errc::InvalidJoint, "axis " + std::to_string(ax) + " out of range");
            if (used[ax]) throw Error(Errc::AxisOverlap, "axis " + std::to_string(ax) + " listed twice");
            used[ax] = true;
        }
    }
    auto cat = [](std::vector<std::size_t> x, const std::vector<std::size_t>& y) {
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    auto h = [&](const std::vector<std::size_t>& axes) {
        if (axes.empty()) return 0.0;
        return detail::entropy_bits(joint.marginal(axes).probs());
    };
    const double v = h(cat(a, c)) + h(cat(b, c)) - h(cat(cat(a, b), c)) - h(c);
    return std::max(v, 0.0);
}

inline double conditional_mutual_information(const JointPmf& joint, std::size_t a, std::size_t b,
                                              const std::vector<std::size_t>& c = {}) {
    return conditional_mutual_information(joint, std::vector<std::size_t>{a}, std::vector<std::size_t>{b}, c);
}

}  // namespace bcsecrecy
