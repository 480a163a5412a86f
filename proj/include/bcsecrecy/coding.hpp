#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bcsecrecy/channels.hpp"
#include "bcsecrecy/distributions.hpp"
#include "bcsecrecy/information.hpp"
#include "bcsecrecy/rng.hpp"

// Finite-blocklength secret superposition and double-binning codes: codebook
// generation, stochastic encoding, memoryless transmission, maximum-likelihood
// decoding, and exact eavesdropper equivocation by enumeration.

namespace bcsecrecy {

using Symbol = std::uint16_t;
using Sequence = std::vector<Symbol>;

/// Blocklength, message counts m1, m2 (bins per layer) and randomization
/// factors l1, l2 (codewords per bin).
struct CodeParams {
    std::size_t n = 1;
    std::size_t m1 = 1;
    std::size_t l1 = 1;
    std::size_t m2 = 1;
    std::size_t l2 = 1;
    std::uint64_t seed = 0;

    double rate1() const { return std::log2(static_cast<double>(m1)) / static_cast<double>(n); }
    double rate2() const { return std::log2(static_cast<double>(m2)) / static_cast<double>(n); }
    double randomization_rate1() const { return std::log2(static_cast<double>(l1)) / static_cast<double>(n); }
    double randomization_rate2() const { return std::log2(static_cast<double>(l2)) / static_cast<double>(n); }
};

inline void require_valid(const CodeParams& p) {
    if (p.n < 1 || p.m1 < 1 || p.l1 < 1 || p.m2 < 1 || p.l2 < 1)
        throw Error(Errc::InvalidParams, "n, m1, l1, m2, l2 must all be at least 1");
}

struct CodingBudget {
    std::uint64_t max_symbols = std::uint64_t{1} << 26;
    std::uint64_t max_z_sequences = std::uint64_t{1} << 20;
    std::uint64_t max_combinations = std::uint64_t{1} << 16;
};

/// Log-likelihoods closer than this are ties; the lowest index wins.
inline constexpr double kTieTolerance = 1e-9;

namespace detail {

inline Sequence draw_sequence(Rng& rng, std::size_t n, std::span<const double> p) {
    Sequence s(n);
    for (auto& v : s) v = static_cast<Symbol>(rng.categorical(p));
    return s;
}

inline void check_symbols(const Sequence& s, std::size_t alphabet, const char* what) {
    for (auto v : s)
        if (v >= alphabet)
            throw Error(Errc::SymbolOutOfRange, std::string(what) + " symbol " + std::to_string(v) +
                                                    " outside alphabet of size " + std::to_string(alphabet));
}

inline double log_likelihood(const Sequence& in, const Sequence& out, const DiscreteChannel& ch) {
    double s = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) s += std::log2(ch(in[i], out[i]));
    return s;
}

/// Index of the most likely input word; ties within kTieTolerance go to the
/// lowest index.
inline std::size_t ml_index(std::span<const Sequence> words, const Sequence& out, const DiscreteChannel& ch) {
    std::vector<double> score(words.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < words.size(); ++i) {
        score[i] = log_likelihood(words[i], out, ch);
        best = std::max(best, score[i]);
    }
    for (std::size_t i = 0; i < words.size(); ++i)
        if (score[i] >= best - kTieTolerance) return i;
    return 0;
}

/// Entropy in bits of the normalization of w. Exactly log2(k) when all k
/// weights are equal.
inline double normalized_entropy(std::span<const double> w) {
    if (w.empty()) return 0.0;
    if (std::all_of(w.begin(), w.end(), [&](double v) { return v == w[0]; }))
        return std::log2(static_cast<double>(w.size()));
    double total = 0.0;
    for (double v : w) total += v;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double v : w) h -= plogp(v / total);
    return std::clamp(h, 0.0, std::log2(static_cast<double>(w.size())));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Secret superposition code.

class SuperpositionCodebook {
public:
    SuperpositionCodebook(CodeParams params, Pmf pu, DiscreteChannel pxu, std::vector<Sequence> clouds,
                          std::vector<std::vector<Sequence>> satellites)
        : params_(params), pu_(std::move(pu)), pxu_(std::move(pxu)), clouds_(std::move(clouds)),
          satellites_(std::move(satellites)) {}

    const CodeParams& params() const noexcept { return params_; }
    const Pmf& pu() const noexcept { return pu_; }
    const DiscreteChannel& pxu() const noexcept { return pxu_; }

    std::size_t cloud_count() const noexcept { return clouds_.size(); }
    std::size_t satellites_per_cloud() const noexcept { return params_.m1 * params_.l1; }

    /// Cloud words, flat index w2 * l2 + j.
    std::span<const Sequence> clouds() const noexcept { return clouds_; }
    const Sequence& cloud(std::size_t w2, std::size_t j) const { return clouds_.at(w2 * params_.l2 + j); }

    /// Satellites of cloud c, flat index w1 * l1 + k.
    std::span<const Sequence> satellites(std::size_t c) const { return satellites_.at(c); }
    const Sequence& satellite(std::size_t c, std::size_t w1, std::size_t k) const {
        return satellites_.at(c).at(w1 * params_.l1 + k);
    }

private:
    CodeParams params_;
    Pmf pu_;
    DiscreteChannel pxu_;
    std::vector<Sequence> clouds_;
    std::vector<std::vector<Sequence>> satellites_;
};

/// Draws m2*l2 cloud words i.i.d. from P(u) and, for each cloud, m1*l1
/// satellite words i.i.d. from P(x|u) given that cloud. Each word has its
/// own substream of params.seed.
inline SuperpositionCodebook build_superposition(const CodeParams& params, const Pmf& pu, const DiscreteChannel& pxu,
                                                 const CodingBudget& budget = {}) {
    require_valid(params);
    require_valid(pu);
    require_valid(pxu);
    if (pu.size() != pxu.input_size())
        throw Error(Errc::DimensionMismatch, "P(u) and P(x|u) disagree on |U|");
    const std::uint64_t clouds = static_cast<std::uint64_t>(params.m2) * params.l2;
    const std::uint64_t sats = static_cast<std::uint64_t>(params.m1) * params.l1;
    const long double symbols = static_cast<long double>(params.n) * clouds * (1 + sats);
    if (symbols > static_cast<long double>(budget.max_symbols))
        throw Error(Errc::SizeOverBudget, "codebook would hold " + std::to_string(static_cast<double>(symbols)) +
                                              " symbols, budget is " + std::to_string(budget.max_symbols));

    std::vector<Sequence> cloud_words;
    cloud_words.reserve(clouds);
    for (std::uint64_t c = 0; c < clouds; ++c) {
        Rng rng(derive_seed(params.seed, StreamTag::CloudWords, c));
        cloud_words.push_back(detail::draw_sequence(rng, params.n, pu.probs()));
    }
    std::vector<std::vector<Sequence>> sat_words(clouds);
    for (std::uint64_t c = 0; c < clouds; ++c) {
        sat_words[c].reserve(sats);
        for (std::uint64_t s = 0; s < sats; ++s) {
            Rng rng(derive_seed(params.seed, StreamTag::SatelliteWords, c * sats + s));
            Sequence x(params.n);
            for (std::size_t i = 0; i < params.n; ++i)
                x[i] = static_cast<Symbol>(rng.categorical(pxu.row(cloud_words[c][i])));
            sat_words[c].push_back(std::move(x));
        }
    }
    return SuperpositionCodebook(params, pu, pxu, std::move(cloud_words), std::move(sat_words));
}

struct SuperpositionChoice {
    std::size_t cloud = 0;      // flat cloud index w2 * l2 + j
    std::size_t satellite = 0;  // flat satellite index w1 * l1 + k
};

/// The encoder's uniform choice of cloud word within bin w2 and satellite
/// word within bin w1 of that cloud.
inline SuperpositionChoice select_superposition(const SuperpositionCodebook& cb, std::size_t w1, std::size_t w2,
                                                std::uint64_t noise_seed) {
    const auto& p = cb.params();
    if (w1 >= p.m1 || w2 >= p.m2)
        throw Error(Errc::MessageOutOfRange, "message (" + std::to_string(w1) + ", " + std::to_string(w2) +
                                                 ") outside [0," + std::to_string(p.m1) + ") x [0," +
                                                 std::to_string(p.m2) + ")");
    Rng rng(derive_seed(noise_seed, StreamTag::Encoder));
    const std::size_t j = rng.index(p.l2);
    const std::size_t k = rng.index(p.l1);
    return {w2 * p.l2 + j, w1 * p.l1 + k};
}

inline Sequence encode_superposition(const SuperpositionCodebook& cb, std::size_t w1, std::size_t w2,
                                     std::uint64_t noise_seed) {
    const auto choice = select_superposition(cb, w1, w2, noise_seed);
    return cb.satellites(choice.cloud)[choice.satellite];
}

/// Passes x through the memoryless channel, one independent draw per symbol.
inline Sequence transmit(const Sequence& x, const DiscreteChannel& ch, std::uint64_t noise_seed) {
    detail::check_symbols(x, ch.input_size(), "channel input");
    Rng rng(derive_seed(noise_seed, StreamTag::Channel));
    Sequence y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = static_cast<Symbol>(rng.categorical(ch.row(x[i])));
    return y;
}

/// Receiver 2: ML cloud word under the composite channel P(y2|u); returns
/// its bin w2.
inline std::size_t decode_rx2(const SuperpositionCodebook& cb, const Sequence& y2, const DiscreteChannel& y2_given_u) {
    if (y2.size() != cb.params().n) throw Error(Errc::DimensionMismatch, "received sequence has the wrong length");
    if (y2_given_u.input_size() != cb.pu().size())
        throw Error(Errc::DimensionMismatch, "composite channel input must be the U alphabet");
    detail::check_symbols(y2, y2_given_u.output_size(), "y2");
    return detail::ml_index(cb.clouds(), y2, y2_given_u) / cb.params().l2;
}

struct DecodedPair {
    std::size_t w1 = 0;
    std::size_t w2 = 0;

    friend bool operator==(const DecodedPair&, const DecodedPair&) = default;
};

/// Receiver 1: joint ML over every (cloud, satellite) pair; ties go to the
/// lexicographically lowest (cloud, satellite).
inline DecodedPair decode_rx1(const SuperpositionCodebook& cb, const Sequence& y1, const DiscreteChannel& y1_given_x) {
    if (y1.size() != cb.params().n) throw Error(Errc::DimensionMismatch, "received sequence has the wrong length");
    if (y1_given_x.input_size() != cb.pxu().output_size())
        throw Error(Errc::DimensionMismatch, "channel input must be the X alphabet");
    detail::check_symbols(y1, y1_given_x.output_size(), "y1");
    const std::size_t per = cb.satellites_per_cloud();
    std::vector<Sequence> flat;
    flat.reserve(cb.cloud_count() * per);
    for (std::size_t c = 0; c < cb.cloud_count(); ++c)
        for (const auto& s : cb.satellites(c)) flat.push_back(s);
    const std::size_t idx = detail::ml_index(flat, y1, y1_given_x);
    return {(idx % per) / cb.params().l1, (idx / per) / cb.params().l2};
}

/// Exact eavesdropper equivocations, bits per channel use, under uniform
/// messages and uniform encoder randomization.
struct EquivocationReport {
    double re1 = 0.0;
    double re2 = 0.0;
    double re12 = 0.0;
    double rate1 = 0.0;
    double rate2 = 0.0;
    double rate12 = 0.0;  // log2(m1 m2) / n, not rate1 + rate2 rounded

    double gap1() const { return rate1 - re1; }
    double gap2() const { return rate2 - re2; }
    double gap12() const { return rate12 - re12; }
};

namespace detail {

/// Walks every z^n in lexicographic order and hands the per-message
/// likelihoods P(z^n | w) to `sink`. `words` lists codewords message-major,
/// `per_message` consecutive words per message, each equally likely.
template <class Sink>
void for_each_eavesdropper_output(std::size_t n, std::size_t nz, std::size_t messages, std::size_t per_message,
                                  const std::vector<Sequence>& words, const DiscreteChannel& pzx, Sink&& sink) {
    // P(z|x) factors over a prefix and a suffix of the block; tabulate the
    // suffix factor once so each (z, codeword) pair costs one product.
    const std::size_t h = n / 2;
    std::size_t nsuf = 1;
    for (std::size_t i = h; i < n; ++i) nsuf *= nz;
    std::size_t npre = 1;
    for (std::size_t i = 0; i < h; ++i) npre *= nz;
    const std::size_t ncw = words.size();
    const bool tabulate = static_cast<std::uint64_t>(ncw) * nsuf <= (std::uint64_t{1} << 23);

    std::vector<double> suffix;
    if (tabulate) {
        suffix.assign(ncw * nsuf, 1.0);
        for (std::size_t c = 0; c < ncw; ++c)
            for (std::size_t zs = 0; zs < nsuf; ++zs) {
                double p = 1.0;
                std::size_t code = zs;
                for (std::size_t i = n; i-- > h;) {
                    p *= pzx(words[c][i], code % nz);
                    code /= nz;
                }
                suffix[c * nsuf + zs] = p;
            }
    }

    std::vector<double> prefix(ncw);
    std::vector<double> q(messages);
    Sequence z(n, 0);
    for (std::size_t zp = 0; zp < npre; ++zp) {
        for (std::size_t c = 0; c < ncw; ++c) {
            double p = 1.0;
            for (std::size_t i = 0; i < h; ++i) p *= pzx(words[c][i], z[i]);
            prefix[c] = p;
        }
        for (std::size_t zs = 0; zs < nsuf; ++zs) {
            {
                std::size_t code = zs;
                for (std::size_t i = n; i-- > h;) {
                    z[i] = static_cast<Symbol>(code % nz);
                    code /= nz;
                }
            }
            for (std::size_t w = 0; w < messages; ++w) {
                double acc = 0.0;
                for (std::size_t r = 0; r < per_message; ++r) {
                    const std::size_t c = w * per_message + r;
                    double s;
                    if (tabulate) {
                        s = suffix[c * nsuf + zs];
                    } else {
                        s = 1.0;
                        for (std::size_t i = h; i < n; ++i) s *= pzx(words[c][i], z[i]);
                    }
                    acc += prefix[c] * s;
                }
                q[w] = acc / static_cast<double>(per_message);
            }
            sink(std::span<const double>(q));
        }
        // Advance the prefix odometer.
        for (std::size_t i = h; i-- > 0;) {
            if (++z[i] < nz) break;
            z[i] = 0;
        }
    }
}

/// Equivocations from per-z likelihood tables of uniform messages (m1 x m2).
class EquivocationAccumulator {
public:
    EquivocationAccumulator(std::size_t m1, std::size_t m2) : m1_(m1), m2_(m2), a1_(m1), a2_(m2) {}

    void add(std::span<const double> q) {
        double pz = 0.0;
        for (double v : q) pz += v;
        if (pz <= 0.0) return;
        std::fill(a1_.begin(), a1_.end(), 0.0);
        std::fill(a2_.begin(), a2_.end(), 0.0);
        for (std::size_t w1 = 0; w1 < m1_; ++w1)
            for (std::size_t w2 = 0; w2 < m2_; ++w2) {
                a1_[w1] += q[w1 * m2_ + w2];
                a2_[w2] += q[w1 * m2_ + w2];
            }
        weight_ += pz;
        const double f = pz / weight_;
        // Running weighted means: exact when every term is identical.
        h12_ += f * (normalized_entropy(q) - h12_);
        h1_ += f * (normalized_entropy(a1_) - h1_);
        h2_ += f * (normalized_entropy(a2_) - h2_);
    }

    double h1() const { return h1_; }
    double h2() const { return h2_; }
    double h12() const { return h12_; }

private:
    std::size_t m1_, m2_;
    std::vector<double> a1_, a2_;
    double weight_ = 0.0;
    double h1_ = 0.0, h2_ = 0.0, h12_ = 0.0;
};

inline void check_enumeration_budget(std::size_t n, std::size_t nz, std::uint64_t combos, const CodingBudget& budget) {
    long double zseq = 1.0L;
    for (std::size_t i = 0; i < n; ++i) zseq *= nz;
    if (zseq > static_cast<long double>(budget.max_z_sequences))
        throw Error(Errc::EnumerationBudgetExceeded, "|Z|^n = " + std::to_string(static_cast<double>(zseq)) +
                                                         " exceeds " + std::to_string(budget.max_z_sequences));
    if (combos > budget.max_combinations)
        throw Error(Errc::EnumerationBudgetExceeded, std::to_string(combos) +
                                                         " message/randomization combinations exceed " +
                                                         std::to_string(budget.max_combinations));
}

}  // namespace detail

inline EquivocationReport exact_equivocation(const SuperpositionCodebook& cb, const DiscreteChannel& pzx,
                                             const CodingBudget& budget = {}) {
    require_valid(pzx);
    const auto& p = cb.params();
    if (pzx.input_size() != cb.pxu().output_size())
        throw Error(Errc::DimensionMismatch, "eavesdropper channel input must be the X alphabet");
    const std::uint64_t combos = static_cast<std::uint64_t>(p.m1) * p.m2 * p.l1 * p.l2;
    detail::check_enumeration_budget(p.n, pzx.output_size(), combos, budget);

    // Codewords in (w1, w2, j, k) order so each message owns a contiguous run.
    std::vector<Sequence> words;
    words.reserve(combos);
    for (std::size_t w1 = 0; w1 < p.m1; ++w1)
        for (std::size_t w2 = 0; w2 < p.m2; ++w2)
            for (std::size_t j = 0; j < p.l2; ++j)
                for (std::size_t k = 0; k < p.l1; ++k) words.push_back(cb.satellite(w2 * p.l2 + j, w1, k));

    detail::EquivocationAccumulator acc(p.m1, p.m2);
    detail::for_each_eavesdropper_output(p.n, pzx.output_size(), p.m1 * p.m2, p.l1 * p.l2, words, pzx,
                                         [&](std::span<const double> q) { acc.add(q); });
    const double n = static_cast<double>(p.n);
    return {acc.h1() / n, acc.h2() / n, acc.h12() / n, p.rate1(), p.rate2(),
            std::log2(static_cast<double>(p.m1) * static_cast<double>(p.m2)) / n};
}

// ---------------------------------------------------------------------------
// Double-binning code.

class BinningCodebook {
public:
    BinningCodebook(CodeParams params, Pmf pv1, Pmf pv2, DiscreteChannel x_map, JointPmf target, double epsilon,
                    std::vector<Sequence> v1_words, std::vector<Sequence> v2_words)
        : params_(params), pv1_(std::move(pv1)), pv2_(std::move(pv2)), x_map_(std::move(x_map)),
          target_(std::move(target)), epsilon_(epsilon), v1_words_(std::move(v1_words)),
          v2_words_(std::move(v2_words)) {}

    const CodeParams& params() const noexcept { return params_; }
    const Pmf& pv1() const noexcept { return pv1_; }
    const Pmf& pv2() const noexcept { return pv2_; }
    /// P(x | v1, v2), row index v1 * |V2| + v2.
    const DiscreteChannel& x_map() const noexcept { return x_map_; }
    const JointPmf& target() const noexcept { return target_; }
    double epsilon() const noexcept { return epsilon_; }

    /// Flat index w1 * l1 + j.
    std::span<const Sequence> v1_words() const noexcept { return v1_words_; }
    /// Flat index w2 * l2 + k.
    std::span<const Sequence> v2_words() const noexcept { return v2_words_; }

private:
    CodeParams params_;
    Pmf pv1_, pv2_;
    DiscreteChannel x_map_;
    JointPmf target_;
    double epsilon_;
    std::vector<Sequence> v1_words_, v2_words_;
};

/// Default typicality threshold for the double-binning encoder.
inline constexpr double kDefaultTypicalityEpsilon = 0.1;

/// `target` is the joint law P(v1, v2) the encoder's pair must look typical
/// for; it defaults to the product P(v1) P(v2).
inline BinningCodebook build_double_binning(const CodeParams& params, const Pmf& pv1, const Pmf& pv2,
                                            const DiscreteChannel& x_map, double epsilon = kDefaultTypicalityEpsilon,
                                            std::optional<JointPmf> target = std::nullopt,
                                            const CodingBudget& budget = {}) {
    require_valid(params);
    require_valid(pv1);
    require_valid(pv2);
    require_valid(x_map);
    if (!(epsilon > 0.0)) throw Error(Errc::InvalidParams, "typicality epsilon must be positive");
    if (x_map.input_size() != pv1.size() * pv2.size())
        throw Error(Errc::DimensionMismatch, "P(x|v1,v2) needs |V1||V2| rows");
    if (!target) {
        std::vector<double> prod(pv1.size() * pv2.size());
        for (std::size_t a = 0; a < pv1.size(); ++a)
            for (std::size_t b = 0; b < pv2.size(); ++b) prod[a * pv2.size() + b] = pv1[a] * pv2[b];
        target = JointPmf({pv1.size(), pv2.size()}, std::move(prod), {"V1", "V2"});
    }
    require_valid(*target);
    if (target->rank() != 2 || target->shape()[0] != pv1.size() || target->shape()[1] != pv2.size())
        throw Error(Errc::DimensionMismatch, "target joint must be |V1| x |V2|");
    const long double symbols = static_cast<long double>(params.n) *
                                (static_cast<long double>(params.m1) * params.l1 + static_cast<long double>(params.m2) * params.l2);
    if (symbols > static_cast<long double>(budget.max_symbols))
        throw Error(Errc::SizeOverBudget, "codebook exceeds the symbol budget");

    std::vector<Sequence> v1(params.m1 * params.l1), v2(params.m2 * params.l2);
    for (std::size_t i = 0; i < v1.size(); ++i) {
        Rng rng(derive_seed(params.seed, StreamTag::V1Words, i));
        v1[i] = detail::draw_sequence(rng, params.n, pv1.probs());
    }
    for (std::size_t i = 0; i < v2.size(); ++i) {
        Rng rng(derive_seed(params.seed, StreamTag::V2Words, i));
        v2[i] = detail::draw_sequence(rng, params.n, pv2.probs());
    }
    return BinningCodebook(params, pv1, pv2, x_map, std::move(*target), epsilon, std::move(v1), std::move(v2));
}

/// Max-norm distance between the empirical joint type of (a, b) and target.
inline double joint_type_distance(const Sequence& a, const Sequence& b, const JointPmf& target) {
    const std::size_t n2 = target.shape()[1];
    std::vector<double> counts(target.probs().size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) counts[a[i] * n2 + b[i]] += 1.0;
    double d = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        d = std::max(d, std::abs(counts[i] / static_cast<double>(a.size()) - target.probs()[i]));
    return d;
}

struct BinningChoice {
    std::size_t v1 = 0;  // flat index into v1_words
    std::size_t v2 = 0;  // flat index into v2_words
    std::size_t candidates = 0;
};

/// Uniform choice among the jointly typical pairs of bins (w1, w2), or
/// nullopt when none qualifies.
inline std::optional<BinningChoice> select_double_binning(const BinningCodebook& cb, std::size_t w1, std::size_t w2,
                                                          Rng& rng) {
    const auto& p = cb.params();
    if (w1 >= p.m1 || w2 >= p.m2) throw Error(Errc::MessageOutOfRange, "message outside the codebook");
    std::vector<std::pair<std::size_t, std::size_t>> ok;
    for (std::size_t j = 0; j < p.l1; ++j)
        for (std::size_t k = 0; k < p.l2; ++k) {
            const std::size_t a = w1 * p.l1 + j, b = w2 * p.l2 + k;
            if (joint_type_distance(cb.v1_words()[a], cb.v2_words()[b], cb.target()) <= cb.epsilon() + 1e-12)
                ok.emplace_back(a, b);
        }
    if (ok.empty()) return std::nullopt;
    const auto pick = ok[rng.index(ok.size())];
    return BinningChoice{pick.first, pick.second, ok.size()};
}

/// Returns nullopt on encoding failure (no jointly typical pair).
inline std::optional<Sequence> encode_double_binning(const BinningCodebook& cb, std::size_t w1, std::size_t w2,
                                                     std::uint64_t noise_seed) {
    Rng rng(derive_seed(noise_seed, StreamTag::Encoder));
    const auto choice = select_double_binning(cb, w1, w2, rng);
    if (!choice) return std::nullopt;
    const auto& a = cb.v1_words()[choice->v1];
    const auto& b = cb.v2_words()[choice->v2];
    const std::size_t n2 = cb.pv2().size();
    Sequence x(a.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<Symbol>(rng.categorical(cb.x_map().row(a[i] * n2 + b[i])));
    return x;
}

/// P(y | v1) or P(y | v2) seen by a double-binning receiver, averaging the
/// other auxiliary over its marginal.
inline DiscreteChannel binning_composite(const BinningCodebook& cb, const DiscreteChannel& y_given_x, bool first) {
    const std::size_t n1 = cb.pv1().size(), n2 = cb.pv2().size();
    const auto xy = cascade(cb.x_map(), y_given_x);
    const std::size_t own = first ? n1 : n2;
    std::vector<double> out(own * xy.output_size(), 0.0);
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            const std::size_t v = first ? a : b;
            const double w = first ? cb.pv2()[b] : cb.pv1()[a];
            for (std::size_t y = 0; y < xy.output_size(); ++y) out[v * xy.output_size() + y] += w * xy(a * n2 + b, y);
        }
    return DiscreteChannel(own, xy.output_size(), std::move(out));
}

inline std::size_t decode_binning_rx1(const BinningCodebook& cb, const Sequence& y1, const DiscreteChannel& y1_given_v1) {
    detail::check_symbols(y1, y1_given_v1.output_size(), "y1");
    return detail::ml_index(cb.v1_words(), y1, y1_given_v1) / cb.params().l1;
}

inline std::size_t decode_binning_rx2(const BinningCodebook& cb, const Sequence& y2, const DiscreteChannel& y2_given_v2) {
    detail::check_symbols(y2, y2_given_v2.output_size(), "y2");
    return detail::ml_index(cb.v2_words(), y2, y2_given_v2) / cb.params().l2;
}

// ---------------------------------------------------------------------------
// Monte-Carlo decoding error.

struct TrialResult {
    std::uint64_t trials = 0;
    std::uint64_t errors_rx1 = 0;
    std::uint64_t errors_rx2 = 0;
    std::uint64_t union_errors = 0;
    std::uint64_t encoding_failures = 0;
    double pe_estimate = 0.0;
    double half_width = 0.0;  // 95% normal approximation
};

namespace detail {

inline void finish(TrialResult& r) {
    r.pe_estimate = static_cast<double>(r.union_errors) / static_cast<double>(r.trials);
    r.half_width = 1.96 * std::sqrt(r.pe_estimate * (1.0 - r.pe_estimate) / static_cast<double>(r.trials));
}

struct TrialSeeds {
    std::size_t w1, w2;
    std::uint64_t encoder, ch1, ch2;
};

inline TrialSeeds trial_seeds(std::uint64_t seed, std::uint64_t t, std::size_t m1, std::size_t m2) {
    Rng rng(derive_seed(seed, StreamTag::Messages, t));
    TrialSeeds s;
    s.w1 = rng.index(m1);
    s.w2 = rng.index(m2);
    s.encoder = derive_seed(seed, StreamTag::Trial, 3 * t);
    s.ch1 = derive_seed(seed, StreamTag::Trial, 3 * t + 1);
    s.ch2 = derive_seed(seed, StreamTag::Trial, 3 * t + 2);
    return s;
}

}  // namespace detail

/// Uniform messages, stochastic encoding, independent noise on both
/// legitimate channels, ML decoding; counts the union error event.
inline TrialResult run_error_experiment(const SuperpositionCodebook& cb, const DiscreteChannel& py1x,
                                        const DiscreteChannel& py2x, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw Error(Errc::InvalidParams, "trials must be at least 1");
    require_valid(py1x);
    require_valid(py2x);
    const auto y2u = cascade(cb.pxu(), py2x);
    const auto& p = cb.params();
    TrialResult r;
    r.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto s = detail::trial_seeds(seed, t, p.m1, p.m2);
        const auto x = encode_superposition(cb, s.w1, s.w2, s.encoder);
        const auto y1 = transmit(x, py1x, s.ch1);
        const auto y2 = transmit(x, py2x, s.ch2);
        const auto d1 = decode_rx1(cb, y1, py1x);
        const auto d2 = decode_rx2(cb, y2, y2u);
        const bool e1 = d1.w1 != s.w1;
        const bool e2 = d2 != s.w2;
        r.errors_rx1 += e1;
        r.errors_rx2 += e2;
        r.union_errors += (e1 || e2);
    }
    detail::finish(r);
    return r;
}

/// Double-binning counterpart; an encoding failure counts as an error at
/// both receivers.
inline TrialResult run_error_experiment(const BinningCodebook& cb, const DiscreteChannel& py1x,
                                        const DiscreteChannel& py2x, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw Error(Errc::InvalidParams, "trials must be at least 1");
    require_valid(py1x);
    require_valid(py2x);
    const auto y1v = binning_composite(cb, py1x, true);
    const auto y2v = binning_composite(cb, py2x, false);
    const auto& p = cb.params();
    TrialResult r;
    r.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto s = detail::trial_seeds(seed, t, p.m1, p.m2);
        const auto x = encode_double_binning(cb, s.w1, s.w2, s.encoder);
        if (!x) {
            ++r.encoding_failures;
            ++r.errors_rx1;
            ++r.errors_rx2;
            ++r.union_errors;
            continue;
        }
        const bool e1 = decode_binning_rx1(cb, transmit(*x, py1x, s.ch1), y1v) != s.w1;
        const bool e2 = decode_binning_rx2(cb, transmit(*x, py2x, s.ch2), y2v) != s.w2;
        r.errors_rx1 += e1;
        r.errors_rx2 += e2;
        r.union_errors += (e1 || e2);
    }
    detail::finish(r);
    return r;
}

}  // namespace bcsecrecy
