#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bcsecrecy/error.hpp"

namespace bcsecrecy {

/// Sum tolerance for every pmf, channel row and joint tensor.
inline constexpr double kSumTolerance = 1e-9;
/// Entries in [-kNegativeGrace, 0) are clamped to zero when loading data.
inline constexpr double kNegativeGrace = 1e-12;

/// Outcome of a validation pass. `ok()` is true when no invariant is violated;
/// otherwise `error` names the first violated one.
struct Validation {
    std::optional<Errc> error;
    std::string message;

    bool ok() const noexcept { return !error.has_value(); }
    explicit operator bool() const noexcept { return ok(); }
};

namespace detail {

inline Validation check_simplex(std::span<const double> p, const std::string& what) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0)) {
            std::ostringstream os;
            os << what << " entry " << i << " is negative (" << p[i] << ")";
            return {Errc::NegativeEntry, os.str()};
        }
    }
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(total - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << what << " sums to " << total;
        return {Errc::SumNotOne, os.str()};
    }
    return {};
}

inline void clamp_grace(std::vector<double>& v) {
    for (double& x : v) {
        if (x < 0.0 && x >= -kNegativeGrace) x = 0.0;
    }
}

}  // namespace detail

/// Finite probability mass function over {0, ..., size()-1}.
class Pmf {
public:
    Pmf() = default;
    explicit Pmf(std::vector<double> probs) : probs_(std::move(probs)) {}
    Pmf(std::initializer_list<double> probs) : probs_(probs) {}

    static Pmf uniform(std::size_t n) { return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n))); }
    static Pmf point_mass(std::size_t n, std::size_t at) {
        std::vector<double> p(n, 0.0);
        p.at(at) = 1.0;
        return Pmf(std::move(p));
    }

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const noexcept { return probs_; }
    const std::vector<double>& vec() const noexcept { return probs_; }

private:
    std::vector<double> probs_;
};

inline Validation validate_pmf(const Pmf& p) {
    if (p.size() == 0) return {Errc::InvalidPmf, "empty pmf"};
    return detail::check_simplex(p.probs(), "pmf");
}

inline void require_valid(const Pmf& p) {
    if (auto v = validate_pmf(p); !v) throw Error(Errc::InvalidPmf, v.message);
}

/// Row-stochastic matrix P(out | in), stored row-major.
class DiscreteChannel {
public:
    DiscreteChannel() = default;
    DiscreteChannel(std::size_t inputs, std::size_t outputs, std::vector<double> flat)
        : inputs_(inputs), outputs_(outputs), data_(std::move(flat)) {
        if (data_.size() != inputs_ * outputs_)
            throw Error(Errc::DimensionMismatch, "channel data length does not match dimensions");
    }
    DiscreteChannel(std::initializer_list<std::initializer_list<double>> rows) {
        inputs_ = rows.size();
        outputs_ = inputs_ ? rows.begin()->size() : 0;
        for (const auto& r : rows) {
            if (r.size() != outputs_) throw Error(Errc::DimensionMismatch, "ragged channel rows");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static DiscreteChannel from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw Error(Errc::InvalidChannel, "channel has no rows");
        const std::size_t cols = rows.front().size();
        std::vector<double> flat;
        flat.reserve(rows.size() * cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) {
                throw Error(Errc::DimensionMismatch,
                            "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                " entries, expected " + std::to_string(cols));
            }
            flat.insert(flat.end(), rows[i].begin(), rows[i].end());
        }
        return DiscreteChannel(rows.size(), cols, std::move(flat));
    }

    static DiscreteChannel identity(std::size_t n) {
        std::vector<double> d(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
        return DiscreteChannel(n, n, std::move(d));
    }

    /// Every row equal to `row`: the output carries no information about the input.
    static DiscreteChannel constant(std::size_t inputs, const std::vector<double>& row) {
        std::vector<double> d;
        d.reserve(inputs * row.size());
        for (std::size_t i = 0; i < inputs; ++i) d.insert(d.end(), row.begin(), row.end());
        return DiscreteChannel(inputs, row.size(), std::move(d));
    }

    static DiscreteChannel bsc(double crossover) {
        return DiscreteChannel(2, 2, {1.0 - crossover, crossover, crossover, 1.0 - crossover});
    }

    std::size_t input_size() const noexcept { return inputs_; }
    std::size_t output_size() const noexcept { return outputs_; }

    double operator()(std::size_t in, std::size_t out) const { return data_[in * outputs_ + out]; }
    double& operator()(std::size_t in, std::size_t out) { return data_[in * outputs_ + out]; }

    std::span<const double> row(std::size_t in) const {
        return std::span<const double>(data_).subspan(in * outputs_, outputs_);
    }
    std::span<const double> flat() const noexcept { return data_; }
    std::vector<double>& flat_mut() noexcept { return data_; }

    std::vector<std::vector<double>> rows() const {
        std::vector<std::vector<double>> out(inputs_);
        for (std::size_t i = 0; i < inputs_; ++i) out[i].assign(row(i).begin(), row(i).end());
        return out;
    }

    friend bool operator==(const DiscreteChannel&, const DiscreteChannel&) = default;

private:
    std::size_t inputs_ = 0;
    std::size_t outputs_ = 0;
    std::vector<double> data_;
};

inline Validation validate_channel(const DiscreteChannel& ch) {
    if (ch.input_size() == 0 || ch.output_size() == 0) return {Errc::InvalidChannel, "channel has an empty alphabet"};
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
        auto v = detail::check_simplex(ch.row(x), "channel row " + std::to_string(x));
        if (!v) return v;
    }
    return {};
}

inline void require_valid(const DiscreteChannel& ch) {
    if (auto v = validate_channel(ch); !v) throw Error(Errc::InvalidChannel, v.message);
}

/// P(y1, y2, z | x) as a dense tensor indexed [x][y1][y2][z].
class BroadcastChannel {
public:
    BroadcastChannel() = default;
    BroadcastChannel(std::size_t nx, std::size_t ny1, std::size_t ny2, std::size_t nz, std::vector<double> joint)
        : nx_(nx), ny1_(ny1), ny2_(ny2), nz_(nz), joint_(std::move(joint)) {
        if (joint_.size() != nx_ * ny1_ * ny2_ * nz_)
            throw Error(Errc::DimensionMismatch, "joint tensor length " + std::to_string(joint_.size()) +
                                                     " does not match x*y1*y2*z = " +
                                                     std::to_string(nx_ * ny1_ * ny2_ * nz_));
    }

    std::size_t x_size() const noexcept { return nx_; }
    std::size_t y1_size() const noexcept { return ny1_; }
    std::size_t y2_size() const noexcept { return ny2_; }
    std::size_t z_size() const noexcept { return nz_; }

    double operator()(std::size_t x, std::size_t y1, std::size_t y2, std::size_t z) const {
        return joint_[((x * ny1_ + y1) * ny2_ + y2) * nz_ + z];
    }
    std::span<const double> slice(std::size_t x) const {
        const std::size_t n = ny1_ * ny2_ * nz_;
        return std::span<const double>(joint_).subspan(x * n, n);
    }
    std::span<const double> flat() const noexcept { return joint_; }

private:
    std::size_t nx_ = 0, ny1_ = 0, ny2_ = 0, nz_ = 0;
    std::vector<double> joint_;
};

inline Validation validate_broadcast(const BroadcastChannel& bcc) {
    if (bcc.x_size() == 0 || bcc.y1_size() == 0 || bcc.y2_size() == 0 || bcc.z_size() == 0)
        return {Errc::InvalidChannel, "broadcast channel has an empty alphabet"};
    for (std::size_t x = 0; x < bcc.x_size(); ++x) {
        auto v = detail::check_simplex(bcc.slice(x), "joint slice x=" + std::to_string(x));
        if (!v) return v;
    }
    return {};
}

inline void require_valid(const BroadcastChannel& bcc) {
    if (auto v = validate_broadcast(bcc); !v) throw Error(Errc::InvalidChannel, v.message);
}

/// Product of the three marginal channels, P(y1|x) P(y2|x) P(z|x).
inline BroadcastChannel product_broadcast(const DiscreteChannel& py1x, const DiscreteChannel& py2x,
                                          const DiscreteChannel& pzx) {
    const std::size_t nx = py1x.input_size();
    if (py2x.input_size() != nx || pzx.input_size() != nx)
        throw Error(Errc::DimensionMismatch, "marginal channels disagree on the input alphabet");
    const std::size_t a = py1x.output_size(), b = py2x.output_size(), c = pzx.output_size();
    std::vector<double> j(nx * a * b * c);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y1 = 0; y1 < a; ++y1)
            for (std::size_t y2 = 0; y2 < b; ++y2)
                for (std::size_t z = 0; z < c; ++z)
                    j[((x * a + y1) * b + y2) * c + z] = py1x(x, y1) * py2x(x, y2) * pzx(x, z);
    return BroadcastChannel(nx, a, b, c, std::move(j));
}

/// Physically degraded tensor P(y1|x) P(y2|y1) P(z|y2).
inline BroadcastChannel physically_degraded(const DiscreteChannel& py1x, const DiscreteChannel& py2y1,
                                            const DiscreteChannel& pzy2) {
    if (py1x.output_size() != py2y1.input_size() || py2y1.output_size() != pzy2.input_size())
        throw Error(Errc::DimensionMismatch, "degraded chain stages do not compose");
    const std::size_t nx = py1x.input_size();
    const std::size_t a = py1x.output_size(), b = py2y1.output_size(), c = pzy2.output_size();
    std::vector<double> j(nx * a * b * c);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y1 = 0; y1 < a; ++y1)
            for (std::size_t y2 = 0; y2 < b; ++y2)
                for (std::size_t z = 0; z < c; ++z)
                    j[((x * a + y1) * b + y2) * c + z] = py1x(x, y1) * py2y1(y1, y2) * pzy2(y2, z);
    return BroadcastChannel(nx, a, b, c, std::move(j));
}

/// Probability tensor over a product alphabet, axes stored row-major in
/// declaration order.
class JointPmf {
public:
    JointPmf() = default;
    JointPmf(std::vector<std::size_t> shape, std::vector<double> probs, std::vector<std::string> labels = {})
        : shape_(std::move(shape)), probs_(std::move(probs)), labels_(std::move(labels)) {
        std::size_t n = 1;
        for (auto s : shape_) n *= s;
        if (shape_.empty() || n != probs_.size())
            throw Error(Errc::DimensionMismatch, "joint pmf data does not match its shape");
        if (labels_.empty()) {
            for (std::size_t i = 0; i < shape_.size(); ++i) labels_.push_back("A" + std::to_string(i));
        }
        if (labels_.size() != shape_.size()) throw Error(Errc::DimensionMismatch, "one label per axis required");
    }

    std::size_t rank() const noexcept { return shape_.size(); }
    const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::span<const double> probs() const noexcept { return probs_; }

    std::size_t axis(const std::string& label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return i;
        throw Error(Errc::InvalidJoint, "no axis named " + label);
    }

    /// Marginal over the listed axes, kept in the listed order. An empty
    /// list yields the scalar total as a rank-1 tensor of size one.
    JointPmf marginal(const std::vector<std::size_t>& keep) const {
        for (auto a : keep)
            if (a >= rank()) throw Error(Errc::InvalidJoint, "axis index out of range");
        std::vector<std::size_t> out_shape;
        std::vector<std::string> out_labels;
        for (auto a : keep) {
            out_shape.push_back(shape_[a]);
            out_labels.push_back(labels_[a]);
        }
        if (keep.empty()) {
            out_shape = {1};
            out_labels = {"1"};
        }
        std::size_t out_n = 1;
        for (auto s : out_shape) out_n *= s;
        std::vector<double> out(out_n, 0.0);
        std::vector<std::size_t> idx(rank(), 0);
        for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
            std::size_t o = 0;
            for (auto a : keep) o = o * shape_[a] + idx[a];
            out[o] += probs_[flat];
            for (std::size_t d = rank(); d-- > 0;) {
                if (++idx[d] < shape_[d]) break;
                idx[d] = 0;
            }
        }
        return JointPmf(std::move(out_shape), std::move(out), std::move(out_labels));
    }

private:
    std::vector<std::size_t> shape_;
    std::vector<double> probs_;
    std::vector<std::string> labels_;
};

inline Validation validate_joint(const JointPmf& j) {
    if (j.probs().empty()) return {Errc::InvalidJoint, "empty joint"};
    return detail::check_simplex(j.probs(), "joint pmf");
}

inline void require_valid(const JointPmf& j) {
    if (auto v = validate_joint(j); !v) throw Error(Errc::InvalidJoint, v.message);
}

}  // namespace bcsecrecy
