#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "io.hpp"

namespace ballpark {

// Per-node, per-radius ball cardinalities |B(v,t)|. Rows store levels
// t = 0..stored_levels-1, the levels that actually grew; ball sizes are
// constant from there on, so ball_size() clamps deeper queries to the last
// stored level. max_t is the estimation horizon: the round at which the
// computation stopped (first no-change round, or the radius cap), meaning
// distance mass at t >= max_t was either proven absent or never computed.
template <class SizeT>
class BasicBallTable {
public:
    BasicBallTable() = default;
    BasicBallTable(std::uint32_t n, std::uint32_t stored_levels, std::uint32_t max_t)
        : n_(n),
          stored_levels_(stored_levels),
          max_t_(max_t),
          sizes_(std::size_t{n} * stored_levels, SizeT{0}) {}

    std::uint32_t num_nodes() const noexcept { return n_; }
    std::uint32_t stored_levels() const noexcept { return stored_levels_; }
    std::uint32_t max_t() const noexcept { return max_t_; }

    SizeT ball_size(std::uint32_t v, std::uint32_t t) const {
        if (v >= n_) throw ParameterError("node " + std::to_string(v) + " out of range");
        if (t >= stored_levels_) t = stored_levels_ - 1;
        return sizes_[std::size_t{v} * stored_levels_ + t];
    }

    SizeT& at(std::uint32_t v, std::uint32_t t) {
        return sizes_[std::size_t{v} * stored_levels_ + t];
    }
    const SizeT& at(std::uint32_t v, std::uint32_t t) const {
        return sizes_[std::size_t{v} * stored_levels_ + t];
    }

    const std::vector<SizeT>& raw() const noexcept { return sizes_; }

private:
    std::uint32_t n_ = 0;
    std::uint32_t stored_levels_ = 0;
    std::uint32_t max_t_ = 0;
    std::vector<SizeT> sizes_;
};

using BallTable = BasicBallTable<double>;
using ExactBallTable = BasicBallTable<std::uint64_t>;

namespace detail {

// Shortest round-trip decimal; integers print without exponent or trailing
// zeros so exact and estimated tables with equal values diff clean.
inline std::string number_to_string(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string number_to_string(std::uint64_t v) { return std::to_string(v); }

}  // namespace detail

// CSV rows `node,t,ball_size` for every stored level.
template <class SizeT>
void write_ball_table_csv(const BasicBallTable<SizeT>& table, std::ostream& out) {
    out << "node,t,ball_size\n";
    for (std::uint32_t v = 0; v < table.num_nodes(); ++v)
        for (std::uint32_t t = 0; t < table.stored_levels(); ++t)
            out << v << ',' << t << ',' << detail::number_to_string(table.at(v, t)) << '\n';
}

// Binary layout, little-endian:
//   "BPBT" | u8 version=1 | u8 pad*3 | u32 n | u32 stored_levels | u32 max_t
//   n*stored_levels f64 values, row-major
// Exact tables are widened to f64 (lossless up to 2^53), so both table kinds
// produce byte-comparable dumps.
template <class SizeT>
void write_ball_table_binary(const BasicBallTable<SizeT>& table, std::ostream& out) {
    out.write("BPBT", 4);
    detail::write_u8(out, 1);
    for (int i = 0; i < 3; ++i) detail::write_u8(out, 0);
    detail::write_u32_le(out, table.num_nodes());
    detail::write_u32_le(out, table.stored_levels());
    detail::write_u32_le(out, table.max_t());
    for (const SizeT v : table.raw()) detail::write_f64_le(out, static_cast<double>(v));
    if (!out) throw InputError("ball table write failed");
}

}  // namespace ballpark
