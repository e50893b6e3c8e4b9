#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hash.hpp"

namespace ballpark {

// Optional bias-correction table for the mid-range of the raw estimator,
// keyed by raw estimate. Off unless a table is attached to the counter; the
// plain linear-counting fallback is always the default. Tables are external
// data (see BiasTable::parse_csv), not bundled.
struct BiasTable {
    std::vector<double> raw_estimate;  // ascending
    std::vector<double> bias;          // same length

    // Linearly interpolated bias at `raw`, clamped to the table ends.
    double correction(double raw) const {
        if (raw_estimate.empty()) return 0.0;
        if (raw <= raw_estimate.front()) return bias.front();
        if (raw >= raw_estimate.back()) return bias.back();
        const auto it = std::upper_bound(raw_estimate.begin(), raw_estimate.end(), raw);
        const std::size_t hi = static_cast<std::size_t>(it - raw_estimate.begin());
        const std::size_t lo = hi - 1;
        const double span = raw_estimate[hi] - raw_estimate[lo];
        const double w = span > 0 ? (raw - raw_estimate[lo]) / span : 0.0;
        return bias[lo] + w * (bias[hi] - bias[lo]);
    }

    // Two numeric columns per line, "raw_estimate,bias" (comma or whitespace
    // separated); '#' lines ignored. Rows must be sorted by raw estimate.
    static BiasTable parse_csv(std::istream& in) {
        BiasTable table;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            std::string first;
            if (!(row >> first) || first.front() == '#') continue;
            double raw = 0, b = 0;
            try {
                raw = std::stod(first);
            } catch (const std::exception&) {
                throw ParseError("bias table: bad raw estimate '" + first + "'", lineno);
            }
            if (!(row >> b)) throw ParseError("bias table: missing bias column", lineno);
            if (!table.raw_estimate.empty() && raw < table.raw_estimate.back())
                throw ParseError("bias table: raw estimates must be ascending", lineno);
            table.raw_estimate.push_back(raw);
            table.bias.push_back(b);
        }
        return table;
    }
};

// HyperLogLog counter over 64-bit item ids. The hash value is split into a
// p-bit register index and a (64-p)-bit remainder; the register keeps the
// largest rank (position of the leftmost 1-bit, so rank = leading zeros + 1)
// seen for its index. Registers start at 0 and only ever grow, which makes
// the union of two counters the register-wise max -- lossless with respect
// to feeding both streams into one counter.
class HllCounter {
public:
    static constexpr unsigned kMinPrecision = 4;
    static constexpr unsigned kMaxPrecision = 18;

    explicit HllCounter(unsigned precision_bits, std::uint64_t seed = 0)
        : precision_(precision_bits),
          seed_(seed),
          hash_(seed),
          registers_(std::size_t{1} << validate(precision_bits), 0) {}

    void add(std::uint64_t item) {
        const std::uint64_t h = hash_(item);
        const std::size_t index = static_cast<std::size_t>(h >> (64 - precision_));
        const std::uint64_t rest = h << precision_;
        // rest == 0 means all 64-p remainder bits were zero: saturated rank.
        const auto rank = static_cast<std::uint8_t>(
            rest == 0 ? 64 - precision_ + 1 : count_leading_zeros(rest) + 1);
        registers_[index] = std::max(registers_[index], rank);
    }

    // Cardinality estimate: alpha_m * m^2 / sum(2^-M[i]), with the linear
    // counting fallback m*ln(m/V) when the raw estimate is small and V
    // registers are still zero. With a bias table attached, the raw estimate
    // is debiased first (raw <= 5m) and the same fallback rule then applies.
    double count() const {
        double inverse_sum = 0.0;
        std::size_t zeros = 0;
        for (const std::uint8_t r : registers_) {
            inverse_sum += pow2_negative(r);
            zeros += (r == 0);
        }
        const double m = static_cast<double>(registers_.size());
        double estimate = alpha(registers_.size()) * m * m / inverse_sum;
        if (bias_table_ && estimate <= 5.0 * m)
            estimate -= bias_table_->correction(estimate);
        if (estimate <= 2.5 * m && zeros != 0)
            estimate = m * std::log(m / static_cast<double>(zeros));
        return estimate;
    }

    // Register-wise max. Returns true iff any register grew.
    bool merge(const HllCounter& other) {
        require_compatible(other);
        bool changed = false;
        const std::size_t m = registers_.size();
        for (std::size_t i = 0; i < m; ++i) {
            if (other.registers_[i] > registers_[i]) {
                registers_[i] = other.registers_[i];
                changed = true;
            }
        }
        return changed;
    }

    bool compatible_with(const HllCounter& other) const noexcept {
        return precision_ == other.precision_ && seed_ == other.seed_;
    }

    unsigned precision_bits() const noexcept { return precision_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t register_count() const noexcept { return registers_.size(); }
    const std::vector<std::uint8_t>& registers() const noexcept { return registers_; }

    void set_bias_table(std::shared_ptr<const BiasTable> table) { bias_table_ = std::move(table); }
    const std::shared_ptr<const BiasTable>& bias_table() const noexcept { return bias_table_; }

    // Overwrites register contents; used by deserialization. Values above the
    // maximum rank for this precision are rejected.
    void load_registers(const std::vector<std::uint8_t>& values) {
        if (values.size() != registers_.size())
            throw ConfigError("register payload size does not match precision");
        const auto max_rank = static_cast<std::uint8_t>(64 - precision_ + 1);
        for (const std::uint8_t v : values)
            if (v > max_rank) throw InputError("register value exceeds maximum rank");
        registers_ = values;
    }

    friend bool operator==(const HllCounter& a, const HllCounter& b) {
        return a.precision_ == b.precision_ && a.seed_ == b.seed_ && a.registers_ == b.registers_;
    }

    // alpha_16 = 0.673, alpha_32 = 0.697, alpha_64 = 0.709, and
    // 0.7213 / (1 + 1.079/m) for m >= 128.
    static double alpha(std::size_t m) {
        switch (m) {
            case 16: return 0.673;
            case 32: return 0.697;
            case 64: return 0.709;
            default: return 0.7213 / (1.0 + 1.079 / static_cast<double>(m));
        }
    }

private:
    static unsigned validate(unsigned p) {
        if (p < kMinPrecision || p > kMaxPrecision)
            throw ParameterError("precision_bits must be in [4, 18], got " + std::to_string(p));
        return p;
    }

    static int count_leading_zeros(std::uint64_t x) noexcept { return __builtin_clzll(x); }

    static double pow2_negative(std::uint8_t r) noexcept {
        static const std::array<double, 65> table = [] {
            std::array<double, 65> t{};
            for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::ldexp(1.0, -static_cast<int>(i));
            return t;
        }();
        return table[r];
    }

    void require_compatible(const HllCounter& other) const {
        if (!compatible_with(other))
            throw ConfigError("HLL counters differ in precision or hash seed");
    }

    unsigned precision_;
    std::uint64_t seed_;
    ItemHash hash_;
    std::vector<std::uint8_t> registers_;
    std::shared_ptr<const BiasTable> bias_table_;
};

// Union as a value; register-identical to building one counter from the
// concatenated input streams.
inline HllCounter hll_union(const HllCounter& a, const HllCounter& b) {
    HllCounter out = a;
    out.merge(b);
    return out;
}

}  // namespace ballpark
