#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hash.hpp"
#include "hll.hpp"
#include "io.hpp"
#include "minhash.hpp"

namespace ballpark {

struct SketchConfig {
    unsigned precision_bits = 14;
    std::size_t minhash_k = 1024;
    std::uint64_t seed = 0;
    std::shared_ptr<const BiasTable> bias_table;  // optional mid-range debiasing
};

// Combined cardinality counter and similarity signature over one element
// stream. The single add() keeps the two summaries describing the same set,
// which is what makes the intersection estimator below meaningful.
class NeighbourhoodSketch {
public:
    explicit NeighbourhoodSketch(const SketchConfig& config)
        : seed_(config.seed),
          hll_(config.precision_bits, derive_seed(config.seed, 0)),
          minhash_(config.minhash_k, derive_seed(config.seed, 1)) {
        hll_.set_bias_table(config.bias_table);
    }

    void add(std::uint64_t item) {
        hll_.add(item);
        minhash_.add(item);
    }

    bool merge(const NeighbourhoodSketch& other) {
        require_compatible(other);
        const bool h = hll_.merge(other.hll_);
        const bool m = minhash_.merge(other.minhash_);
        return h || m;
    }

    double count() const { return hll_.count(); }
    double jaccard(const NeighbourhoodSketch& other) const {
        require_compatible(other);
        return minhash_.jaccard(other.minhash_);
    }

    bool compatible_with(const NeighbourhoodSketch& other) const noexcept {
        return hll_.compatible_with(other.hll_) && minhash_.compatible_with(other.minhash_);
    }

    std::uint64_t seed() const noexcept { return seed_; }
    const HllCounter& hll() const noexcept { return hll_; }
    const MinHashSignature& minhash() const noexcept { return minhash_; }

    friend bool operator==(const NeighbourhoodSketch& a, const NeighbourhoodSketch& b) {
        return a.hll_ == b.hll_ && a.minhash_ == b.minhash_;
    }

    // File layout, all little-endian:
    //   "BPSK" | u8 version=1 | u8 p | u8 register_width=8 | u8 reserved
    //   u32 k | u64 seed | 2^p register bytes | k u64 slot values
    void save(std::ostream& out) const {
        out.write(kMagic, 4);
        detail::write_u8(out, kFormatVersion);
        detail::write_u8(out, static_cast<std::uint8_t>(hll_.precision_bits()));
        detail::write_u8(out, 8);
        detail::write_u8(out, 0);
        detail::write_u32_le(out, static_cast<std::uint32_t>(minhash_.slot_count()));
        detail::write_u64_le(out, seed_);
        const auto& regs = hll_.registers();
        out.write(reinterpret_cast<const char*>(regs.data()),
                  static_cast<std::streamsize>(regs.size()));
        for (const std::uint64_t v : minhash_.slots()) detail::write_u64_le(out, v);
        if (!out) throw InputError("sketch write failed");
    }

    static NeighbourhoodSketch load(std::istream& in,
                                    std::shared_ptr<const BiasTable> bias_table = nullptr) {
        char magic[4];
        if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
            throw InputError("not a sketch file (bad magic)");
        if (detail::read_u8(in) != kFormatVersion)
            throw InputError("unsupported sketch format version");
        const std::uint8_t p = detail::read_u8(in);
        if (p < HllCounter::kMinPrecision || p > HllCounter::kMaxPrecision)
            throw InputError("sketch precision out of range");
        if (detail::read_u8(in) != 8) throw InputError("unsupported register width");
        detail::read_u8(in);  // reserved
        const std::uint32_t k = detail::read_u32_le(in);
        if (k == 0) throw InputError("sketch has zero signature slots");
        SketchConfig config;
        config.precision_bits = p;
        config.minhash_k = k;
        config.seed = detail::read_u64_le(in);
        config.bias_table = std::move(bias_table);
        NeighbourhoodSketch sketch(config);

        std::vector<std::uint8_t> regs(std::size_t{1} << p);
        if (!in.read(reinterpret_cast<char*>(regs.data()),
                     static_cast<std::streamsize>(regs.size())))
            throw InputError("unexpected end of file");
        sketch.hll_.load_registers(regs);

        std::vector<std::uint64_t> slots(k);
        for (auto& v : slots) v = detail::read_u64_le(in);
        sketch.minhash_.load_slots(slots);
        return sketch;
    }

private:
    static constexpr char kMagic[5] = "BPSK";
    static constexpr std::uint8_t kFormatVersion = 1;

    // Decorrelates the counter hash from the signature hash family while
    // keeping one user-facing seed.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 s(seed);
        std::uint64_t v = 0;
        for (std::uint64_t i = 0; i <= stream; ++i) v = s.next();
        return v;
    }

    void require_compatible(const NeighbourhoodSketch& other) const {
        if (!compatible_with(other))
            throw ConfigError("sketches differ in precision, slot count, or seed");
    }

    std::uint64_t seed_;
    HllCounter hll_;
    MinHashSignature minhash_;
};

// Intersection size: Jaccard estimate rescaled by the union cardinality,
// |A ∩ B| = J(A,B) · |A ∪ B|. The union counter is exact at the register
// level, so all sketch noise comes from the two estimators themselves.
inline double estimate_intersection(const NeighbourhoodSketch& a, const NeighbourhoodSketch& b) {
    return a.jaccard(b) * hll_union(a.hll(), b.hll()).count();
}

}  // namespace ballpark
