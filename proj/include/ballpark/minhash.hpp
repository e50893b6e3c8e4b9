#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hash.hpp"

namespace ballpark {

// k-slot min-wise signature over 64-bit item ids. Slot i keeps the minimum of
// an independently salted hash over every item added; empty slots hold
// UINT64_MAX. Equal-slot fraction between two signatures estimates the
// Jaccard similarity of the underlying sets. Slot-wise min is the signature
// of the set union, so merge never loses information.
class MinHashSignature {
public:
    static constexpr std::uint64_t kEmptySlot = std::numeric_limits<std::uint64_t>::max();

    explicit MinHashSignature(std::size_t k, std::uint64_t seed = 0)
        : seed_(seed), slots_(validate(k), kEmptySlot), salts_(make_salts(k, seed)) {}

    void add(std::uint64_t item) {
        const std::size_t k = slots_.size();
        for (std::size_t i = 0; i < k; ++i)
            slots_[i] = std::min(slots_[i], mix64(item ^ salts_[i]));
    }

    // Slot-wise min. Returns true iff any slot shrank.
    bool merge(const MinHashSignature& other) {
        require_compatible(other);
        bool changed = false;
        const std::size_t k = slots_.size();
        for (std::size_t i = 0; i < k; ++i) {
            if (other.slots_[i] < slots_[i]) {
                slots_[i] = other.slots_[i];
                changed = true;
            }
        }
        return changed;
    }

    // Fraction of slots where the two signatures agree, in [0, 1].
    double jaccard(const MinHashSignature& other) const {
        require_compatible(other);
        std::size_t equal = 0;
        const std::size_t k = slots_.size();
        for (std::size_t i = 0; i < k; ++i) equal += (slots_[i] == other.slots_[i]);
        return static_cast<double>(equal) / static_cast<double>(k);
    }

    bool compatible_with(const MinHashSignature& other) const noexcept {
        return slots_.size() == other.slots_.size() && seed_ == other.seed_;
    }

    std::size_t slot_count() const noexcept { return slots_.size(); }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<std::uint64_t>& slots() const noexcept { return slots_; }

    // Overwrites slot contents; used by deserialization.
    void load_slots(const std::vector<std::uint64_t>& values) {
        if (values.size() != slots_.size())
            throw ConfigError("slot payload size does not match signature width");
        slots_ = values;
    }

    friend bool operator==(const MinHashSignature& a, const MinHashSignature& b) {
        return a.seed_ == b.seed_ && a.slots_ == b.slots_;
    }

private:
    static std::size_t validate(std::size_t k) {
        if (k == 0) throw ParameterError("signature needs at least one slot");
        return k;
    }

    static std::vector<std::uint64_t> make_salts(std::size_t k, std::uint64_t seed) {
        std::vector<std::uint64_t> salts(k);
        SplitMix64 stream(seed);
        for (auto& s : salts) s = stream.next();
        return salts;
    }

    void require_compatible(const MinHashSignature& other) const {
        if (!compatible_with(other))
            throw ConfigError("signatures differ in slot count or hash seed");
    }

    std::uint64_t seed_;
    std::vector<std::uint64_t> slots_;
    std::vector<std::uint64_t> salts_;
};

}  // namespace ballpark
