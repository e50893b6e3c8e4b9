#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "ballpark/minhash.hpp"

using ballpark::MinHashSignature;

namespace {

std::vector<std::uint64_t> distinct_ids(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::uint64_t> ids;
    ids.reserve(n);
    while (ids.size() < n) {
        const std::uint64_t x = rng();
        if (seen.insert(x).second) ids.push_back(x);
    }
    return ids;
}

MinHashSignature signature_of(const std::vector<std::uint64_t>& items, std::size_t k,
                              std::uint64_t seed = 0) {
    MinHashSignature sig(k, seed);
    for (const auto item : items) sig.add(item);
    return sig;
}

}  // namespace

TEST_CASE("slot count must be positive") {
    CHECK_THROWS_AS(MinHashSignature(0), ballpark::ParameterError);
    CHECK(MinHashSignature(1).slot_count() == 1);
}

TEST_CASE("empty signature sits at the max value") {
    const MinHashSignature sig(64);
    for (const auto v : sig.slots()) CHECK(v == MinHashSignature::kEmptySlot);
}

TEST_CASE("re-adding an item changes nothing") {
    MinHashSignature sig(128);
    sig.add(17);
    const auto snapshot = sig.slots();
    sig.add(17);
    CHECK(sig.slots() == snapshot);
}

TEST_CASE("adds never increase any slot") {
    std::mt19937_64 rng(3);
    MinHashSignature sig(64);
    auto previous = sig.slots();
    for (int i = 0; i < 200; ++i) {
        sig.add(rng());
        const auto& now = sig.slots();
        for (std::size_t s = 0; s < now.size(); ++s) REQUIRE(now[s] <= previous[s]);
        previous = now;
    }
}

TEST_CASE("signature of a union is the slot-wise min") {
    const auto a = signature_of({1, 2}, 256);
    const auto b = signature_of({3}, 256);
    const auto united = signature_of({1, 2, 3}, 256);
    for (std::size_t s = 0; s < 256; ++s)
        CHECK(united.slots()[s] == std::min(a.slots()[s], b.slots()[s]));

    MinHashSignature merged = a;
    CHECK(merged.merge(b) == true);
    CHECK(merged == united);
    CHECK(merged.merge(b) == false);
}

TEST_CASE("identical sets agree on every slot") {
    const auto ids = distinct_ids(500, 9);
    const auto a = signature_of(ids, 512);
    const auto b = signature_of(ids, 512);
    CHECK(a.jaccard(b) == 1.0);
}

TEST_CASE("small overlapping sets estimate one third") {
    const auto a = signature_of({1, 2}, 1024);
    const auto b = signature_of({2, 3}, 1024);
    const double sigma = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / 1024.0);
    CHECK(std::abs(a.jaccard(b) - 1.0 / 3.0) <= 5.0 * sigma);
}

TEST_CASE("large disjoint sets estimate near zero") {
    const auto a = signature_of(distinct_ids(20'000, 41), 1024);
    const auto b = signature_of(distinct_ids(20'000, 42), 1024);
    CHECK(a.jaccard(b) <= 0.02);
}

TEST_CASE("estimator is unbiased over repeated draws") {
    // 200 pairs sharing 100 of a 300-item union: true Jaccard exactly 1/3
    const std::size_t trials = 200;
    const std::size_t k = 1024;
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto pool = distinct_ids(300, 7'000 + t);
        std::vector<std::uint64_t> a_items(pool.begin(), pool.begin() + 200);
        std::vector<std::uint64_t> b_items(pool.begin(), pool.begin() + 100);
        b_items.insert(b_items.end(), pool.begin() + 200, pool.end());
        sum += signature_of(a_items, k, t).jaccard(signature_of(b_items, k, t));
    }
    const double mean = sum / static_cast<double>(trials);
    const double truth = 1.0 / 3.0;
    const double sigma_mean =
        std::sqrt(truth * (1.0 - truth) / static_cast<double>(k) / static_cast<double>(trials));
    CHECK(std::abs(mean - truth) <= 3.0 * sigma_mean);
}

TEST_CASE("incompatible signatures refuse to combine") {
    MinHashSignature a(64), different_k(128), different_seed(64, 5);
    CHECK_THROWS_AS(a.jaccard(different_k), ballpark::ConfigError);
    CHECK_THROWS_AS(a.jaccard(different_seed), ballpark::ConfigError);
    CHECK_THROWS_AS(a.merge(different_k), ballpark::ConfigError);
    CHECK_THROWS_AS(a.merge(different_seed), ballpark::ConfigError);
}

TEST_CASE("same seed reproduces the same signature") {
    const auto ids = distinct_ids(100, 13);
    CHECK(signature_of(ids, 256, 5) == signature_of(ids, 256, 5));
    CHECK(!(signature_of(ids, 256, 5) == signature_of(ids, 256, 6)));
}

TEST_CASE("slot payload validation") {
    MinHashSignature sig(8);
    CHECK_THROWS_AS(sig.load_slots(std::vector<std::uint64_t>(4, 0)), ballpark::ConfigError);
    std::vector<std::uint64_t> values(8);
    for (std::size_t i = 0; i < 8; ++i) values[i] = i * 1000;
    sig.load_slots(values);
    CHECK(sig.slots() == values);
}
