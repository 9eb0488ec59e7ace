#include <doctest.h>

#include <fstream>

#include "tridisc/cache.hpp"

using namespace tridisc;

namespace {

std::filesystem::path fresh_dir() {
    auto dir = std::filesystem::temp_directory_path() / "tridisc_cache_test";
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("write-then-read yields the identical polynomial") {
    PolyCache cache(fresh_dir());
    Discriminant d(-23);
    bool hit = true;
    auto first = cache.get_or_compute(d, &hit);
    CHECK(!hit);
    auto second = cache.get_or_compute(d, &hit);
    CHECK(hit);
    CHECK(first.poly == second.poly);
    CHECK(second.precision_bits == first.precision_bits);
}

TEST_CASE("delta = -4 entry has the expected decimal strings") {
    PolyCache cache(fresh_dir());
    cache.store(Discriminant(-4), hilbert_class_poly(Discriminant(-4)));
    std::ifstream in(cache.path_for(Discriminant(-4)));
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j["coefficients"] == nlohmann::json::array({"-1728", "1"}));
    CHECK(j["h"] == 1);
    CHECK(j["version"] == PolyCache::kVersion);
}

TEST_CASE("tampered entries are recomputed, not trusted") {
    PolyCache cache(fresh_dir());
    Discriminant d(-15);
    cache.get_or_compute(d);

    auto file = cache.path_for(d);
    SUBCASE("truncated file") {
        std::ofstream(file) << "{\"version\":1,\"delta\":-15";
    }
    SUBCASE("coefficient corruption") {
        std::ifstream in(file);
        nlohmann::json j = nlohmann::json::parse(in);
        in.close();
        j["coefficients"][0] = "123notanumber";
        std::ofstream(file) << j.dump();
    }
    SUBCASE("version bump") {
        std::ifstream in(file);
        nlohmann::json j = nlohmann::json::parse(in);
        in.close();
        j["version"] = 999;
        std::ofstream(file) << j.dump();
    }
    CHECK(!cache.load(d).has_value());
    bool hit = true;
    auto hr = cache.get_or_compute(d, &hit);
    CHECK(!hit);
    CHECK(hr.poly.degree() == 2);
    CHECK(cache.load(d).has_value());  // repaired on disk
}

TEST_CASE("disabled cache computes without touching disk") {
    PolyCache cache;  // disabled
    CHECK(!cache.enabled());
    bool hit = true;
    auto hr = cache.get_or_compute(Discriminant(-7), &hit);
    CHECK(!hit);
    CHECK(hr.poly.degree() == 1);
}
