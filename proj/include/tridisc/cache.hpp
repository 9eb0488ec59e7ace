// Disk cache for class polynomials: one versioned JSON file per
// discriminant, coefficients as decimal strings, written atomically.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "tridisc/singular_moduli.hpp"

namespace tridisc {

struct CacheEntry {
    int version;
    i64 delta;
    std::size_t h;
    long precision_bits;
    std::vector<std::string> coefficients;  // constant term first
};

class PolyCache {
  public:
    static constexpr int kVersion = 1;

    PolyCache() = default;
    explicit PolyCache(std::filesystem::path dir) : dir_(std::move(dir)), enabled_(true) {
        std::filesystem::create_directories(dir_);
    }

    // Default directory from the environment, when set.
    static PolyCache from_env() {
        if (const char* env = std::getenv("TRIDISC_CACHE_DIR"); env && *env) return PolyCache(env);
        return PolyCache();
    }

    bool enabled() const { return enabled_; }

    std::filesystem::path path_for(Discriminant delta) const {
        return dir_ / ("hcp_" + std::to_string(delta.abs()) + ".json");
    }

    // A validated entry, or nothing (missing, corrupt, or mismatched
    // entries are all treated as cache misses).
    std::optional<HilbertResult> load(Discriminant delta) const {
        if (!enabled_) return std::nullopt;
        std::ifstream in(path_for(delta));
        if (!in) return std::nullopt;
        nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded()) return std::nullopt;
        try {
            if (j.at("version").get<int>() != kVersion) return std::nullopt;
            if (j.at("delta").get<i64>() != delta.value()) return std::nullopt;
            auto coeff_strings = j.at("coefficients").get<std::vector<std::string>>();
            std::size_t h = j.at("h").get<std::size_t>();
            if (coeff_strings.size() != h + 1) return std::nullopt;
            HilbertResult out;
            out.precision_bits = j.at("precision_bits").get<long>();
            out.retries = 0;
            out.max_rounding_distance = 0.0;
            for (const auto& s : coeff_strings) {
                mpz_class z;
                if (z.set_str(s, 10) != 0) return std::nullopt;
                out.poly.coefficients.push_back(z);
            }
            if (!out.poly.monic()) return std::nullopt;
            return out;
        } catch (const nlohmann::json::exception&) {
            return std::nullopt;
        }
    }

    void store(Discriminant delta, const HilbertResult& hr) const {
        if (!enabled_) return;
        nlohmann::json j;
        j["version"] = kVersion;
        j["delta"] = delta.value();
        j["h"] = hr.poly.degree();
        j["precision_bits"] = static_cast<long>(hr.precision_bits);
        std::vector<std::string> coeff_strings;
        for (const auto& z : hr.poly.coefficients) coeff_strings.push_back(z.get_str());
        j["coefficients"] = coeff_strings;

        auto file = path_for(delta);
        auto tmp = file;
        tmp += ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump() << '\n';
        }
        std::filesystem::rename(tmp, file);
    }

    // Cache-through accessor.
    HilbertResult get_or_compute(Discriminant delta, bool* hit = nullptr) const {
        if (auto cached = load(delta)) {
            if (hit) *hit = true;
            return std::move(*cached);
        }
        if (hit) *hit = false;
        auto hr = hilbert_class_poly(delta);
        store(delta, hr);
        return hr;
    }

  private:
    std::filesystem::path dir_;
    bool enabled_ = false;
};

}  // namespace tridisc
