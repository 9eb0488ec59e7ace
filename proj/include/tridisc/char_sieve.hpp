// The three-step residue sieve over odd discriminants (residue classes,
// per-class minimal discriminants, progressive Kronecker sieving) and the
// least-split-prime criterion.
#pragma once

#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "tridisc/parallel.hpp"
#include "tridisc/quadforms.hpp"

namespace tridisc {

// p0 is the largest prime with N0 = 8 * prod_{3 <= p <= p0} p < X;
// p1, p2 are the two primes after it.
struct SieveConfig {
    u64 X = 0;
    u64 p0 = 0, p1 = 0, p2 = 0;
    u64 N0 = 0;

    static SieveConfig for_bound(u64 X) {
        if (X < 100) throw std::invalid_argument("sieve bound must be >= 100");
        auto primes = PrimeList::up_to(200).primes;  // ample: N0 outgrows X fast
        SieveConfig cfg;
        cfg.X = X;
        cfg.N0 = 8;
        std::size_t i = 1;  // skip 2
        for (; i < primes.size(); ++i) {
            if (static_cast<unsigned __int128>(cfg.N0) * primes[i] >= X) break;
            cfg.N0 *= primes[i];
            cfg.p0 = primes[i];
        }
        if (cfg.p0 == 0 || i + 1 >= primes.size()) throw std::invalid_argument("sieve bound out of range");
        cfg.p1 = primes[i];
        cfg.p2 = primes[i + 1];
        return cfg;
    }
};

namespace sievedetail {

// Residue classes mod p that fail to split: m = 0 or m a non-residue.
inline std::vector<u64> nonsplit_classes(u64 p) {
    std::vector<bool> qr(p, false);
    for (u64 x = 1; x < p; ++x) qr[(x * x) % p] = true;
    std::vector<u64> out;
    out.push_back(0);
    for (u64 m = 1; m < p; ++m)
        if (!qr[m]) out.push_back(m);
    return out;
}

inline u64 inv_mod(u64 a, u64 p) {
    // Fermat; p prime, a not divisible by p
    return powmod_u64(a % p, p - 2, p);
}

}  // namespace sievedetail

// Odd residues n mod N0 with n = 1 mod 4 and (n/p) != 1 for every prime
// p <= p0 (p = 2 included: n = 5 mod 8), built by successive CRT.
// Exactly prod_{3<=p<=p0} (p+1)/2 classes.
inline std::vector<u64> build_residues(const SieveConfig& cfg) {
    std::vector<u64> res{5};
    u64 modulus = 8;
    auto primes = PrimeList::up_to(cfg.p0).primes;
    for (u64 p : primes) {
        if (p == 2) continue;
        auto cls = sievedetail::nonsplit_classes(p);
        u64 minv = sievedetail::inv_mod(modulus, p);
        std::vector<u64> next;
        next.reserve(res.size() * cls.size());
        for (u64 r : res) {
            u64 rp = r % p;
            for (u64 s : cls) {
                u64 t = ((s + p - rp) % p) * minv % p;
                next.push_back(r + modulus * t);
            }
        }
        res = std::move(next);
        modulus *= p;
    }
    std::sort(res.begin(), res.end());
    return res;
}

struct SieveState {
    SieveConfig config;
    std::vector<u64> survivors;  // |delta| values, ascending
    u64 cursor_prime = 0;        // largest prime sieved so far
};

// For every (residue mod N0) x (non-split class mod p1) pair, the
// smallest |delta| representative; kept when |delta| <= X. This is the
// full list of odd discriminants |delta| <= X with (delta/p) != 1 for
// all p <= p1, one per pair.
inline SieveState build_discriminants(const SieveConfig& cfg, unsigned threads = 1) {
    auto residues = build_residues(cfg);
    auto mcls = sievedetail::nonsplit_classes(cfg.p1);
    const u64 inv_n0 = sievedetail::inv_mod(cfg.N0 % cfg.p1, cfg.p1);
    const u64 big_mod = cfg.N0 * cfg.p1;

    std::vector<std::vector<u64>> parts(threads == 0 ? 1 : threads);
    unsigned nthreads = threads == 0 ? 1 : threads;
    for (auto& p : parts) p.reserve(residues.size() * mcls.size() / nthreads / 2 + 16);
    parallel_for(residues.size(), nthreads, [&](std::size_t i) {
        u64 r = residues[i];
        u64 rp = r % cfg.p1;
        auto& out = parts[i % nthreads];
        for (u64 m : mcls) {
            u64 t = ((m + cfg.p1 - rp) % cfg.p1) * inv_n0 % cfg.p1;
            u64 v = r + cfg.N0 * t;       // class representative in [0, N0 p1)
            u64 abs_delta = big_mod - v;  // the smallest negative member
            if (abs_delta <= cfg.X) out.push_back(abs_delta);
        }
    });
    SieveState st;
    st.config = cfg;
    for (auto& p : parts) st.survivors.insert(st.survivors.end(), p.begin(), p.end());
    std::sort(st.survivors.begin(), st.survivors.end());
    st.cursor_prime = cfg.p1;
    return st;
}

struct SieveHistoryEntry {
    u64 prime;
    u64 remaining;
};

struct SieveRunResult {
    u64 emptying_prime = 0;
    std::vector<SieveHistoryEntry> history;
};

// Checkpoint format: "TDSC" | version | X p0 p1 p2 cursor count | values,
// all little-endian 64-bit past the two 32-bit header words.
inline void save_checkpoint(const std::filesystem::path& file, const SieveState& st) {
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot write checkpoint: " + tmp.string());
    auto w32 = [&](u32 v) {
        unsigned char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        std::fwrite(b, 1, 4, f);
    };
    auto w64 = [&](u64 v) {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        std::fwrite(b, 1, 8, f);
    };
    w32(0x43534454u);  // "TDSC"
    w32(1u);
    w64(st.config.X);
    w64(st.config.p0);
    w64(st.config.p1);
    w64(st.config.p2);
    w64(st.cursor_prime);
    w64(st.survivors.size());
    for (u64 v : st.survivors) w64(v);
    std::fclose(f);
    std::filesystem::rename(tmp, file);
}

inline std::optional<SieveState> load_checkpoint(const std::filesystem::path& file) {
    FILE* f = std::fopen(file.c_str(), "rb");
    if (!f) return std::nullopt;
    auto r32 = [&](u32& v) {
        unsigned char b[4];
        if (std::fread(b, 1, 4, f) != 4) return false;
        v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
        return true;
    };
    auto r64 = [&](u64& v) {
        unsigned char b[8];
        if (std::fread(b, 1, 8, f) != 8) return false;
        v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return true;
    };
    u32 magic = 0, version = 0;
    SieveState st;
    u64 count = 0;
    bool ok = r32(magic) && r32(version) && magic == 0x43534454u && version == 1 && r64(st.config.X) &&
              r64(st.config.p0) && r64(st.config.p1) && r64(st.config.p2) && r64(st.cursor_prime) && r64(count);
    if (ok) {
        st.survivors.resize(count);
        for (u64 i = 0; i < count && ok; ++i) ok = r64(st.survivors[i]);
        SieveConfig expect = SieveConfig::for_bound(st.config.X);
        st.config.N0 = expect.N0;
        ok = ok && expect.p0 == st.config.p0 && expect.p1 == st.config.p1 && expect.p2 == st.config.p2;
    }
    std::fclose(f);
    if (!ok) return std::nullopt;
    return st;
}

// Sieve ascending over primes p >= p2, removing survivors with
// (delta/p) = 1, until the list empties. Removal marks run in parallel;
// compaction preserves order, so results are thread-count independent.
inline SieveRunResult run_sieve(SieveState& st, unsigned threads = 1,
                                const std::filesystem::path& checkpoint_file = {},
                                const std::function<void(u64, u64)>& progress = {}) {
    SieveRunResult out;
    u64 p = st.cursor_prime;
    while (!st.survivors.empty()) {
        do { ++p; } while (!is_prime_u64(p));
        if (p > 1000000) throw std::runtime_error("run_sieve: no emptying prime below 10^6");
        std::vector<bool> qr(p, false);
        for (u64 x = 1; x < p; ++x) qr[mulmod_u64(x, x, p)] = true;
        std::vector<char> keep(st.survivors.size());
        parallel_for(st.survivors.size(), threads, [&](std::size_t i) {
            u64 rem = st.survivors[i] % p;            // |delta| mod p
            u64 dm = rem == 0 ? 0 : p - rem;          // delta mod p
            keep[i] = (dm == 0 || !qr[dm]) ? 1 : 0;   // (delta/p) != 1
        });
        std::size_t w = 0;
        for (std::size_t i = 0; i < st.survivors.size(); ++i)
            if (keep[i]) st.survivors[w++] = st.survivors[i];
        st.survivors.resize(w);
        st.cursor_prime = p;
        out.history.push_back({p, w});
        if (!checkpoint_file.empty()) save_checkpoint(checkpoint_file, st);
        if (progress) progress(p, w);
    }
    out.emptying_prime = p;
    return out;
}

// Least prime with (delta/p) = 1, with the two threshold comparisons
// used throughout the split-prime arguments.
struct SplitPrimeReport {
    u64 prime;
    double threshold3;  // 3 |delta|^(1/2) / log|delta|
    double threshold4;  // 4 |delta|^(1/2) / log|delta|
    bool exceeds3;
    bool exceeds4;
};

inline SplitPrimeReport least_split_prime(Discriminant delta) {
    SplitPrimeReport rep{};
    for (u64 p = 2;; ++p) {
        if (!is_prime_u64(p)) continue;
        if (kronecker(delta.value(), p) == 1) {
            rep.prime = p;
            break;
        }
    }
    double s = std::sqrt(static_cast<double>(delta.abs()));
    double l = std::log(static_cast<double>(delta.abs()));
    rep.threshold3 = 3.0 * s / l;
    rep.threshold4 = 4.0 * s / l;
    rep.exceeds3 = static_cast<double>(rep.prime) > rep.threshold3;
    rep.exceeds4 = static_cast<double>(rep.prime) > rep.threshold4;
    return rep;
}

}  // namespace tridisc
