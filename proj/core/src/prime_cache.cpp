#include "ntos/prime_cache.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <system_error>
#include <vector>

#include "ntos/errors.hpp"

namespace ntos::cache {

namespace fs = std::filesystem;

namespace {

void put_u32(std::string& buf, uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t get_u32(const unsigned char* p) {
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

uint64_t get_u64(const unsigned char* p) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

void save_table(const fs::path& path, const arith::PrimeTable& table) {
    std::string buf;
    buf.reserve(24 + 8 * table.primes.size());
    buf.append(kMagic, 4);
    put_u32(buf, kFormatVersion);
    put_u64(buf, table.limit);
    put_u64(buf, table.primes.size());
    for (uint64_t p : table.primes) put_u64(buf, p);

    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw resource_error("save_table: cannot open " + tmp.string());
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) throw resource_error("save_table: short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

arith::PrimeTable load_table(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw precondition_error("load_table: cannot open " + path.string());

    std::array<unsigned char, 24> header{};
    in.read(reinterpret_cast<char*>(header.data()), header.size());
    if (in.gcount() != static_cast<std::streamsize>(header.size()))
        throw precondition_error("load_table: truncated header");
    if (std::memcmp(header.data(), kMagic, 4) != 0)
        throw precondition_error("load_table: bad magic");
    if (get_u32(header.data() + 4) != kFormatVersion)
        throw precondition_error("load_table: unsupported format version");

    arith::PrimeTable table;
    table.limit = get_u64(header.data() + 8);
    const uint64_t count = get_u64(header.data() + 16);

    std::vector<unsigned char> body(static_cast<std::size_t>(count) * 8);
    in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(body.size()));
    if (in.gcount() != static_cast<std::streamsize>(body.size()))
        throw precondition_error("load_table: truncated body");

    table.primes.resize(count);
    uint64_t prev = 0;
    for (uint64_t i = 0; i < count; ++i) {
        const uint64_t p = get_u64(body.data() + 8 * i);
        if (p <= prev) throw precondition_error("load_table: primes not strictly increasing");
        if (p > table.limit) throw precondition_error("load_table: prime exceeds limit");
        table.primes[i] = p;
        prev = p;
    }
    if (count > 0 && table.primes.front() != 2)
        throw precondition_error("load_table: first prime must be 2");
    return table;
}

namespace {

fs::path cache_file_for(const fs::path& dir, uint64_t limit) {
    return dir / ("primes-" + std::to_string(limit) + ".ntoscache");
}

void warn_to(const WarnFn& warn, const std::string& msg) {
    if (warn)
        warn(msg);
    else
        std::fprintf(stderr, "ntos: warning: %s\n", msg.c_str());
}

}  // namespace

arith::PrimeTable load_or_build_table(uint64_t limit, const fs::path& cache_dir,
                                      const arith::SieveOptions& sieve_options,
                                      const WarnFn& warn) {
    if (limit < 2) throw precondition_error("load_or_build_table: limit must be >= 2");

    std::error_code ec;
    // Best cached candidate: the smallest stored limit covering the request.
    uint64_t best = 0;
    if (fs::is_directory(cache_dir, ec)) {
        for (const auto& entry : fs::directory_iterator(cache_dir, ec)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("primes-", 0) != 0 || entry.path().extension() != ".ntoscache")
                continue;
            uint64_t file_limit = 0;
            try {
                file_limit = std::stoull(name.substr(7));
            } catch (...) {
                continue;
            }
            if (file_limit >= limit && (best == 0 || file_limit < best)) best = file_limit;
        }
    }

    if (best != 0) {
        try {
            arith::PrimeTable table = load_table(cache_file_for(cache_dir, best));
            if (table.limit >= limit) {
                // Truncate the view to the requested bound.
                auto covered = table.range_upto(limit);
                arith::PrimeTable view;
                view.limit = limit;
                view.primes.assign(covered.begin(), covered.end());
                return view;
            }
            warn_to(warn, "cache file limit disagrees with its name; rebuilding");
        } catch (const precondition_error& e) {
            warn_to(warn, std::string("corrupt prime cache (") + e.what() + "); rebuilding");
        }
    }

    arith::PrimeTable table = arith::sieve_primes(limit, sieve_options);

    fs::create_directories(cache_dir, ec);
    try {
        save_table(cache_file_for(cache_dir, limit), table);
    } catch (const std::exception& e) {
        warn_to(warn, std::string("cannot write prime cache (") + e.what() +
                          "); proceeding without caching");
    }
    return table;
}

}  // namespace ntos::cache
