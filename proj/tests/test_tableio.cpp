#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "heckeps/tableio.hpp"

using namespace heckeps;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("heckeps_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("tau CSV round-trip is bit-identical")
{
    TempDir tmp;
    TauTable t = build_tau_table(500);
    export_tau_csv(t, tmp.path / "tau.csv");
    TauTable back = import_tau_csv(tmp.path / "tau.csv");
    CHECK(back.limit() == 500);
    CHECK(back.tau_raw() == t.tau_raw());
    CHECK(back.lambda_raw() == t.lambda_raw());
}

TEST_CASE("tau CSV import rejects corrupted values")
{
    TempDir tmp;
    TauTable t = build_tau_table(50);
    export_tau_csv(t, tmp.path / "tau.csv");

    // flip tau(2) to something breaking the Deligne bound
    std::ifstream in(tmp.path / "tau.csv");
    std::string all, line;
    while (std::getline(in, line)) {
        if (line.rfind("2,-24,", 0) == 0) line = "2,-999999999,0.0";
        all += line + "\n";
    }
    in.close();
    std::ofstream out(tmp.path / "tau.csv");
    out << all;
    out.close();

    CHECK_THROWS(import_tau_csv(tmp.path / "tau.csv"));
}

TEST_CASE("arith CSV round-trip validates against the sieve")
{
    TempDir tmp;
    ArithmeticTables a = build_arithmetic_tables(300);
    export_arith_csv(a, tmp.path / "arith.csv");
    ArithmeticTables back = import_arith_csv(tmp.path / "arith.csv");
    CHECK(back.limit() == 300);
    for (uint64_t n = 1; n <= 300; ++n) {
        CHECK(back.moebius(n) == a.moebius(n));
        CHECK(back.divisors(n) == a.divisors(n));
    }
}

TEST_CASE("cache: build, load, corruption rebuild, limit extension")
{
    TempDir tmp;
    CacheManifest m = cache_tables(400, tmp.path);
    CHECK(m.limit == 400);
    CHECK(m.content_hash.size() == 33);  // two 16-hex hashes + ':'

    // clean load uses the cached files
    CachedTables t1 = load_or_build_tables(400, tmp.path);
    CHECK(t1.tau.limit() == 400);

    // a smaller request still loads the bigger cache
    CachedTables t2 = load_or_build_tables(100, tmp.path);
    CHECK(t2.tau.limit() == 400);

    // corrupt the tau file: hash mismatch forces a rebuild that heals it
    {
        std::ofstream f(tmp.path / "tau.csv", std::ios::app);
        f << "# junk\n";
    }
    CachedTables t3 = load_or_build_tables(400, tmp.path);
    CHECK(t3.tau.limit() == 400);
    CHECK(t3.tau.tau_raw() == t1.tau.tau_raw());

    // limit extension rebuilds and supersedes the manifest
    CachedTables t4 = load_or_build_tables(600, tmp.path);
    CHECK(t4.tau.limit() == 600);
    std::ifstream mf(tmp.path / "manifest.json");
    std::string manifest((std::istreambuf_iterator<char>(mf)), {});
    CHECK(manifest.find("600") != std::string::npos);
}
