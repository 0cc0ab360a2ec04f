#include "heckeps/tableio.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace heckeps {

namespace fs = std::filesystem;

namespace {

// write-to-temp-then-rename so failures leave no partial output
class AtomicWriter {
public:
    explicit AtomicWriter(const fs::path& target)
        : target_(target), tmp_(target.string() + ".tmp"), out_(tmp_, std::ios::binary)
    {
        if (!out_) throw std::runtime_error("cannot open " + tmp_.string() + " for writing");
    }
    ~AtomicWriter()
    {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            fs::remove(tmp_, ec);
        }
    }
    std::ofstream& stream() { return out_; }
    void commit()
    {
        out_.close();
        if (!out_) throw std::runtime_error("write failed for " + tmp_.string());
        fs::rename(tmp_, target_);
        committed_ = true;
    }

private:
    fs::path target_, tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

std::string fmt17(double x)
{
    char buf[40];
    snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

std::string now_utc_iso8601()
{
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

double ulp_of(double x)
{
    double ax = std::fabs(x);
    return std::nextafter(ax, std::numeric_limits<double>::infinity()) - ax;
}

} // namespace

void export_tau_csv(const TauTable& table, const fs::path& path)
{
    AtomicWriter w(path);
    w.stream() << "n,tau,lambda\n";
    for (uint64_t n = 1; n <= table.limit(); ++n)
        w.stream() << n << ',' << i128_to_string(table.tau(n)) << ','
                   << fmt17(table.lambda(n)) << '\n';
    w.commit();
}

TauTable import_tau_csv(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line) || line != "n,tau,lambda")
        throw std::runtime_error("import_tau_csv: bad header in " + path.string());

    std::vector<i128> tau;
    std::vector<double> lambda;
    uint64_t expect = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 3)
            throw std::runtime_error("import_tau_csv: malformed row '" + line + "'");
        if (std::stoull(cells[0]) != expect)
            throw std::runtime_error("import_tau_csv: rows must be contiguous from n=1");
        tau.push_back(i128_from_string(cells[1]));
        lambda.push_back(std::strtod(cells[2].c_str(), nullptr));
        ++expect;
    }
    if (tau.empty()) throw std::runtime_error("import_tau_csv: no rows in " + path.string());

    const uint64_t rows = tau.size();
    TauTable table(rows, std::move(tau));

    // validate invariants on load: stored lambda within 1 ulp of recomputed
    for (uint64_t n = 1; n <= table.limit(); ++n) {
        double recomputed = table.lambda(n);
        if (std::fabs(recomputed - lambda[n - 1]) > ulp_of(recomputed))
            throw std::runtime_error("import_tau_csv: lambda(" + std::to_string(n) +
                                     ") inconsistent with tau");
    }
    DeligneReport rep = deligne_check(table);
    if (!rep.ok())
        throw std::runtime_error("import_tau_csv: Deligne bound violated at n=" +
                                 std::to_string(rep.violations.front()));
    return table;
}

void export_arith_csv(const ArithmeticTables& tables, const fs::path& path)
{
    AtomicWriter w(path);
    w.stream() << "n,von_mangoldt,moebius,divisors\n";
    for (uint64_t n = 1; n <= tables.limit(); ++n)
        w.stream() << n << ',' << fmt17(tables.von_mangoldt(n)) << ','
                   << tables.moebius(n) << ',' << tables.divisors(n) << '\n';
    w.commit();
}

ArithmeticTables import_arith_csv(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "n,von_mangoldt,moebius,divisors")
        throw std::runtime_error("import_arith_csv: bad header in " + path.string());

    uint64_t rows = 0;
    std::vector<std::string> body;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        body.push_back(line);
        ++rows;
    }
    // rebuilt rather than trusted: the sieve is cheap and the CSV is
    // cross-checked row by row
    ArithmeticTables tables = build_arithmetic_tables(rows);
    for (uint64_t n = 1; n <= rows; ++n) {
        auto cells = split_csv_line(body[n - 1]);
        if (cells.size() != 4 || std::stoull(cells[0]) != n)
            throw std::runtime_error("import_arith_csv: malformed row " + std::to_string(n));
        if (std::stoi(cells[2]) != tables.moebius(n) ||
            std::stoull(cells[3]) != tables.divisors(n) ||
            std::strtod(cells[1].c_str(), nullptr) != tables.von_mangoldt(n))
            throw std::runtime_error("import_arith_csv: row " + std::to_string(n) +
                                     " fails sieve validation");
    }
    return tables;
}

uint64_t fnv1a64_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    uint64_t h = 1469598103934665603ULL;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= (unsigned char)buf[i];
            h *= 1099511628211ULL;
        }
        if (got < (std::streamsize)sizeof buf) break;
    }
    return h;
}

namespace {

std::string hash_hex(uint64_t h)
{
    char buf[20];
    snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

} // namespace

CacheManifest cache_tables(uint64_t limit, const fs::path& dir, unsigned threads)
{
    fs::create_directories(dir);
    TauTable tau = build_tau_table(limit, threads);
    ArithmeticTables arith = build_arithmetic_tables(limit);
    export_tau_csv(tau, dir / "tau.csv");
    export_arith_csv(arith, dir / "arith.csv");

    CacheManifest m;
    m.kind = "tau+arith";
    m.limit = limit;
    m.content_hash = hash_hex(fnv1a64_file(dir / "tau.csv")) + ":" +
                     hash_hex(fnv1a64_file(dir / "arith.csv"));
    m.built_at = now_utc_iso8601();

    nlohmann::json j{{"kind", m.kind},
                     {"limit", m.limit},
                     {"content_hash", m.content_hash},
                     {"built_at", m.built_at}};
    AtomicWriter w(dir / "manifest.json");
    w.stream() << j.dump(2) << '\n';
    w.commit();
    return m;
}

CachedTables load_or_build_tables(uint64_t limit, const fs::path& dir, unsigned threads)
{
    const fs::path manifest_path = dir / "manifest.json";
    if (fs::exists(manifest_path)) {
        try {
            std::ifstream in(manifest_path);
            nlohmann::json j = nlohmann::json::parse(in);
            uint64_t cached_limit = j.at("limit").get<uint64_t>();
            std::string stored = j.at("content_hash").get<std::string>();
            std::string actual = hash_hex(fnv1a64_file(dir / "tau.csv")) + ":" +
                                 hash_hex(fnv1a64_file(dir / "arith.csv"));
            if (cached_limit >= limit && stored == actual) {
                TauTable tau = import_tau_csv(dir / "tau.csv");
                ArithmeticTables arith = import_arith_csv(dir / "arith.csv");
                return {std::move(tau), std::move(arith)};
            }
        } catch (const std::exception&) {
            // fall through to rebuild
        }
    }
    cache_tables(limit, dir, threads);
    TauTable tau = import_tau_csv(dir / "tau.csv");
    ArithmeticTables arith = import_arith_csv(dir / "arith.csv");
    return {std::move(tau), std::move(arith)};
}

fs::path default_cache_dir()
{
    if (const char* env = std::getenv("HECKEPS_CACHE")) return fs::path(env);
    return fs::path(".heckeps_cache");
}

} // namespace heckeps
