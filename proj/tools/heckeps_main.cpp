// heckeps: command-line driver
//
//   tau-table     build/cache the exact eigenvalue tables, CSV export
//   psprimes      enumerate n with [g(n)] prime
//   vaaler-check  majorant inequality scan, one-line pass/fail
//   expsum-bench  bound-ratio suites (vdc | slemma | delta | shifted | perron)
//   typesum       K_d / L_d bound-ratio grid with hypothesis gates
//   main-sum      cancellation experiment over an N grid
//
// Config files are line-oriented `key = value` with the same names as the
// long flags; command-line flags win.  Exit codes: 0 pass, 1 check failure,
// 2 usage error.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "heckeps/expsums.hpp"
#include "heckeps/gfunc.hpp"
#include "heckeps/primality.hpp"
#include "heckeps/tableio.hpp"
#include "heckeps/typesums.hpp"
#include "heckeps/vaaler.hpp"

namespace fs = std::filesystem;
using namespace heckeps;

namespace {

std::string fmt17(double x)
{
    char buf[40];
    snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// comma list of counts, scientific shorthand allowed ("1e3,1e4")
std::vector<uint64_t> parse_count_list(const std::string& s)
{
    std::vector<uint64_t> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        size_t pos = 0;
        double v = std::stod(cell, &pos);
        if (pos != cell.size() || v < 1 || v != std::floor(v) || v > 1e15)
            throw CLI::ValidationError("--N", "bad count '" + cell + "'");
        out.push_back((uint64_t)v);
    }
    if (out.empty()) throw CLI::ValidationError("--N", "empty list");
    return out;
}

class OutputFile {
public:
    explicit OutputFile(const fs::path& target)
        : target_(target), tmp_(target.string() + ".tmp"), out_(tmp_)
    {
        if (!out_) throw std::runtime_error("cannot open " + tmp_.string());
    }
    ~OutputFile()
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
        fs::rename(tmp_, target_);
        committed_ = true;
    }

private:
    fs::path target_, tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

fs::path with_suffix(const fs::path& p, const std::string& suffix)
{
    fs::path q = p;
    q.replace_extension();
    return fs::path(q.string() + suffix);
}

void write_suite_csv(const std::vector<SuiteRow>& rows, const fs::path& out)
{
    OutputFile f(out);
    f.stream() << "params,measured,envelope,ratio\n";
    for (const auto& r : rows)
        f.stream() << '"' << r.params << "\"," << fmt17(r.measured) << ','
                   << fmt17(r.envelope) << ',' << fmt17(r.ratio) << '\n';
    f.commit();

    OutputFile plot(with_suffix(out, ".ratio.dat"));
    int i = 0;
    for (const auto& r : rows) plot.stream() << ++i << ' ' << fmt17(r.ratio) << '\n';
    plot.commit();
}

struct CommonOpts {
    std::string cache_dir;
    unsigned threads = 1;
    uint64_t seed = 12345;

    fs::path cache() const
    {
        return cache_dir.empty() ? default_cache_dir() : fs::path(cache_dir);
    }
};

void add_common(CLI::App* cmd, CommonOpts& c)
{
    cmd->add_option("--cache-dir", c.cache_dir,
                    "table cache directory (default $HECKEPS_CACHE or .heckeps_cache)");
    cmd->add_option("--threads", c.threads, "table build threads (bit-identical result)")
        ->check(CLI::Range(1u, 256u));
    cmd->add_option("--seed", c.seed, "seed for randomized suites");
    cmd->set_config("--config", "", "key = value config file; flags win");
}

// ---------------------------------------------------------------------------

int run_tau_table(uint64_t limit, const CommonOpts& common, const std::string& out)
{
    CacheManifest m = cache_tables(limit, common.cache(), common.threads);
    if (!out.empty()) {
        CachedTables t = load_or_build_tables(limit, common.cache(), common.threads);
        export_tau_csv(t.tau, out);
    }
    std::printf("cached tau+arith tables: limit=%" PRIu64 " hash=%s at %s\n", m.limit,
                m.content_hash.c_str(), m.built_at.c_str());
    return 0;
}

int run_psprimes(const std::string& gsel, uint64_t limit, const std::string& out)
{
    AdmissibleG g = parse_g_selector(gsel);
    uint64_t hits = 0;
    OutputFile f(out.empty() ? fs::path("psprimes.csv") : fs::path(out));
    f.stream() << "n,m,is_prime\n";
    for (uint64_t n = (uint64_t)std::ceil(g.domain_min); n <= limit; ++n) {
        uint64_t m = floor_g(g, n);
        bool p = is_prime_u64(m);
        hits += p;
        f.stream() << n << ',' << m << ',' << (p ? 1 : 0) << '\n';
    }
    f.commit();
    std::printf("psprimes: g=%s limit=%" PRIu64 " hits=%" PRIu64 "\n", g.description.c_str(),
                limit, hits);
    return 0;
}

int run_vaaler_check(int J, int grid_points, const std::string& dump)
{
    VaalerApprox approx(J);
    std::vector<double> grid(grid_points);
    for (int i = 0; i < grid_points; ++i) grid[i] = (double)i / grid_points;
    MajorantReport rep = majorant_check(approx, grid);

    if (!dump.empty()) {
        OutputFile f{fs::path(dump)};
        f.stream() << "x,psi,psi_star,delta\n";
        for (double x : grid) {
            auto [ps, de] = approx.eval(x);
            f.stream() << fmt17(x) << ',' << fmt17(sawtooth(x)) << ',' << fmt17(ps) << ','
                       << fmt17(de) << '\n';
        }
        f.commit();
    }

    std::printf("vaaler-check J=%d grid=%d: %s, worst margin %.3e at x=%.6f\n", J, grid_points,
                rep.ok() ? "PASS" : "FAIL", rep.worst_margin, rep.worst_x);
    return rep.ok() ? 0 : 1;
}

int run_expsum_bench(const std::string& suite, const CommonOpts& common, const std::string& out)
{
    std::vector<SuiteRow> rows;
    if (suite == "vdc") {
        rows = vdc_suite();
    } else if (suite == "slemma") {
        rows = slemma_suite(load_or_build_tables(20000, common.cache(), common.threads).tau);
    } else if (suite == "delta") {
        rows = delta_suite();
    } else if (suite == "shifted") {
        rows = shifted_suite(load_or_build_tables(2500, common.cache(), common.threads).tau);
    } else if (suite == "perron") {
        rows = perron_suite();
    } else {
        throw CLI::ValidationError("--suite", "unknown suite '" + suite + "'");
    }

    write_suite_csv(rows, out.empty() ? fs::path(suite + "_report.csv") : fs::path(out));
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.ratio);
    std::printf("expsum-bench %s: %zu rows, worst ratio %.6g\n", suite.c_str(), rows.size(),
                worst);
    return 0;
}

int run_typesum(const std::string& gsel, double eta, const CommonOpts& common,
                const std::string& out)
{
    AdmissibleG g = parse_g_selector(gsel);
    CachedTables t = load_or_build_tables(20000, common.cache(), common.threads);
    auto rows = type_sum_bound_report(default_typesum_grid(), g, t.tau, t.arith, eta, common.seed);

    fs::path csv_path = out.empty() ? fs::path("typesum_report.csv") : fs::path(out);
    OutputFile f(csv_path);
    f.stream() << "lemma,N,Y,d,H,coeff,status,measured,envelope,ratio\n";
    int skipped = 0;
    for (const auto& r : rows) {
        const char* ck = r.point.coeff == CoeffKind::Ones         ? "ones"
                         : r.point.coeff == CoeffKind::Unimodular ? "unimodular"
                                                                  : "structured";
        f.stream() << r.point.lemma << ',' << r.point.N << ',' << r.point.Y << ',' << r.point.d
                   << ',' << fmt17(r.point.H) << ',' << ck << ','
                   << (r.skipped ? "SKIPPED" : "OK") << ',' << fmt17(r.measured) << ','
                   << fmt17(r.envelope) << ',' << fmt17(r.ratio) << '\n';
        skipped += r.skipped;
    }
    f.commit();

    OutputFile plot(with_suffix(csv_path, ".ratio.dat"));
    int i = 0;
    for (const auto& r : rows)
        if (!r.skipped) plot.stream() << ++i << ' ' << fmt17(r.ratio) << '\n';
    plot.commit();

    std::printf("typesum g=%s eta=%g: %zu grid points, %d SKIPPED\n", g.description.c_str(), eta,
                rows.size(), skipped);
    return 0;
}

int run_main_sum(const std::string& gsel, const std::string& Nlist, double C,
                 const CommonOpts& common, const std::string& out, const std::string& json_out,
                 bool timing)
{
    AdmissibleG g = parse_g_selector(gsel);
    std::vector<uint64_t> Ns = parse_count_list(Nlist);
    std::sort(Ns.begin(), Ns.end());

    uint64_t m_top = floor_g(g, Ns.back());
    CachedTables t = load_or_build_tables(m_top + 1, common.cache(), common.threads);

    auto records = main_theorem_experiment(g, Ns, t.tau, C, timing);

    fs::path csv_path = out.empty() ? fs::path("main_sum.csv") : fs::path(out);
    OutputFile f(csv_path);
    f.stream() << "g,N,hits,A,majorant,quotient,envelope,seconds\n";
    for (const auto& r : records)
        f.stream() << r.g_label << ',' << r.N << ',' << r.hits << ',' << fmt17(r.A) << ','
                   << fmt17(r.majorant) << ',' << fmt17(r.quotient) << ',' << fmt17(r.envelope)
                   << ',' << fmt17(r.seconds) << '\n';
    f.commit();

    OutputFile plot(with_suffix(csv_path, ".quotient.dat"));
    for (const auto& r : records) plot.stream() << r.N << ' ' << fmt17(r.quotient) << '\n';
    plot.commit();

    if (!json_out.empty()) {
        nlohmann::json j;
        j["config"] = {{"command", "main-sum"},   {"g", gsel},
                       {"N", Ns},                 {"C", C},
                       {"seed", common.seed},     {"timing", timing},
                       {"dyadic_convention", "[K,2K)"}};
        j["records"] = nlohmann::json::array();
        for (const auto& r : records)
            j["records"].push_back({{"g", r.g_label},
                                    {"N", r.N},
                                    {"hits", r.hits},
                                    {"A", r.A},
                                    {"majorant", r.majorant},
                                    {"quotient", r.quotient},
                                    {"envelope", r.envelope},
                                    {"seconds", r.seconds}});
        OutputFile jf{fs::path(json_out)};
        jf.stream() << j.dump(2) << '\n';
        jf.commit();
    }

    for (const auto& r : records)
        std::printf("main-sum g=%s N=%" PRIu64 ": hits=%" PRIu64 " A=%.12g quotient=%.12g\n",
                    r.g_label.c_str(), r.N, r.hits, r.A, r.quotient);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hecke eigenvalues at primes [g(n)]: tables, bounds, experiments"};
    app.require_subcommand(1);

    CommonOpts common;

    // tau-table
    auto* tau_cmd = app.add_subcommand("tau-table", "build and cache the exact tables");
    uint64_t limit = 100000;
    std::string tau_out;
    tau_cmd->add_option("--limit", limit, "table limit N")->check(CLI::Range(1ULL, 2000000ULL));
    tau_cmd->add_option("--out", tau_out, "also export tau CSV to this path");
    add_common(tau_cmd, common);

    // psprimes
    auto* ps_cmd = app.add_subcommand("psprimes", "enumerate n with [g(n)] prime");
    std::string ps_g = "identity", ps_out;
    uint64_t ps_limit = 1000;
    ps_cmd->add_option("--g", ps_g, "g selector: power:<c> | identity | xexp-sqrtlog");
    ps_cmd->add_option("--limit", ps_limit, "enumerate n <= limit")
        ->check(CLI::Range(1ULL, 1000000000ULL));
    ps_cmd->add_option("--out", ps_out, "hits CSV path");
    add_common(ps_cmd, common);

    // vaaler-check
    auto* va_cmd = app.add_subcommand("vaaler-check", "majorant inequality scan");
    int J = 10, grid_points = 10000;
    std::string dump;
    va_cmd->add_option("--J", J, "degree of the approximation")->check(CLI::Range(1, 1000000));
    va_cmd->add_option("--grid", grid_points, "uniform grid points on [0,1)")
        ->check(CLI::Range(1, 100000000));
    va_cmd->add_option("--dump", dump, "emit CSV x,psi,psi_star,delta");
    add_common(va_cmd, common);

    // expsum-bench
    auto* eb_cmd = app.add_subcommand("expsum-bench", "bound-ratio suites");
    std::string suite = "vdc", eb_out;
    eb_cmd->add_option("--suite", suite, "vdc | slemma | delta | shifted | perron")->required();
    eb_cmd->add_option("--out", eb_out, "report CSV path");
    add_common(eb_cmd, common);

    // typesum
    auto* ts_cmd = app.add_subcommand("typesum", "K_d/L_d bound-ratio grid");
    std::string ts_g = "power:1.02", ts_out;
    double eta = 1e-3;
    ts_cmd->add_option("--g", ts_g, "g selector");
    ts_cmd->add_option("--eta", eta, "the eta parameter")->check(CLI::Range(1e-9, 0.1));
    ts_cmd->add_option("--out", ts_out, "report CSV path");
    add_common(ts_cmd, common);

    // main-sum
    auto* ms_cmd = app.add_subcommand("main-sum", "cancellation experiment");
    std::string ms_g = "power:1.05", Nlist = "1e3,1e4,1e5", ms_out, ms_json;
    double C = 0.1;
    bool timing = false;
    ms_cmd->add_option("--g", ms_g, "g selector");
    ms_cmd->add_option("--N", Nlist, "comma list of N values");
    ms_cmd->add_option("--C", C, "envelope constant in N exp(-C sqrt(log N))")
        ->check(CLI::Range(0.0, 10.0));
    ms_cmd->add_option("--out", ms_out, "runs CSV path");
    ms_cmd->add_option("--json", ms_json, "JSON run-record path");
    ms_cmd->add_flag("--timing", timing, "record wall seconds (off keeps outputs byte-identical)");
    add_common(ms_cmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits 0; usage errors exit 2
    }

    try {
        if (tau_cmd->parsed()) return run_tau_table(limit, common, tau_out);
        if (ps_cmd->parsed()) return run_psprimes(ps_g, ps_limit, ps_out);
        if (va_cmd->parsed()) return run_vaaler_check(J, grid_points, dump);
        if (eb_cmd->parsed()) return run_expsum_bench(suite, common, eb_out);
        if (ts_cmd->parsed()) return run_typesum(ts_g, eta, common, ts_out);
        if (ms_cmd->parsed()) return run_main_sum(ms_g, Nlist, C, common, ms_out, ms_json, timing);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
