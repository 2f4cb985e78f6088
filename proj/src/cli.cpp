#include "panelfact/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "panelfact/errors.hpp"
#include "panelfact/io.hpp"

namespace panelfact {

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch == '\n' ? ' ' : ch;
    }
    out += '"';
    return out;
}

MulBackend make_backend(const std::string& name, std::size_t depth) {
    const BackendKind kind = parse_backend_kind(name);
    return kind == BackendKind::Classical ? MulBackend::classical() : MulBackend::strassen(depth);
}

std::size_t pick_width(std::optional<std::size_t> s, std::optional<double> exponent,
                       std::size_t n) {
    if (s) return resolve(BlockPolicy::fixed(*s), n);
    if (exponent) return resolve(BlockPolicy::exponent(*exponent), n);
    // No width given: one tenth of n.
    return resolve(BlockPolicy::fixed((n + 9) / 10), n);
}

std::vector<std::string> factor_names(DecompKind kind) {
    switch (kind) {
    case DecompKind::Cholesky: return {"L"};
    case DecompKind::Lu: return {"L", "U"};
    case DecompKind::Qr: return {"Q", "R"};
    }
    return {};
}

std::size_t structural_violations(DecompKind kind, const std::vector<Matrix>& factors) {
    switch (kind) {
    case DecompKind::Cholesky: return count_nonzero_strict_upper(factors.at(0));
    case DecompKind::Lu:
        return count_nonzero_strict_upper(factors.at(0)) +
               count_nonzero_strict_lower(factors.at(1));
    case DecompKind::Qr: return count_nonzero_strict_lower(factors.at(1));
    }
    return 0;
}

void emit_report(const RunReport& report, const std::string& report_path, std::ostream& out) {
    if (report_path.empty()) {
        out << csv_header() << '\n' << csv_row(report) << '\n';
        return;
    }
    const bool fresh = !std::filesystem::exists(report_path) ||
                       std::filesystem::file_size(report_path) == 0;
    std::ofstream f(report_path, std::ios::app);
    if (!f) throw std::runtime_error("cannot open '" + report_path + "' for appending");
    if (fresh) f << csv_header() << '\n';
    f << csv_row(report) << '\n';
}

struct GenArgs {
    std::string kind;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string out;
};

struct DecomposeArgs {
    std::string kind;
    std::string in;
    std::optional<std::size_t> s;
    std::optional<double> exponent;
    std::string backend = "classical";
    std::size_t depth = 2;
    std::uint64_t seed = 0;
    std::string out;
    std::string report;
    bool verify = false;
};

struct BenchArgs {
    std::string kind;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> widths;
    std::optional<double> exponent;
    std::vector<std::string> backends{"classical", "strassen"};
    std::vector<std::size_t> depths{2};
    std::size_t repeats = 5;
    std::size_t warmup = 1;
    std::uint64_t seed = 0;
    std::string out;
    bool no_verify = false;
};

struct VerifyArgs {
    std::string kind;
    std::string a;
    std::vector<std::string> factors;
};

int cmd_gen(const GenArgs& args, std::ostream& out) {
    if (args.n < 1) throw CLI::ValidationError("--n", "must be at least 1");
    const Matrix m = args.kind == "spd" ? gen_spd(args.n, args.seed) : gen_general(args.n, args.seed);
    if (args.out.empty() || args.out == "-") {
        write_matrix(out, m);
    } else {
        write_matrix(std::filesystem::path(args.out), m);
    }
    return kExitOk;
}

int cmd_decompose(const DecomposeArgs& args, std::ostream& out) {
    const DecompKind kind = parse_decomp_kind(args.kind);
    const Matrix a = read_matrix(std::filesystem::path(args.in));
    const std::size_t s = pick_width(args.s, args.exponent, a.rows());
    const MulBackend backend = make_backend(args.backend, args.depth);

    RunReport report;
    report.seed = args.seed;
    const Decomposition result = decompose_with_report(kind, a, s, backend, report, args.verify);

    if (!args.out.empty()) {
        const auto names = factor_names(kind);
        for (std::size_t i = 0; i < names.size(); ++i) {
            write_matrix(std::filesystem::path(args.out + "." + names[i] + ".mtx"),
                         result.factors[i]);
        }
    }
    if (!args.verify) return kExitOk;

    emit_report(report, args.report, out);
    const bool ok = *report.residual_rel <= verify_threshold(a.rows()) &&
                    structural_violations(kind, result.factors) == 0;
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_bench(const BenchArgs& args, std::ostream& out) {
    if (args.repeats < 1) throw CLI::ValidationError("--repeats", "must be at least 1");
    if (args.sizes.empty()) throw CLI::ValidationError("--n", "at least one size required");

    BenchConfig config;
    config.kind = parse_decomp_kind(args.kind);
    config.sizes = args.sizes;
    config.widths = args.widths;
    config.width_exponent = args.exponent;
    config.repeats = args.repeats;
    config.warmup = args.warmup;
    config.seed = args.seed;
    config.verify = !args.no_verify;
    std::set<std::pair<int, std::size_t>> seen;
    for (const auto& name : args.backends) {
        const BackendKind kind = parse_backend_kind(name);
        if (kind == BackendKind::Classical) {
            if (seen.insert({0, 0}).second) config.backends.push_back(MulBackend::classical());
        } else {
            for (std::size_t d : args.depths) {
                if (seen.insert({1, d}).second) config.backends.push_back(MulBackend::strassen(d));
            }
        }
    }

    const auto rows = run_bench(config);
    auto write = [&rows](std::ostream& o) {
        o << csv_header() << '\n';
        for (const auto& r : rows) o << csv_row(r) << '\n';
    };
    if (args.out.empty() || args.out == "-") {
        write(out);
    } else {
        std::ofstream f(args.out);
        if (!f) throw std::runtime_error("cannot open '" + args.out + "' for writing");
        write(f);
    }
    return kExitOk;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
    const DecompKind kind = parse_decomp_kind(args.kind);
    const Matrix a = read_matrix(std::filesystem::path(args.a));
    std::vector<Matrix> factors;
    for (const auto& p : args.factors) factors.push_back(read_matrix(std::filesystem::path(p)));

    const std::size_t expected = kind == DecompKind::Cholesky ? 1 : 2;
    if (factors.size() != expected) {
        throw DimensionError(to_string(kind) + " expects " + std::to_string(expected) +
                             " factor file(s), got " + std::to_string(factors.size()));
    }
    for (const auto& f : factors) {
        if (f.rows() != a.rows() || f.cols() != a.cols()) {
            throw DimensionError("factor shape " + std::to_string(f.rows()) + "x" +
                                 std::to_string(f.cols()) + " does not match input " +
                                 std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
        }
    }

    const double residual = residual_rel(kind, a, factors);
    const std::size_t violations = structural_violations(kind, factors);
    out << "kind=" << to_string(kind) << " n=" << a.rows()
        << " residual_rel=" << format_double(residual);
    if (kind == DecompKind::Qr) out << " orth_rel=" << format_double(orth_rel(factors[0]));
    out << " violations=" << violations << '\n';
    return residual <= verify_threshold(a.rows()) && violations == 0 ? kExitOk
                                                                     : kExitVerifyFailed;
}

} // namespace

double verify_threshold(std::size_t n) { return 1e-9 * static_cast<double>(n); }

std::string csv_header() {
    return "kind,n,s,backend,depth,seed,wall_seconds,mults,adds,flushes,residual_rel,orth_rel,"
           "discarded_lower_mass,error";
}

std::string csv_row(const RunReport& r) {
    std::ostringstream o;
    const bool strassen = r.backend.kind == BackendKind::Strassen;
    o << to_string(r.kind) << ',' << r.n << ',' << r.s << ',' << to_string(r.backend.kind) << ','
      << (strassen ? std::to_string(r.backend.depth) : std::string()) << ',' << r.seed << ','
      << format_double(r.wall_seconds) << ',' << r.mults << ',' << r.adds << ',' << r.flushes
      << ',' << format_optional(r.residual_rel) << ',' << format_optional(r.orth_rel) << ','
      << format_optional(r.discarded_lower_mass) << ',' << csv_escape(r.error);
    return o.str();
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

Matrix bench_input(DecompKind kind, std::size_t n, std::uint64_t seed) {
    return kind == DecompKind::Cholesky ? gen_spd(n, seed) : gen_general(n, seed);
}

std::vector<RunReport> run_bench(const BenchConfig& config) {
    std::vector<RunReport> rows;
    for (std::size_t n : config.sizes) {
        const Matrix a = bench_input(config.kind, n, config.seed);
        std::vector<std::size_t> widths;
        if (!config.widths.empty()) {
            for (std::size_t s : config.widths) widths.push_back(resolve(BlockPolicy::fixed(s), n));
        } else {
            widths.push_back(pick_width(std::nullopt, config.width_exponent, n));
        }
        for (std::size_t s : widths) {
            for (const MulBackend& backend : config.backends) {
                RunReport report;
                report.seed = config.seed;
                try {
                    for (std::size_t w = 0; w < config.warmup; ++w) {
                        decompose_with_report(config.kind, a, s, backend, report, false);
                    }
                    std::vector<double> times;
                    for (std::size_t r = 0; r < config.repeats; ++r) {
                        const bool last = r + 1 == config.repeats;
                        decompose_with_report(config.kind, a, s, backend, report,
                                              last && config.verify);
                        times.push_back(report.wall_seconds);
                    }
                    report.wall_seconds = median(times);
                } catch (const std::exception&) {
                    // report.error already set by decompose_with_report
                    if (report.error.empty()) report.error = "unknown failure";
                }
                rows.push_back(std::move(report));
            }
        }
    }
    return rows;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Panel-blocked Cholesky, LU and QR with pluggable fast multiplication"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a seeded test matrix (Matrix Market)");
    gen_cmd->add_option("--kind", gen.kind, "spd or general")
        ->required()
        ->check(CLI::IsMember({"spd", "general"}));
    gen_cmd->add_option("--n", gen.n, "Matrix size")->required();
    gen_cmd->add_option("--seed", gen.seed, "Generator seed");
    gen_cmd->add_option("--out", gen.out, "Output path (default: stdout)");

    DecomposeArgs dec;
    auto* dec_cmd = app.add_subcommand("decompose", "Factor a Matrix Market file");
    dec_cmd->add_option("--kind", dec.kind, "cholesky, lu or qr")
        ->required()
        ->check(CLI::IsMember({"cholesky", "lu", "qr"}));
    dec_cmd->add_option("--in", dec.in, "Input matrix")->required();
    auto* dec_s = dec_cmd->add_option("--s", dec.s, "Panel width");
    dec_cmd->add_option("--policy-exponent", dec.exponent, "Panel width s = ceil(n^k)")
        ->excludes(dec_s);
    dec_cmd->add_option("--backend", dec.backend, "classical or strassen")
        ->check(CLI::IsMember({"classical", "strassen"}));
    dec_cmd->add_option("--depth", dec.depth, "Strassen recursion depth")->capture_default_str();
    dec_cmd->add_option("--seed", dec.seed, "Seed recorded in the report row");
    dec_cmd->add_option("--out", dec.out, "Prefix for factor files (<prefix>.L.mtx, ...)");
    dec_cmd->add_option("--report", dec.report, "Append the report row to this CSV file");
    dec_cmd->add_flag("--verify", dec.verify, "Compute residuals and emit a report row");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time a grid of sizes, widths and backends");
    bench_cmd->add_option("--kind", bench.kind, "cholesky, lu or qr")
        ->required()
        ->check(CLI::IsMember({"cholesky", "lu", "qr"}));
    bench_cmd->add_option("--n", bench.sizes, "Sizes (comma separated)")
        ->required()
        ->delimiter(',');
    auto* bench_s = bench_cmd->add_option("--s", bench.widths, "Panel widths (comma separated)")
                        ->delimiter(',');
    bench_cmd->add_option("--policy-exponent", bench.exponent, "Panel width s = ceil(n^k)")
        ->excludes(bench_s);
    bench_cmd->add_option("--backend", bench.backends, "Backends (comma separated)")
        ->delimiter(',')
        ->check(CLI::IsMember({"classical", "strassen"}));
    bench_cmd->add_option("--depth", bench.depths, "Strassen depths (comma separated)")
        ->delimiter(',');
    bench_cmd->add_option("--repeats", bench.repeats, "Timed runs per cell")->capture_default_str();
    bench_cmd->add_option("--warmup", bench.warmup, "Discarded runs per cell")
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "Generator seed");
    bench_cmd->add_option("--out", bench.out, "CSV path (default: stdout)");
    bench_cmd->add_flag("--no-verify", bench.no_verify, "Skip residual computation");

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "Check factor files against the input");
    ver_cmd->add_option("--kind", ver.kind, "cholesky, lu or qr")
        ->required()
        ->check(CLI::IsMember({"cholesky", "lu", "qr"}));
    ver_cmd->add_option("--a", ver.a, "Input matrix")->required();
    ver_cmd->add_option("--factors", ver.factors, "Factor files in order (L | L U | Q R)")
        ->required()
        ->expected(1, 2);

    try {
        app.parse(argc, argv);
        if (gen_cmd->parsed()) return cmd_gen(gen, out);
        if (dec_cmd->parsed()) return cmd_decompose(dec, out);
        if (bench_cmd->parsed()) return cmd_bench(bench, out);
        if (ver_cmd->parsed()) return cmd_verify(ver, out);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace panelfact
