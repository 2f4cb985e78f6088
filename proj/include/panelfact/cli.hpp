#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "panelfact/decomp.hpp"
#include "panelfact/policy.hpp"

namespace panelfact {

// Process exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Residual bound used by `verify` and `decompose --verify`: 1e-9 * n.
double verify_threshold(std::size_t n);

/// kind,n,s,backend,depth,seed,wall_seconds,mults,adds,flushes,residual_rel,orth_rel,discarded_lower_mass,error
std::string csv_header();
std::string csv_row(const RunReport& report);

struct BenchConfig {
    DecompKind kind = DecompKind::Cholesky;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> widths;     ///< explicit s values; used when non-empty
    std::optional<double> width_exponent; ///< otherwise s = ceil(n^k)
    std::vector<MulBackend> backends;
    std::size_t repeats = 5;
    std::size_t warmup = 1;
    std::uint64_t seed = 0;
    bool verify = true;
};

/// The input a benchmark cell of this kind factors: gen_spd for Cholesky,
/// gen_general otherwise.
Matrix bench_input(DecompKind kind, std::size_t n, std::uint64_t seed);

/// Runs every (n, s, backend) cell in order. Each row carries the median wall
/// time of `repeats` runs after `warmup` discarded runs; failures are recorded
/// in the row's error field and the grid continues.
std::vector<RunReport> run_bench(const BenchConfig& config);

double median(std::vector<double> values);

/// Entry point of the `panelfact` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace panelfact
