// cli.hpp
// Command layer shared by the `primehit` executable and the tests.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "primehit/prime_table.hpp"

namespace primehit::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "PRIMEHIT_OUTPUT_DIR";

enum class Command { exact, bounds, simulate, verify };
enum class Format { json, csv, text };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int runtime = 1;
inline constexpr int config = 2;
inline constexpr int certification_refused = 3;
inline constexpr int verification_failed = 4;
} // namespace exit_code

struct RunConfig {
    Command command = Command::exact;
    int sides = 6;
    int k_max = 1000;
    std::uint64_t sieve_limit = 10'000'000;
    std::uint64_t n_cut = 200'000;
    int precision_digits = 15;
    int precision_bits = 128;
    bool sieve_pi = false; // exact pi(n) inside the summation window
    std::uint64_t reps = 1'000'000;
    std::uint64_t seed = 42;
    int workers = 1;
    std::uint32_t cap = 10'000;
    std::string target = "primes"; // "primes" or a path to a file with one integer per line
    Format format = Format::json;
    std::string output;            // empty: stdout
    bool timings = true;

    // Rejects invalid values and combinations. Throws ConfigError.
    void validate() const;
};

// Runs one command and writes its report to `out` (or the configured output
// file). Diagnostics go to `err`. Returns the exit code. `table` replaces the
// sieve, for fault injection.
int run(const RunConfig& config, std::ostream& out, std::ostream& err,
        const PrimeTable* table = nullptr);

// Parses argv-style arguments (without the program name) and runs.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Reads a target file: one integer per line, blank lines and '#' comments
// ignored. Members must lie in [2, limit].
std::vector<std::uint64_t> read_target_file(const std::string& path, std::uint64_t limit);

// Where `output` lands: relative paths resolve against $PRIMEHIT_OUTPUT_DIR
// when it is set.
std::string resolve_output_path(const std::string& output);

std::string to_string(Command c);

} // namespace primehit::cli
