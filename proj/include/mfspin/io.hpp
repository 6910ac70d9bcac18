#ifndef MFSPIN_IO_HPP
#define MFSPIN_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mfspin/linalg.hpp"
#include "mfspin/model.hpp"

namespace mfspin {

inline constexpr std::uint64_t kDefaultSeed = 12345;

// One resolved invocation. Every field appears in the emitted manifest, so
// parsing a manifest back reproduces the configuration exactly.
struct RunConfig {
    std::string command; // forward | exact | sample | invert |
                         // study-n | study-m | sweep-cw | sweep-ms
    std::string model = "cw";

    // single-population parameters
    std::int64_t n_spins = 10000;
    double coupling = 0.6;
    double field = 0.1;

    // k-species parameters
    std::vector<std::int64_t> sizes;
    Mat coupling_matrix;
    Vec field_vector;

    std::uint64_t sample_count = 10000; // M
    std::uint64_t replicates = 20;      // R
    std::uint64_t seed = kDefaultSeed;

    std::vector<std::int64_t> n_list;  // study-n grid
    std::vector<std::uint64_t> m_list; // study-m grid
    Vec j_list;                        // sweep-cw grid
    std::vector<MsParams> cases;       // sweep-ms cases (canonical list if empty)

    std::string output_dir; // empty: $MFSPIN_OUTDIR if set, else "."
    std::string output_stem;
    std::string format = "csv"; // csv | json

    bool operator==(const RunConfig&) const = default;
};

// argv-style arguments (program name excluded). Flags override values from
// --config <file>; the file is a flat key-value JSON document. Keys starting
// with '_' are reserved for manifest annotations and ignored.
RunConfig parse_config(const std::vector<std::string>& args);

// The same key-value schema used by config files and manifests.
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& cfg);

// Executes the configured command and writes its outputs plus a manifest;
// returns the written paths.
std::vector<std::string> run_and_emit(const RunConfig& cfg);

// Full CLI entry: parse, run, map errors to exit codes
// (0 ok, 2 usage, 3 numerical, 4 resource).
int cli_main(int argc, const char* const* argv);

} // namespace mfspin

#endif
