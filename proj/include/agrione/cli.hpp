#pragma once

// Subcommands of the agrione tool. Each returns its process exit code;
// diagnostics go to err, data goes to out only when no output path is set.

#include <iosfwd>
#include <optional>
#include <string>

namespace agrione::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kConfigError = 2,
    kMalformedLog = 3,
    kNoValidSamples = 4,
    kFrameError = 5,
    kIoError = 6,
};

struct SimulateOptions {
    std::string config;
    std::optional<std::string> out_log;
    std::optional<std::string> out_summary;
    std::optional<std::uint64_t> seed;
};

struct ValidateOptions {
    std::string log;
    std::optional<std::string> out;
};

struct MapOptions {
    std::string log;
    std::optional<std::string> out_points;
    std::optional<std::string> out_grid;
    std::optional<double> cell_size;
    std::optional<double> power;
    // Scenario whose field frame and IDW settings apply; otherwise the frame
    // is anchored at the south-west corner of the logged points.
    std::optional<std::string> config;
};

struct CodecOptions {
    std::optional<std::string> parse_hex;
    std::optional<std::string> encode;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_map(const MapOptions& opt, std::ostream& out, std::ostream& err);
int cmd_codec(const CodecOptions& opt, std::ostream& out, std::ostream& err);

// Full command line, argv[0] included.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace agrione::cli
