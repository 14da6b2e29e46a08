#pragma once

// Command-line front end: config parsing (flags and key/value files),
// protocol dispatch, and report/trace serialization. The binary in tools/
// is a thin wrapper over parse_config + run.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coinwalk/hilbert.hpp"
#include "coinwalk/linalg.hpp"

namespace coinwalk::cli {

enum class Protocol {
    TransferLine,
    TransferCycle,
    TransferComplete,
    TransferRegular,
    TeleportLine,
    TeleportCycle,
    TeleportComplete,
    TeleportRegular,
    VerifyAll,
    Certify,
};

std::string protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name); // ConfigError on unknown

struct RunConfig {
    Protocol protocol = Protocol::VerifyAll;
    std::optional<std::int64_t> d, n, x, t;
    int method = 1;
    std::int64_t start = 0;

    std::optional<Vec> input; // explicit amplitudes (normalized on parse)
    bool random_input = false;
    std::uint64_t seed = 1;

    enum class Mode { Enumerate, Sample } mode = Mode::Enumerate;
    bool trace = false;
    std::string format = "structured"; // "csv" | "structured"
    std::optional<std::string> out_path;

    std::optional<Protocol> certify_target; // certify subcommand
    int trials = 5;
    bool corrupt = false;

    std::vector<std::string> warnings;
};

// Subcommand plus flags; `--config FILE` loads a key/value document first
// and the remaining flags override it. Throws ConfigError with the violated
// precondition named.
RunConfig parse_config(const std::vector<std::string>& args);

// Key/value document alone (sections become dotted keys).
RunConfig parse_config_text(const std::string& text);

struct RunResult {
    int exit_code = 0;   // 0 pass, 1 fidelity failure
    std::string report;  // rendered in the requested format
    bool pass = false;
};

RunResult run(const RunConfig& config);

// step,position,coin1,coin2,re,im with 17 significant digits; one row per
// nonzero amplitude, steps ascending, labels ascending within a step.
std::string trace_to_csv(const std::vector<WalkState>& trace);
std::vector<WalkState> trace_from_csv(const std::string& text, const GraphSpec& arena,
                                      const std::vector<std::int32_t>& coin_dims);

// Exit-code families: 0 pass, 1 fidelity failure, 2 config/precondition,
// 3 internal or oracle guard.
int exit_code_for(const std::exception& error);

} // namespace coinwalk::cli
