#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "coinwalk/cli.hpp"

namespace {

constexpr const char* kUsage = R"(coinwalk - discrete-time quantum walks with two coins

usage: coinwalk <protocol> [flags]

protocols:
  transfer-line --target X            qubit transfer on the infinite line
  transfer-cycle --d D --target X --method 1..4
  transfer-complete --d D --target X  qudit transfer, looped complete graph
  transfer-regular --n N --d D --target X
  teleport-line --n N                 qubit teleportation, N even steps
  teleport-cycle --d D                D divisible by 4
  teleport-complete --d D --t T       gcd(T,D) = 1
  teleport-regular --n N --d D --t T  N >= 2D-1, T coprime to N
  verify-all                          run the full verification grid
  certify --protocol <transfer-*> ... oracle-certify a schedule

flags:
  --input re,im re,im ... | --input random | --random
  --seed S           random input / sampling seed (default 1)
  --start L          initial position (transfer-line routing)
  --enumerate | --sample
  --trace            include the per-step amplitude trace
  --format csv|structured
  --out PATH         write the report to a file instead of stdout
  --config PATH      key/value config file; flags override it
  --trials K         certification trials (default 5)
  --corrupt          certify negative control: corrupt the schedule first
)";

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        std::cout << kUsage;
        return args.empty() ? 2 : 0;
    }
    try {
        const coinwalk::cli::RunConfig config = coinwalk::cli::parse_config(args);
        const coinwalk::cli::RunResult result = coinwalk::cli::run(config);
        if (config.out_path) {
            std::ofstream out(*config.out_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write " << *config.out_path << "\n";
                return 3;
            }
            out << result.report;
        } else {
            std::cout << result.report;
        }
        return result.exit_code;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return coinwalk::cli::exit_code_for(error);
    }
}
