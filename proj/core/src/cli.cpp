#include "coinwalk/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "coinwalk/oracle.hpp"
#include "coinwalk/rng.hpp"
#include "coinwalk/teleport.hpp"
#include "coinwalk/transfer.hpp"
#include "coinwalk/verify.hpp"

namespace coinwalk::cli {

using json = nlohmann::ordered_json;

std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::TransferLine: return "transfer-line";
        case Protocol::TransferCycle: return "transfer-cycle";
        case Protocol::TransferComplete: return "transfer-complete";
        case Protocol::TransferRegular: return "transfer-regular";
        case Protocol::TeleportLine: return "teleport-line";
        case Protocol::TeleportCycle: return "teleport-cycle";
        case Protocol::TeleportComplete: return "teleport-complete";
        case Protocol::TeleportRegular: return "teleport-regular";
        case Protocol::VerifyAll: return "verify-all";
        case Protocol::Certify: return "certify";
    }
    return "?";
}

Protocol protocol_from_name(const std::string& name) {
    for (Protocol p : {Protocol::TransferLine, Protocol::TransferCycle, Protocol::TransferComplete,
                       Protocol::TransferRegular, Protocol::TeleportLine, Protocol::TeleportCycle,
                       Protocol::TeleportComplete, Protocol::TeleportRegular, Protocol::VerifyAll,
                       Protocol::Certify})
        if (protocol_name(p) == name) return p;
    throw ConfigError("unknown protocol '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::int64_t parse_int(const std::string& value, const std::string& what) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + " expects an integer, got '" + value + "'");
    }
}

Complex parse_amplitude(const std::string& token) {
    const auto comma = token.find(',');
    if (comma == std::string::npos)
        throw ConfigError("amplitude '" + token + "' must be re,im");
    try {
        std::size_t used = 0;
        const double re = std::stod(token.substr(0, comma), &used);
        const double im = std::stod(token.substr(comma + 1), &used);
        return {re, im};
    } catch (const std::exception&) {
        throw ConfigError("amplitude '" + token + "' must be re,im");
    }
}

void set_input_amplitudes(RunConfig& config, const std::vector<std::string>& tokens) {
    Vec amps;
    amps.reserve(tokens.size());
    for (const std::string& tok : tokens) amps.push_back(parse_amplitude(tok));
    const double n = vec_norm(amps);
    if (n < 1e-12) throw ConfigError("input state must be nonzero");
    if (std::abs(n - 1.0) > 1e-6)
        config.warnings.push_back("input norm " + std::to_string(n) + " renormalized to 1");
    for (Complex& c : amps) c /= n;
    config.input = std::move(amps);
    config.random_input = false;
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "protocol") {
        config.protocol = protocol_from_name(value);
    } else if (key == "d") {
        config.d = parse_int(value, "d");
    } else if (key == "n") {
        config.n = parse_int(value, "n");
    } else if (key == "x" || key == "target") {
        config.x = parse_int(value, "x");
    } else if (key == "t") {
        config.t = parse_int(value, "t");
    } else if (key == "method") {
        config.method = static_cast<int>(parse_int(value, "method"));
    } else if (key == "start") {
        config.start = parse_int(value, "start");
    } else if (key == "seed" || key == "input.seed") {
        config.seed = static_cast<std::uint64_t>(parse_int(value, "seed"));
    } else if (key == "trials") {
        config.trials = static_cast<int>(parse_int(value, "trials"));
    } else if (key == "mode") {
        if (value == "enumerate")
            config.mode = RunConfig::Mode::Enumerate;
        else if (value == "sample")
            config.mode = RunConfig::Mode::Sample;
        else
            throw ConfigError("mode must be enumerate or sample");
    } else if (key == "input" || key == "input.amplitudes") {
        if (value == "random") {
            config.random_input = true;
            config.input.reset();
        } else {
            std::istringstream in(value);
            std::vector<std::string> tokens;
            for (std::string tok; in >> tok;) tokens.push_back(tok);
            set_input_amplitudes(config, tokens);
        }
    } else if (key == "input.random") {
        config.random_input = value == "true" || value == "1";
    } else if (key == "output.path" || key == "out") {
        config.out_path = value;
    } else if (key == "output.format" || key == "format") {
        if (value != "csv" && value != "structured")
            throw ConfigError("format must be csv or structured");
        config.format = value;
    } else if (key == "output.trace" || key == "trace") {
        config.trace = value == "true" || value == "1";
    } else if (key == "certify.protocol") {
        config.certify_target = protocol_from_name(value);
    } else if (key == "corrupt") {
        config.corrupt = value == "true" || value == "1";
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void validate(RunConfig& config) {
    auto need = [&](bool present, const std::string& what) {
        if (!present)
            throw ConfigError(protocol_name(config.protocol) + " requires " + what);
    };
    switch (config.protocol) {
        case Protocol::TransferLine: need(config.x.has_value(), "--target"); break;
        case Protocol::TransferCycle:
            need(config.d.has_value(), "--d");
            need(config.x.has_value(), "--target");
            if (config.method < 1 || config.method > 4)
                throw ConfigError("method must be 1..4");
            break;
        case Protocol::TransferComplete:
            need(config.d.has_value(), "--d");
            need(config.x.has_value(), "--target");
            break;
        case Protocol::TransferRegular:
            need(config.n.has_value(), "--n");
            need(config.d.has_value(), "--d");
            need(config.x.has_value(), "--target");
            break;
        case Protocol::TeleportLine: need(config.n.has_value(), "--n"); break;
        case Protocol::TeleportCycle: need(config.d.has_value(), "--d"); break;
        case Protocol::TeleportComplete:
            need(config.d.has_value(), "--d");
            need(config.t.has_value(), "--t");
            if (std::gcd(*config.t, *config.d) != 1) throw ConfigError("gcd(t,d) must be 1");
            break;
        case Protocol::TeleportRegular:
            need(config.n.has_value(), "--n");
            need(config.d.has_value(), "--d");
            need(config.t.has_value(), "--t");
            if (std::gcd(((*config.t % *config.n) + *config.n) % *config.n, *config.n) != 1)
                throw ConfigError("t mod n must lie in the coprime residue set A(n)");
            break;
        case Protocol::VerifyAll: break;
        case Protocol::Certify:
            need(config.certify_target.has_value(), "--protocol <transfer-*>");
            switch (*config.certify_target) {
                case Protocol::TransferLine: need(config.x.has_value(), "--target"); break;
                case Protocol::TransferCycle:
                    need(config.d.has_value(), "--d");
                    need(config.x.has_value(), "--target");
                    break;
                case Protocol::TransferComplete:
                    need(config.d.has_value(), "--d");
                    need(config.x.has_value(), "--target");
                    break;
                case Protocol::TransferRegular:
                    need(config.n.has_value(), "--n");
                    need(config.d.has_value(), "--d");
                    break;
                default:
                    throw ConfigError("certify targets the transfer protocols");
            }
            break;
    }
    if (config.trials < 1) throw ConfigError("trials must be >= 1");
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string section;
    for (std::string raw; std::getline(in, raw);) {
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        apply_key(config, section.empty() ? key : section + "." + key, value);
    }
    return config;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig config;
    bool have_protocol = false;

    // a config file forms the base; everything else overrides it
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config expects a path");
            std::ifstream file(args[i + 1]);
            if (!file) throw ConfigError("cannot read config file '" + args[i + 1] + "'");
            std::ostringstream text;
            text << file.rdbuf();
            config = parse_config_text(text.str());
            have_protocol = true; // file must name it or flags will
        }
    }

    std::size_t i = 0;
    if (i < args.size() && !args[i].starts_with("--")) {
        config.protocol = protocol_from_name(args[i]);
        have_protocol = true;
        ++i;
    }
    auto value_of = [&](const std::string& flag) {
        if (i + 1 >= args.size()) throw ConfigError(flag + " expects a value");
        return args[++i];
    };
    for (; i < args.size(); ++i) {
        const std::string& flag = args[i];
        if (flag == "--config") {
            ++i; // consumed above
        } else if (flag == "--d" || flag == "--n" || flag == "--t" || flag == "--method" ||
                   flag == "--start" || flag == "--seed" || flag == "--trials" ||
                   flag == "--format" || flag == "--out" || flag == "--mode") {
            apply_key(config, flag.substr(2), value_of(flag));
        } else if (flag == "--target" || flag == "--x") {
            apply_key(config, "x", value_of(flag));
        } else if (flag == "--protocol") {
            config.certify_target = protocol_from_name(value_of(flag));
        } else if (flag == "--input") {
            std::vector<std::string> tokens;
            while (i + 1 < args.size() && !args[i + 1].starts_with("--")) tokens.push_back(args[++i]);
            if (tokens.empty()) throw ConfigError("--input expects re,im pairs or 'random'");
            if (tokens.size() == 1 && tokens[0] == "random") {
                config.random_input = true;
                config.input.reset();
            } else {
                set_input_amplitudes(config, tokens);
            }
        } else if (flag == "--random") {
            config.random_input = true;
            config.input.reset();
        } else if (flag == "--enumerate") {
            config.mode = RunConfig::Mode::Enumerate;
        } else if (flag == "--sample") {
            config.mode = RunConfig::Mode::Sample;
        } else if (flag == "--trace") {
            config.trace = true;
        } else if (flag == "--corrupt") {
            config.corrupt = true;
        } else {
            throw ConfigError("unknown flag '" + flag + "'");
        }
    }
    if (!have_protocol) throw ConfigError("no protocol given");
    validate(config);
    return config;
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json complex_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

json vec_json(const Vec& v) {
    json out = json::array();
    for (const Complex& c : v) out.push_back(complex_json(c));
    return out;
}

json trace_json(const std::vector<WalkState>& trace) {
    json rows = json::array();
    for (std::size_t step = 0; step < trace.size(); ++step)
        for (const auto& [label, amp] : trace[step].amps) {
            json row;
            row["step"] = step;
            row["position"] = label.position;
            row["coins"] = label.coins;
            row["re"] = amp.real();
            row["im"] = amp.imag();
            rows.push_back(std::move(row));
        }
    return rows;
}

Vec resolve_input(const RunConfig& config, std::size_t dim, json& input_doc) {
    if (config.input) {
        if (config.input->size() != dim)
            throw ConfigError("input has " + std::to_string(config.input->size()) +
                              " amplitudes, protocol needs " + std::to_string(dim));
        input_doc["amplitudes"] = vec_json(*config.input);
        return *config.input;
    }
    Rng rng(config.seed);
    Vec input = random_state_vector(dim, rng);
    input_doc["random"] = true;
    input_doc["seed"] = config.seed;
    input_doc["amplitudes"] = vec_json(input);
    return input;
}

json placements_json(const TransferPlan& plan) {
    json placements = json::array();
    for (const auto& [step, coin, op] : plan.nonidentity_placements()) {
        json row;
        row["step"] = step;
        row["coin"] = coin + 1; // displayed 1-based, as in the schedule tables
        row["op"] = op.name();
        placements.push_back(std::move(row));
    }
    return placements;
}

json certification_json(const CertificationRecord& record) {
    json out;
    out["pass"] = record.pass;
    out["inputs_checked"] = record.inputs_checked;
    out["min_fidelity"] = record.min_fidelity;
    if (record.recovery) {
        out["solved_recovery"] = {{"coin1", record.recovery->u1_name},
                                  {"coin2", record.recovery->u2_name}};
    }
    if (!record.counterexample.empty()) out["counterexample"] = vec_json(record.counterexample);
    return out;
}

bool needs_certification(CaseTag tag) {
    return tag == CaseTag::C_M3_odd || tag == CaseTag::C_M4 || tag == CaseTag::KD_regular;
}

RunResult render(const RunConfig& config, json doc, bool pass,
                 const std::vector<WalkState>* trace) {
    RunResult result;
    result.pass = pass;
    result.exit_code = pass ? 0 : 1;
    if (config.format == "csv")
        result.report = trace_to_csv(trace && config.trace ? *trace : std::vector<WalkState>{});
    else
        result.report = doc.dump(2) + "\n";
    return result;
}

RunResult run_transfer_protocol(const RunConfig& config) {
    TransferPlan plan = [&] {
        switch (config.protocol) {
            case Protocol::TransferLine: return plan_line(*config.x);
            case Protocol::TransferCycle: return plan_cycle(*config.d, *config.x, config.method);
            case Protocol::TransferComplete: return plan_complete(*config.d, *config.x);
            default: return plan_regular(*config.n, *config.d, *config.x);
        }
    }();

    json doc;
    doc["protocol"] = protocol_name(config.protocol);
    json params;
    if (config.d) params["d"] = *config.d;
    if (config.n) params["n"] = *config.n;
    params["x"] = *config.x;
    if (config.protocol == Protocol::TransferCycle) params["method"] = config.method;
    if (config.start != 0) params["start"] = config.start;
    doc["parameters"] = std::move(params);

    json input_doc;
    const Vec input = resolve_input(config, static_cast<std::size_t>(plan.coin_dims()[0]), input_doc);
    doc["input"] = std::move(input_doc);
    if (!config.warnings.empty()) doc["warnings"] = config.warnings;

    const TransferReport report = config.start != 0 && config.protocol == Protocol::TransferLine
                                      ? route_from(config.start, plan, input)
                                      : run_transfer(plan, input);

    doc["case"] = case_tag_name(plan.tag);
    doc["step_count"] = plan.step_count();
    doc["coin_placements"] = placements_json(plan);
    doc["recovery"] = {{"coin1", plan.recovery_coin1.name()}, {"coin2", plan.recovery_coin2.name()}};
    if (needs_certification(plan.tag))
        doc["certification"] = certification_json(certify_schedule(plan, config.trials));
    doc["fidelity"] = report.fidelity;
    if (config.trace && config.format != "csv") doc["trace"] = trace_json(report.trace);
    doc["verdict"] = report.pass ? "pass" : "fail";
    return render(config, std::move(doc), report.pass, &report.trace);
}

RunResult run_teleport_protocol(const RunConfig& config) {
    const TeleportPlan plan = [&] {
        switch (config.protocol) {
            case Protocol::TeleportLine: return line_teleport_plan(*config.n);
            case Protocol::TeleportCycle: return cycle_teleport_plan(*config.d);
            case Protocol::TeleportComplete: return complete_teleport_plan(*config.d, *config.t);
            default: return regular_teleport_plan(*config.n, *config.d, *config.t);
        }
    }();

    json doc;
    doc["protocol"] = protocol_name(config.protocol);
    json params;
    if (config.n) params["n"] = *config.n;
    if (config.d) params["d"] = *config.d;
    if (config.t) params["t"] = *config.t;
    params["steps"] = 2 * plan.half_steps;
    doc["parameters"] = std::move(params);

    json input_doc;
    const Vec input = resolve_input(config, static_cast<std::size_t>(plan.coin_dims[0]), input_doc);
    doc["input"] = std::move(input_doc);
    if (!config.warnings.empty()) doc["warnings"] = config.warnings;

    const auto branches = run_teleport(plan, input);
    bool pass = true;
    double total = 0.0;
    json rows = json::array();
    for (const MeasurementBranch& b : branches) {
        const double fid = vec_fidelity_up_to_phase(b.corrected, input);
        pass = pass && fid >= 1.0 - kResultTol;
        total += b.probability;
        json row;
        row["position"] = b.position_outcome;
        row["coin1"] = b.coin1_outcome;
        row["probability"] = b.probability;
        row["fidelity"] = fid;
        rows.push_back(std::move(row));
    }
    pass = pass && std::abs(total - 1.0) <= kResultTol;
    doc["mode"] = config.mode == RunConfig::Mode::Sample ? "sample" : "enumerate";
    doc["branches"] = std::move(rows);
    doc["probability_total"] = total;

    if (config.mode == RunConfig::Mode::Sample) {
        const MeasurementBranch picked = sample_branch(branches, config.seed);
        json chosen;
        chosen["position"] = picked.position_outcome;
        chosen["coin1"] = picked.coin1_outcome;
        chosen["probability"] = picked.probability;
        chosen["corrected"] = vec_json(picked.corrected);
        chosen["seed"] = config.seed;
        doc["sampled"] = std::move(chosen);
    }

    std::vector<WalkState> trace;
    if (config.trace) {
        trace.push_back(teleport_initial(plan, input));
        const int dim = static_cast<int>(plan.coin_dims[0]);
        for (std::int64_t i = 1; i <= 2 * plan.half_steps; ++i)
            trace.push_back(apply_step(trace.back(), make_step(plan.arena, (i % 2 == 1) ? 0 : 1,
                                                               CoinOp::identity(dim))));
        if (config.format != "csv") doc["trace"] = trace_json(trace);
    }
    doc["verdict"] = pass ? "pass" : "fail";
    return render(config, std::move(doc), pass, &trace);
}

RunResult run_verify_all(const RunConfig& config) {
    const auto criteria = verify::run_all_criteria();
    bool pass = true;
    json rows = json::array();
    for (const auto& c : criteria) {
        pass = pass && c.pass;
        json row;
        row["id"] = c.id;
        row["name"] = c.name;
        row["pass"] = c.pass;
        row["detail"] = c.detail;
        rows.push_back(std::move(row));
    }
    json doc;
    doc["protocol"] = "verify-all";
    doc["criteria"] = std::move(rows);
    doc["verdict"] = pass ? "pass" : "fail";
    return render(config, std::move(doc), pass, nullptr);
}

RunResult run_certify(const RunConfig& config) {
    json doc;
    doc["protocol"] = "certify";
    doc["target"] = protocol_name(*config.certify_target);
    json params;
    if (config.d) params["d"] = *config.d;
    if (config.n) params["n"] = *config.n;
    if (config.x) params["x"] = *config.x;
    if (*config.certify_target == Protocol::TransferCycle) params["method"] = config.method;
    doc["parameters"] = std::move(params);
    doc["corrupted"] = config.corrupt;

    auto build = [&](std::int64_t x) {
        switch (*config.certify_target) {
            case Protocol::TransferLine: return plan_line(x);
            case Protocol::TransferCycle: return plan_cycle(*config.d, x, config.method);
            case Protocol::TransferComplete: return plan_complete(*config.d, x);
            default: return plan_regular(*config.n, *config.d, x);
        }
    };

    std::vector<std::int64_t> targets;
    if (config.x)
        targets.push_back(*config.x);
    else if (*config.certify_target == Protocol::TransferRegular)
        for (std::int64_t x = 1; x < *config.n; ++x) targets.push_back(x);
    else
        throw ConfigError("certify requires --target for this protocol");

    bool pass = true;
    json records = json::array();
    json feasible = json::array();
    for (std::int64_t x : targets) {
        TransferPlan plan = build(x);
        if (config.corrupt) plan = corrupt_schedule(std::move(plan));
        const CertificationRecord record = certify_schedule(plan, config.trials);
        pass = pass && record.pass;
        json row = certification_json(record);
        row["x"] = x;
        row["case"] = case_tag_name(plan.tag);
        row["step_count"] = plan.step_count();
        records.push_back(std::move(row));
        if (record.pass) feasible.push_back(x);
    }
    doc["records"] = std::move(records);
    doc["feasible_targets"] = std::move(feasible);
    doc["verdict"] = pass ? "pass" : "fail";
    return render(config, std::move(doc), pass, nullptr);
}

} // namespace

RunResult run(const RunConfig& config) {
    switch (config.protocol) {
        case Protocol::TransferLine:
        case Protocol::TransferCycle:
        case Protocol::TransferComplete:
        case Protocol::TransferRegular:
            return run_transfer_protocol(config);
        case Protocol::TeleportLine:
        case Protocol::TeleportCycle:
        case Protocol::TeleportComplete:
        case Protocol::TeleportRegular:
            return run_teleport_protocol(config);
        case Protocol::VerifyAll:
            return run_verify_all(config);
        case Protocol::Certify:
            return run_certify(config);
    }
    throw ConfigError("unhandled protocol");
}

std::string trace_to_csv(const std::vector<WalkState>& trace) {
    std::string out = "step,position,coin1,coin2,re,im\n";
    for (std::size_t step = 0; step < trace.size(); ++step)
        for (const auto& [label, amp] : trace[step].amps) {
            out += std::to_string(step);
            out += ',';
            out += std::to_string(label.position);
            for (std::int32_t c : label.coins) {
                out += ',';
                out += std::to_string(c);
            }
            out += ',';
            out += fmt17(amp.real());
            out += ',';
            out += fmt17(amp.imag());
            out += '\n';
        }
    return out;
}

std::vector<WalkState> trace_from_csv(const std::string& text, const GraphSpec& arena,
                                      const std::vector<std::int32_t>& coin_dims) {
    std::vector<WalkState> trace;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::istringstream row(line);
        std::vector<std::string> cells;
        for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
        if (cells.size() != 4 + coin_dims.size())
            throw ConfigError("trace row with " + std::to_string(cells.size()) + " columns");
        const auto step = static_cast<std::size_t>(std::stoll(cells[0]));
        while (trace.size() <= step) trace.push_back(WalkState{arena, coin_dims, {}});
        BasisLabel label;
        label.position = std::stoll(cells[1]);
        for (std::size_t m = 0; m < coin_dims.size(); ++m)
            label.coins.push_back(static_cast<std::int32_t>(std::stoll(cells[2 + m])));
        trace[step].amps[label] = {std::stod(cells[cells.size() - 2]),
                                   std::stod(cells[cells.size() - 1])};
    }
    return trace;
}

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const ConfigError*>(&error) || dynamic_cast<const TargetError*>(&error) ||
        dynamic_cast<const MethodError*>(&error) || dynamic_cast<const ArenaError*>(&error) ||
        dynamic_cast<const ParityError*>(&error) ||
        dynamic_cast<const CoprimalityError*>(&error) ||
        dynamic_cast<const LabelError*>(&error) ||
        dynamic_cast<const SpaceMismatchError*>(&error) ||
        dynamic_cast<const ZeroStateError*>(&error))
        return 2;
    return 3;
}

} // namespace coinwalk::cli
