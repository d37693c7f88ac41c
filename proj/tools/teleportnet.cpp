// teleportnet CLI: build channels, run protocols and scenarios, emit
// correction tables and machine-readable transcripts, and run the
// brute-force verification suites.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 protocol
// incomplete (withheld sender), 4 verification failure.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teleportnet/channel.hpp"
#include "teleportnet/harness.hpp"
#include "teleportnet/oracle.hpp"
#include "teleportnet/paper_tables.hpp"
#include "teleportnet/protocol.hpp"
#include "teleportnet/serialize.hpp"

namespace {

using namespace teleportnet;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIncomplete = 3;
constexpr int kExitVerifyFailed = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TELEPORTNET_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 0;
}

ChannelKind parse_kind(const std::string& s) {
    if (s == "product") return ChannelKind::Product;
    if (s == "entangled") return ChannelKind::Entangled;
    throw std::invalid_argument("kind must be 'product' or 'entangled'");
}

std::vector<BellOutcome> parse_forced(const std::string& spec) {
    std::vector<BellOutcome> outcomes;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token.erase(std::remove(token.begin(), token.end(), ' '), token.end());
        outcomes.push_back(outcome_from_token(token));
    }
    return outcomes;
}

// "are,aim,bre,bim;are,aim,bre,bim;..."
std::vector<InputQubit> parse_inputs(const std::string& spec) {
    std::vector<InputQubit> inputs;
    std::stringstream ss(spec);
    std::string qubit;
    while (std::getline(ss, qubit, ';')) {
        std::stringstream qs(qubit);
        std::string part;
        std::vector<double> v;
        while (std::getline(qs, part, ',')) v.push_back(std::stod(part));
        if (v.size() != 4)
            throw std::invalid_argument("each input needs 4 numbers: are,aim,bre,bim");
        inputs.push_back({{v[0], v[1]}, {v[2], v[3]}});
    }
    return inputs;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

std::string bitstring(std::size_t index, int n) {
    std::string s(n, '0');
    for (int i = 0; i < n; ++i)
        if ((index >> (n - 1 - i)) & 1u) s[i] = '1';
    return s;
}

int cmd_channel(int n, const std::string& kind_str, const std::string& out_path) {
    ChannelKind kind;
    StateVector s;
    try {
        kind = parse_kind(kind_str);
        s = build_channel(n, kind);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    json terms = json::array();
    int count = 0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const cplx a = s.amp(i);
        if (std::abs(a) <= kNormTol) continue;
        terms.push_back(json{{"basis", bitstring(i, s.num_qubits())},
                             {"amp", to_json(a)}});
        ++count;
    }
    json record{{"schema_version", kSchemaVersion},
                {"n", n},
                {"kind", to_string(kind)},
                {"num_qubits", s.num_qubits()},
                {"terms", std::move(terms)}};
    std::cout << "terms=" << count << " norm=" << std::sqrt(s.norm_squared()) << "\n";
    if (!out_path.empty() && !write_file(out_path, serialize_record(record))) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitIo;
    }
    if (out_path.empty()) std::cout << serialize_record(record);
    return kExitOk;
}

int cmd_run(int n, const std::string& kind_str, const std::string& inputs_spec,
            const std::string& votes, const std::string& forced_spec,
            const std::vector<int>& withhold, std::uint64_t seed,
            const std::string& out_path, bool timing) {
    const auto start = std::chrono::steady_clock::now();
    harness::ScenarioConfig config;
    try {
        config.n = n;
        config.kind = parse_kind(kind_str);
        config.policy = OutcomePolicy::seeded(seed);
        if (!forced_spec.empty()) {
            auto forced = parse_forced(forced_spec);
            if (static_cast<int>(forced.size()) != n)
                throw std::invalid_argument("forced outcome list has wrong length");
            config.policy.forced = std::move(forced);
            config.policy.seed = seed;
        }
        if (!votes.empty()) {
            config.vote_mode = true;
            for (char c : votes) {
                if (c != '0' && c != '1')
                    throw std::invalid_argument("votes must be a bit string");
                config.votes.push_back(c - '0');
            }
        }
        if (!inputs_spec.empty()) config.explicit_inputs = parse_inputs(inputs_spec);
        if (!withhold.empty()) {
            config.participation.assign(n, true);
            for (int w : withhold) {
                if (w < 1 || w > n)
                    throw std::invalid_argument("withheld index out of range");
                config.participation[w - 1] = false;
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    harness::ScenarioReport report;
    try {
        report = harness::run_scenario(config);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    json record{{"schema_version", kSchemaVersion},
                {"command", "run"},
                {"config",
                 json{{"n", n},
                      {"kind", to_string(config.kind)},
                      {"vote_mode", config.vote_mode},
                      {"seed", seed}}},
                {"report", to_json(report)}};
    if (timing) {
        const auto elapsed = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        record["timing_ms"] = elapsed;
    }

    const bool incomplete = !report.transcript.final_state.has_value();
    if (incomplete) {
        std::cout << "protocol incomplete (withheld sender)\n";
        if (report.withheld) {
            std::cout << "withheld fidelity corrected=" << report.withheld->fidelity_corrected
                      << " uncorrected=" << report.withheld->fidelity_uncorrected << "\n";
        }
    } else {
        std::cout << "fidelity=" << report.transcript.fidelity.value_or(0.0) << "\n";
        if (report.tally)
            std::cout << "tally yes=" << report.tally->yes
                      << " no=" << report.tally->no << "\n";
    }
    if (!out_path.empty() && !write_file(out_path, serialize_record(record))) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitIo;
    }
    return incomplete ? kExitIncomplete : kExitOk;
}

int cmd_tables(int n, const std::string& compare, const std::string& out_path) {
    std::vector<CorrectionTableRow> table;
    try {
        if (compare != "none" && compare != "paper")
            throw std::invalid_argument("compare must be 'none' or 'paper'");
        if (compare == "paper" && n != 2 && n != 3)
            throw std::invalid_argument("paper tables exist only for N = 2 and 3");
        table = generate_correction_table(n);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ostringstream body;
    for (const CorrectionTableRow& row : table) {
        std::string outcomes;
        for (BellOutcome o : row.outcomes) {
            if (!outcomes.empty()) outcomes += ',';
            outcomes += to_string(o);
        }
        body << outcomes << '\t' << format_correction(row.correction) << '\t'
             << row.state_desc << '\t' << (row.verified ? "verified" : "FAILED")
             << '\n';
    }
    std::cout << table.size() << " rows generated, all numerically "
              << (std::all_of(table.begin(), table.end(),
                              [](const auto& r) { return r.verified; })
                      ? "verified"
                      : "VERIFICATION FAILED")
              << "\n";

    if (compare == "paper") {
        paper_tables::TableDiff diff = paper_tables::compare_with_paper(table, n);
        std::cout << diff.matches << "/" << diff.entries << " rows match\n";
        if (diff.reordered > 0)
            std::cout << diff.reordered
                      << " entries match the printed row but not its printed order\n";
        for (const paper_tables::Mismatch& m : diff.mismatches) {
            std::string outcomes;
            for (BellOutcome o : m.outcomes) {
                if (!outcomes.empty()) outcomes += ',';
                outcomes += to_string(o);
            }
            std::cout << "mismatch at (" << outcomes << "): generated '"
                      << m.generated << "' vs printed '" << m.printed << "'\n";
        }
    }

    if (!out_path.empty() && !write_file(out_path, body.str())) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

struct PropertyResult {
    std::string name;
    int n = 0;
    bool pass = false;
    double measured = 0.0;
};

int cmd_verify(const std::string& range, int samples, std::uint64_t seed) {
    int lo = 0, hi = 0;
    try {
        const auto dots = range.find("..");
        if (dots == std::string::npos) {
            lo = hi = std::stoi(range);
        } else {
            lo = std::stoi(range.substr(0, dots));
            hi = std::stoi(range.substr(dots + 2));
        }
        if (lo < 1 || hi > 7 || lo > hi)
            throw std::invalid_argument("range must lie within 1..7");
    } catch (const std::exception&) {
        std::cerr << "error: invalid range '" << range << "'\n";
        return kExitUsage;
    }

    std::vector<PropertyResult> results;
    auto record = [&](const std::string& name, int n, bool pass, double measured) {
        results.push_back({name, n, pass, measured});
    };

    for (int n = lo; n <= hi; ++n) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
        const std::vector<InputQubit> inputs = sample_generic_inputs(n, rng);

        // Channel structure, both kinds.
        {
            bool ok = verify_channel_structure(build_product_channel(n), n,
                                               ChannelKind::Product);
            if (n >= 2)
                ok = ok && verify_channel_structure(build_entangled_channel(n), n,
                                                    ChannelKind::Entangled);
            record("channel-structure", n, ok, ok ? 0.0 : 1.0);
        }

        // Perfect teleportation and probability uniformity.
        const double expected_p = std::pow(0.25, n);
        if (n <= 4) {
            for (ChannelKind kind : {ChannelKind::Entangled, ChannelKind::Product}) {
                oracle::EnumerationReport rep =
                    oracle::enumerate_all_outcomes(inputs, kind);
                double worst_f = 0.0, worst_p = 0.0;
                for (const oracle::OutcomeReport& r : rep.reports) {
                    worst_f = std::max(worst_f,
                                       std::abs(r.fidelity.value_or(0.0) - 1.0));
                    worst_p = std::max(worst_p, std::abs(r.probability - expected_p));
                }
                const std::string tag = to_string(kind);
                record("teleport-fidelity-" + tag, n, worst_f <= 1e-10, worst_f);
                record("probability-uniform-" + tag, n, worst_p <= 1e-10, worst_p);
                record("probability-closure-" + tag, n,
                       std::abs(rep.probability_sum - 1.0) <= 1e-9,
                       std::abs(rep.probability_sum - 1.0));
            }
        } else {
            std::uniform_int_distribution<std::size_t> pick(
                0, (std::size_t{1} << (2 * n)) - 1);
            double worst_f = 0.0, worst_p = 0.0;
            for (int k = 0; k < samples; ++k) {
                Transcript t = run_protocol(
                    inputs, ChannelKind::Entangled,
                    OutcomePolicy::force(outcome_tuple(n, pick(rng))));
                worst_f = std::max(worst_f, std::abs(t.fidelity.value_or(0.0) - 1.0));
                worst_p = std::max(worst_p,
                                   std::abs(t.outcome_probability - expected_p));
            }
            record("teleport-fidelity-sampled", n, worst_f <= 1e-10, worst_f);
            record("probability-uniform-sampled", n, worst_p <= 1e-10, worst_p);
        }

        // Privacy: uniform outcome marginals per sender.
        {
            double worst = 0.0;
            for (int i = 1; i <= n; ++i)
                for (double p :
                     oracle::sender_outcome_marginal(inputs, ChannelKind::Entangled, i))
                    worst = std::max(worst, std::abs(p - 0.25));
            record("outcome-marginal-uniform", n, worst <= 1e-10, worst);
        }

        // Privacy: outcome-averaged receiver state is input-independent.
        if (n <= 4) {
            DensityMatrix a = oracle::average_receiver_state(inputs, ChannelKind::Entangled);
            DensityMatrix b = oracle::average_receiver_state(
                sample_generic_inputs(n, rng), ChannelKind::Entangled);
            const double d =
                std::max(oracle::max_entry_distance(a, b),
                         oracle::max_entry_distance(a, oracle::maximally_mixed(n)));
            record("averaged-state-mixed", n, d <= 1e-10, d);
        }

        // All-or-nothing: withheld sender breaks the entangled channel but not
        // the product baseline.
        if (n >= 2 && n <= 4) {
            oracle::WithheldReport ent = oracle::withheld_report(
                inputs, ChannelKind::Entangled, {n}, oracle::WithheldModel::TraceOut);
            record("withhold-entangled-fails", n, ent.fidelity_corrected < 0.99,
                   ent.fidelity_corrected);
            oracle::WithheldReport prod = oracle::withheld_report(
                inputs, ChannelKind::Product, {n}, oracle::WithheldModel::TraceOut);
            std::vector<int> participants;
            for (int i = 1; i < n; ++i) participants.push_back(i);
            double worst = 0.0;
            for (double f :
                 oracle::per_participant_fidelities(prod, inputs, participants))
                worst = std::max(worst, std::abs(f - 1.0));
            record("withhold-product-baseline", n, worst <= 1e-10, worst);
        }
    }

    bool all_pass = true;
    for (const PropertyResult& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  n=" << r.n << "  " << r.name
                  << "  (measured " << r.measured << ")\n";
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "all properties pass" : "VERIFICATION FAILED") << "\n";
    return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"all-or-nothing multiparty teleportation simulator"};
    app.require_subcommand(1);

    int n = 2;
    std::string kind = "entangled";
    std::string out_path;
    std::string inputs_spec, votes, forced_spec;
    std::vector<int> withhold;
    std::uint64_t seed = default_seed();
    bool timing = false;
    std::string compare = "none";
    std::string range = "1..3";
    int samples = 256;

    CLI::App* channel = app.add_subcommand("channel", "build a channel state");
    channel->add_option("--n", n, "number of senders")->required();
    channel->add_option("--kind", kind, "product|entangled");
    channel->add_option("--out", out_path, "output record path");

    CLI::App* run = app.add_subcommand("run", "run the teleportation protocol");
    run->add_option("--n", n, "number of senders")->required();
    run->add_option("--kind", kind, "product|entangled");
    run->add_option("--inputs", inputs_spec, "are,aim,bre,bim;... per sender");
    run->add_option("--votes", votes, "bit string, vote mode");
    run->add_option("--forced", forced_spec, "comma list of phi+/phi-/psi+/psi-");
    run->add_option("--withhold", withhold, "sender indices that withhold");
    run->add_option("--seed", seed, "rng seed");
    run->add_option("--out", out_path, "output record path");
    run->add_flag("--timing", timing, "include timing in the record");

    CLI::App* tables = app.add_subcommand("tables", "emit the correction table");
    tables->add_option("--n", n, "number of senders")->required();
    tables->add_option("--compare", compare, "none|paper");
    tables->add_option("--out", out_path, "output table path");

    CLI::App* verify = app.add_subcommand("verify", "run the oracle suites");
    verify->add_option("--n", range, "sender count or range, e.g. 1..3");
    verify->add_option("--samples", samples, "sampled tuples for N > 4");
    verify->add_option("--seed", seed, "rng seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (channel->parsed()) return cmd_channel(n, kind, out_path);
        if (run->parsed())
            return cmd_run(n, kind, inputs_spec, votes, forced_spec, withhold, seed,
                           out_path, timing);
        if (tables->parsed()) return cmd_tables(n, compare, out_path);
        if (verify->parsed()) return cmd_verify(range, samples, seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
