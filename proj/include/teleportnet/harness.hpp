// harness.hpp
// Multiparty scenario engine: parties on a classical broadcast bus, the
// ordering rule for the receiver's last qubit, participation/privacy/voting
// scenarios end to end.

#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "teleportnet/oracle.hpp"
#include "teleportnet/protocol.hpp"

namespace teleportnet {
namespace harness {

struct Party {
    int id = 0;                    // 1..N for senders, 0 for the receiver
    bool is_receiver = false;
    bool participates = true;
    std::optional<BellOutcome> local_outcome;
};

struct BroadcastMessage {
    int sender_id = 0;
    BellOutcome outcome = BellOutcome::PhiPlus;
};

// Reliable ordered log; at most one message per sender.
class BroadcastBus {
public:
    void post(int sender_id, BellOutcome outcome) {
        for (const BroadcastMessage& m : log_)
            if (m.sender_id == sender_id)
                throw std::logic_error("sender already broadcast");
        log_.push_back({sender_id, outcome});
    }
    const std::vector<BroadcastMessage>& log() const { return log_; }
    bool complete(int n) const { return static_cast<int>(log_.size()) == n; }

private:
    std::vector<BroadcastMessage> log_;
};

struct ScenarioConfig {
    int n = 2;
    ChannelKind kind = ChannelKind::Entangled;
    std::vector<bool> participation;  // empty means everyone participates
    OutcomePolicy policy;
    bool vote_mode = false;
    std::vector<int> votes;           // bits, |0> = no, |1> = yes
    bool reveal_vote_basis = false;   // when false, reports redact the inputs
    oracle::WithheldModel withheld_model = oracle::WithheldModel::TraceOut;
    std::vector<InputQubit> explicit_inputs;  // optional override
};

struct Tally {
    int yes = 0;
    int no = 0;
};

struct RuleCheck {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    std::string detail;
};

struct WithheldMetrics {
    oracle::WithheldModel model = oracle::WithheldModel::TraceOut;
    double fidelity_corrected = 0.0;
    double fidelity_uncorrected = 0.0;
    std::vector<double> participant_fidelities;  // single-qubit marginals
};

struct ScenarioReport {
    Transcript transcript;
    std::vector<BroadcastMessage> bus_log;
    double joint_fidelity = 0.0;                 // 0 when protocol incomplete
    std::vector<double> per_qubit_fidelities;
    std::optional<Tally> tally;
    std::optional<WithheldMetrics> withheld;
    std::vector<RuleCheck> rule_checks;
};

inline std::vector<InputQubit> scenario_inputs(const ScenarioConfig& config) {
    if (!config.explicit_inputs.empty()) {
        if (static_cast<int>(config.explicit_inputs.size()) != config.n)
            throw std::invalid_argument("explicit input count mismatch");
        return config.explicit_inputs;
    }
    if (config.vote_mode) {
        if (static_cast<int>(config.votes.size()) != config.n)
            throw std::invalid_argument("vote list length mismatch");
        std::vector<InputQubit> inputs;
        for (int v : config.votes) {
            if (v != 0 && v != 1) throw std::invalid_argument("votes must be bits");
            inputs.push_back(v == 0 ? InputQubit{{1, 0}, {0, 0}}
                                    : InputQubit{{0, 0}, {1, 0}});
        }
        return inputs;
    }
    std::mt19937_64 rng(config.policy.seed);
    return sample_generic_inputs(config.n, rng);
}

inline Tally tally_votes(const Transcript& t) {
    if (!t.final_state)
        throw std::logic_error("protocol incomplete: no final state to tally");
    const StateVector& s = *t.final_state;
    Tally tally;
    for (int q = 1; q <= s.num_qubits(); ++q) {
        double p1 = 0.0;
        for (std::size_t i = 0; i < s.dim(); ++i)
            if (s.bit(i, q)) p1 += std::norm(s.amp(i));
        (p1 > 0.5 ? tally.yes : tally.no) += 1;
    }
    return tally;
}

inline ScenarioReport run_scenario(const ScenarioConfig& config) {
    check_sender_count(config.n);
    std::vector<bool> mask = config.participation;
    if (mask.empty()) mask.assign(config.n, true);
    if (static_cast<int>(mask.size()) != config.n)
        throw std::invalid_argument("participation mask length mismatch");
    std::set<int> withheld;
    for (int i = 0; i < config.n; ++i)
        if (!mask[i]) withheld.insert(i + 1);
    if (static_cast<int>(withheld.size()) == config.n)
        throw std::invalid_argument("at least one sender must participate");

    const std::vector<InputQubit> inputs = scenario_inputs(config);
    ScenarioReport report;

    if (withheld.empty()) {
        // Full participation: every sender measures and posts to the bus; the
        // receiver acts only once the log is complete.
        Transcript t = run_protocol(inputs, config.kind, config.policy);
        BroadcastBus bus;
        for (std::size_t i = 0; i < t.outcomes.size(); ++i)
            bus.post(static_cast<int>(i) + 1, t.outcomes[i]);
        if (!bus.complete(config.n))
            throw std::logic_error("bus log incomplete after full participation");
        report.bus_log = bus.log();
        report.joint_fidelity = t.fidelity.value_or(0.0);
        if (t.final_state)
            for (int i = 1; i <= config.n; ++i) {
                DensityMatrix one = reduced_density(*t.final_state, {i});
                report.per_qubit_fidelities.push_back(
                    fidelity_with_pure(one, inputs[i - 1].state()));
            }
        if (config.vote_mode) report.tally = tally_votes(t);
        if (config.vote_mode && !config.reveal_vote_basis) t.inputs_redacted = true;
        report.transcript = std::move(t);
        return report;
    }

    // Partial participation: the bus log stays incomplete, the receiver never
    // gets the last qubit, and the cascade is not applied.
    oracle::WithheldReport wr = oracle::withheld_report(inputs, config.kind,
                                                        withheld,
                                                        config.withheld_model);
    BroadcastBus bus;
    {
        ProtocolState ps(inputs, build_channel(config.n, config.kind));
        std::mt19937_64 rng(config.policy.seed);
        for (int i = 1; i <= config.n; ++i) {
            if (withheld.count(i)) continue;
            MeasurementResult r =
                config.policy.forced ? ps.measure_sender(i, (*config.policy.forced)[i - 1])
                                     : ps.measure_sender_random(i, rng);
            bus.post(i, r.outcome);
            report.transcript.outcomes.push_back(r.outcome);
            report.transcript.outcome_probability *= r.probability;
        }
    }
    report.bus_log = bus.log();
    report.transcript.n = config.n;
    report.transcript.kind = config.kind;
    report.transcript.inputs = inputs;
    report.transcript.rng_seed = config.policy.seed;
    report.transcript.cascade_applied = false;

    WithheldMetrics metrics;
    metrics.model = config.withheld_model;
    metrics.fidelity_corrected = wr.fidelity_corrected;
    metrics.fidelity_uncorrected = wr.fidelity_uncorrected;
    std::vector<int> participants;
    for (int i = 1; i <= config.n; ++i)
        if (!withheld.count(i)) participants.push_back(i);
    metrics.participant_fidelities =
        oracle::per_participant_fidelities(wr, inputs, participants);
    report.joint_fidelity = wr.fidelity_corrected;
    report.withheld = std::move(metrics);
    return report;
}

namespace detail {

// Post-measurement state with the measured pair kept in the register,
// computed by direct projector application (used to check that the pair
// really factors out).
inline std::optional<StateVector> project_keep_pair(const StateVector& s, int qa,
                                                    int qb, BellOutcome outcome) {
    const int n = s.num_qubits();
    const std::size_t amask = std::size_t{1} << (n - qa);
    const std::size_t bmask = std::size_t{1} << (n - qb);
    std::vector<cplx> out(s.dim(), cplx{0, 0});
    double prob = 0.0;
    for (std::size_t base = 0; base < s.dim(); ++base) {
        if (base & amask || base & bmask) continue;
        cplx overlap{0, 0};
        for (int ba = 0; ba < 2; ++ba)
            for (int bb = 0; bb < 2; ++bb) {
                std::size_t idx = base | (ba ? amask : 0) | (bb ? bmask : 0);
                overlap += std::conj(bell_coefficient(outcome, ba, bb)) * s.amp(idx);
            }
        for (int ba = 0; ba < 2; ++ba)
            for (int bb = 0; bb < 2; ++bb) {
                std::size_t idx = base | (ba ? amask : 0) | (bb ? bmask : 0);
                out[idx] = bell_coefficient(outcome, ba, bb) * overlap;
                prob += std::norm(out[idx]);
            }
    }
    if (prob < kZeroProbability) return std::nullopt;
    const double scale = 1.0 / std::sqrt(prob);
    for (cplx& a : out) a *= scale;
    return StateVector(n, std::move(out));
}

}  // namespace detail

// Numerically testable voting rules: (2) single vote per sender, (3) outcome
// marginals carry no vote information, (4) the receiver's outcome-averaged
// state is vote-independent. Rules (1) and (5) are structural claims with no
// numerical content and are not checked here.
inline std::vector<RuleCheck> check_voting_rules(const ScenarioConfig& config) {
    std::vector<RuleCheck> checks;
    const std::vector<InputQubit> inputs = scenario_inputs(config);
    const int n = config.n;

    // Rule (2a): a second measurement by the same sender is rejected.
    {
        RuleCheck c{"rule2-single-measurement", false, 0.0, ""};
        ProtocolState ps(inputs, build_channel(n, config.kind));
        ps.measure_sender(1, BellOutcome::PhiPlus);
        try {
            ps.measure_sender(1, BellOutcome::PhiPlus);
            c.detail = "second measurement was not rejected";
        } catch (const std::logic_error&) {
            c.pass = true;
            c.detail = "second measurement rejected";
        }
        checks.push_back(c);
    }

    // Rule (2b): after the measurement the sender's pair is disentangled from
    // the rest (the remaining register's marginal is pure).
    {
        RuleCheck c{"rule2-disentangled-after-measurement", false, 0.0, ""};
        StateVector joint = prepare_joint_state(inputs, build_channel(n, config.kind));
        auto projected = detail::project_keep_pair(joint, 1, n + 1,
                                                   BellOutcome::PhiMinus);
        if (projected) {
            std::vector<int> rest;
            for (int q = 1; q <= 3 * n; ++q)
                if (q != 1 && q != n + 1) rest.push_back(q);
            DensityMatrix rho = reduced_density(*projected, rest);
            c.measured = rho.purity();
            c.pass = std::abs(c.measured - 1.0) <= kNormTol;
            c.detail = "purity of remaining register";
        }
        checks.push_back(c);
    }

    // Rule (3): each sender's outcome marginal is uniform for two distinct
    // input lists.
    {
        RuleCheck c{"rule3-uniform-outcome-marginals", true, 0.0, ""};
        std::mt19937_64 rng(config.policy.seed + 1);
        const std::vector<std::vector<InputQubit>> lists = {
            inputs, sample_generic_inputs(n, rng)};
        for (const auto& list : lists)
            for (int i = 1; i <= n; ++i) {
                auto probs = oracle::sender_outcome_marginal(list, config.kind, i);
                for (double p : probs) {
                    c.measured = std::max(c.measured, std::abs(p - 0.25));
                    if (std::abs(p - 0.25) > kNormTol) c.pass = false;
                }
            }
        c.detail = "max deviation from 1/4";
        checks.push_back(c);
    }

    // Rule (4): the outcome-averaged receiver state does not depend on the
    // inputs (and equals the maximally mixed state).
    {
        RuleCheck c{"rule4-averaged-state-input-independent", false, 0.0, ""};
        std::mt19937_64 rng(config.policy.seed + 2);
        DensityMatrix a = oracle::average_receiver_state(inputs, config.kind);
        DensityMatrix b = oracle::average_receiver_state(
            sample_generic_inputs(n, rng), config.kind);
        c.measured = std::max(oracle::max_entry_distance(a, b),
                              oracle::max_entry_distance(a, oracle::maximally_mixed(n)));
        c.pass = c.measured <= kNormTol;
        c.detail = "max entrywise distance";
        checks.push_back(c);
    }

    return checks;
}

}  // namespace harness
}  // namespace teleportnet
