// oracle.hpp
// Independent brute-force verification: exhaustive enumeration over forced
// outcome tuples, withheld-sender failure states, outcome-averaged receiver
// states for the privacy checks, and the stolen-qubit scenario.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "teleportnet/protocol.hpp"

namespace teleportnet {
namespace oracle {

struct OutcomeReport {
    std::vector<BellOutcome> outcomes;
    double probability = 0.0;
    std::optional<double> fidelity;
    PauliString correction;
};

struct EnumerationReport {
    std::vector<OutcomeReport> reports;  // lexicographic outcome order
    double probability_sum = 0.0;
    double min_fidelity = 1.0;
    double max_fidelity = 0.0;
};

inline EnumerationReport enumerate_all_outcomes(const std::vector<InputQubit>& inputs,
                                                ChannelKind kind) {
    const int n = static_cast<int>(inputs.size());
    if (n > 7) throw std::length_error("exhaustive enumeration limited to N <= 7");
    check_sender_count(n);

    EnumerationReport report;
    const std::size_t tuples = std::size_t{1} << (2 * n);
    report.reports.reserve(tuples);
    for (std::size_t t = 0; t < tuples; ++t) {
        const std::vector<BellOutcome> tuple = outcome_tuple(n, t);
        Transcript tr = run_protocol(inputs, kind, OutcomePolicy::force(tuple));
        OutcomeReport r;
        r.outcomes = tuple;
        r.probability = tr.outcome_probability;
        r.fidelity = tr.fidelity;
        r.correction = correction_for(tuple);
        report.probability_sum += r.probability;
        if (r.fidelity) {
            report.min_fidelity = std::min(report.min_fidelity, *r.fidelity);
            report.max_fidelity = std::max(report.max_fidelity, *r.fidelity);
        }
        report.reports.push_back(std::move(r));
    }
    return report;
}

enum class WithheldModel { TraceOut, MeasureNoBroadcast };

inline std::string to_string(WithheldModel m) {
    return m == WithheldModel::TraceOut ? "trace-out" : "measure-no-broadcast";
}

inline DensityMatrix maximally_mixed(int num_qubits) {
    DensityMatrix rho;
    rho.num_qubits = num_qubits;
    const std::size_t d = std::size_t{1} << num_qubits;
    rho.entries.assign(d * d, cplx{0, 0});
    for (std::size_t i = 0; i < d; ++i) rho.at(i, i) = 1.0 / static_cast<double>(d);
    return rho;
}

inline double max_entry_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.num_qubits != b.num_qubits)
        throw std::invalid_argument("density matrix size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
    return m;
}

// Partial trace on an already-reduced density matrix (keep is 1-based within
// the matrix's own qubit numbering).
inline DensityMatrix reduce_density_matrix(const DensityMatrix& rho,
                                           const std::vector<int>& keep) {
    const int n = rho.num_qubits;
    std::vector<bool> used(n + 1, false);
    for (int q : keep) {
        if (q < 1 || q > n) throw std::invalid_argument("qubit index out of range");
        if (used[q]) throw std::invalid_argument("duplicate qubit in keep set");
        used[q] = true;
    }
    std::vector<int> kept_shift, traced_shift;
    for (int q : keep) kept_shift.push_back(n - q);
    for (int q = 1; q <= n; ++q)
        if (!used[q]) traced_shift.push_back(n - q);

    auto expand = [](std::size_t sub, const std::vector<int>& shifts) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < shifts.size(); ++i)
            if ((sub >> (shifts.size() - 1 - i)) & 1u)
                idx |= std::size_t{1} << shifts[i];
        return idx;
    };

    DensityMatrix out;
    out.num_qubits = static_cast<int>(keep.size());
    const std::size_t dk = out.dim();
    const std::size_t dt = std::size_t{1} << traced_shift.size();
    out.entries.assign(dk * dk, cplx{0, 0});
    for (std::size_t r = 0; r < dk; ++r)
        for (std::size_t c = 0; c < dk; ++c) {
            cplx acc{0, 0};
            for (std::size_t t = 0; t < dt; ++t) {
                const std::size_t tb = expand(t, traced_shift);
                acc += rho.at(tb | expand(r, kept_shift), tb | expand(c, kept_shift));
            }
            out.at(r, c) = acc;
        }
    return out;
}

namespace detail {

// Walks every forced-outcome branch of the given measuring senders, applies
// per-participant Pauli corrections on the matching receiver qubits when
// requested, and accumulates the probability-weighted reduced state of the
// receiver's N qubits. The cascade is never applied here (these are the
// protocol's failure paths).
inline DensityMatrix averaged_receiver_state(
    const std::vector<InputQubit>& inputs, ChannelKind kind,
    const std::vector<int>& measuring, const std::vector<int>& corrected,
    const std::vector<int>& receiver_subset) {
    const int n = static_cast<int>(inputs.size());
    const ProtocolState initial(inputs, build_channel(n, kind));

    DensityMatrix acc;
    acc.num_qubits = static_cast<int>(receiver_subset.size());
    acc.entries.assign(acc.dim() * acc.dim(), cplx{0, 0});

    const std::size_t branches = std::size_t{1} << (2 * measuring.size());
    for (std::size_t b = 0; b < branches; ++b) {
        ProtocolState ps = initial;
        double prob = 1.0;
        bool possible = true;
        std::size_t code = b;
        std::vector<BellOutcome> outcomes(measuring.size());
        for (std::size_t k = measuring.size(); k-- > 0;) {
            outcomes[k] = kAllBellOutcomes[code & 3u];
            code >>= 2;
        }
        for (std::size_t k = 0; k < measuring.size(); ++k) {
            MeasurementResult r = ps.measure_sender(measuring[k], outcomes[k]);
            if (!r.possible) { possible = false; break; }
            prob *= r.probability;
        }
        if (!possible || prob < kZeroProbability) continue;

        StateVector s = ps.state();
        for (std::size_t k = 0; k < corrected.size(); ++k) {
            const int sender = corrected[k];
            const Pauli op = correction_for({outcomes[std::distance(
                measuring.begin(),
                std::find(measuring.begin(), measuring.end(), sender))]})[0];
            if (op != Pauli::I)
                s = apply_1q(s, ps.position_of(2 * n + sender), pauli_gate(op));
        }
        std::vector<int> keep;
        for (int i : receiver_subset) keep.push_back(ps.position_of(2 * n + i));
        DensityMatrix rho = reduced_density(s, keep);
        for (std::size_t i = 0; i < rho.entries.size(); ++i)
            acc.entries[i] += prob * rho.entries[i];
    }
    return acc;
}

}  // namespace detail

struct WithheldReport {
    DensityMatrix corrected;    // participants' Pauli corrections applied
    DensityMatrix uncorrected;  // no corrections at all
    double fidelity_corrected = 0.0;
    double fidelity_uncorrected = 0.0;
    WithheldModel model = WithheldModel::TraceOut;
};

inline WithheldReport withheld_report(const std::vector<InputQubit>& inputs,
                                      ChannelKind kind,
                                      const std::set<int>& withheld,
                                      WithheldModel model) {
    const int n = static_cast<int>(inputs.size());
    if (withheld.empty()) throw std::invalid_argument("withheld set is empty");
    if (static_cast<int>(withheld.size()) >= n)
        throw std::invalid_argument("at least one sender must participate");
    for (int w : withheld)
        if (w < 1 || w > n) throw std::invalid_argument("withheld index out of range");

    std::vector<int> participants;
    for (int i = 1; i <= n; ++i)
        if (!withheld.count(i)) participants.push_back(i);

    // Under MeasureNoBroadcast the withheld senders measure too, but their
    // outcomes never reach the receiver, so no correction for their qubits.
    std::vector<int> measuring = participants;
    if (model == WithheldModel::MeasureNoBroadcast)
        for (int w : withheld) measuring.push_back(w);

    std::vector<int> all_receiver(n);
    for (int i = 0; i < n; ++i) all_receiver[i] = i + 1;

    WithheldReport r;
    r.model = model;
    r.corrected = detail::averaged_receiver_state(inputs, kind, measuring,
                                                  participants, all_receiver);
    r.uncorrected =
        detail::averaged_receiver_state(inputs, kind, measuring, {}, all_receiver);
    const StateVector target = product_of_inputs(inputs);
    r.fidelity_corrected = fidelity_with_pure(r.corrected, target);
    r.fidelity_uncorrected = fidelity_with_pure(r.uncorrected, target);
    return r;
}

// The receiver's best-case recovered state when some senders withhold; the
// cascade is not applied per the all-or-nothing rule.
inline DensityMatrix withheld_participation_state(const std::vector<InputQubit>& inputs,
                                                  const std::set<int>& withheld,
                                                  WithheldModel model =
                                                      WithheldModel::TraceOut) {
    return withheld_report(inputs, ChannelKind::Entangled, withheld, model).corrected;
}

// Per-participant fidelity of the receiver's single-qubit marginals; with the
// product channel, participants' qubits arrive intact regardless of the
// withheld senders.
inline std::vector<double> per_participant_fidelities(const WithheldReport& r,
                                                      const std::vector<InputQubit>& inputs,
                                                      const std::vector<int>& participants) {
    std::vector<double> fids;
    for (int i : participants) {
        DensityMatrix one = reduce_density_matrix(r.corrected, {i});
        fids.push_back(fidelity_with_pure(one, inputs[i - 1].state()));
    }
    return fids;
}

// Sum over all outcome tuples of p * |chi><chi| on the PRE-correction,
// pre-cascade receiver states; input-independent by no-signaling.
inline DensityMatrix average_receiver_state(const std::vector<InputQubit>& inputs,
                                            ChannelKind kind) {
    const int n = static_cast<int>(inputs.size());
    if (n > 6) throw std::invalid_argument("averaging limited to N <= 6");
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i + 1;
    return detail::averaged_receiver_state(inputs, kind, all, {}, all);
}

// Exact marginal outcome distribution of one sender on the fresh joint state.
inline std::array<double, 4> sender_outcome_marginal(const std::vector<InputQubit>& inputs,
                                                     ChannelKind kind, int sender) {
    const int n = static_cast<int>(inputs.size());
    ProtocolState ps(inputs, build_channel(n, kind));
    std::array<double, 4> probs{};
    for (int k = 0; k < 4; ++k)
        probs[k] = ps.outcome_probability(sender, kAllBellOutcomes[k]);
    return probs;
}

struct StolenQubitReport {
    DensityMatrix state;  // receiver qubits N+1..2N-1, corrections applied
    double fidelity = 0.0;
};

// All senders broadcast, but the receiver's last qubit is excluded; without
// it the cascade cannot run, so the first N-1 receiver qubits are corrected
// per-qubit and compared against the corresponding input product.
inline StolenQubitReport stolen_qubit_report(const std::vector<InputQubit>& inputs) {
    const int n = static_cast<int>(inputs.size());
    if (n < 2) throw std::invalid_argument("needs at least two senders");
    std::vector<int> all(n), first(n - 1);
    for (int i = 0; i < n; ++i) all[i] = i + 1;
    for (int i = 0; i < n - 1; ++i) first[i] = i + 1;

    StolenQubitReport r;
    r.state = detail::averaged_receiver_state(inputs, ChannelKind::Entangled, all,
                                              first, first);
    std::vector<InputQubit> head(inputs.begin(), inputs.end() - 1);
    r.fidelity = fidelity_with_pure(r.state, product_of_inputs(head));
    return r;
}

}  // namespace oracle
}  // namespace teleportnet
