// protocol.hpp
// The teleportation pipeline: compose the 3N-qubit joint state, run each
// sender's Bell measurement, apply the receiver's CNOT cascade and the
// conditional Pauli corrections, and generate correction tables.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "teleportnet/channel.hpp"
#include "teleportnet/statevector.hpp"

namespace teleportnet {

struct InputQubit {
    cplx a;  // amplitude of |0>
    cplx b;  // amplitude of |1>

    bool is_normalized(double tol = kNormTol) const {
        return std::abs(std::norm(a) + std::norm(b) - 1.0) <= tol;
    }
    StateVector state() const { return StateVector(1, {a, b}); }
};

inline StateVector product_of_inputs(const std::vector<InputQubit>& inputs) {
    StateVector s;
    for (const InputQubit& q : inputs) s = tensor(s, q.state());
    return s;
}

enum class Pauli { I, X, Y, Z };

// Entry i is addressed to receiver qubit N+i (paper numbering).
using PauliString = std::vector<Pauli>;

inline char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'x';
        case Pauli::Y: return 'y';
        case Pauli::Z: return 'z';
    }
    return '?';
}

inline Gate1Q pauli_gate(Pauli p) {
    switch (p) {
        case Pauli::I: return gates::identity();
        case Pauli::X: return gates::pauli_x();
        case Pauli::Y: return gates::pauli_y();
        case Pauli::Z: return gates::pauli_z();
    }
    return gates::identity();
}

// Compact operator notation with paper qubit numbering, e.g. "sz5 sx6" for
// N = 3; the all-identity string renders as "I".
inline std::string format_correction(const PauliString& ops) {
    const int n = static_cast<int>(ops.size());
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (ops[i] == Pauli::I) continue;
        if (!out.empty()) out += ' ';
        out += 's';
        out += pauli_char(ops[i]);
        out += std::to_string(n + 1 + i);  // receiver qubit in paper numbering
    }
    return out.empty() ? "I" : out;
}

// Per-qubit correction map implied by the four Bell branches:
// phi+ -> I, phi- -> Z, psi+ -> X, psi- -> Y, addressed to receiver qubit N+i.
inline PauliString correction_for(const std::vector<BellOutcome>& outcomes) {
    PauliString ops;
    ops.reserve(outcomes.size());
    for (BellOutcome o : outcomes) {
        switch (o) {
            case BellOutcome::PhiPlus:  ops.push_back(Pauli::I); break;
            case BellOutcome::PhiMinus: ops.push_back(Pauli::Z); break;
            case BellOutcome::PsiPlus:  ops.push_back(Pauli::X); break;
            case BellOutcome::PsiMinus: ops.push_back(Pauli::Y); break;
        }
    }
    return ops;
}

inline StateVector apply_correction(const StateVector& s, const PauliString& p) {
    if (s.num_qubits() != static_cast<int>(p.size()))
        throw std::invalid_argument("correction length does not match register");
    StateVector out = s;
    for (int i = 0; i < s.num_qubits(); ++i)
        if (p[i] != Pauli::I) out = apply_1q(out, i + 1, pauli_gate(p[i]));
    return out;
}

// CNOTs with controls 1..N-1 and target N (the receiver's qubits N+1..2N-1
// and 2N in paper numbering). N = 1 is the identity.
inline StateVector receiver_cnot_cascade(const StateVector& s) {
    const int n = s.num_qubits();
    if (n < 1) throw std::invalid_argument("empty register");
    StateVector out = s;
    for (int c = 1; c <= n - 1; ++c) out = apply_cnot(out, c, n);
    return out;
}

// Input qubit A_i sits at register position i, channel qubits at N+1..3N, so
// sender i's Bell pair is at positions (i, N+i).
inline StateVector prepare_joint_state(const std::vector<InputQubit>& inputs,
                                       const StateVector& channel) {
    const int n = static_cast<int>(inputs.size());
    if (channel.num_qubits() != 2 * n)
        throw std::invalid_argument("channel size does not match input count");
    for (const InputQubit& q : inputs)
        if (!q.is_normalized())
            throw std::invalid_argument("input qubit not normalized");
    return tensor(product_of_inputs(inputs), channel);
}

struct MeasurementResult {
    BellOutcome outcome;
    double probability = 0.0;
    bool possible = true;  // false when a forced outcome had probability ~ 0
};

// Tracks the shrinking register across sender measurements. Register labels:
// 1..N are the input qubits A_i, N+j is channel qubit j (so 2N+i is the
// receiver's qubit for pair i).
class ProtocolState {
public:
    ProtocolState(const std::vector<InputQubit>& inputs, const StateVector& channel)
        : n_(static_cast<int>(inputs.size())),
          state_(prepare_joint_state(inputs, channel)),
          measured_(n_ + 1, false) {
        for (int label = 1; label <= 3 * n_; ++label) labels_.push_back(label);
    }

    int sender_count() const { return n_; }
    const StateVector& state() const { return state_; }
    bool all_measured() const {
        for (int i = 1; i <= n_; ++i)
            if (!measured_[i]) return false;
        return true;
    }
    bool measured(int sender) const { return measured_.at(sender); }

    // Current 1-based register position of a label; 0 if removed.
    int position_of(int label) const {
        for (std::size_t k = 0; k < labels_.size(); ++k)
            if (labels_[k] == label) return static_cast<int>(k) + 1;
        return 0;
    }

    // Receiver qubit positions for pairs 1..N, in pair order.
    std::vector<int> receiver_positions() const {
        std::vector<int> pos;
        for (int i = 1; i <= n_; ++i) pos.push_back(position_of(2 * n_ + i));
        return pos;
    }

    double outcome_probability(int sender, BellOutcome o) const {
        return bell_project(state_, position_of(sender), position_of(n_ + sender), o)
            .probability;
    }

    MeasurementResult measure_sender(int sender, BellOutcome outcome) {
        if (sender < 1 || sender > n_)
            throw std::invalid_argument("sender index out of range");
        if (measured_[sender])
            throw std::logic_error("sender has already measured");
        const int qa = position_of(sender);
        const int qb = position_of(n_ + sender);
        BellProjection proj = bell_project(state_, qa, qb, outcome);
        MeasurementResult r{outcome, proj.probability, proj.collapsed.has_value()};
        if (!r.possible) return r;
        state_ = std::move(*proj.collapsed);
        measured_[sender] = true;
        // bell_project keeps relative order, so drop the two labels in place
        labels_.erase(labels_.begin() + (std::max(qa, qb) - 1));
        labels_.erase(labels_.begin() + (std::min(qa, qb) - 1));
        return r;
    }

    MeasurementResult measure_sender_random(int sender, std::mt19937_64& rng) {
        double probs[4];
        double total = 0.0;
        for (int k = 0; k < 4; ++k) {
            probs[k] = outcome_probability(sender, kAllBellOutcomes[k]);
            total += probs[k];
        }
        const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
        double acc = 0.0;
        int pick = 3;
        for (int k = 0; k < 4; ++k) {
            acc += probs[k];
            if (u < acc) { pick = k; break; }
        }
        return measure_sender(sender, kAllBellOutcomes[pick]);
    }

private:
    int n_;
    StateVector state_;
    std::vector<bool> measured_;
    std::vector<int> labels_;
};

struct OutcomePolicy {
    // Forced outcome list when present, else seeded sampling from the exact
    // four-outcome distribution.
    std::optional<std::vector<BellOutcome>> forced;
    std::uint64_t seed = 0;

    static OutcomePolicy force(std::vector<BellOutcome> outcomes) {
        OutcomePolicy p;
        p.forced = std::move(outcomes);
        return p;
    }
    static OutcomePolicy seeded(std::uint64_t seed) {
        OutcomePolicy p;
        p.seed = seed;
        return p;
    }
};

struct Transcript {
    int n = 0;
    ChannelKind kind = ChannelKind::Entangled;
    std::vector<InputQubit> inputs;
    bool inputs_redacted = false;
    std::vector<BellOutcome> outcomes;       // one per sender that measured
    double outcome_probability = 1.0;
    bool branch_impossible = false;          // forced branch with probability 0
    bool cascade_applied = false;
    std::optional<PauliString> correction;
    std::optional<StateVector> final_state;  // the receiver's N qubits
    std::optional<double> fidelity;
    std::uint64_t rng_seed = 0;
};

inline Transcript run_protocol(const std::vector<InputQubit>& inputs,
                               ChannelKind kind, const OutcomePolicy& policy) {
    const int n = static_cast<int>(inputs.size());
    check_sender_count(n);
    if (policy.forced && policy.forced->size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("forced outcome list has wrong length");

    Transcript t;
    t.n = n;
    t.kind = kind;
    t.inputs = inputs;
    t.rng_seed = policy.seed;

    ProtocolState ps(inputs, build_channel(n, kind));
    std::mt19937_64 rng(policy.seed);
    for (int i = 1; i <= n; ++i) {
        MeasurementResult r = policy.forced
                                  ? ps.measure_sender(i, (*policy.forced)[i - 1])
                                  : ps.measure_sender_random(i, rng);
        if (!r.possible) {
            t.branch_impossible = true;
            t.outcome_probability = 0.0;
            return t;
        }
        t.outcomes.push_back(r.outcome);
        t.outcome_probability *= r.probability;
    }

    StateVector receiver = ps.state();
    if (kind == ChannelKind::Entangled) {
        receiver = receiver_cnot_cascade(receiver);
        t.cascade_applied = true;
    }
    const PauliString corr = correction_for(t.outcomes);
    receiver = apply_correction(receiver, corr);
    t.correction = corr;
    t.fidelity = fidelity_mod_phase(product_of_inputs(inputs), receiver);
    t.final_state = std::move(receiver);
    return t;
}

// Outcome tuples enumerate lexicographically in the order
// (phi+, phi-, psi+, psi-) per sender.
inline std::vector<BellOutcome> outcome_tuple(int n, std::size_t index) {
    std::vector<BellOutcome> tuple(n);
    for (int i = n - 1; i >= 0; --i) {
        tuple[i] = kAllBellOutcomes[index & 3u];
        index >>= 2;
    }
    return tuple;
}

// Fixed non-symmetric inputs used to verify correction-table rows.
inline std::vector<InputQubit> generic_verification_inputs(int n) {
    std::vector<InputQubit> inputs;
    for (int i = 1; i <= n; ++i) {
        const double theta = 0.41 + 0.57 * i;
        const double phi = 0.23 + 1.13 * i;
        inputs.push_back({cplx{std::cos(theta), 0.0},
                          std::polar(std::sin(theta), phi)});
    }
    return inputs;
}

// Seeded Bloch-sphere sampling; inputs within 0.05 of a pole are rejected so
// failure checks cannot be satisfied accidentally by basis states.
inline std::vector<InputQubit> sample_generic_inputs(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<InputQubit> inputs;
    while (static_cast<int>(inputs.size()) < n) {
        const double z = 2.0 * unit(rng) - 1.0;
        const double phi = 2.0 * M_PI * unit(rng);
        const double p0 = (1.0 + z) / 2.0;  // |a|^2
        if (p0 < 0.05 || p0 > 0.95) continue;
        inputs.push_back({cplx{std::sqrt(p0), 0.0},
                          std::polar(std::sqrt(1.0 - p0), phi)});
    }
    return inputs;
}

struct CorrectionTableRow {
    std::vector<BellOutcome> outcomes;
    PauliString correction;
    std::string state_desc;  // symbolic post-cascade receiver state
    bool verified = false;   // numeric fidelity-1 check on generic inputs
};

inline std::string symbolic_post_cascade_state(const std::vector<BellOutcome>& outcomes) {
    std::string s;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const std::string ai = "a" + std::to_string(i + 1);
        const std::string bi = "b" + std::to_string(i + 1);
        std::string term;
        switch (outcomes[i]) {
            case BellOutcome::PhiPlus:  term = ai + "|0>+" + bi + "|1>"; break;
            case BellOutcome::PhiMinus: term = ai + "|0>-" + bi + "|1>"; break;
            case BellOutcome::PsiPlus:  term = ai + "|1>+" + bi + "|0>"; break;
            case BellOutcome::PsiMinus: term = ai + "|1>-" + bi + "|0>"; break;
        }
        if (!s.empty()) s += " x ";
        s += "[" + term + "]";
    }
    return s;
}

// Every emitted row is re-verified numerically rather than trusted from the
// per-qubit map.
inline std::vector<CorrectionTableRow> generate_correction_table(int n) {
    if (n < 1 || n > 6) throw std::invalid_argument("table size limit is N <= 6");
    const std::vector<InputQubit> inputs = generic_verification_inputs(n);
    const std::size_t rows = std::size_t{1} << (2 * n);
    std::vector<CorrectionTableRow> table;
    table.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        CorrectionTableRow row;
        row.outcomes = outcome_tuple(n, r);
        row.correction = correction_for(row.outcomes);
        row.state_desc = symbolic_post_cascade_state(row.outcomes);
        Transcript t = run_protocol(inputs, ChannelKind::Entangled,
                                    OutcomePolicy::force(row.outcomes));
        row.verified = t.fidelity && std::abs(*t.fidelity - 1.0) <= kNormTol;
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace teleportnet
