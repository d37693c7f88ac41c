// serialize.hpp
// JSON records for transcripts, scenario reports and CLI run records.
// Amplitudes are serialized as [re, im] pairs at full double precision and
// the layout is deterministic, so identical runs produce identical bytes.

#pragma once

#include <string>

#include <json.hpp>

#include "teleportnet/harness.hpp"
#include "teleportnet/protocol.hpp"

namespace teleportnet {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::ordered_json;

inline json to_json(const cplx& c) { return json::array({c.real(), c.imag()}); }

inline cplx cplx_from_json(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline json to_json(const StateVector& s) {
    json amps = json::array();
    for (const cplx& a : s.amps()) amps.push_back(to_json(a));
    return json{{"num_qubits", s.num_qubits()}, {"amps", std::move(amps)}};
}

inline StateVector statevector_from_json(const json& j) {
    std::vector<cplx> amps;
    for (const json& a : j.at("amps")) amps.push_back(cplx_from_json(a));
    return StateVector(j.at("num_qubits").get<int>(), std::move(amps));
}

inline json to_json(const PauliString& p) {
    json ops = json::array();
    for (Pauli op : p) ops.push_back(std::string(1, pauli_char(op)));
    return ops;
}

inline PauliString pauli_string_from_json(const json& j) {
    PauliString p;
    for (const json& op : j) {
        const std::string s = op.get<std::string>();
        switch (s.empty() ? '?' : s[0]) {
            case 'I': p.push_back(Pauli::I); break;
            case 'x': p.push_back(Pauli::X); break;
            case 'y': p.push_back(Pauli::Y); break;
            case 'z': p.push_back(Pauli::Z); break;
            default: throw std::invalid_argument("bad pauli token");
        }
    }
    return p;
}

inline BellOutcome outcome_from_token(const std::string& token) {
    if (token == "phi+") return BellOutcome::PhiPlus;
    if (token == "phi-") return BellOutcome::PhiMinus;
    if (token == "psi+") return BellOutcome::PsiPlus;
    if (token == "psi-") return BellOutcome::PsiMinus;
    throw std::invalid_argument("unknown outcome token: " + token);
}

inline json to_json(const Transcript& t) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = t.n;
    j["channel_kind"] = to_string(t.kind);
    if (t.inputs_redacted) {
        j["inputs"] = "redacted";
    } else {
        json inputs = json::array();
        for (const InputQubit& q : t.inputs)
            inputs.push_back(json{{"a", to_json(q.a)}, {"b", to_json(q.b)}});
        j["inputs"] = std::move(inputs);
    }
    json outcomes = json::array();
    for (BellOutcome o : t.outcomes) outcomes.push_back(to_string(o));
    j["outcomes"] = std::move(outcomes);
    j["outcome_probability"] = t.outcome_probability;
    j["branch_impossible"] = t.branch_impossible;
    j["cascade_applied"] = t.cascade_applied;
    if (t.correction) {
        j["correction"] = to_json(*t.correction);
        j["correction_label"] = format_correction(*t.correction);
    }
    if (t.final_state) j["final_state"] = to_json(*t.final_state);
    if (t.fidelity) j["fidelity"] = *t.fidelity;
    j["rng_seed"] = t.rng_seed;
    return j;
}

inline Transcript transcript_from_json(const json& j) {
    Transcript t;
    t.n = j.at("n").get<int>();
    t.kind = j.at("channel_kind").get<std::string>() == "product"
                 ? ChannelKind::Product
                 : ChannelKind::Entangled;
    if (j.at("inputs").is_string()) {
        t.inputs_redacted = true;
    } else {
        for (const json& q : j.at("inputs"))
            t.inputs.push_back({cplx_from_json(q.at("a")), cplx_from_json(q.at("b"))});
    }
    for (const json& o : j.at("outcomes"))
        t.outcomes.push_back(outcome_from_token(o.get<std::string>()));
    t.outcome_probability = j.at("outcome_probability").get<double>();
    t.branch_impossible = j.at("branch_impossible").get<bool>();
    t.cascade_applied = j.at("cascade_applied").get<bool>();
    if (j.contains("correction"))
        t.correction = pauli_string_from_json(j.at("correction"));
    if (j.contains("final_state"))
        t.final_state = statevector_from_json(j.at("final_state"));
    if (j.contains("fidelity")) t.fidelity = j.at("fidelity").get<double>();
    t.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    return t;
}

inline json to_json(const harness::ScenarioReport& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["transcript"] = to_json(r.transcript);
    json bus = json::array();
    for (const harness::BroadcastMessage& m : r.bus_log)
        bus.push_back(json{{"sender", m.sender_id}, {"outcome", to_string(m.outcome)}});
    j["bus_log"] = std::move(bus);
    j["joint_fidelity"] = r.joint_fidelity;
    j["per_qubit_fidelities"] = r.per_qubit_fidelities;
    if (r.tally) j["tally"] = json{{"yes", r.tally->yes}, {"no", r.tally->no}};
    if (r.withheld) {
        j["withheld"] = json{
            {"model", oracle::to_string(r.withheld->model)},
            {"fidelity_corrected", r.withheld->fidelity_corrected},
            {"fidelity_uncorrected", r.withheld->fidelity_uncorrected},
            {"participant_fidelities", r.withheld->participant_fidelities}};
    }
    if (!r.rule_checks.empty()) {
        json checks = json::array();
        for (const harness::RuleCheck& c : r.rule_checks)
            checks.push_back(json{{"name", c.name},
                                  {"pass", c.pass},
                                  {"measured", c.measured},
                                  {"detail", c.detail}});
        j["rule_checks"] = std::move(checks);
    }
    return j;
}

inline std::string serialize_record(const json& body) { return body.dump(2) + "\n"; }

}  // namespace teleportnet
