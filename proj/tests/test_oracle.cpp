#include <catch_amalgamated.hpp>

#include <random>

#include "teleportnet/oracle.hpp"

using namespace teleportnet;
using Catch::Approx;

TEST_CASE("enumerate_all_outcomes") {
    SECTION("N=1: four branches, probability 1/4, fidelity 1") {
        oracle::EnumerationReport rep = oracle::enumerate_all_outcomes(
            {{{0.6, 0.0}, {0.0, 0.8}}}, ChannelKind::Product);
        REQUIRE(rep.reports.size() == 4);
        for (const auto& r : rep.reports) {
            REQUIRE(r.probability == Approx(0.25).margin(1e-10));
            REQUIRE(r.fidelity.value() == Approx(1.0).margin(1e-10));
        }
        REQUIRE(rep.probability_sum == Approx(1.0).margin(1e-9));
    }

    SECTION("N=2 entangled: 16 branches, each 1/16, fidelity 1") {
        std::mt19937_64 rng(5);
        oracle::EnumerationReport rep = oracle::enumerate_all_outcomes(
            sample_generic_inputs(2, rng), ChannelKind::Entangled);
        REQUIRE(rep.reports.size() == 16);
        for (const auto& r : rep.reports) {
            REQUIRE(r.probability == Approx(1.0 / 16.0).margin(1e-10));
            REQUIRE(r.fidelity.value() == Approx(1.0).margin(1e-10));
        }
        REQUIRE(rep.min_fidelity == Approx(1.0).margin(1e-10));
    }

    SECTION("N=3: 64 branches, min fidelity 1") {
        std::mt19937_64 rng(6);
        oracle::EnumerationReport rep = oracle::enumerate_all_outcomes(
            sample_generic_inputs(3, rng), ChannelKind::Entangled);
        REQUIRE(rep.reports.size() == 64);
        REQUIRE(rep.min_fidelity == Approx(1.0).margin(1e-10));
        REQUIRE(rep.probability_sum == Approx(1.0).margin(1e-9));
    }

    SECTION("reports come out in lexicographic outcome order") {
        oracle::EnumerationReport rep = oracle::enumerate_all_outcomes(
            {{{0.6, 0.0}, {0.0, 0.8}}}, ChannelKind::Product);
        REQUIRE(rep.reports[0].outcomes == std::vector<BellOutcome>{BellOutcome::PhiPlus});
        REQUIRE(rep.reports[1].outcomes == std::vector<BellOutcome>{BellOutcome::PhiMinus});
        REQUIRE(rep.reports[2].outcomes == std::vector<BellOutcome>{BellOutcome::PsiPlus});
        REQUIRE(rep.reports[3].outcomes == std::vector<BellOutcome>{BellOutcome::PsiMinus});
    }
}

TEST_CASE("probability closure for both kinds up to N=4") {
    std::mt19937_64 rng(7);
    for (int n = 1; n <= 4; ++n) {
        const std::vector<InputQubit> inputs = sample_generic_inputs(n, rng);
        for (ChannelKind kind : {ChannelKind::Product, ChannelKind::Entangled}) {
            oracle::EnumerationReport rep = oracle::enumerate_all_outcomes(inputs, kind);
            REQUIRE(rep.probability_sum == Approx(1.0).margin(1e-9));
            REQUIRE(rep.min_fidelity == Approx(1.0).margin(1e-10));
        }
    }
}

TEST_CASE("sampled agreement for N=5") {
    std::mt19937_64 rng(8);
    const std::vector<InputQubit> inputs = sample_generic_inputs(5, rng);
    std::uniform_int_distribution<std::size_t> pick(0, (1u << 10) - 1);
    for (int k = 0; k < 32; ++k) {
        Transcript t = run_protocol(inputs, ChannelKind::Entangled,
                                    OutcomePolicy::force(outcome_tuple(5, pick(rng))));
        REQUIRE(t.fidelity.value() == Approx(1.0).margin(1e-10));
        REQUIRE(t.outcome_probability == Approx(std::pow(0.25, 5)).margin(1e-10));
    }
}

TEST_CASE("withheld_report") {
    std::mt19937_64 rng(9);

    SECTION("entangled channel: withheld sender spoils every qubit") {
        for (int trial = 0; trial < 5; ++trial) {
            const std::vector<InputQubit> inputs = sample_generic_inputs(2, rng);
            for (oracle::WithheldModel model :
                 {oracle::WithheldModel::TraceOut,
                  oracle::WithheldModel::MeasureNoBroadcast}) {
                oracle::WithheldReport r = oracle::withheld_report(
                    inputs, ChannelKind::Entangled, {2}, model);
                REQUIRE(r.fidelity_corrected < 1.0);
                REQUIRE(r.fidelity_uncorrected < 1.0);
                REQUIRE(r.corrected.trace_real() == Approx(1.0).margin(1e-9));
            }
        }
    }

    SECTION("product channel baseline: participant qubits arrive intact") {
        const std::vector<InputQubit> inputs = sample_generic_inputs(2, rng);
        oracle::WithheldReport r = oracle::withheld_report(
            inputs, ChannelKind::Product, {2}, oracle::WithheldModel::TraceOut);
        auto fids = oracle::per_participant_fidelities(r, inputs, {1});
        REQUIRE(fids[0] == Approx(1.0).margin(1e-10));
    }

    SECTION("argument checks") {
        const std::vector<InputQubit> inputs = sample_generic_inputs(2, rng);
        REQUIRE_THROWS_AS(oracle::withheld_report(inputs, ChannelKind::Entangled, {},
                                                  oracle::WithheldModel::TraceOut),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(oracle::withheld_report(inputs, ChannelKind::Entangled,
                                                  {1, 2},
                                                  oracle::WithheldModel::TraceOut),
                          std::invalid_argument);
    }
}

TEST_CASE("receiver marginal before any broadcast is maximally mixed") {
    std::mt19937_64 rng(10);
    for (int n : {1, 2, 3}) {
        const std::vector<InputQubit> inputs = sample_generic_inputs(n, rng);
        std::vector<int> receiver;
        for (int q = 2 * n + 1; q <= 3 * n; ++q) receiver.push_back(q);
        DensityMatrix rho = reduced_density(
            prepare_joint_state(inputs, build_channel(n, ChannelKind::Entangled)),
            receiver);
        REQUIRE(oracle::max_entry_distance(rho, oracle::maximally_mixed(n)) < 1e-10);
    }
}

TEST_CASE("average_receiver_state hides the inputs") {
    SECTION("N=1 averages to I/2 for any input") {
        DensityMatrix rho = oracle::average_receiver_state(
            {{{0.28, 0.0}, {0.0, std::sqrt(1.0 - 0.28 * 0.28)}}},
            ChannelKind::Entangled);
        REQUIRE(oracle::max_entry_distance(rho, oracle::maximally_mixed(1)) < 1e-10);
    }

    SECTION("two distinct N=2 input lists give identical matrices, both I/4") {
        std::mt19937_64 rng(11);
        DensityMatrix a = oracle::average_receiver_state(sample_generic_inputs(2, rng),
                                                         ChannelKind::Entangled);
        DensityMatrix b = oracle::average_receiver_state(sample_generic_inputs(2, rng),
                                                         ChannelKind::Entangled);
        REQUIRE(oracle::max_entry_distance(a, b) < 1e-10);
        REQUIRE(oracle::max_entry_distance(a, oracle::maximally_mixed(2)) < 1e-10);
    }

    SECTION("basis-state votes also average to I/4") {
        DensityMatrix rho = oracle::average_receiver_state(
            {{{1, 0}, {0, 0}}, {{1, 0}, {0, 0}}}, ChannelKind::Entangled);
        REQUIRE(oracle::max_entry_distance(rho, oracle::maximally_mixed(2)) < 1e-10);
    }
}

TEST_CASE("sender outcome marginals are uniform regardless of inputs") {
    std::mt19937_64 rng(12);
    for (int n : {2, 3}) {
        for (int trial = 0; trial < 2; ++trial) {
            const std::vector<InputQubit> inputs = sample_generic_inputs(n, rng);
            for (int i = 1; i <= n; ++i)
                for (double p :
                     oracle::sender_outcome_marginal(inputs, ChannelKind::Entangled, i))
                    REQUIRE(p == Approx(0.25).margin(1e-10));
        }
    }
}

TEST_CASE("stolen_qubit_report: first N-1 receiver qubits are not recoverable") {
    std::mt19937_64 rng(13);
    for (int n : {2, 3}) {
        for (int trial = 0; trial < 5; ++trial) {
            oracle::StolenQubitReport r =
                oracle::stolen_qubit_report(sample_generic_inputs(n, rng));
            REQUIRE(r.fidelity < 1.0);
            REQUIRE(r.state.trace_real() == Approx(1.0).margin(1e-9));
        }
    }
}

TEST_CASE("reduce_density_matrix agrees with reduced_density") {
    std::mt19937_64 rng(14);
    const std::vector<InputQubit> inputs = sample_generic_inputs(3, rng);
    StateVector s = product_of_inputs(inputs);
    DensityMatrix full = reduced_density(s, {1, 2, 3});
    DensityMatrix via_dm = oracle::reduce_density_matrix(full, {2});
    DensityMatrix direct = reduced_density(s, {2});
    REQUIRE(oracle::max_entry_distance(via_dm, direct) < 1e-12);
}
